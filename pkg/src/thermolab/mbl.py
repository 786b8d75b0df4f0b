"""Disorder-averaged quench dynamics: local magnetization, local entropies,
total correlations, half-chain entanglement and log-time fits."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats

from ._kernels import site_states
from .errors import ConfigError, InsufficientStructure
from .models import (
    DEFAULT_MEMORY_BUDGET,
    RNG_NAME,
    SIGMA,
    XXZParams,
    build_xxz,
    check_budget,
    draw_disorder,
    ghz_state,
    neel_state,
)
from .parallel import map_ordered, mean_stderr
from .qcore import PureState
from .spectral import diagonalize, evolve_many

SMOOTH_WIDTH = 5
MIN_MINIMA = 4
LOG_CUTOFF = 1e-14
MAX_L = 14


@dataclass(frozen=True)
class TimeGrid:
    points: np.ndarray
    spacing: str = "log"

    def __post_init__(self):
        t = np.asarray(self.points, dtype=float)
        if t.ndim != 1 or t.size < 2:
            raise ConfigError("time grid needs at least two points")
        if np.any(t <= 0) or np.any(np.diff(t) <= 0):
            raise ConfigError("time grid must be positive and strictly increasing")
        if self.spacing not in ("log", "linear"):
            raise ConfigError(f"spacing must be 'log' or 'linear', got {self.spacing!r}")
        object.__setattr__(self, "points", t)

    @classmethod
    def log(cls, t_min: float = 0.1, t_max: float = 1e3, n: int = 200) -> "TimeGrid":
        return cls(np.logspace(np.log10(t_min), np.log10(t_max), n), "log")

    @classmethod
    def linear(cls, t_min: float, t_max: float, n: int) -> "TimeGrid":
        return cls(np.linspace(t_min, t_max, n), "linear")

    def to_dict(self) -> dict:
        return {"spacing": self.spacing, "t_min": float(self.points[0]), "t_max": float(self.points[-1]), "n": int(self.points.size)}


DEFAULT_GRID = TimeGrid.log()


@dataclass(frozen=True)
class DisorderAveragedSeries:
    """Mean and standard error over realizations; ``mean`` has shape (T,) or (T, L)."""

    times: np.ndarray
    mean: np.ndarray
    stderr: np.ndarray
    n_dis: int
    seed: int
    indices: tuple
    label: str = ""

    def __post_init__(self):
        if self.n_dis < 1:
            raise ConfigError("n_dis must be >= 1")
        if np.any(np.asarray(self.stderr) < 0):
            raise ValueError("standard errors must be non-negative")

    def column(self, n: int) -> "DisorderAveragedSeries":
        return DisorderAveragedSeries(self.times, self.mean[:, n], self.stderr[:, n], self.n_dis, self.seed, self.indices, f"{self.label}[{n}]")

    def window(self, t_min: float, t_max: float) -> np.ndarray:
        return (self.times >= t_min) & (self.times <= t_max)

    def time_average(self, t_min: float, t_max: float) -> np.ndarray:
        return self.mean[self.window(t_min, t_max)].mean(axis=0)


@dataclass(frozen=True)
class LogFitResult:
    intercept: float
    slope: float
    r_squared: float
    minima_times: np.ndarray
    minima_values: np.ndarray
    smoothing_width: int = SMOOTH_WIDTH


@dataclass(frozen=True)
class EntropyRun:
    site: DisorderAveragedSeries
    average: DisorderAveragedSeries
    total_correlations: DisorderAveragedSeries
    max_identity_error: float
    sync_metric: float


# ------------------------------------------------------------- kernels


def _initial_state(selector, L: int) -> PureState:
    if isinstance(selector, PureState):
        return selector
    if callable(selector):
        return selector(L)
    if isinstance(selector, str):
        if selector == "ghz":
            return ghz_state(L)
        if selector.startswith("neel-") and selector[-1] in "xyz":
            return neel_state(L, selector[-1])
    raise ConfigError(f"unknown initial state {selector!r}; use 'neel-<axis>', 'ghz', a PureState or a callable")


def _spectrum_entropy_batch(rdm: np.ndarray) -> np.ndarray:
    lam = np.clip(np.linalg.eigvalsh(rdm), 0.0, None)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(lam > 0, -lam * np.log(np.where(lam > 0, lam, 1.0)), 0.0)
    return terms.sum(axis=-1)


def site_entropies(rdm: np.ndarray) -> np.ndarray:
    """Von Neumann entropies of an array of 2x2 reduced states, shape (..., 2, 2) -> (...)."""
    return _spectrum_entropy_batch(rdm)


def site_expectations(rdm: np.ndarray, axis: str) -> np.ndarray:
    """Tr(rho_n sigma^axis) for site states of shape (..., 2, 2)."""
    return np.real(np.einsum("...ab,ba->...", rdm, SIGMA[axis]))


def _neg_log(rdm: np.ndarray) -> np.ndarray:
    lam, U = np.linalg.eigh(rdm)
    f = np.where(lam > LOG_CUTOFF, -np.log(np.where(lam > LOG_CUTOFF, lam, 1.0)), 0.0)
    return np.einsum("...ak,...k,...bk->...ab", U, f, U.conj())


def total_correlations_direct(psi: np.ndarray, rdm: np.ndarray) -> np.ndarray:
    """Relative entropy of |psi><psi| to the product of its marginals.

    Evaluated as <psi| sum_n F_n |psi> with F_n = -log rho_n on site n, acting
    on the full state vector (eigenvalues below the cutoff contribute zero).
    ``psi`` has shape (T, 2**L) and ``rdm`` shape (T, L, 2, 2).
    """
    T, D = psi.shape
    L = rdm.shape[1]
    F = _neg_log(rdm)
    out = np.zeros(T)
    for n in range(L):
        v = psi.reshape(T, 2**n, 2, 2 ** (L - n - 1))
        Fv = np.einsum("tab,tibj->tiaj", F[:, n], v)
        out += np.real(np.einsum("tiaj,tiaj->t", v.conj(), Fv))
    return out


def halfchain_entropies(psi: np.ndarray, L: int) -> np.ndarray:
    """Entanglement entropy of the left L/2 sites for each row of ``psi``."""
    if L % 2:
        raise ConfigError(f"half-chain entropy needs even L, got {L}")
    half = 2 ** (L // 2)
    s = np.linalg.svd(psi.reshape(psi.shape[0], half, half), compute_uv=False)
    p = s**2
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(p > 0, -p * np.log(np.where(p > 0, p, 1.0)), 0.0).sum(axis=1)


def _check(p: XXZParams, n_dis: int, budget: int) -> None:
    if p.L > MAX_L:
        raise ConfigError(f"L must be <= {MAX_L}, got {p.L}")
    if n_dis < 1:
        raise ConfigError("n_dis must be >= 1")
    check_budget(p.L, budget)


def _realization(args):
    p, seed, index, selector, times, want = args
    H = build_xxz(p, draw_disorder(p.W, p.L, seed, index))
    sd = diagonalize(H)
    psi = evolve_many(sd, _initial_state(selector, p.L), times)
    out = {}
    if want & {"mag", "ent"}:
        rdm = site_states(psi, p.L)
        if "mag" in want:
            out["mag"] = {a: site_expectations(rdm, a) for a in "xyz"}
        if "ent" in want:
            out["S_n"] = site_entropies(rdm)
            out["T"] = total_correlations_direct(psi, rdm)
    if "half" in want:
        out["half"] = halfchain_entropies(psi, p.L)
    return out


def _run(p, selector, grid, n_dis, seed, want, workers):
    seed = p.seed if seed is None else int(seed)
    tasks = [(p, seed, i, selector, grid.points, frozenset(want)) for i in range(n_dis)]
    return seed, map_ordered(_realization, tasks, workers)


def _series(grid, stack, n_dis, seed, label) -> DisorderAveragedSeries:
    m, se = mean_stderr(np.asarray(stack))
    return DisorderAveragedSeries(grid.points, m, se, n_dis, seed, tuple(range(n_dis)), label)


# ---------------------------------------------------------- operations


def local_magnetization_run(
    p: XXZParams,
    axis: str,
    grid: TimeGrid = DEFAULT_GRID,
    n_dis: int = 1,
    seed: int | None = None,
    workers: int = 1,
    budget: int = DEFAULT_MEMORY_BUDGET,
) -> DisorderAveragedSeries:
    """<sigma^axis_i>(t) for every site from the Neel state along ``axis``; mean has shape (T, L)."""
    _check(p, n_dis, budget)
    if axis not in ("x", "y", "z"):
        raise ConfigError(f"axis must be x, y or z, got {axis!r}")
    seed, res = _run(p, f"neel-{axis}", grid, n_dis, seed, {"mag"}, workers)
    return _series(grid, [r["mag"][axis] for r in res], n_dis, seed, f"sigma_{axis}")


def staggered_magnetization(series: DisorderAveragedSeries) -> np.ndarray:
    """m_s(t) = (1/L) sum_i (-1)^i <sigma_i>(t)."""
    L = series.mean.shape[1]
    sign = (-1.0) ** np.arange(L)
    return series.mean @ sign / L


def local_entropies_run(
    p: XXZParams,
    grid: TimeGrid = DEFAULT_GRID,
    n_dis: int = 1,
    seed: int | None = None,
    psi0="neel-x",
    workers: int = 1,
    budget: int = DEFAULT_MEMORY_BUDGET,
) -> EntropyRun:
    """Single-site entropies S_n(t), their average S(t) and total correlations.

    Total correlations are computed as a relative entropy on the full state;
    ``max_identity_error`` is max_t |T_t - L S(t)| over every realization.
    """
    _check(p, n_dis, budget)
    seed, res = _run(p, psi0, grid, n_dis, seed, {"ent"}, workers)
    S_n = np.asarray([r["S_n"] for r in res])
    S = S_n.mean(axis=2)
    T = np.asarray([r["T"] for r in res])
    err = float(np.max(np.abs(T - p.L * S)))
    site = _series(grid, S_n, n_dis, seed, "S_n")
    avg = _series(grid, S, n_dis, seed, "S")
    sync = float(np.max(np.mean(np.abs(site.mean - avg.mean[:, None]), axis=0)))
    return EntropyRun(site, avg, _series(grid, T, n_dis, seed, "T"), err, sync)


def halfchain_entropy_run(
    p: XXZParams,
    grid: TimeGrid = DEFAULT_GRID,
    n_dis: int = 1,
    seed: int | None = None,
    psi0="neel-x",
    workers: int = 1,
    budget: int = DEFAULT_MEMORY_BUDGET,
) -> DisorderAveragedSeries:
    if p.L % 2:
        raise ConfigError(f"half-chain entropy needs even L, got {p.L}")
    _check(p, n_dis, budget)
    seed, res = _run(p, psi0, grid, n_dis, seed, {"half"}, workers)
    return _series(grid, [r["half"] for r in res], n_dis, seed, "S_half")


def box_smooth(y: np.ndarray, width: int = SMOOTH_WIDTH) -> np.ndarray:
    """Centered moving average; the (width - 1) / 2 edge points on each side are dropped."""
    if width < 1 or width % 2 == 0:
        raise ConfigError("smoothing width must be a positive odd integer")
    return np.convolve(y, np.ones(width) / width, mode="valid")


def log_modulation_fit(
    series: DisorderAveragedSeries | tuple,
    window: tuple = (1.0, 1e3),
    width: int = SMOOTH_WIDTH,
) -> LogFitResult:
    """Fit S = a + b ln t through strict local minima of the box-smoothed series.

    ``series`` is a 1-d :class:`DisorderAveragedSeries` or a (times, values) pair.
    """
    if isinstance(series, DisorderAveragedSeries):
        t, y = series.times, np.asarray(series.mean)
    else:
        t, y = (np.asarray(a, dtype=float) for a in series)
    if y.ndim != 1:
        raise ConfigError("log_modulation_fit needs a scalar series")
    sel = (t >= window[0]) & (t <= window[1])
    t, y = t[sel], y[sel]
    if t.size < width + 2 or t[-1] / t[0] < 100 * (1 - 1e-9):
        raise ConfigError("fit window must span at least two decades")
    lt = np.log(t)
    if np.ptp(np.diff(lt)) > 1e-6 * np.mean(np.diff(lt)):
        raise ConfigError("log_modulation_fit needs a log-spaced grid")
    ys = box_smooth(y, width)
    ts = t[(width - 1) // 2 : (width - 1) // 2 + ys.size]
    idx = np.flatnonzero((ys[1:-1] < ys[:-2]) & (ys[1:-1] < ys[2:])) + 1
    if idx.size < MIN_MINIMA:
        raise InsufficientStructure(f"found {idx.size} local minima, need {MIN_MINIMA}")
    r = stats.linregress(np.log(ts[idx]), ys[idx])
    return LogFitResult(float(r.intercept), float(r.slope), float(r.rvalue**2), ts[idx], ys[idx], width)


def saturation_fraction(series: DisorderAveragedSeries, t_check: float = 1e2, late: tuple = (1e2, 1e3)) -> float:
    """S(t_check) divided by the mean of S over the ``late`` window."""
    i = int(np.argmin(np.abs(series.times - t_check)))
    return float(series.mean[i] / series.time_average(*late))


def run_metadata(p: XXZParams, grid: TimeGrid, n_dis: int, seed: int) -> dict:
    return {"params": p.to_dict(), "grid": grid.to_dict(), "n_dis": n_dis, "seed": seed, "rng": RNG_NAME, "smoothing_width": SMOOTH_WIDTH}
