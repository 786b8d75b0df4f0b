"""Energy-basis matrix elements, ETH scaling and equilibrium-equation residuals."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import stats

from .errors import ConfigError, DimensionError
from .models import XXZParams, build_xxz, draw_disorder, local_pauli, magnetization_sector, pauli
from .parallel import map_ordered
from .qcore import DensityMatrix, ObservableSpectral, PureState, eigenvalue_distribution, shannon_entropy
from .spectral import (
    EnergyWindow,
    SpectralDecomposition,
    bulk_slice,
    default_window,
    diagonal_ensemble,
    diagonalize,
    evolve_many,
    microcanonical_state,
)
from .unbiased import balanced_huo

BULK_FRACTION = 0.5


def _operator(obs) -> np.ndarray:
    return obs.operator() if isinstance(obs, ObservableSpectral) else np.asarray(obs)


@dataclass(frozen=True)
class MatrixElementTable:
    elements: np.ndarray
    energies: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.elements)
        if np.max(np.abs(a - a.conj().T), initial=0.0) > 1e-10 * max(1.0, float(np.max(np.abs(a)))):
            raise ConfigError("matrix-element table is not Hermitian")

    @property
    def dim(self) -> int:
        return self.energies.size


def matrix_elements(obs, sd: SpectralDecomposition) -> MatrixElementTable:
    """A_mn = <E_m|A|E_n>."""
    A = _operator(obs)
    if A.shape != (sd.dim, sd.dim):
        raise DimensionError(f"observable shape {A.shape} != spectrum dim {sd.dim}")
    V = sd.vectors
    return MatrixElementTable(V.conj().T @ A @ V, sd.energies)


@dataclass(frozen=True)
class BulkStats:
    diag_step_median: float
    diag_step_mean: float
    offdiag_mean: float
    offdiag_std: float
    offdiag_max: float
    offdiag_median: float
    n_levels: int


def bulk_statistics(table: MatrixElementTable, bulk_fraction: float = BULK_FRACTION) -> BulkStats:
    """Diagonal-step and off-diagonal statistics over the central levels.

    ``offdiag_std`` is the sample standard deviation of the complex entries
    A_mn with m != n; the remaining off-diagonal fields refer to |A_mn|.
    """
    sl = bulk_slice(table.dim, bulk_fraction)
    A = table.elements[sl, sl]
    n = A.shape[0]
    d = np.real(np.diag(A))
    step = np.abs(np.diff(d))
    off = A[~np.eye(n, dtype=bool)]
    mag = np.abs(off)
    return BulkStats(
        float(np.median(step)) if step.size else 0.0,
        float(step.mean()) if step.size else 0.0,
        float(mag.mean()) if mag.size else 0.0,
        float(np.sqrt(np.sum(np.abs(off - off.mean()) ** 2) / max(off.size - 1, 1))) if off.size else 0.0,
        float(mag.max()) if mag.size else 0.0,
        float(np.median(mag)) if mag.size else 0.0,
        n,
    )


def smoothness_proxy(table: MatrixElementTable) -> np.ndarray:
    """Moving average of diagonal elements over 2 * ceil(0.01 D) neighboring levels."""
    w = 2 * math.ceil(0.01 * table.dim)
    d = np.real(np.diag(table.elements))
    kernel = np.ones(w) / w
    return np.convolve(d, kernel, mode="same")


def offdiag_phase_histogram(table: MatrixElementTable, bins: int = 36, bulk_fraction: float = BULK_FRACTION):
    """Histogram of arg(A_mn), m < n, over the bulk window."""
    sl = bulk_slice(table.dim, bulk_fraction)
    A = table.elements[sl, sl]
    iu = np.triu_indices(A.shape[0], 1)
    return np.histogram(np.angle(A[iu]), bins=bins, range=(-np.pi, np.pi), density=True)


# ----------------------------------------------------------- scaling sweep


@dataclass(frozen=True)
class EthReport:
    L: int
    W: float
    seed: int
    obs_id: str
    n_dis: int
    stats: BulkStats
    policy: str

    def row(self) -> dict:
        return {
            "L": self.L,
            "W": self.W,
            "seed": self.seed,
            "obs_id": self.obs_id,
            "diag_step_median": self.stats.diag_step_median,
            "offdiag_std": self.stats.offdiag_std,
            "offdiag_max": self.stats.offdiag_max,
            "offdiag_median": self.stats.offdiag_median,
        }


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    stderr: float
    ci95: tuple

    @classmethod
    def fit(cls, x, y) -> "SlopeFit":
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if x.size < 2:
            raise ConfigError("need at least two sizes to fit a slope")
        r = stats.linregress(x, y)
        dof = x.size - 2
        half = float(stats.t.ppf(0.975, dof) * r.stderr) if dof > 0 else float("inf")
        return cls(float(r.slope), float(r.intercept), float(r.stderr), (float(r.slope) - half, float(r.slope) + half))


@dataclass(frozen=True)
class EthScaling:
    reports: list
    offdiag_std_fit: SlopeFit
    offdiag_median_fit: SlopeFit
    diag_step_fit: SlopeFit
    extra: dict = field(default_factory=dict)


_SIGMA = re.compile(r"^sigma_([xyz])(\d+)$")


def _observable(obs_id: str, L: int, sd: SpectralDecomposition, seed: int):
    if obs_id == "huo":
        return balanced_huo(sd, seed)
    m = _SIGMA.match(obs_id)
    if m:
        return pauli(L, int(m.group(2)), m.group(1))
    raise ConfigError(f"unknown observable id {obs_id!r}; use 'huo' or 'sigma_<axis><site>'")


def _policy(obs_id: str, policy: str) -> str:
    if policy != "auto":
        return policy
    m = _SIGMA.match(obs_id)
    return "sector" if m and m.group(1) == "z" else "full"


def _eth_task(args) -> BulkStats:
    L, J, Delta, W, boundary, seed, index, obs_id, policy, bulk = args
    p = XXZParams(L, J, Delta, W, boundary, seed)
    H = build_xxz(p, draw_disorder(W, L, seed, index))
    if policy == "sector":
        idx = magnetization_sector(L, L % 2)
        sd = diagonalize(H[np.ix_(idx, idx)])
        if obs_id == "huo":
            A = balanced_huo(sd, seed + index)
        else:
            A = _observable(obs_id, L, sd, seed)[np.ix_(idx, idx)]
    else:
        sd = diagonalize(H)
        A = _observable(obs_id, L, sd, seed + index)
    return bulk_statistics(matrix_elements(A, sd), bulk)


def eth_scaling(
    L_values: Sequence[int],
    obs_id: str = "huo",
    W: float = 1.0,
    Delta: float = 1.0,
    J: float = 1.0,
    boundary: str = "open",
    n_dis: int = 1,
    seed: int = 0,
    policy: str = "auto",
    bulk_fraction: float = BULK_FRACTION,
    workers: int = 1,
) -> EthScaling:
    """Bulk matrix-element statistics per size with linear fits in L.

    ``policy`` is ``'sector'`` (largest M_z block), ``'full'`` (whole
    spectrum) or ``'auto'``, which uses the sector for sigma_z observables and
    the full spectrum otherwise. Fits are of -ln(statistic) against L.
    """
    L_values = [int(L) for L in L_values]
    if any(L > 14 for L in L_values):
        raise ConfigError("eth_scaling supports L <= 14")
    if n_dis < 1:
        raise ConfigError("n_dis must be >= 1")
    pol = _policy(obs_id, policy)
    tasks = [(L, J, Delta, W, boundary, seed, i, obs_id, pol, bulk_fraction) for L in L_values for i in range(n_dis)]
    results = map_ordered(_eth_task, tasks, workers)
    reports = []
    for a, L in enumerate(L_values):
        chunk = results[a * n_dis : (a + 1) * n_dis]
        avg = BulkStats(*[math.fsum(getattr(s, f) for s in chunk) / n_dis for f in BulkStats.__dataclass_fields__ if f != "n_levels"], chunk[0].n_levels)
        reports.append(EthReport(L, W, seed, obs_id, n_dis, avg, pol))
    Ls = [r.L for r in reports]

    def neglog(vals):
        return [-math.log(v) if v > 0 else float("inf") for v in vals]

    return EthScaling(
        reports,
        SlopeFit.fit(Ls, neglog([r.stats.offdiag_std for r in reports])),
        SlopeFit.fit(Ls, neglog([r.stats.offdiag_median for r in reports])),
        SlopeFit.fit(Ls, neglog([r.stats.diag_step_median for r in reports])),
    )


# ------------------------------------------------------ thermalization gap


@dataclass(frozen=True)
class GapResult:
    gap: float
    diagonal_value: float
    microcanonical_value: float
    times: np.ndarray
    series: np.ndarray


def thermalization_gap(obs, sd: SpectralDecomposition, psi0: PureState, window: EnergyWindow | None = None, times=None) -> GapResult:
    """|<A>_DE - <A>_mc| plus the time series <A>(t) on ``times``."""
    A = _operator(obs)
    window = default_window(sd, psi0) if window is None else window
    de = diagonal_ensemble(sd, psi0).expectation(A)
    mc = microcanonical_state(sd, window).expectation(A)
    t = np.logspace(-1, 3, 200) if times is None else np.asarray(times, dtype=float)
    amps = evolve_many(sd, psi0, t)
    series = np.real(np.einsum("ti,ij,tj->t", amps.conj(), A, amps))
    return GapResult(abs(de - mc), de, mc, t, series)


# --------------------------------------------------- equilibrium equations


@dataclass(frozen=True)
class ResidualReport:
    R1: float
    R2: float
    lambdas: tuple
    dpdt: np.ndarray
    observable_entropy: float
    linear_gap: float
    refinement: str = "observable eigenvector columns"


def _components(rho, obs: ObservableSpectral, sd: SpectralDecomposition):
    r = rho.density() if isinstance(rho, PureState) else rho
    if r.dim != obs.dim or r.dim != sd.dim:
        raise DimensionError("state, observable and spectrum dimensions differ")
    q, psi = np.linalg.eigh(r.entries)
    keep = q > 1e-14
    q, psi = q[keep], psi[:, keep]
    V = obs.vectors
    D = V.conj().T @ psi  # D[js, n] = <j,s|psi_n>
    Hpsi = sd.vectors @ (sd.energies[:, None] * (sd.vectors.conj().T @ psi))
    E = D.conj() * (V.conj().T @ Hpsi)  # E_n(j,s) = <psi_n|P_js H|psi_n>
    return q, D, E


def probability_derivative(rho, obs: ObservableSpectral, sd: SpectralDecomposition) -> np.ndarray:
    """dp_t(a_j)/dt = -i sum_n q_n sum_s (E_n(j,s) - conj(E_n(j,s)))."""
    q, _, E = _components(rho, obs, sd)
    per = np.real(-1j * ((E - E.conj()) @ q))
    return np.bincount(obs.labels, weights=per, minlength=obs.eigenvalues.size)


def equilibrium_residuals(rho, obs: ObservableSpectral, sd: SpectralDecomposition, lambdas: tuple | None = None) -> ResidualReport:
    """Residuals of the two stationarity equations of observable entropy.

    R1 = max |conj(E_n(j,s)) - E_n(j,s)|. R2 is the largest violation of
    -|D|^2 ln p_j = (1 - lambda_N)|D|^2 - lambda_E Re E_n(j,s) over states
    with q_n > 0; the multipliers are fitted by least squares when
    ``lambdas`` is None. ``linear_gap`` compares H_A with
    (1 - lambda_N) - lambda_E <H>.
    """
    q, D, E = _components(rho, obs, sd)
    R1 = float(np.max(np.abs(E.conj() - E))) if E.size else 0.0
    w = np.abs(D) ** 2
    p = np.bincount(obs.labels, weights=(w @ q), minlength=obs.eigenvalues.size)
    pj = p[obs.labels][:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        lhs = np.where(w > 0, -w * np.log(np.where(pj > 0, pj, 1.0)), 0.0)
    ReE = np.real(E)
    if lambdas is None:
        # lhs - w = -lambda_N w - lambda_E ReE
        Amat = np.column_stack([-w.ravel(), -ReE.ravel()])
        sol, *_ = np.linalg.lstsq(Amat, (lhs - w).ravel(), rcond=None)
        lam_N, lam_E = float(sol[0]), float(sol[1])
    else:
        lam_N, lam_E = map(float, lambdas)
    R2 = float(np.max(np.abs(lhs - ((1 - lam_N) * w - lam_E * ReE)))) if w.size else 0.0
    H_A = shannon_entropy(p / p.sum())
    E0 = float(np.real(np.sum(E @ q)))
    linear = abs(H_A - ((1 - lam_N) - lam_E * E0))
    dpdt = np.bincount(obs.labels, weights=np.real(-1j * ((E - E.conj()) @ q)), minlength=obs.eigenvalues.size)
    return ResidualReport(R1, R2, (lam_N, lam_E), dpdt, H_A, float(linear))


def evolve_density(sd: SpectralDecomposition, rho: DensityMatrix, t: float) -> DensityMatrix:
    V = sd.vectors
    ph = np.exp(-1j * sd.energies * t)
    U = (V * ph) @ V.conj().T
    return DensityMatrix(U @ rho.entries @ U.conj().T, check_psd=False)


def observable_distribution(rho, obs: ObservableSpectral) -> np.ndarray:
    return eigenvalue_distribution(rho, obs).probs
