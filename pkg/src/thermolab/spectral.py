"""Eigendecomposition, unitary evolution, equilibrium ensembles and level statistics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from ._kernels import gap_ratios
from .errors import DimensionError, EmptyWindow, InsufficientSpectrum, InvalidOperator
from .qcore import DensityMatrix, PureState

HERM_TOL = 1e-10
DEGEN_RTOL = 1e-10
MIN_BULK_LEVELS = 50


@dataclass(frozen=True)
class SpectralDecomposition:
    """Ascending energies and the unitary whose columns are eigenvectors."""

    energies: np.ndarray
    vectors: np.ndarray
    degenerate: bool = False

    @property
    def dim(self) -> int:
        return self.energies.size

    def reconstruct(self) -> np.ndarray:
        v = self.vectors
        return (v * self.energies) @ v.conj().T

    def coefficients(self, psi: PureState) -> np.ndarray:
        """Energy-basis amplitudes c_n = <E_n|psi>."""
        if psi.dim != self.dim:
            raise DimensionError(f"state dim {psi.dim} != spectrum dim {self.dim}")
        return self.vectors.conj().T @ psi.amplitudes

    def energy_distribution(self, psi: PureState) -> np.ndarray:
        return np.abs(self.coefficients(psi)) ** 2


@dataclass(frozen=True)
class EnergyWindow:
    center: float
    width: float

    def __post_init__(self):
        if not self.width > 0:
            raise ValueError(f"window width must be positive, got {self.width!r}")

    @property
    def bounds(self) -> tuple[float, float]:
        return self.center - self.width / 2, self.center + self.width / 2


@dataclass(frozen=True)
class SpacingStats:
    spacings: np.ndarray
    ratios: np.ndarray
    mean_ratio: float
    histogram: np.ndarray
    bin_edges: np.ndarray
    bulk_fraction: float


def _degenerate(energies: np.ndarray) -> bool:
    if energies.size < 2:
        return False
    rng = energies[-1] - energies[0]
    return bool(np.min(np.diff(energies)) < DEGEN_RTOL * max(rng, np.finfo(float).tiny))


def diagonalize(H) -> SpectralDecomposition:
    """Dense Hermitian eigendecomposition with a degeneracy flag."""
    m = np.asarray(H)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidOperator(f"operator must be square, got shape {m.shape}")
    scale = max(1.0, float(np.max(np.abs(m))))
    if np.max(np.abs(m - m.conj().T), initial=0.0) > HERM_TOL * scale:
        raise InvalidOperator("operator is not Hermitian")
    E, V = np.linalg.eigh(m)
    return SpectralDecomposition(E, V, _degenerate(E))


def evolve_many(sd: SpectralDecomposition, psi0: PureState, times) -> np.ndarray:
    """Amplitudes of psi(t) for each t, shape (len(times), D)."""
    c = sd.coefficients(psi0)
    t = np.atleast_1d(np.asarray(times, dtype=float))
    phases = np.exp(-1j * np.outer(t, sd.energies)) * c
    return phases @ sd.vectors.T


def evolve(sd: SpectralDecomposition, psi0: PureState, t: float) -> PureState:
    """psi(t) = sum_n c_n exp(-i E_n t) |E_n>."""
    if t == 0:
        if psi0.dim != sd.dim:
            raise DimensionError(f"state dim {psi0.dim} != spectrum dim {sd.dim}")
        return psi0
    a = evolve_many(sd, psi0, [t])[0]
    return PureState(a / np.linalg.norm(a))


def diagonal_ensemble(sd: SpectralDecomposition, psi0: PureState) -> DensityMatrix:
    """Dephased state sum_n |c_n|^2 |E_n><E_n| in the computed eigenbasis."""
    p = sd.energy_distribution(psi0)
    v = sd.vectors
    return DensityMatrix((v * p) @ v.conj().T, check_psd=False)


def default_window(sd: SpectralDecomposition, psi0: PureState) -> EnergyWindow:
    """Window centred on <H> with width twice the energy spread of psi0."""
    p = sd.energy_distribution(psi0)
    mean = float(p @ sd.energies)
    std = float(np.sqrt(max(p @ (sd.energies - mean) ** 2, 0.0)))
    if std == 0:
        std = 1e-9 * max(1.0, float(np.ptp(sd.energies)))
    return EnergyWindow(mean, 2 * std)


def window_indices(sd: SpectralDecomposition, window: EnergyWindow) -> np.ndarray:
    lo, hi = window.bounds
    slack = 1e-12 * max(1.0, float(np.max(np.abs(sd.energies))))
    idx = np.flatnonzero((sd.energies >= lo - slack) & (sd.energies <= hi + slack))
    if idx.size == 0:
        raise EmptyWindow(f"no eigenvalue in [{lo!r}, {hi!r}]")
    return idx


def microcanonical_state(sd: SpectralDecomposition, window: EnergyWindow) -> DensityMatrix:
    idx = window_indices(sd, window)
    v = sd.vectors[:, idx]
    return DensityMatrix(v @ v.conj().T / idx.size, check_psd=False)


def gibbs_weights(sd: SpectralDecomposition, beta: float) -> np.ndarray:
    x = -beta * sd.energies
    return np.exp(x - logsumexp(x))


def log_partition(sd: SpectralDecomposition, beta: float) -> float:
    return float(logsumexp(-beta * sd.energies))


def gibbs_state(sd: SpectralDecomposition, beta: float) -> DensityMatrix:
    """exp(-beta H) / Z built in the eigenbasis."""
    if not np.isfinite(beta):
        raise ValueError("beta must be finite")
    w = gibbs_weights(sd, beta)
    v = sd.vectors
    return DensityMatrix((v * w) @ v.conj().T, check_psd=False)


def sector_spectrum(H: np.ndarray, L: int, m: int | None = None) -> SpectralDecomposition:
    """Diagonalize H restricted to the M_z = m block (largest block by default).

    Eigenvectors are returned in sector coordinates.
    """
    from .models import magnetization_sector

    if m is None:
        m = L % 2
    idx = magnetization_sector(L, m)
    return diagonalize(np.asarray(H)[np.ix_(idx, idx)])


def bulk_slice(n: int, bulk_fraction: float) -> slice:
    if not 0 < bulk_fraction <= 1:
        raise ValueError("bulk_fraction must lie in (0, 1]")
    keep = int(round(n * bulk_fraction))
    start = (n - keep) // 2
    return slice(start, start + keep)


def level_spacing_stats(sd: SpectralDecomposition | np.ndarray, bulk_fraction: float = 0.5, bins: int = 50) -> SpacingStats:
    """Spacings and consecutive-gap ratios over the central part of a spectrum.

    Pass a decomposition restricted to a single symmetry sector.
    """
    E = np.sort(np.asarray(sd.energies if isinstance(sd, SpectralDecomposition) else sd, dtype=float))
    bulk = E[bulk_slice(E.size, bulk_fraction)]
    if bulk.size < MIN_BULK_LEVELS:
        raise InsufficientSpectrum(f"{bulk.size} bulk levels, need {MIN_BULK_LEVELS}")
    s = np.diff(bulk)
    r = gap_ratios(bulk)
    mean_s = s.mean()
    hist, edges = np.histogram(s / mean_s if mean_s > 0 else s, bins=bins, density=True)
    return SpacingStats(s, r, float(r.mean()), hist, edges, bulk_fraction)
