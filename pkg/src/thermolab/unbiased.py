"""Mutually unbiased bases, Hamiltonian unbiased bases and observables.

Generalized Bloch vectors use the traceless Hermitian generators ordered as
symmetric pairs (j < k), antisymmetric pairs (j < k), then diagonal, each
normalized to Tr(g_a g_b) = delta_ab. A pure state then reads
``|psi><psi| = I/d + sqrt((d-1)/d) * sum_a b_a g_a`` with ``|b| = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Sequence

import numpy as np
from scipy.linalg import expm
from scipy.optimize import least_squares

from .errors import ConfigError, ConstructionError, DimensionError, InfeasibleSubspace
from .qcore import ObservableSpectral, PureState
from .spectral import SpectralDecomposition

UNITARY_TOL = 1e-10
RANK_RTOL = 1e-10
SOLVE_TOL = 1e-13


@dataclass(frozen=True)
class BasisFamily:
    bases: tuple
    labels: tuple

    def __post_init__(self):
        for b in self.bases:
            u = np.asarray(b)
            if np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) > UNITARY_TOL:
                raise ConfigError("basis matrix is not unitary")

    def __len__(self) -> int:
        return len(self.bases)

    @property
    def dim(self) -> int:
        return self.bases[0].shape[0]

    def max_deviation(self) -> float:
        """Largest unbiasedness score over distinct pairs."""
        worst = 0.0
        for a in range(len(self.bases)):
            for b in range(a + 1, len(self.bases)):
                worst = max(worst, unbiasedness_score(self.bases[a], self.bases[b]))
        return worst


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, int(p**0.5) + 1))


def weyl_operators(p: int) -> tuple[np.ndarray, np.ndarray]:
    """Shift X|k> = |k+1> and clock Z|k> = w^k |k> with w = exp(2 pi i / p)."""
    X = np.roll(np.eye(p), 1, axis=0).astype(np.complex128)
    Z = np.diag(np.exp(2j * np.pi * np.arange(p) / p))
    return X, Z


def mub_family_prime(p: int) -> BasisFamily:
    """p + 1 mutually unbiased bases in prime dimension p.

    Basis 0 is the eigenbasis of Z. Basis m + 1 has vectors
    exp(2 pi i (c m k^2 + a k) / p) / sqrt(p) with c = 1/2 for p = 2 and c = 1
    otherwise; these are eigenbases of the Weyl operators X Z^(2cm).
    """
    if not isinstance(p, (int, np.integer)) or not _is_prime(int(p)) or p > 31:
        raise ConfigError(f"dimension must be a prime <= 31, got {p!r}")
    p = int(p)
    k = np.arange(p)
    c = 0.5 if p == 2 else 1.0
    bases = [np.eye(p, dtype=np.complex128)]
    labels = ["Z"]
    for m in range(p):
        phase = (c * m * k[:, None] ** 2 + k[:, None] * k[None, :]) / p
        bases.append(np.exp(2j * np.pi * phase) / np.sqrt(p))
        labels.append(f"XZ^{int(2 * c * m) % p}" if m else "X")
    return BasisFamily(tuple(bases), tuple(labels))


def fourier_matrix(D: int) -> np.ndarray:
    n = np.arange(D)
    return np.exp(2j * np.pi * np.outer(n, n) / D) / np.sqrt(D)


def hub_from_spectrum(sd: SpectralDecomposition) -> np.ndarray:
    """Energy eigenbasis rotated by the discrete Fourier matrix."""
    return sd.vectors @ fourier_matrix(sd.dim)


def unbiasedness_score(A, B) -> float:
    """max over pairs of |D |<a_j|b_k>|^2 - 1|."""
    A = np.asarray(A)
    B = np.asarray(B)
    if A.shape != B.shape:
        raise DimensionError(f"basis shapes differ: {A.shape} vs {B.shape}")
    D = A.shape[0]
    return float(np.max(np.abs(D * np.abs(A.conj().T @ B) ** 2 - 1.0)))


@dataclass(frozen=True)
class HUOSpec:
    basis: np.ndarray
    assigned_eigenvalues: np.ndarray
    reference: np.ndarray | None = field(default=None, repr=False)
    tol: float = 1e-8

    def __post_init__(self):
        b = np.asarray(self.basis)
        a = np.asarray(self.assigned_eigenvalues, dtype=float)
        if b.ndim != 2 or b.shape[0] != b.shape[1] or a.shape != (b.shape[0],):
            raise DimensionError("need a DxD basis and D eigenvalues")
        if self.reference is not None and unbiasedness_score(self.reference, b) > self.tol:
            raise ConfigError("basis is not unbiased with respect to the reference basis")


def build_huo(spec: HUOSpec) -> ObservableSpectral:
    return ObservableSpectral.from_eigenbasis(spec.basis, spec.assigned_eigenvalues)


def balanced_eigenvalues(D: int, seed: int = 0) -> np.ndarray:
    """A seeded random arrangement of D/2 values +1 and D/2 values -1."""
    if D % 2:
        raise ConfigError("balanced +-1 assignment needs even D")
    a = np.repeat([1.0, -1.0], D // 2)
    return np.random.default_rng(seed).permutation(a)


def balanced_huo(sd: SpectralDecomposition, seed: int = 0) -> ObservableSpectral:
    """Balanced +-1 observable diagonal in the Fourier HUB of ``sd``."""
    hub = hub_from_spectrum(sd)
    return build_huo(HUOSpec(hub, balanced_eigenvalues(sd.dim, seed), sd.vectors))


# ------------------------------------------------------------ Bloch vectors


@lru_cache(maxsize=16)
def bloch_generators(d: int) -> np.ndarray:
    """Array of shape (d*d - 1, d, d) with unit Hilbert-Schmidt norm."""
    gens = []
    pairs = [(j, k) for j in range(d) for k in range(j + 1, d)]
    for j, k in pairs:
        g = np.zeros((d, d), dtype=np.complex128)
        g[j, k] = g[k, j] = 1.0
        gens.append(g / np.sqrt(2))
    for j, k in pairs:
        g = np.zeros((d, d), dtype=np.complex128)
        g[j, k], g[k, j] = -1j, 1j
        gens.append(g / np.sqrt(2))
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1.0
        diag[l] = -l
        gens.append(np.diag(diag / np.sqrt(l * (l + 1))).astype(np.complex128))
    out = np.array(gens) if gens else np.zeros((0, d, d), dtype=np.complex128)
    out.setflags(write=False)
    return out


def bloch_vector(psi) -> np.ndarray:
    """Unit generalized Bloch vector of a (normalized) state vector."""
    v = np.asarray(psi.amplitudes if isinstance(psi, PureState) else psi, dtype=np.complex128)
    v = v / np.linalg.norm(v)
    d = v.size
    g = bloch_generators(d)
    c = np.real(np.einsum("i,aij,j->a", v.conj(), g, v))
    return c / np.sqrt((d - 1) / d)


def density_from_bloch(b: np.ndarray, d: int) -> np.ndarray:
    g = bloch_generators(d)
    return np.eye(d) / d + np.sqrt((d - 1) / d) * np.einsum("a,aij->ij", b, g)


def orthogonal_complement(vectors: np.ndarray, dim: int) -> np.ndarray:
    """Orthonormal rows spanning the complement of the row space of ``vectors``."""
    if vectors.size == 0:
        return np.eye(dim)
    u, s, vh = np.linalg.svd(np.atleast_2d(vectors), full_matrices=True)
    rank = int(np.sum(s > RANK_RTOL * s[0])) if s.size else 0
    return vh[rank:]


def regular_simplex(d: int) -> np.ndarray:
    """d unit vectors in R^(d-1) with pairwise cosine -1/(d-1)."""
    e = np.eye(d) - 1.0 / d
    u, _, _ = np.linalg.svd(e)
    coords = e @ u[:, : d - 1]
    return coords / np.linalg.norm(coords, axis=1, keepdims=True)


# -------------------------------------------------- simplex-unbiased bases


@dataclass(frozen=True)
class SimplexBasisResult:
    """Per-subspace bases (columns in the full space) and diagnostics."""

    bases: dict
    facet_vectors: dict
    residual: float
    subspace_dims: tuple


def feasibility(M: int, subspace_dims: Sequence[int]) -> list[int]:
    """Subspaces failing D_j (D_j - 1) >= M + 1."""
    return [j for j, d in enumerate(subspace_dims) if d * (d - 1) < M + 1]


def _hermitian(x: np.ndarray, d: int) -> np.ndarray:
    iu = np.triu_indices(d, 1)
    n = iu[0].size
    K = np.zeros((d, d), dtype=np.complex128)
    K[iu] = x[:n] + 1j * x[n : 2 * n]
    K = K + K.conj().T
    K[np.diag_indices(d)] = x[2 * n :]
    return K


def _frame_with(v: np.ndarray) -> np.ndarray:
    """Unitary whose first column is the unit vector v."""
    d = v.size
    m = np.eye(d, dtype=np.complex128)
    m[:, 0] = v
    q, _ = np.linalg.qr(m)
    return q


def _solve_block(phis: np.ndarray, d: int, rng: np.random.Generator, restarts: int) -> tuple[np.ndarray, float]:
    """Unitary U with |<phi_m|u_k>|^2 = 1/d for unit rows phi_m."""
    M = phis.shape[0]
    if M == 0:
        return fourier_matrix(d), 0.0
    U0 = _frame_with(phis[0]) @ fourier_matrix(d)
    if M == 1:
        return U0, float(np.max(np.abs(np.abs(phis.conj() @ U0) ** 2 - 1.0 / d)))

    best_U, best = U0, np.inf
    starts = [U0]
    for _ in range(restarts):
        z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        q, r = np.linalg.qr(z)
        starts.append(q * (np.diag(r) / np.abs(np.diag(r))))
    for S in starts:

        def f(x, S=S):
            U = S @ expm(1j * _hermitian(x, d))
            return (np.abs(phis.conj() @ U) ** 2 - 1.0 / d).ravel()

        sol = least_squares(f, np.zeros(d * d), xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=2000)
        res = float(np.max(np.abs(sol.fun)))
        if res < best:
            best, best_U = res, S @ expm(1j * _hermitian(sol.x, d))
        if best < SOLVE_TOL:
            break
    return best_U, best


def simplex_unbiased_basis(
    vectors,
    subspace_dims: Sequence[int],
    frame: np.ndarray | None = None,
    seed: int = 0,
    restarts: int = 50,
    tol: float = 1e-8,
) -> SimplexBasisResult:
    """Orthonormal bases of each subspace unbiased toward the projected states.

    ``vectors`` holds M states as rows (or PureState objects). Subspace j is
    spanned by a consecutive block of columns of ``frame`` (identity by
    default) of width ``subspace_dims[j]``. Each returned basis satisfies
    |<psi_m|j,k>|^2 = <psi_m|P_j|psi_m> / D_j. The Bloch vectors of every
    basis form a regular simplex orthogonal to the Bloch vectors of the
    projected states; for D_j = 2 the pair is placed in closed form, larger
    blocks are found by a seeded least-squares search over the unitary group.
    """
    psis = np.array([p.amplitudes if isinstance(p, PureState) else np.asarray(p) for p in vectors], dtype=np.complex128)
    if psis.ndim == 1:
        psis = psis[None, :]
    dims = tuple(int(d) for d in subspace_dims)
    D = sum(dims)
    if psis.shape[1] != D:
        raise DimensionError(f"states have dim {psis.shape[1]}, subspaces sum to {D}")
    M = psis.shape[0]
    bad = feasibility(M, dims)
    if bad:
        raise InfeasibleSubspace(bad)
    F = np.eye(D, dtype=np.complex128) if frame is None else np.asarray(frame, dtype=np.complex128)
    rng = np.random.default_rng(seed)
    bases, facets, worst = {}, {}, 0.0
    start = 0
    for j, d in enumerate(dims):
        P = F[:, start : start + d]
        start += d
        proj = psis.conj() @ P  # rows: <psi_m| P restricted to block
        w = np.sum(np.abs(proj) ** 2, axis=1)
        keep = w > 1e-14
        phis = proj[keep].conj() / np.sqrt(w[keep])[:, None]
        if d == 2 and phis.shape[0] == 1:
            b = bloch_vector(phis[0])
            comp = orthogonal_complement(b[None, :], 3)
            V = comp[0]
            U = np.column_stack([_pure_from_bloch(V, 2), _pure_from_bloch(-V, 2)])
        else:
            U, _ = _solve_block(phis, d, rng, restarts)
        basis = P @ U
        target = np.abs(psis.conj() @ P) ** 2
        overl = np.abs(psis.conj() @ basis) ** 2
        res = float(np.max(np.abs(overl - target.sum(axis=1, keepdims=True) / d)))
        worst = max(worst, res)
        if res > tol:
            raise ConstructionError(f"subspace {j} (D_j={d}, M={M}): residual {res:.3e} exceeds {tol:.1e}")
        bases[j] = basis
        facets[j] = np.array([bloch_vector(U[:, k]) for k in range(d)])
    return SimplexBasisResult(bases, facets, worst, dims)


def _pure_from_bloch(b: np.ndarray, d: int) -> np.ndarray:
    lam, v = np.linalg.eigh(density_from_bloch(b, d))
    return v[:, -1]


# ------------------------------------------------- magnetization scan


def binary_entropy_bits(x: float) -> float:
    if x <= 0 or x >= 1:
        return 0.0
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def kl_to_uniform_bits(p: float) -> float:
    """Binary relative entropy H2(p || 1/2) in bits."""
    return 1.0 - binary_entropy_bits(p)


@dataclass(frozen=True)
class ScanRow:
    N: int
    q: int
    j_star: float
    j_max: int


@dataclass(frozen=True)
class DeviationRow:
    N: int
    j: int
    D_j: int
    log_ratio: float
    log_bound: float

    @property
    def per_site_gap(self) -> float:
        return abs(self.log_ratio - self.log_bound) / self.N


def lattice_degeneracy(N: int, j: int) -> float:
    """C(N, (N - j)/2), continued through the Gamma function for N - j odd."""
    if (N - j) % 2 == 0:
        return float(comb(N, (N - j) // 2))
    return math.exp(math.lgamma(N + 1) - math.lgamma((N - j) / 2 + 1) - math.lgamma((N + j) / 2 + 1))


def magnetization_condition(N: int, j: int) -> bool:
    if (N - j) % 2 == 0:
        Dj = comb(N, (N - j) // 2)
        return Dj * (Dj - 1) >= 2**N + 1
    Dj = lattice_degeneracy(N, j)
    return Dj * (Dj - 1) >= 2.0**N + 1


def magnetization_theorem_scan(N_range) -> tuple[list[ScanRow], list[DeviationRow]]:
    """Window of M_z labels meeting the theorem's dimension condition.

    ``q`` counts integers j in [-N, N] with D_j (D_j - 1) >= 2^N + 1, where
    D_j = C(N, (N - j)/2) is continued to N - j odd, and j_star = (q - 1)/2.
    ``j_max`` is the largest physical eigenvalue meeting the condition. The
    second table compares ln(D_j / 2^N) with -N H2(p(j) || 1/2) ln 2,
    p(j) = (N - j) / (2N), for every eigenvalue j >= 0.
    """
    scan, dev = [], []
    for N in N_range:
        N = int(N)
        if N > 24 or N < 1:
            raise ConfigError("scan supports 1 <= N <= 24")
        q = sum(magnetization_condition(N, j) for j in range(-N, N + 1))
        phys = [j for j in range(N % 2, N + 1, 2) if magnetization_condition(N, j)]
        scan.append(ScanRow(N, q, (q - 1) / 2 if q else float("nan"), max(phys) if phys else -1))
        for j in range(N % 2, N + 1, 2):
            Dj = comb(N, (N - j) // 2)
            p = (N - j) / (2 * N)
            dev.append(DeviationRow(N, j, Dj, math.log(Dj) - N * math.log(2), -N * kl_to_uniform_bits(p) * math.log(2)))
    return scan, dev


def fit_slope(x, y) -> tuple[float, float]:
    """Least-squares slope and intercept."""
    b, a = np.polyfit(np.asarray(x, dtype=float), np.asarray(y, dtype=float), 1)
    return float(b), float(a)
