"""Dense finite-dimensional state and operator algebra.

Entropies are returned in nats. Divide by ``ln 2`` to convert to bits.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import DimensionError, InvalidOperator, InvalidState

NORM_TOL = 1e-12
HERM_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
CLIP_TOL = 1e-10
ZERO_EIG = 1e-14
GROUP_RTOL = 1e-9


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


class PureState:
    """Normalized state vector."""

    __slots__ = ("amplitudes",)

    def __init__(self, amplitudes, normalize: bool = False):
        a = np.asarray(amplitudes, dtype=np.complex128).ravel()
        if a.size < 1:
            raise InvalidState("state must have dimension >= 1")
        nrm = np.linalg.norm(a)
        if normalize:
            if nrm == 0:
                raise InvalidState("cannot normalize the zero vector")
            a = a / nrm
        elif abs(nrm**2 - 1.0) > NORM_TOL * max(1.0, a.size**0.5):
            raise InvalidState(f"squared norm {nrm**2!r} differs from 1")
        object.__setattr__(self, "amplitudes", _readonly(a))

    def __setattr__(self, name, value):
        raise AttributeError("PureState is immutable")

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @classmethod
    def basis(cls, dim: int, index: int) -> "PureState":
        v = np.zeros(dim, dtype=np.complex128)
        v[index] = 1.0
        return cls(v)

    def density(self) -> "DensityMatrix":
        a = self.amplitudes
        return DensityMatrix(np.outer(a, a.conj()))

    def __repr__(self) -> str:
        return f"PureState(dim={self.dim})"


class DensityMatrix:
    """Positive semidefinite unit-trace Hermitian matrix.

    Set ``check_psd=False`` to skip the eigenvalue check for large inputs
    produced by trusted constructions.
    """

    __slots__ = ("entries",)

    def __init__(self, entries, check_psd: bool = True):
        m = np.asarray(entries, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise InvalidState(f"density matrix must be square, got shape {m.shape}")
        scale = max(1.0, float(np.max(np.abs(m))))
        if np.max(np.abs(m - m.conj().T)) > HERM_TOL * scale * max(1.0, m.shape[0] ** 0.5):
            raise InvalidState("density matrix is not Hermitian")
        tr = np.trace(m).real
        if abs(tr - 1.0) > TRACE_TOL * max(1.0, m.shape[0] ** 0.5):
            raise InvalidState(f"trace {tr!r} differs from 1")
        if check_psd:
            lo = np.linalg.eigvalsh(m).min()
            if lo < -PSD_TOL:
                raise InvalidState(f"negative eigenvalue {lo!r}")
        object.__setattr__(self, "entries", _readonly(m))

    def __setattr__(self, name, value):
        raise AttributeError("DensityMatrix is immutable")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityMatrix":
        return cls(np.eye(dim) / dim)

    def eigenvalues(self) -> np.ndarray:
        """Spectrum clipped to [0, 1] near the boundaries."""
        return _clip_spectrum(np.linalg.eigvalsh(self.entries))

    def expectation(self, op: np.ndarray) -> float:
        return float(np.real(np.sum(self.entries * np.asarray(op).T)))

    def __repr__(self) -> str:
        return f"DensityMatrix(dim={self.dim})"


State = Union[PureState, DensityMatrix]


def _clip_spectrum(lam: np.ndarray) -> np.ndarray:
    lam = np.array(lam, dtype=float)
    if lam.size and lam.min() < -PSD_TOL:
        raise InvalidState(f"negative eigenvalue {lam.min()!r}")
    lam[np.abs(lam) <= CLIP_TOL] = np.clip(lam[np.abs(lam) <= CLIP_TOL], 0.0, None)
    lam[np.abs(lam - 1.0) <= CLIP_TOL] = np.clip(lam[np.abs(lam - 1.0) <= CLIP_TOL], None, 1.0)
    return lam


@dataclass(frozen=True)
class ObservableSpectral:
    """Spectral resolution of an observable.

    ``vectors`` is a unitary whose columns form an eigenbasis and ``labels``
    maps each column to the index of its distinct eigenvalue. Projectors are
    built on demand.
    """

    eigenvalues: np.ndarray
    vectors: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.eigenvalues, dtype=float)
        v = np.asarray(self.vectors, dtype=np.complex128)
        lab = np.asarray(self.labels, dtype=np.int64)
        if v.ndim != 2 or v.shape[0] != v.shape[1] or lab.shape != (v.shape[0],):
            raise DimensionError("vectors must be DxD with one label per column")
        if np.any(np.diff(a) <= 0):
            raise InvalidOperator("distinct eigenvalues must be strictly increasing")
        if lab.size and (lab.min() < 0 or lab.max() >= a.size or np.unique(lab).size != a.size):
            raise InvalidOperator("every distinct eigenvalue needs at least one eigenvector")
        object.__setattr__(self, "eigenvalues", _readonly(a))
        object.__setattr__(self, "vectors", _readonly(v))
        object.__setattr__(self, "labels", _readonly(lab))

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    @property
    def degeneracies(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.eigenvalues.size)

    def columns(self, j: int) -> np.ndarray:
        """Orthonormal basis of the eigenspace of the j-th eigenvalue."""
        return self.vectors[:, self.labels == j]

    def projector(self, j: int) -> np.ndarray:
        c = self.columns(j)
        return c @ c.conj().T

    @property
    def projectors(self) -> list[np.ndarray]:
        return [self.projector(j) for j in range(self.eigenvalues.size)]

    def operator(self) -> np.ndarray:
        v = self.vectors
        return (v * self.eigenvalues[self.labels]) @ v.conj().T

    @classmethod
    def from_eigenbasis(cls, vectors, values) -> "ObservableSpectral":
        """Group columns of ``vectors`` by their assigned ``values``."""
        values = np.asarray(values, dtype=float)
        distinct, labels = _group(values)
        return cls(distinct, vectors, labels)

    @classmethod
    def from_operator(cls, op) -> "ObservableSpectral":
        m = np.asarray(op, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"operator must be square, got {m.shape}")
        if np.max(np.abs(m - m.conj().T), initial=0.0) > 1e-10 * max(1.0, float(np.max(np.abs(m)))):
            raise InvalidOperator("observable is not Hermitian")
        lam, vec = np.linalg.eigh(m)
        distinct, labels = _group(lam)
        return cls(distinct, vec, labels)


def _group(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # consecutive sorted values within GROUP_RTOL of the spectral scale share a label
    order = np.argsort(values, kind="stable")
    s = values[order]
    scale = max(float(np.max(np.abs(s))) if s.size else 0.0, np.finfo(float).tiny)
    breaks = np.diff(s) > GROUP_RTOL * scale
    sorted_labels = np.concatenate([[0], np.cumsum(breaks)]).astype(np.int64)
    labels = np.empty_like(sorted_labels)
    labels[order] = sorted_labels
    distinct = np.array([s[sorted_labels == j].mean() for j in range(sorted_labels[-1] + 1)])
    return distinct, labels


@dataclass(frozen=True)
class EigenvalueDistribution:
    outcomes: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if p.min(initial=0.0) < -1e-12:
            raise InvalidState("negative probability")
        if abs(p.sum() - 1.0) > 1e-10:
            raise InvalidState(f"probabilities sum to {p.sum()!r}")
        object.__setattr__(self, "outcomes", _readonly(np.asarray(self.outcomes, dtype=float)))
        object.__setattr__(self, "probs", _readonly(p))


def _as_density(x: State) -> DensityMatrix:
    return x.density() if isinstance(x, PureState) else x


def tensor_product(a: State, b: State) -> State:
    """Kronecker product of two states of the same kind."""
    if isinstance(a, PureState) and isinstance(b, PureState):
        return PureState(np.kron(a.amplitudes, b.amplitudes), normalize=True)
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        return DensityMatrix(np.kron(a.entries, b.entries), check_psd=False)
    raise TypeError("tensor_product expects two PureState or two DensityMatrix operands")


def partial_trace(rho: State, dims: Sequence[int], keep: Sequence[int]) -> DensityMatrix:
    """Reduced state on the subsystems listed in ``keep``.

    Kept subsystems appear in ascending index order.
    """
    dims = [int(d) for d in dims]
    keep = sorted(set(int(k) for k in keep))
    n = len(dims)
    if not keep or keep[0] < 0 or keep[-1] >= n:
        raise DimensionError(f"invalid keep set {keep} for {n} subsystems")
    D = int(np.prod(dims))
    if isinstance(rho, PureState):
        if rho.dim != D:
            raise DimensionError(f"state dim {rho.dim} != product of dims {D}")
        psi = rho.amplitudes.reshape(dims)
        traced = [i for i in range(n) if i not in keep]
        psi = np.transpose(psi, keep + traced)
        dk = int(np.prod([dims[i] for i in keep]))
        m = psi.reshape(dk, -1)
        out = m @ m.conj().T
    else:
        if rho.dim != D:
            raise DimensionError(f"state dim {rho.dim} != product of dims {D}")
        t = rho.entries.reshape(dims + dims)
        row = list(range(n))
        col = [i if i not in keep else n + i for i in range(n)]
        out_idx = keep + [n + i for i in keep]
        out = np.einsum(t, row + col, out_idx)
        dk = int(np.prod([dims[i] for i in keep]))
        out = out.reshape(dk, dk)
    out = 0.5 * (out + out.conj().T)
    return DensityMatrix(out / np.trace(out).real, check_psd=False)


def spectrum_entropy(lam: np.ndarray, alpha: float | None = None) -> float:
    """Von Neumann (``alpha=None``) or Renyi-alpha entropy of a spectrum."""
    lam = _clip_spectrum(np.asarray(lam, dtype=float))
    lam = lam[lam > ZERO_EIG]
    if alpha is None or alpha == 1:
        return float(max(0.0, -np.sum(lam * np.log(lam))))
    if alpha <= 0:
        raise ValueError("Renyi order must be positive")
    return float(max(0.0, np.log(np.sum(lam**alpha)) / (1.0 - alpha)))


def von_neumann_entropy(rho: State, alpha: float | None = None) -> float:
    """Entropy in nats; pass ``alpha`` for the Renyi variant."""
    if isinstance(rho, PureState):
        return 0.0
    return spectrum_entropy(np.linalg.eigvalsh(rho.entries), alpha)


def eigenvalue_distribution(rho: State, obs: ObservableSpectral) -> EigenvalueDistribution:
    """Outcome probabilities p(a_j) = Tr(rho A_j)."""
    if rho.dim != obs.dim:
        raise DimensionError(f"state dim {rho.dim} != observable dim {obs.dim}")
    v = obs.vectors
    if isinstance(rho, PureState):
        w = np.abs(v.conj().T @ rho.amplitudes) ** 2
    else:
        w = np.real(np.einsum("ik,ij,jk->k", v.conj(), rho.entries, v))
    p = np.bincount(obs.labels, weights=w, minlength=obs.eigenvalues.size)
    p = np.where(np.abs(p) < 1e-15, 0.0, p)
    return EigenvalueDistribution(obs.eigenvalues, p / p.sum())


def shannon_entropy(dist: EigenvalueDistribution | np.ndarray) -> float:
    p = np.asarray(dist.probs if isinstance(dist, EigenvalueDistribution) else dist, dtype=float)
    p = p[p > 0]
    return float(max(0.0, -np.sum(p * np.log(p))))


def trace_distance(rho: State, sigma: State) -> float:
    r, s = _as_density(rho), _as_density(sigma)
    if r.dim != s.dim:
        raise DimensionError(f"dims differ: {r.dim} vs {s.dim}")
    lam = np.linalg.eigvalsh(r.entries - s.entries)
    return float(min(1.0, 0.5 * np.sum(np.abs(lam))))


def _psd_sqrt(m: np.ndarray) -> np.ndarray:
    lam, v = np.linalg.eigh(m)
    return (v * np.sqrt(np.clip(lam, 0.0, None))) @ v.conj().T


def fidelity(rho: State, sigma: State) -> float:
    """Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))**2."""
    r, s = _as_density(rho), _as_density(sigma)
    if r.dim != s.dim:
        raise DimensionError(f"dims differ: {r.dim} vs {s.dim}")
    sr = _psd_sqrt(r.entries)
    lam = np.linalg.eigvalsh(sr @ s.entries @ sr)
    return float(min(1.0, np.sum(np.sqrt(np.clip(lam, 0.0, None))) ** 2))
