"""Spin-chain Hamiltonians, observables, disorder draws and initial states.

Conventions: site 0 is the leftmost tensor factor (most significant bit of
the basis index), bit value 0 is spin up along z, and sigma_y is
[[0, -i], [i, 0]]. Units are hbar = 1 with energies in units of J.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from math import comb

import numpy as np

from .errors import ConfigError, ResourceError
from .qcore import ObservableSpectral, PureState

SIGMA = {
    "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}

# columns: eigenvector for -1 then +1
_EIGVECS = {
    "x": np.array([[1, 1], [-1, 1]], dtype=np.complex128) / np.sqrt(2),
    "y": np.array([[1, 1], [-1j, 1j]], dtype=np.complex128) / np.sqrt(2),
    "z": np.array([[0, 1], [1, 0]], dtype=np.complex128),
}

RNG_NAME = "numpy.random.Philox(key=[seed, index])"

# dense complex DxD bytes allowed before ResourceError
DEFAULT_MEMORY_BUDGET = 2 * 1024**3


def _axis(axis: str) -> str:
    a = str(axis).lower()
    if a not in SIGMA:
        raise ConfigError(f"axis must be one of x, y, z; got {axis!r}")
    return a


@dataclass(frozen=True)
class XXZParams:
    L: int
    J: float = 1.0
    Delta: float = 1.0
    W: float = 0.0
    boundary: str = "open"
    seed: int = 0

    def __post_init__(self):
        if int(self.L) != self.L or self.L < 2:
            raise ConfigError(f"L must be an integer >= 2, got {self.L!r}")
        if self.W < 0:
            raise ConfigError(f"W must be >= 0, got {self.W!r}")
        if self.boundary not in ("open", "periodic"):
            raise ConfigError(f"boundary must be 'open' or 'periodic', got {self.boundary!r}")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class DisorderRealization:
    fields: np.ndarray
    seed: int = 0
    index: int = 0
    W: float = field(default=np.nan, compare=False)

    def __post_init__(self):
        f = np.array(self.fields, dtype=float)
        f.setflags(write=False)
        object.__setattr__(self, "fields", f)

    @property
    def L(self) -> int:
        return self.fields.size


def draw_disorder(W: float, L: int, seed: int, index: int) -> DisorderRealization:
    """I.i.d. uniform fields on [-W, W], keyed by (seed, index)."""
    if W < 0:
        raise ConfigError(f"W must be >= 0, got {W!r}")
    gen = np.random.Generator(np.random.Philox(key=np.array([int(seed), int(index)], dtype=np.uint64)))
    u = gen.random(int(L))
    return DisorderRealization(W * (2.0 * u - 1.0), int(seed), int(index), float(W))


def zero_disorder(L: int) -> DisorderRealization:
    return DisorderRealization(np.zeros(L), 0, 0, 0.0)


def check_budget(L: int, budget: int = DEFAULT_MEMORY_BUDGET, matrices: int = 2) -> None:
    need = matrices * 16 * (2**L) ** 2
    if need > budget:
        raise ResourceError(f"L={L} needs ~{need / 2**30:.1f} GiB of dense storage; budget is {budget / 2**30:.1f} GiB")


def _bonds(L: int, boundary: str) -> list[tuple[int, int]]:
    b = [(i, i + 1) for i in range(L - 1)]
    if boundary == "periodic" and L > 2:
        b.append((L - 1, 0))
    return b


def build_xxz(p: XXZParams, dis: DisorderRealization | None = None) -> np.ndarray:
    """Real symmetric XXZ Hamiltonian with z fields, as a dense 2**L matrix."""
    L = p.L
    if dis is None:
        dis = zero_disorder(L)
    if dis.L != L:
        raise ConfigError(f"disorder length {dis.L} != L={L}")
    check_budget(L, matrices=1)
    D = 2**L
    idx = np.arange(D)
    bits = (idx[:, None] >> (L - 1 - np.arange(L))[None, :]) & 1
    spin = 1.0 - 2.0 * bits
    diag = spin @ dis.fields
    H = np.zeros((D, D))
    for i, j in _bonds(L, p.boundary):
        diag = diag + p.Delta * spin[:, i] * spin[:, j]
        flip = (1 << (L - 1 - i)) | (1 << (L - 1 - j))
        anti = bits[:, i] != bits[:, j]
        src = idx[anti]
        # sigma^x sigma^x + sigma^y sigma^y = 2 (s+ s- + s- s+)
        H[src ^ flip, src] += 2.0 * p.J
    H[idx, idx] += diag
    return H


def build_xx_anderson(p: XXZParams, dis: DisorderRealization | None = None) -> np.ndarray:
    """Hopping chain with random fields; requires Delta = 0."""
    if p.Delta != 0:
        raise ConfigError(f"XX/Anderson model requires Delta=0, got {p.Delta!r}")
    return build_xxz(p, dis)


def site_operator(op: np.ndarray, site: int, L: int) -> np.ndarray:
    """Embed a 2x2 operator at ``site`` of an L-site chain."""
    if not 0 <= site < L:
        raise ConfigError(f"site {site} out of range for L={L}")
    return np.kron(np.kron(np.eye(2**site), op), np.eye(2 ** (L - site - 1)))


def pauli(L: int, site: int, axis: str) -> np.ndarray:
    return site_operator(SIGMA[_axis(axis)], site, L)


def local_pauli(L: int, site: int, axis: str) -> ObservableSpectral:
    """sigma^axis on ``site`` with eigenvalues -1, +1, each 2**(L-1)-fold."""
    a = _axis(axis)
    if not 0 <= site < L:
        raise ConfigError(f"site {site} out of range for L={L}")
    vectors = site_operator(_EIGVECS[a], site, L)
    bit = (np.arange(2**L) >> (L - 1 - site)) & 1
    return ObservableSpectral(np.array([-1.0, 1.0]), vectors, bit)


def magnetization_degeneracies(L: int) -> dict[int, int]:
    return {L - 2 * k: comb(L, k) for k in range(L, -1, -1)}


def global_magnetization(L: int) -> ObservableSpectral:
    """M_z = sum_i sigma^z_i with eigenvalues -L, -L+2, ..., L."""
    if L < 1:
        raise ConfigError("L must be >= 1")
    D = 2**L
    ndown = np.array([bin(i).count("1") for i in range(D)])
    labels = L - ndown
    return ObservableSpectral(np.arange(-L, L + 1, 2, dtype=float), np.eye(D), labels)


def magnetization_sector(L: int, m: int) -> np.ndarray:
    """Basis indices with total sigma^z equal to ``m``."""
    ndown = np.array([bin(i).count("1") for i in range(2**L)])
    return np.flatnonzero(L - 2 * ndown == m)


def product_state(site_vectors) -> PureState:
    v = np.ones(1, dtype=np.complex128)
    for s in site_vectors:
        v = np.kron(v, np.asarray(s, dtype=np.complex128))
    return PureState(v, normalize=True)


def neel_state(L: int, axis: str) -> PureState:
    """Alternating up/down along ``axis``; site i has <sigma^axis_i> = (-1)**i."""
    if L < 1:
        raise ConfigError("L must be >= 1")
    a = _axis(axis)
    up, down = _EIGVECS[a][:, 1], _EIGVECS[a][:, 0]
    return product_state([up if i % 2 == 0 else down for i in range(L)])


def ghz_state(L: int) -> PureState:
    v = np.zeros(2**L, dtype=np.complex128)
    v[0] = v[-1] = 1 / np.sqrt(2)
    return PureState(v)
