"""Exact SU(2) intertwiner combinatorics and typicality estimates.

Every spin is stored as a twice-spin integer ``2j``. Counting uses Python
integers and :class:`fractions.Fraction`; logarithms of exact quantities are
taken with mpmath at :data:`DPS` decimal digits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

import mpmath
import numpy as np
from scipy.integrate import quad

from .errors import ConfigError

DPS = 30
LEVY_PREFACTOR = 2.0 / (9.0 * math.pi**3)
# 4 pi (L_U / l_P)^2 with the observable-universe radius over the Planck length
JMAX_COSMOLOGICAL = 3e124
# rows beyond which canonical_surface_state is not enumerated by surface_entropy_regimes
ENUMERATION_BUDGET = 5_000_000
# bits of (2 j0 + 1)^(E + 2L) allowed on the exact boundary path
BOUNDARY_BIT_BUDGET = 200_000


def _mp():
    return mpmath.workprec(int(DPS * 3.33) + 8)


def _ln(n) -> mpmath.mpf:
    """Natural log of a positive integer or Fraction at working precision."""
    if isinstance(n, Fraction):
        return _ln(n.numerator) - _ln(n.denominator)
    n = int(n)
    if n <= 0:
        raise ValueError("log of non-positive integer")
    return mpmath.log(mpmath.mpf(n))


def _twice(x) -> int:
    """Twice-spin integer from a spin given as int, float or Fraction."""
    v = Fraction(x) * 2
    if v.denominator != 1 or v < 0:
        raise ConfigError(f"{x!r} is not a non-negative half-integer")
    return int(v)


def binom(n: int, m: int) -> int:
    """Binomial with C(n, 0) = 1 for all n and C(n, m) = 0 for 0 <= n < m."""
    if m < 0:
        return 0
    if m == 0:
        return 1
    if n < 0:
        raise ConfigError(f"C({n}, {m}) with negative n and m > 0 is undefined here")
    return math.comb(n, m)


# ---------------------------------------------------------------- fusion


@dataclass(frozen=True)
class FusionTable:
    """Multiplicities of spin k2/2 in the n-fold power of spin j2/2.

    ``rows[n - 1][k2]`` holds the multiplicity for 1 <= n <= len(rows).
    """

    j2: int
    rows: tuple

    @property
    def nmax(self) -> int:
        return len(self.rows)

    def multiplicity(self, n: int, k2: int) -> int:
        if n == 0:
            return int(k2 == 0)
        row = self.rows[n - 1]
        return row[k2] if 0 <= k2 < len(row) else 0

    def row(self, n: int) -> dict[int, int]:
        if n == 0:
            return {0: 1}
        return {k2: d for k2, d in enumerate(self.rows[n - 1]) if d}


def _fuse(d: list[int], j2: int) -> list[int]:
    out = [0] * (len(d) + j2)
    for k2, m in enumerate(d):
        if m:
            for k2p in range(abs(k2 - j2), k2 + j2 + 1, 2):
                out[k2p] += m
    return out


@lru_cache(maxsize=64)
def _fusion_rows(j2: int, n: int) -> tuple:
    rows = []
    d = [0] * j2 + [1]
    rows.append(tuple(d))
    for _ in range(n - 1):
        d = _fuse(d, j2)
        rows.append(tuple(d))
    return tuple(rows)


def fusion_multiplicities(j2: int, n: int, kmax2: int | None = None) -> FusionTable:
    """Clebsch-Gordan fusion table for powers 1..n of spin j2/2.

    ``kmax2`` truncates the stored rows; the recursion itself is always exact.
    """
    if n < 1:
        raise ConfigError("n must be >= 1")
    if j2 < 0:
        raise ConfigError("twice-spin must be non-negative")
    rows = _fusion_rows(int(j2), int(n))
    if kmax2 is not None:
        rows = tuple(r[: kmax2 + 1] for r in rows)
    return FusionTable(int(j2), rows)


def multiplicity(j2: int, n: int, k2: int) -> int:
    if n == 0:
        return int(k2 == 0)
    return fusion_multiplicities(j2, n).multiplicity(n, k2)


def quadrature_multiplicity(j2: int, n: int, k2: int) -> float:
    """Character integral (2/pi) int_0^pi sin t sin((k2+1) t) chi_j(t)^n dt."""

    def f(t):
        s = math.sin(t)
        if s == 0.0:
            chi = float(j2 + 1) if t < 1 else float((-1) ** j2 * (j2 + 1))
        else:
            chi = math.sin((j2 + 1) * t) / s
        return s * math.sin((k2 + 1) * t) * chi**n

    pts = n * j2 + k2 + 4
    val, _ = quad(f, 0.0, math.pi, limit=max(200, 4 * pts), epsabs=1e-13, epsrel=1e-12)
    return 2.0 / math.pi * val


def asymptotic_multiplicity(j2: int, n: int, k2: int) -> float:
    """ln of (2j+1)^n (k2+1) / (j(j+1) n)^(3/2), valid for n much larger than k."""
    if j2 <= 0:
        raise ConfigError("asymptotic form requires j > 0")
    if n < 1:
        raise ConfigError("n must be >= 1")
    j = j2 / 2
    return n * math.log(j2 + 1) + math.log(k2 + 1) - 1.5 * math.log(j * (j + 1) * n)


def invariant_count(spins2) -> int:
    """Number of singlets in the tensor product of the given twice-spins."""
    d = {0: 1}
    for j2 in spins2:
        nd: dict[int, int] = {}
        for k2, m in d.items():
            for k2p in range(abs(k2 - j2), k2 + j2 + 1, 2):
                nd[k2p] = nd.get(k2p, 0) + m
        d = nd
    return d.get(0, 0)


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def intertwiner_dim_by_enumeration(N: int, J0_2: int) -> int:
    """Invariant subspace dimension summed over all spin assignments with total area J0_2/2."""
    if N < 1 or J0_2 < 0:
        raise ConfigError("need N >= 1 and J0 >= 0")
    return sum(invariant_count(c) for c in _compositions(J0_2, N))


def intertwiner_dim(N: int, J0: int) -> int:
    """Dimension d_R of N-valent intertwiners with integer total area J0."""
    if N < 1 or J0 < 0:
        raise ConfigError("need N >= 1 and J0 >= 0")
    if int(J0) != J0:
        raise ConfigError("closed form requires integer J0; use intertwiner_dim_by_enumeration")
    J0 = int(J0)
    if J0 == 0:
        return 1
    if N == 1:
        return 0
    num = binom(N + J0 - 1, J0) * binom(N + J0 - 2, J0)
    q, r = divmod(num, J0 + 1)
    assert r == 0
    return q


def dfunction(Q: int, x2: int, y2: int) -> int:
    """Number of spin-x2/2 multiplets among Q legs of total area y2/2."""
    if Q < 1:
        raise ConfigError("Q must be >= 1")
    if x2 < 0 or y2 < 0 or (x2 + y2) % 2:
        raise ConfigError(f"non-integral D-function arguments x2={x2}, y2={y2}")
    if y2 < x2:
        return 0
    a = (x2 + y2) // 2
    b = (y2 - x2) // 2
    num = (x2 + 1) * binom(Q + a - 1, a) * binom(Q + b - 2, b)
    q, r = divmod(num, a + 1)
    if r:
        raise ArithmeticError(f"non-integral D_({Q})({x2}/2, {y2}/2)")
    return q


# ------------------------------------------------------- surface state


@dataclass(frozen=True)
class IntertwinerSpec:
    N: int
    k: int
    J0: int
    Jmax: float | None = None

    def __post_init__(self):
        if not 1 <= self.k < self.N:
            raise ConfigError(f"need 1 <= k < N, got k={self.k}, N={self.N}")
        if int(self.J0) != self.J0 or self.J0 < 0:
            raise ConfigError("J0 must be a non-negative integer")
        if self.Jmax is not None and self.Jmax < self.J0:
            raise ConfigError("Jmax must be >= J0")

    @property
    def j0(self) -> float:
        return self.J0 / self.N

    @property
    def jmax(self) -> float:
        return float(self.J0 if self.Jmax is None else self.Jmax)


@dataclass(frozen=True)
class CanonicalSurfaceState:
    """Rows (JS2, x2, W_S, W_E) with weight W_E / ((x2+1) d_R) and multiplicity W_S (x2+1)."""

    spec: IntertwinerSpec
    d_R: int
    rows: tuple = field(repr=False)

    def weight(self, row) -> Fraction:
        _, x2, _, we = row
        return Fraction(we, (x2 + 1) * self.d_R)

    @staticmethod
    def multiplicity(row) -> int:
        _, x2, ws, _ = row
        return ws * (x2 + 1)

    def normalization(self) -> Fraction:
        return Fraction(sum(ws * we for _, _, ws, we in self.rows), self.d_R)

    def probabilities(self) -> np.ndarray:
        """Sector probabilities W_S W_E / d_R as floats."""
        return np.array([float(Fraction(ws * we, self.d_R)) for _, _, ws, we in self.rows])

    def entropy(self) -> float:
        return float(self.entropy_mp())

    def entropy_mp(self) -> mpmath.mpf:
        with _mp():
            lnR = _ln(self.d_R)
            s = mpmath.mpf(0)
            for _, x2, ws, we in self.rows:
                p = mpmath.mpf(ws * we) / self.d_R
                s += p * (lnR + _ln(x2 + 1) - _ln(we))
            return +s

    def mean_area(self) -> Fraction:
        """Expectation of 2 J_S."""
        return Fraction(sum(js2 * ws * we for js2, _, ws, we in self.rows), self.d_R)


def surface_rows(spec: IntertwinerSpec) -> Iterator[tuple[int, int, int, int]]:
    N, k, J0 = spec.N, spec.k, spec.J0
    for js2 in range(0, 2 * J0 + 1):
        ye2 = 2 * J0 - js2
        for x2 in range(js2 % 2, min(js2, ye2) + 1, 2):
            ws = dfunction(k, x2, js2)
            if not ws:
                continue
            we = dfunction(N - k, x2, ye2)
            if we:
                yield (js2, x2, ws, we)


def surface_row_count(spec: IntertwinerSpec) -> int:
    J0 = spec.J0
    return sum(min(js2, 2 * J0 - js2) // 2 + 1 for js2 in range(2 * J0 + 1))


def canonical_surface_state(spec: IntertwinerSpec) -> CanonicalSurfaceState:
    """Reduced typical state of k legs of an N-valent intertwiner of area J0.

    Raises ArithmeticError if the enumerated rows do not normalize exactly.
    """
    rows = tuple(surface_rows(spec))
    d_R = intertwiner_dim(spec.N, spec.J0)
    st = CanonicalSurfaceState(spec, d_R, rows)
    total = sum(ws * we for _, _, ws, we in rows)
    if total != d_R:
        raise ArithmeticError(f"normalization failed: sum W_S W_E = {total} != d_R = {d_R}")
    return st


def area_law_entropy(spec: IntertwinerSpec, mean_area: float) -> float:
    """beta <2 J_S> with beta = 1 + ln((N - k) / J0)."""
    return (1.0 + math.log((spec.N - spec.k) / spec.J0)) * mean_area


def large_j0_entropy(spec: IntertwinerSpec) -> float:
    return 2 * spec.k * (1.0 + math.log(spec.J0 / spec.N))


def order_one_entropy(spec: IntertwinerSpec) -> float:
    return 2.0 * spec.k - 3.0


def regime_label(j0: float) -> str:
    if j0 <= 0.2:
        return "small"
    if j0 >= 5:
        return "large"
    return "order-1"


def alpha_fit(entropy: float, spec: IntertwinerSpec) -> float:
    """Solve S = k ln(2 alpha^2 j0^2) for alpha."""
    return math.sqrt(math.exp(entropy / spec.k) / (2.0 * spec.j0**2))


@dataclass(frozen=True)
class RegimeReport:
    label: str
    exact: float | None
    asymptotic: float
    relative_deviation: float | None
    formulas: dict
    enumerated: bool
    mean_area: float | None


def surface_entropy_regimes(spec: IntertwinerSpec, budget: int = ENUMERATION_BUDGET) -> RegimeReport:
    """Exact entropy paired with the asymptotic form of its j0 regime."""
    label = regime_label(spec.j0)
    enumerated = surface_row_count(spec) <= budget
    exact = mean = None
    if enumerated:
        st = canonical_surface_state(spec)
        exact = st.entropy()
        mean = float(st.mean_area())
    # small-j0 estimate uses <2 J_S> = 2 k J0 / N when the state is not enumerated
    area_mean = mean if mean is not None else 2.0 * spec.k * spec.J0 / spec.N
    formulas = {
        "small": area_law_entropy(spec, area_mean) if spec.J0 > 0 else 0.0,
        "large": large_j0_entropy(spec) if spec.J0 > 0 else 0.0,
        "order-1": order_one_entropy(spec),
    }
    asym = formulas[label]
    dev = None if exact is None or exact == 0 else abs(exact - asym) / abs(exact)
    return RegimeReport(label, exact, asym, dev, formulas, enumerated, mean)


# ---------------------------------------------------------- typicality


@dataclass(frozen=True)
class TypicalityReport:
    ln_dS: float
    ln_dR: float
    ln_ratio: float
    cut1: bool
    cut2: bool
    cut1_threshold: float
    cut2_threshold: float
    ln_levy: mpmath.mpf
    levy_exponent_log10: float
    epsilon: float

    def to_json(self) -> dict:
        return {
            "ln_dS": self.ln_dS,
            "ln_dR": self.ln_dR,
            "ln_ratio": self.ln_ratio,
            "thresholds": {
                "cut1": self.cut1,
                "cut2": self.cut2,
                "cut1_threshold": self.cut1_threshold,
                "cut2_threshold": self.cut2_threshold,
            },
            "ln_levy": mpmath.nstr(self.ln_levy, 17),
            "levy_exponent_log10": self.levy_exponent_log10,
            "epsilon": self.epsilon,
        }


def levy_log_bound(d_R: int, eps: float) -> tuple[mpmath.mpf, float]:
    """ln of 4 exp(-(2 / 9 pi^3) d_R eps^2) and log10 of the exponent magnitude."""
    with _mp():
        expo = mpmath.mpf(2) / (9 * mpmath.pi**3) * mpmath.mpf(d_R) * mpmath.mpf(eps) ** 2
        return +(mpmath.log(4) - expo), float(mpmath.log10(expo))


def typicality_bound(spec: IntertwinerSpec, eps: float = 1e-10) -> TypicalityReport:
    """Log-domain ratio d_S / sqrt(d_R), threshold checks and the Levy factor."""
    J = spec.jmax
    k, N, J0 = spec.k, spec.N, spec.J0
    ln_dS = k * (math.log(2 * J + 1) + math.log(J + 1))
    d_R = intertwiner_dim(N, J0)
    with _mp():
        ln_dR = float(_ln(d_R))
    lnJ = math.log(J)
    ln_levy, lev10 = levy_log_bound(d_R, eps)
    cut1 = J0 / k > lnJ
    cut2 = J0 > 0 and (N / k) * math.log(spec.j0) > 2 * lnJ
    return TypicalityReport(ln_dS, ln_dR, ln_dS - 0.5 * ln_dR, cut1, cut2, lnJ, 2 * lnJ, ln_levy, lev10, eps)


# --------------------------------------------------------- flower graph


@dataclass(frozen=True)
class FlowerGraphSpec:
    E: int
    L: int
    j2: int

    def __post_init__(self):
        if self.E < 1 or self.L < 0 or self.j2 < 1:
            raise ConfigError("need E >= 1, L >= 0 and j0 > 0")

    @property
    def j0(self) -> float:
        return self.j2 / 2

    @property
    def exact_bits(self) -> float:
        return (self.E + 2 * self.L) * math.log2(self.j2 + 1)


@dataclass(frozen=True)
class BoundaryCanonicalState:
    """Rows (k2, W_k numerator, W_k denominator, multiplicity) or asymptotic-only."""

    spec: FlowerGraphSpec
    d_FR: int | None
    rows: tuple = field(repr=False)
    exact: bool = True

    def weight(self, row) -> Fraction:
        k2, num, den, _ = row
        return Fraction(num, den)

    @staticmethod
    def multiplicity(row) -> int:
        return row[3]

    def normalization(self) -> Fraction:
        return sum((Fraction(num, den) * mult for _, num, den, mult in self.rows), Fraction(0))

    def entropy_mp(self) -> mpmath.mpf:
        with _mp():
            s = mpmath.mpf(0)
            for _, num, den, mult in self.rows:
                p = mpmath.mpf(num * mult) / den
                s -= p * (_ln(num) - _ln(den))
            return +s

    def entropy(self) -> float:
        return float(self.entropy_mp())


def boundary_canonical_state(spec: FlowerGraphSpec) -> BoundaryCanonicalState:
    """Exact weights W_k = d_k^(2L) / (d_FR (2k+1)) with multiplicity (2k+1) d_k^E."""
    E, L, j2 = spec.E, spec.L, spec.j2
    n = E + 2 * L
    d_FR = multiplicity(j2, n, 0)
    if d_FR == 0:
        raise ConfigError(f"no invariant states for E={E}, L={L}, j0={j2}/2")
    rows = []
    for k2 in range(0, E * j2 + 1):
        dE = multiplicity(j2, E, k2)
        dL = multiplicity(j2, 2 * L, k2)
        if dE and dL:
            rows.append((k2, dL, d_FR * (k2 + 1), (k2 + 1) * dE))
    return BoundaryCanonicalState(spec, d_FR, tuple(rows))


def boundary_exact_log_ratio(spec: FlowerGraphSpec) -> float | None:
    """ln(d_boundary / sqrt(d_FR)) with d_boundary = (2 j0 + 1)^E.

    Returns None when the gauge-invariant space is empty.
    """
    d_FR = multiplicity(spec.j2, spec.E + 2 * spec.L, 0)
    if d_FR == 0:
        return None
    with _mp():
        return float(spec.E * mpmath.log(spec.j2 + 1) - _ln(d_FR) / 2)


def boundary_asymptotic_log_ratio(spec: FlowerGraphSpec) -> float:
    """(E/2 - L) ln(2 j0 + 1) + (3/4) ln(j0 (j0 + 1) (E + 2L))."""
    j = spec.j0
    return (spec.E / 2 - spec.L) * math.log(spec.j2 + 1) + 0.75 * math.log(j * (j + 1) * (spec.E + 2 * spec.L))


def boundary_asymptotic_entropy(spec: FlowerGraphSpec) -> float:
    if spec.L == 0:
        raise ConfigError("asymptotic boundary entropy needs L > 0")
    return spec.E * math.log(spec.j2 + 1) - 1.5 * math.log(1 + spec.E / (2 * spec.L))


def boundary_asymptotic_weight(spec: FlowerGraphSpec, k2: int) -> float:
    """ln W_k from the large-n multiplicity form; k enters only via (k2+1)/(k2+1)."""
    n = spec.E + 2 * spec.L
    return asymptotic_multiplicity(spec.j2, 2 * spec.L, k2) - asymptotic_multiplicity(spec.j2, n, 0) - math.log(k2 + 1)


@dataclass(frozen=True)
class BoundaryReport:
    state: BoundaryCanonicalState | None
    entropy: float | None
    asymptotic_entropy: float | None
    ln_ratio_exact: float | None
    ln_ratio_asymptotic: float
    below_threshold: bool
    exact: bool


def boundary_report(spec: FlowerGraphSpec, bit_budget: int = BOUNDARY_BIT_BUDGET) -> BoundaryReport:
    """Exact boundary state when within budget, plus the asymptotic forms."""
    asym_S = boundary_asymptotic_entropy(spec) if spec.L > 0 else None
    asym_r = boundary_asymptotic_log_ratio(spec)
    if spec.exact_bits > bit_budget or multiplicity(spec.j2, spec.E + 2 * spec.L, 0) == 0:
        return BoundaryReport(None, None, asym_S, None, asym_r, 2 * spec.L > spec.E, False)
    st = boundary_canonical_state(spec)
    return BoundaryReport(st, st.entropy(), asym_S, boundary_exact_log_ratio(spec), asym_r, 2 * spec.L > spec.E, True)
