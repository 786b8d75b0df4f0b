import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_hermitian, random_state
from oracles import stirling_gap
from thermolab.errors import ConfigError, DimensionError, InfeasibleSubspace
from thermolab.eth import matrix_elements
from thermolab.models import XXZParams, build_xxz, draw_disorder
from thermolab.qcore import DensityMatrix, PureState, eigenvalue_distribution, shannon_entropy
from thermolab.spectral import EnergyWindow, diagonal_ensemble, diagonalize, microcanonical_state
from thermolab.unbiased import (
    HUOSpec,
    balanced_eigenvalues,
    balanced_huo,
    bloch_vector,
    build_huo,
    density_from_bloch,
    fit_slope,
    fourier_matrix,
    hub_from_spectrum,
    kl_to_uniform_bits,
    magnetization_theorem_scan,
    mub_family_prime,
    regular_simplex,
    simplex_unbiased_basis,
    unbiasedness_score,
)

SX = np.array([[0, 1], [1, 0]])
SY = np.array([[0, -1j], [1j, 0]])
SZ = np.diag([1, -1])


def _eigenbasis_of(U, P):
    return all(abs(abs(np.vdot(U[:, k], P @ U[:, k])) - 1) < 1e-12 for k in range(U.shape[1]))


def test_qubit_mubs_are_pauli_eigenbases():
    fam = mub_family_prime(2)
    assert len(fam) == 3
    kinds = sorted(next(n for n, P in (("x", SX), ("y", SY), ("z", SZ)) if _eigenbasis_of(B, P)) for B in fam.bases)
    assert kinds == ["x", "y", "z"]
    for a in range(3):
        for b in range(a + 1, 3):
            assert np.allclose(np.abs(fam.bases[a].conj().T @ fam.bases[b]) ** 2, 0.5)


def test_qutrit_mubs_direct_overlap_check():
    fam = mub_family_prime(3)
    assert len(fam) == 4
    checks = 0
    for a in range(4):
        for b in range(a + 1, 4):
            for i in range(3):
                for j in range(3):
                    ov = abs(np.vdot(fam.bases[a][:, i], fam.bases[b][:, j])) ** 2
                    assert abs(ov - 1 / 3) < 1e-12
                    checks += 1
    assert checks == 9 * math.comb(4, 2)


@pytest.mark.parametrize("p", [4, 6, 9, 1, 37])
def test_mub_rejects_non_prime(p):
    with pytest.raises(ConfigError):
        mub_family_prime(p)


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
def test_mub_family_orthonormal_and_unbiased(p):
    fam = mub_family_prime(p)
    assert len(fam) == p + 1
    for B in fam.bases:
        assert np.max(np.abs(B.conj().T @ B - np.eye(p))) < 1e-10
    assert fam.max_deviation() < 1e-10


def test_hub_qubit():
    sd = diagonalize(SZ.astype(float))
    hub = hub_from_spectrum(sd)
    assert _eigenbasis_of(hub, SX)
    assert np.allclose(np.abs(sd.vectors.conj().T @ hub) ** 2, 0.5)


def test_hub_random_16(rng):
    sd = diagonalize(random_hermitian(rng, 16))
    assert unbiasedness_score(sd.vectors, hub_from_spectrum(sd)) < 1e-10


def test_hub_distribution_is_uniform(rng):
    sd = diagonalize(random_hermitian(rng, 12))
    obs = build_huo(HUOSpec(hub_from_spectrum(sd), np.arange(12.0), sd.vectors))
    for n in range(12):
        H = shannon_entropy(eigenvalue_distribution(PureState(sd.vectors[:, n]), obs))
        assert H == pytest.approx(math.log(12), abs=1e-12)


def test_score_examples():
    I = np.eye(5)
    assert unbiasedness_score(I, I) == pytest.approx(4)
    Hx = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
    assert unbiasedness_score(np.eye(2), Hx) < 1e-12
    with pytest.raises(DimensionError):
        unbiasedness_score(np.eye(2), np.eye(3))


def test_score_against_product_x_basis_drops_with_disorder():
    L = 8
    bx = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
    Bx = bx
    for _ in range(L - 1):
        Bx = np.kron(Bx, bx)
    means = []
    for W in (1.0, 5.0, 10.0):
        s = [unbiasedness_score(diagonalize(build_xxz(XXZParams(L, W=W), draw_disorder(W, L, 3, i))).vectors, Bx) for i in range(5)]
        means.append(np.mean(s))
    assert means[0] > means[1] > means[2]


def test_balanced_huo_zero_diagonal():
    rng = np.random.default_rng(0)
    sd = diagonalize(random_hermitian(rng, 256))
    tab = matrix_elements(balanced_huo(sd, 1), sd)
    assert np.max(np.abs(np.diag(tab.elements))) < 1e-10


def test_small_huo_diagonal_and_microcanonical_agree(rng):
    sd = diagonalize(random_hermitian(rng, 4))
    A = build_huo(HUOSpec(hub_from_spectrum(sd), np.array([1.0, 1.0, -1.0, -1.0]), sd.vectors)).operator()
    mc = microcanonical_state(sd, EnergyWindow(float(sd.energies.mean()), float(np.ptp(sd.energies)) + 1))
    for _ in range(10):
        psi = PureState(random_state(rng, 4))
        assert abs(diagonal_ensemble(sd, psi).expectation(A) - mc.expectation(A)) < 1e-10


def test_huo_offdiagonal_width():
    rng = np.random.default_rng(1)
    D = 2**10
    sd = diagonalize(random_hermitian(rng, D))
    huo = balanced_huo(sd, 2)
    A = huo.operator()
    a2 = np.trace(A @ A).real / D
    off = matrix_elements(huo, sd).elements[~np.eye(D, dtype=bool)]
    assert abs(off.std(ddof=1) / math.sqrt(a2 / D) - 1) < 0.15


def test_huo_spec_rejects_biased_basis(rng):
    sd = diagonalize(random_hermitian(rng, 4))
    with pytest.raises(ConfigError):
        HUOSpec(sd.vectors, np.ones(4), sd.vectors)


def test_balanced_eigenvalues():
    a = balanced_eigenvalues(10, 3)
    assert a.sum() == 0 and set(a) == {-1.0, 1.0}
    assert np.array_equal(a, balanced_eigenvalues(10, 3))
    with pytest.raises(ConfigError):
        balanced_eigenvalues(5)


def test_bloch_roundtrip(rng):
    for d in (2, 3, 5):
        psi = random_state(rng, d)
        b = bloch_vector(psi)
        assert abs(np.linalg.norm(b) - 1) < 1e-10
        assert np.allclose(density_from_bloch(b, d), np.outer(psi, psi.conj()), atol=1e-12)


def _theorem_residual(res, psis):
    worst = 0.0
    start = 0
    for j, d in enumerate(res.subspace_dims):
        B = res.bases[j]
        assert np.max(np.abs(B.conj().T @ B - np.eye(d))) < 1e-10
        P = np.zeros((psis.shape[1], psis.shape[1]))
        P[start : start + d, start : start + d] = np.eye(d)
        start += d
        for psi in psis:
            target = np.vdot(psi, P @ psi).real / d
            worst = max(worst, np.max(np.abs(np.abs(B.conj().T @ psi) ** 2 - target)))
    return worst


def test_theorem_single_state_qubit(rng):
    psi = random_state(rng, 2)
    res = simplex_unbiased_basis([psi], [2])
    assert _theorem_residual(res, psi[None, :]) < 1e-12
    b = res.facet_vectors[0]
    assert np.allclose(b[0], -b[1])
    assert abs(b[0] @ bloch_vector(psi)) < 1e-12


def _orthonormal_states(rng, M, D):
    q, _ = np.linalg.qr(rng.normal(size=(D, M)) + 1j * rng.normal(size=(D, M)))
    return q.T


def test_theorem_four_states_dim_eight(rng):
    psis = _orthonormal_states(rng, 4, 8)
    res = simplex_unbiased_basis(psis, [4, 4], seed=1)
    assert _theorem_residual(res, psis) < 1e-8


def test_theorem_infeasible_lists_subspaces(rng):
    psis = np.array([random_state(rng, 4) for _ in range(2)])
    with pytest.raises(InfeasibleSubspace) as e:
        simplex_unbiased_basis(psis, [2, 2])
    assert e.value.subspaces == [0, 1]
    psis = np.array([random_state(rng, 7) for _ in range(5)])
    with pytest.raises(InfeasibleSubspace) as e:
        simplex_unbiased_basis(psis, [2, 3, 2])
    assert e.value.subspaces == [0, 2]


def test_regular_simplex():
    for d in (2, 3, 4, 7):
        V = regular_simplex(d)
        assert np.allclose(V.sum(axis=0), 0, atol=1e-10)
        G = V @ V.T
        assert np.allclose(G[~np.eye(d, dtype=bool)], -1 / (d - 1), atol=1e-10)


def test_theorem_scan_slope():
    scan, _ = magnetization_theorem_scan(range(14, 25))
    slope, _ = fit_slope([r.N for r in scan], [r.q for r in scan])
    # frozen from the exact scan over the integer label lattice
    assert slope == pytest.approx(1.5272727272727278, rel=1e-12)


def test_theorem_scan_j0_maximal():
    _, dev = magnetization_theorem_scan([20])
    assert kl_to_uniform_bits(0.5) == 0
    ratios = {r.j: r.log_ratio for r in dev}
    assert max(ratios, key=ratios.get) == 0


def test_large_deviation_gap_n20_j4():
    _, dev = magnetization_theorem_scan([20])
    row = next(r for r in dev if r.j == 4)
    assert row.per_site_gap == pytest.approx(stirling_gap(20, 4), rel=1e-12)
    assert row.per_site_gap == pytest.approx(0.08582171389193896, rel=1e-10)
    assert row.log_ratio <= row.log_bound


def test_scan_rejects_large_n():
    with pytest.raises(ConfigError):
        magnetization_theorem_scan([25])


@given(st.integers(0, 2**32 - 1), st.sampled_from([8, 16, 64]))
def test_entropic_uncertainty(seed, D):
    rng = np.random.default_rng(seed)
    sd = diagonalize(random_hermitian(rng, D))
    hub = hub_from_spectrum(sd)
    psi = random_state(rng, D)
    h1 = shannon_entropy(np.abs(sd.vectors.conj().T @ psi) ** 2)
    h2 = shannon_entropy(np.abs(hub.conj().T @ psi) ** 2)
    assert h1 + h2 >= math.log(D) - 1e-8


@given(st.integers(0, 2**32 - 1), st.integers(2, 6))
def test_hub_huo_diagonals_constant(seed, n):
    rng = np.random.default_rng(seed)
    D = 2 * n
    sd = diagonalize(random_hermitian(rng, D))
    a = rng.normal(size=D)
    huo = build_huo(HUOSpec(hub_from_spectrum(sd), a, sd.vectors))
    d = np.diag(matrix_elements(huo, sd).elements).real
    assert np.max(np.abs(d - a.sum() / D)) < 1e-10


@given(st.integers(0, 2**32 - 1), st.integers(1, 2))
def test_theorem_facets_form_simplex(seed, M):
    rng = np.random.default_rng(seed)
    psis = _orthonormal_states(rng, M, 6)
    res = simplex_unbiased_basis(psis, [3, 3], seed=seed)
    for V in res.facet_vectors.values():
        d = V.shape[0]
        assert np.allclose(V.sum(axis=0), 0, atol=1e-10)
        G = V @ V.T
        assert np.allclose(G[~np.eye(d, dtype=bool)], -1 / (d - 1), atol=1e-10)
    assert res.residual < 1e-8
