import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_state
from thermolab._kernels import site_states, site_states_numpy
from thermolab.errors import ConfigError, InsufficientStructure, ResourceError
from thermolab.mbl import (
    DisorderAveragedSeries,
    TimeGrid,
    halfchain_entropies,
    halfchain_entropy_run,
    local_entropies_run,
    local_magnetization_run,
    log_modulation_fit,
    site_entropies,
    site_expectations,
    staggered_magnetization,
    total_correlations_direct,
)
from thermolab.models import XXZParams, build_xxz, ghz_state, neel_state, product_state, zero_disorder
from thermolab.qcore import DensityMatrix, PureState, partial_trace, von_neumann_entropy
from thermolab.spectral import diagonalize, evolve_many

SHORT = TimeGrid.log(0.1, 10.0, 20)


def test_time_grid_contract():
    with pytest.raises(ConfigError):
        TimeGrid(np.array([1.0]))
    with pytest.raises(ConfigError):
        TimeGrid(np.array([1.0, 1.0, 2.0]))
    with pytest.raises(ConfigError):
        TimeGrid(np.array([0.0, 1.0]))
    g = TimeGrid.log()
    assert g.points.size == 200 and g.points[0] == pytest.approx(0.1) and g.points[-1] == pytest.approx(1e3)


@pytest.mark.parametrize("axis", "xyz")
def test_clean_initial_magnetization(axis):
    L = 6
    sd = diagonalize(build_xxz(XXZParams(L, W=0.0), zero_disorder(L)))
    psi = evolve_many(sd, neel_state(L, axis), [0.0])
    m = site_expectations(site_states(psi, L), axis)[0]
    assert np.allclose(m, (-1.0) ** np.arange(L), atol=1e-12)


def test_product_state_has_no_entropy():
    L = 5
    psi = neel_state(L, "x").amplitudes[None, :]
    rdm = site_states(psi, L)
    assert np.allclose(site_entropies(rdm), 0, atol=1e-12)
    assert abs(total_correlations_direct(psi, rdm)[0]) < 1e-12


@pytest.mark.parametrize("L", [3, 6])
def test_ghz_entropies_match_density_oracle(L):
    g = ghz_state(L)
    rdm = site_states(g.amplitudes[None, :], L)
    S = site_entropies(rdm)[0]
    ref = [von_neumann_entropy(partial_trace(g, [2] * L, [n])) for n in range(L)]
    assert np.allclose(S, ref, atol=1e-12)
    assert np.allclose(S, math.log(2), atol=1e-12)
    assert total_correlations_direct(g.amplitudes[None, :], rdm)[0] == pytest.approx(L * math.log(2), abs=1e-12)


def test_site_states_backends_agree(rng):
    L = 7
    psi = np.array([random_state(rng, 2**L) for _ in range(4)])
    assert np.allclose(site_states(psi, L), site_states_numpy(psi, L), atol=1e-14)
    for n in range(L):
        ref = partial_trace(PureState(psi[0]), [2] * L, [n]).entries
        assert np.allclose(site_states(psi, L)[0, n], ref, atol=1e-14)


def test_total_correlation_identity_along_run():
    run = local_entropies_run(XXZParams(8, W=3.0, seed=2), SHORT, n_dis=3)
    assert run.max_identity_error <= 1e-12
    assert np.allclose(run.total_correlations.mean, 8 * run.average.mean, atol=1e-12)


def test_magnetization_run_shapes_and_determinism():
    p = XXZParams(6, W=2.0, seed=5)
    a = local_magnetization_run(p, "z", SHORT, n_dis=3)
    b = local_magnetization_run(p, "z", SHORT, n_dis=3)
    c = local_magnetization_run(p, "z", SHORT, n_dis=3, workers=2)
    assert a.mean.shape == (20, 6)
    assert np.array_equal(a.mean, b.mean) and np.array_equal(a.mean, c.mean)
    assert np.array_equal(a.stderr, c.stderr)
    assert np.all(a.stderr >= 0)
    assert staggered_magnetization(a).shape == (20,)


def test_resource_guard():
    with pytest.raises(ResourceError):
        local_magnetization_run(XXZParams(12), "z", SHORT, budget=2**20)
    with pytest.raises(ConfigError):
        local_magnetization_run(XXZParams(6), "w", SHORT)


def test_log_fit_constant_series():
    t = np.logspace(0, 3, 200)
    with pytest.raises(InsufficientStructure):
        log_modulation_fit((t, np.ones_like(t)))


def test_log_fit_synthetic_recovers_slope():
    t = np.logspace(0, 2, 40_000)
    y = 0.3 + 0.05 * np.log(t) + np.sin(10 * t)
    fit = log_modulation_fit((t, y), window=(1.0, 100.0))
    assert abs(fit.slope / 0.05 - 1) <= 0.10
    assert len(fit.minima_times) >= 4


def test_log_fit_needs_two_decades():
    t = np.logspace(0, 1, 200)
    with pytest.raises(ConfigError):
        log_modulation_fit((t, np.sin(t)), window=(1.0, 10.0))


def test_halfchain_examples():
    L = 6
    assert halfchain_entropies(neel_state(L, "z").amplitudes[None, :], L)[0] == pytest.approx(0, abs=1e-12)
    bell = np.array([1, 0, 0, 1]) / math.sqrt(2)
    # pair site i with site i + L/2 so every pair straddles the cut
    psi = np.zeros(2**L)
    for bits in range(2 ** (L // 2)):
        psi[(bits << (L // 2)) | bits] = 1
    psi /= np.linalg.norm(psi)
    assert halfchain_entropies(psi[None, :], L)[0] == pytest.approx((L // 2) * math.log(2), abs=1e-12)
    with pytest.raises(ConfigError):
        halfchain_entropy_run(XXZParams(5), SHORT)


def test_halfchain_slower_in_localized_phase():
    grid = TimeGrid.log(1.0, 10.0, 2)
    s1 = halfchain_entropy_run(XXZParams(10, W=1.0, seed=0), grid, n_dis=10)
    s10 = halfchain_entropy_run(XXZParams(10, W=10.0, seed=0), grid, n_dis=10)
    assert s10.mean[-1] < s1.mean[-1]


def test_global_state_stays_pure():
    L = 6
    sd = diagonalize(build_xxz(XXZParams(L, W=1.0)))
    for a in evolve_many(sd, neel_state(L, "x"), SHORT.points[::5]):
        assert von_neumann_entropy(DensityMatrix(np.outer(a, a.conj()), check_psd=False)) < 1e-9


def test_series_contract():
    with pytest.raises(ConfigError):
        DisorderAveragedSeries(np.ones(2), np.ones(2), np.zeros(2), 0, 0, ())
    with pytest.raises(ValueError):
        DisorderAveragedSeries(np.ones(2), np.ones(2), -np.ones(2), 1, 0, (0,))


@given(st.integers(0, 2**32 - 1), st.integers(2, 6))
def test_site_entropy_bounds(seed, L):
    psi = random_state(np.random.default_rng(seed), 2**L)[None, :]
    rdm = site_states(psi, L)
    S = site_entropies(rdm)
    assert np.all(S >= -1e-12) and np.all(S <= math.log(2) + 1e-12)
    assert abs(total_correlations_direct(psi, rdm)[0] - S.sum()) < 1e-10
