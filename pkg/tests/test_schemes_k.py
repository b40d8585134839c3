import math

import numpy as np
import pytest

from nlstring.core import ContractError
from nlstring.diagnostics import angular_momentum, energy, relative_fluctuation
from nlstring.grid import GridSpec
from nlstring.model import KState, ModelParams, SpectralState, initial_modal
from nlstring.schemes_k import (gamma_k, spectral_from_grid, spectral_gamma, spectral_modal,
                                spectral_project, spectral_synthesize, step_k, step_spectral)
from nlstring.simulate import run


def implicit_gamma_grid(state, m, grid, iters=500):
    """Averaged tension factor found by iterating its defining relation."""
    h, ht = grid.h_x, grid.h_t
    v, vp = state.v_curr, state.v_prev
    q = np.diff(v, axis=0) / h
    qp = np.diff(vp, axis=0) / h
    lap = np.zeros_like(v)
    lap[1:-1] = (v[2:] - 2 * v[1:-1] + v[:-2]) / h**2
    G = 1.0
    for _ in range(iters):
        nxt = 2 * v - vp + ht**2 * m.alpha * G * lap
        qn = np.diff(nxt, axis=0) / h
        G_new = 1.0 + h * np.sum(q * 0.5 * (qn + qp)) / (2 * m.alpha)
        if G_new == G:
            break
        G = G_new
    return G


def implicit_gamma_modal(state, m, h_t, iters=200):
    k2 = ((np.pi * np.arange(1, state.M + 1)) ** 2)[:, None]
    c, cp = state.coeffs_curr, state.coeffs_prev
    G = 1.0
    for _ in range(iters):
        nxt = 2 * c - cp - h_t**2 * m.alpha * G * k2 * c
        G_new = 1.0 + 0.5 * np.sum(k2 * c * 0.5 * (nxt + cp)) / (2 * m.alpha)
        if G_new == G:
            break
        G = G_new
    return G


def random_kstate(rng, N, scale):
    v = np.zeros((2, N + 1, 2))
    v[:, 1:-1] = scale * rng.uniform(-1, 1, (2, N - 1, 2))
    return KState(v[0], v[1])


def test_gamma_of_zero_state(grid20, model):
    z = KState(np.zeros((21, 2)), np.zeros((21, 2)))
    assert gamma_k("k_a", z, model, grid20) == 1.0
    assert gamma_k("k_b", z, model, grid20) == 1.0
    assert spectral_gamma(SpectralState(np.zeros((4, 2)), np.zeros((4, 2))), model, 0.1) == 1.0


def test_gamma_mode_one(grid20, model, baseline_state):
    G = gamma_k("k_a", KState.from_pair(baseline_state), model, grid20)
    assert G == pytest.approx(1 + (0.02**2 * math.pi**2 / 2) / (2 * 2e-4), rel=1e-2)
    assert G == pytest.approx(5.93, abs=0.02)
    with pytest.raises(ContractError):
        gamma_k("s_d", KState.from_pair(baseline_state), model, grid20)


@pytest.mark.parametrize("scale", [1e-3, 1e-2])
def test_k_b_gamma_matches_implicit_definition(scale, rng, model):
    # the defining relation is iterated, which contracts only while h_t |lap q| stays small
    g = GridSpec.from_intervals(20, 1 / 20)
    for _ in range(5):
        s = random_kstate(rng, 20, scale)
        G = gamma_k("k_b", s, model, g)
        assert G == pytest.approx(implicit_gamma_grid(s, model, g), rel=1e-13)


def test_k_b_gamma_on_smooth_state(grid20, model, baseline_state):
    s = KState.from_pair(baseline_state)
    assert gamma_k("k_b", s, model, grid20) == pytest.approx(implicit_gamma_grid(s, model, grid20), rel=1e-13)


@pytest.mark.parametrize("scale", [1e-3, 1e-2])
def test_spectral_gamma_matches_implicit_definition(scale, rng, model):
    M = 8
    for _ in range(5):
        c = scale * rng.uniform(-1, 1, (2, M, 2)) / np.arange(1, M + 1)[:, None] ** 2
        s = SpectralState(c[0], c[1])
        G = spectral_gamma(s, model, 0.1)
        assert G == pytest.approx(implicit_gamma_modal(s, model, 0.1), rel=1e-13)


def test_spectral_gamma_matches_fine_grid(model):
    N, h_t = 400, 1 / 20
    g = GridSpec.from_intervals(N, h_t)
    modal_state = spectral_modal(0.01, 1e-3, 4, h_t)
    start = SpectralState(modal_state.coeffs_prev, modal_state.coeffs_prev)
    grid_state = KState(spectral_synthesize(start, N), spectral_synthesize(modal_state, N))
    G_modal = spectral_gamma(modal_state, model, h_t)
    G_grid = gamma_k("k_b", grid_state, model, g)
    assert abs(G_modal - G_grid) / G_modal <= math.pi**2 * g.h_x**2


def test_synthesize_and_project():
    z = SpectralState(np.zeros((5, 2)), np.zeros((5, 2)))
    assert not np.any(spectral_synthesize(z, 12))
    c = np.zeros((5, 2))
    c[0, 0] = 0.3
    one = SpectralState(c, c)
    x = np.arange(13) / 12
    expected = 0.3 * np.sin(np.pi * x)
    expected[-1] = 0.0
    np.testing.assert_allclose(spectral_synthesize(one, 12)[:, 0], expected, atol=1e-17)
    with pytest.raises(ContractError):
        spectral_synthesize(one, 1)
    with pytest.raises(ContractError):
        spectral_project(np.zeros((6, 2)), 5)


def test_project_round_trip(rng):
    for M, N in ((5, 12), (31, 32), (32, 64)):
        c = rng.uniform(-1, 1, (M, 2))
        s = SpectralState(c, c)
        np.testing.assert_allclose(spectral_project(spectral_synthesize(s, N), M), c, atol=1e-13)


def test_spectral_from_grid(grid20):
    s = initial_modal(0.02, 2e-5, grid20)
    modal_state = spectral_from_grid(s, 8)
    assert modal_state.coeffs_curr[0] == pytest.approx([0.02, 2e-5 / 20], abs=1e-16)
    assert np.max(np.abs(modal_state.coeffs_curr[1:])) <= 1e-16


@pytest.mark.parametrize("scheme", ["k_a", "k_b"])
def test_zero_state_stays_zero(scheme, grid20, model):
    s = KState(np.zeros((21, 2)), np.zeros((21, 2)))
    for _ in range(3):
        s = step_k(scheme, model, s, grid20)
    assert not np.any(s.v_curr) and s.step == 4
    z = SpectralState(np.zeros((4, 2)), np.zeros((4, 2)))
    assert not np.any(step_spectral(model, z, 0.1).coeffs_curr)


def test_step_k_contracts(grid20, model, baseline_state):
    with pytest.raises(ContractError):
        step_k("k_a", model, baseline_state, GridSpec.from_intervals(10, 0.1))
    with pytest.raises(ContractError):
        step_k("k_b", ModelParams(2e-4, tau=1.0), baseline_state, grid20)
    with pytest.raises(ContractError):
        step_spectral(ModelParams(2e-4, nu=1.0), spectral_modal(0.02, 0, 4, 0.1), 0.1)


def test_k_b_energy_and_momentum(grid20, model, baseline_state):
    H, A = [], []

    def observe(s, info):
        H.append(energy("k_b", s, model, grid20).total)
        A.append(angular_momentum("k_b", s, grid20))

    run("k_b", model, baseline_state, grid20, 100, observers=[observe])
    assert H[0] == pytest.approx(6.821328138420e-7, rel=1e-2)
    assert relative_fluctuation(H) <= 1e-10
    assert relative_fluctuation(A) <= 1e-10
    assert A[0] == pytest.approx(2e-7, rel=1e-13)


def test_k_a_momentum_at_larger_velocity(grid20, model):
    s0 = initial_modal(0.02, 2e-4, grid20)
    A = []
    run("k_a", model, s0, grid20, 100, observers=[lambda s, i: A.append(angular_momentum("k_a", s, grid20))])
    assert A[0] == pytest.approx(2e-6, rel=1e-13)
    assert relative_fluctuation(A) <= 1e-10


def test_spectral_linear_frequency(model):
    M, k, h_t, amp = 8, 3, 0.1, 1e-9
    c = np.zeros((M, 2))
    c[k - 1, 0] = amp
    s = SpectralState(c, c)
    out = []
    run("k_spectral", model, s, GridSpec.from_intervals(2 * M, h_t), 1000,
        observers=[lambda st, i: out.append(st.coeffs_curr[k - 1, 0])])
    theta = 2 * math.asin(math.pi * k * math.sqrt(model.alpha) * h_t / 2)
    n = np.arange(1, 1002)
    np.testing.assert_allclose(out, amp * np.cos((n - 0.5) * theta) / math.cos(theta / 2),
                               rtol=0, atol=1e-10 * amp)
    exact = math.pi * k * math.sqrt(model.alpha)
    assert abs(theta / h_t - exact) <= exact * (exact * h_t) ** 2 / 24 * 1.01


def test_spectral_energy_and_momentum(model):
    h_t, M = 1 / 20, 32
    s = spectral_modal(0.02, 2e-5, M, h_t)
    g = GridSpec.from_intervals(2 * M, h_t)
    H, A = [], []

    def observe(st, info):
        H.append(energy("k_spectral", st, model, g).total)
        A.append(angular_momentum("k_spectral", st, g))

    run("k_spectral", model, s, g, 1000, observers=[observe])
    assert relative_fluctuation(H) <= 1e-10
    assert relative_fluctuation(A) <= 1e-10
    assert A[0] == pytest.approx(2e-7, rel=1e-13)
    assert H[0] == pytest.approx(6.8213e-7, rel=1e-2)


@pytest.mark.parametrize("scheme", ["k_a", "k_b"])
def test_damped_momentum_decays_geometrically(scheme, grid20):
    m = ModelParams(2e-4, sigma_eta=0.4)
    s0 = initial_modal(0.02, 2e-4, grid20)
    A = []
    run(scheme, m, s0, grid20, 50, observers=[lambda s, i: A.append(angular_momentum(scheme, s, grid20))])
    x = 0.5 * grid20.h_t * 0.4
    np.testing.assert_allclose(np.array(A[1:]) / np.array(A[:-1]), (1 - x) / (1 + x), rtol=1e-12)


def test_planar_closure_k(grid20, model):
    s0 = initial_modal(0.05, 0.0, grid20)
    for scheme in ("k_a", "k_b"):
        assert not np.any(run(scheme, model, s0, grid20, 500).final.v_curr[:, 1])
    modal_state = spectral_modal(0.05, 0.0, 32, 1 / 20)
    assert not np.any(run("k_spectral", model, modal_state, GridSpec.from_intervals(64, 1 / 20), 500)
                      .final.coeffs_curr[:, 1])
