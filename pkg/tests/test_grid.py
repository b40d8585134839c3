import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nlstring.core import ContractError
from nlstring.grid import (TEMPORAL_KINDS, GridSpec, IndexRange, diff_backward, diff_forward,
                           first_index, inner_product, norm, temporal_combine, tilde)


def loop_backward(f, h):
    return np.array([(f[i] - f[i - 1]) / h for i in range(1, len(f))])


def test_grid_spacing_and_courant():
    g = GridSpec.from_intervals(20, 1 / 20)
    assert g.h_x == 1 / 20
    assert g.lam == pytest.approx(1.0, abs=1e-15)
    assert g.x[0] == 0 and g.x[-1] == pytest.approx(1.0)
    assert g.mid == 10


@pytest.mark.parametrize("N", [0, 1])
def test_grid_rejects_degenerate(N):
    with pytest.raises(ContractError):
        GridSpec.from_intervals(N, 0.1)


def test_grid_rejects_inconsistent_courant():
    with pytest.raises(ContractError):
        GridSpec(N=10, h_x=0.1, h_t=0.05, lam=0.6)


def test_index_ranges():
    assert (IndexRange.nodes(5).first, IndexRange.nodes(5).last) == (0, 5)
    assert (IndexRange.strains(5).first, IndexRange.strains(5).last) == (1, 5)
    assert (IndexRange.interior(5).first, IndexRange.interior(5).last) == (1, 4)
    with pytest.raises(ContractError):
        IndexRange(3, 2)
    assert first_index(6, 5) == 0 and first_index(5, 5) == 1
    with pytest.raises(ContractError):
        first_index(9, 5)


def test_diff_backward_constant_and_ramp():
    g = GridSpec.from_intervals(10, 0.1)
    assert np.all(diff_backward(np.full(11, 3.0), g) == 0)
    np.testing.assert_allclose(diff_backward(g.x, g), 1.0, rtol=1e-13)


def test_diff_backward_against_loop(rng):
    g = GridSpec.from_intervals(10, 0.1)
    f = rng.uniform(-1, 1, 11)
    np.testing.assert_allclose(diff_backward(f, g), loop_backward(f, g.h_x), rtol=0, atol=1e-15 / g.h_x)
    planar = rng.uniform(-1, 1, (11, 2))
    out = diff_backward(planar, g)
    assert out.shape == (10, 2)
    np.testing.assert_allclose(out[:, 1], loop_backward(planar[:, 1], g.h_x), atol=1e-13)


def test_diff_shapes_enforced():
    g = GridSpec.from_intervals(10, 0.1)
    with pytest.raises(ContractError):
        diff_backward(np.zeros(10), g)
    with pytest.raises(ContractError):
        diff_forward(np.zeros(11), g)
    with pytest.raises(ContractError):
        diff_backward(np.zeros((11, 3)), g)


def test_diff_forward_against_loop_and_zero(rng):
    g = GridSpec.from_intervals(10, 0.1)
    assert np.all(diff_forward(np.zeros(12), g) == 0)
    f = rng.uniform(-1, 1, 12)
    np.testing.assert_allclose(diff_forward(f, g), loop_backward(f, g.h_x), atol=1e-13)


@pytest.mark.parametrize("N", [20, 40, 80])
def test_second_difference_of_sine(N):
    g = GridSpec.from_intervals(N, 0.5 / N)
    s = np.sin(np.pi * g.x)
    s[-1] = 0.0
    strain = np.concatenate([diff_backward(s, g), [0.0]])  # values on [1..N+1]
    lap = diff_forward(np.concatenate([[0.0], strain]), g)[1:N]
    eig = -(2 / g.h_x) ** 2 * math.sin(math.pi * g.h_x / 2) ** 2
    np.testing.assert_allclose(lap, eig * s[1:N], atol=1e-10)
    assert abs(eig + math.pi**2) < 1.1 * math.pi**4 * g.h_x**2 / 12


def test_temporal_basic_cases(rng):
    f = rng.uniform(-1, 1, (7, 2))
    np.testing.assert_array_equal(temporal_combine("mu_minus", (f, f), 0.1), f)
    h = 0.1
    lin = [np.full(5, 0.0), np.full(5, h), np.full(5, 2 * h)]
    np.testing.assert_allclose(temporal_combine("dd", lin, h), 0.0, atol=1e-12)
    with pytest.raises(ContractError):
        temporal_combine("dd", lin[:2], h)
    with pytest.raises(ContractError):
        temporal_combine("nope", lin, h)
    assert set(TEMPORAL_KINDS) == {"d_plus", "d_minus", "d_center", "dd", "mu_plus", "mu_minus",
                                   "mu_center", "mu_pm"}


def test_average_plus_half_difference_is_identity(rng):
    h = 0.037
    a, b = rng.uniform(-1, 1, (2, 9))
    lhs = temporal_combine("mu_minus", (a, b), h) + 0.5 * h * temporal_combine("d_minus", (a, b), h)
    np.testing.assert_allclose(lhs, b, rtol=0, atol=1e-15)


def test_inner_product_examples(rng):
    g = GridSpec.from_intervals(16, 1 / 16)
    ones = np.ones(17)
    assert inner_product(ones, ones, g, IndexRange.strains(16)) == pytest.approx(1.0, abs=1e-15)
    s = np.sin(np.pi * g.x)
    assert inner_product(s, s, g, IndexRange.interior(16)) == pytest.approx(0.5, abs=1e-15)
    for _ in range(1000):
        f, h = rng.uniform(-1, 1, (2, 17, 2))
        r = IndexRange.nodes(16)
        assert abs(inner_product(f, h, g, r)) <= norm(f, g, r) * norm(h, g, r) * (1 + 1e-14)


def test_inner_product_range_checked():
    g = GridSpec.from_intervals(8, 1 / 8)
    with pytest.raises(ContractError):
        inner_product(np.zeros(8), np.zeros(8), g, IndexRange.nodes(8))
    with pytest.raises(ContractError):
        inner_product(np.zeros(9), np.zeros((9, 2)), g, IndexRange.nodes(8))


def test_tilde_definition(rng):
    np.testing.assert_array_equal(tilde(np.array([1.0, 0.0])), [0.0, 1.0])
    f, h = rng.uniform(-1, 1, (2, 11, 2))
    np.testing.assert_allclose(np.sum(tilde(f) * f, axis=1), 0.0, atol=1e-16)
    np.testing.assert_allclose(np.sum(tilde(f) * h, axis=1), -np.sum(f * tilde(h), axis=1), atol=1e-16)
    with pytest.raises(ContractError):
        tilde(np.zeros(3))


def test_difference_bound(rng):
    g = GridSpec.from_intervals(12, 1 / 12)
    for _ in range(200):
        f = rng.uniform(-1, 1, (13, 2))
        lhs = norm(diff_backward(f, g), g, IndexRange.strains(12))
        assert lhs <= 2 / g.h_x * norm(f, g, IndexRange.nodes(12)) * (1 + 1e-14)


finite = st.floats(-1, 1, allow_nan=False)


@settings(max_examples=200, deadline=None)
@given(st.lists(finite, min_size=8, max_size=8), st.lists(finite, min_size=8, max_size=8),
       st.integers(0, 4), st.integers(0, 5))
def test_summation_by_parts_property(fv, gv, r, extent):
    g = GridSpec.from_intervals(6, 1 / 6)
    s = min(r + extent, 5)
    f = np.array(fv)[:7]               # nodes 0..6
    gg = np.array(gv)                  # nodes 0..7
    dg = diff_forward(gg, g)           # on [0..6]
    df = diff_backward(f, g)           # on [1..6]
    lhs = inner_product(f, dg, g, IndexRange(r, s))
    inner = inner_product(df, gg[1:7], g, IndexRange(r + 1, s)) if s > r else 0.0
    rhs = -inner + f[s] * gg[s + 1] - f[r] * gg[r]
    assert lhs == pytest.approx(rhs, abs=1e-13)
