import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad_vec
from scipy.linalg import expm
from scipy.optimize import minimize

from spectral_pw.core import hilbert_scale, norm
from spectral_pw.errors import CapabilityError, DomainError, SizeError
from spectral_pw.models import CircleSpec, build_circle_model, sphere_index
from spectral_pw.rng import random_ensemble
from spectral_pw.semigroups import (
    ModulusGrid,
    build_group_cache,
    derivative_tuple,
    group_apply,
    hardy_steklov,
    k_functional,
    k_functional_pair,
    mixed_modulus,
    mixed_modulus_refined,
    modulus_inequalities_check,
    modulus_k_equivalence,
    steklov_sign,
    steklov_sign_diagnostic,
)
from spectral_pw.core import SpectralModel

from conftest import circle_index


def cvec(dim, seed):
    return random_ensemble(seed, 1, dim)[0]


# --- groups -------------------------------------------------------------------------

def test_cache_reconstructs_generators(sphere4, sphere4_cache):
    for D, U, mu in zip(sphere4.generators, sphere4_cache.U, sphere4_cache.mu):
        assert np.abs(U @ U.conj().T - np.eye(sphere4.dim)).max() < 1e-10
        assert np.abs((U * (1j * mu)) @ U.conj().T - D).max() < 1e-8


def test_circle_cache_is_diagonal(cache16):
    assert cache16.diagonal == (True,)


def test_group_identity_at_zero(sphere4, sphere4_cache):
    f = cvec(sphere4.dim, 1)
    for j in range(3):
        np.testing.assert_allclose(group_apply(sphere4, sphere4_cache, j, 0.0, f), f, atol=1e-14)


def test_group_matches_expm(sphere4, sphere4_cache):
    f = cvec(sphere4.dim, 2)
    for j, t in itertools.product(range(3), (0.3, -1.1, 2.5)):
        oracle = expm(t * sphere4.generators[j]) @ f
        np.testing.assert_allclose(group_apply(sphere4, sphere4_cache, j, t, f), oracle, atol=1e-12)


def test_circle_mode_two_quarter_turn(circle16, cache16):
    f = circle16.mode(circle_index(circle16, 2))
    out = group_apply(circle16, cache16, 0, np.pi / 2, f)
    assert out[circle_index(circle16, 2)] == pytest.approx(-1.0, abs=1e-15)


def test_sphere_z_rotation_on_harmonics(sphere4, sphere4_cache):
    for row, (n, m) in enumerate(sphere_index(4)):
        out = group_apply(sphere4, sphere4_cache, 2, 0.9, sphere4.mode(row))
        assert out[row] == pytest.approx(np.exp(1j * m * 0.9), abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2), st.floats(-5, 5), st.floats(-5, 5), st.integers(0, 2**32))
def test_group_isometry_and_law(sphere4, sphere4_cache, j, s, t, seed):
    f = cvec(sphere4.dim, seed)
    Ts = lambda x, v: group_apply(sphere4, sphere4_cache, j, x, v)
    assert norm(Ts(t, f)) == pytest.approx(norm(f), rel=1e-12)
    np.testing.assert_allclose(Ts(s, Ts(t, f)), Ts(s + t, f), atol=1e-12 * norm(f))


def test_group_index_error(circle16, cache16):
    with pytest.raises(IndexError):
        group_apply(circle16, cache16, 1, 0.1, circle16.mode(0))


def test_groups_require_generators():
    with pytest.raises(CapabilityError):
        build_group_cache(SpectralModel([0.0, 1.0]))


# --- mixed modulus ---------------------------------------------------------------------

def test_modulus_zero_vector(sphere4, sphere4_cache):
    assert mixed_modulus(sphere4, sphere4_cache, 2, 0.5, np.zeros(sphere4.dim)) == 0.0


def test_modulus_circle_mode_two(circle16, cache16):
    f = circle16.mode(circle_index(circle16, 2))
    assert mixed_modulus(circle16, cache16, 1, np.pi / 4, f) == pytest.approx(np.sqrt(2), abs=1e-14)


@pytest.mark.parametrize("n", [1, 3, 7])
@pytest.mark.parametrize("r", [1, 2, 3])
def test_modulus_circle_closed_form(circle16, cache16, n, r):
    f = circle16.mode(circle_index(circle16, n))
    for s in np.linspace(0.05, np.pi / n, 5):
        expected = (2 * np.sin(n * s / 2)) ** r
        assert mixed_modulus(circle16, cache16, r, s, f) == pytest.approx(expected, rel=1e-12)


def test_modulus_sphere_r1_expm_oracle(sphere4, sphere4_cache):
    f = cvec(sphere4.dim, 3)
    grid = ModulusGrid(9)
    s = 0.7
    oracle = sum(
        max(norm(expm(t * D) @ f - f) for t in grid.taus(s)) for D in sphere4.generators
    )
    assert mixed_modulus(sphere4, sphere4_cache, 1, s, f, grid) == pytest.approx(oracle, rel=1e-12)


def test_modulus_sphere_r2_brute_force(sphere4, sphere4_cache):
    # full tau box, no ordering shortcut
    f = cvec(sphere4.dim, 4)
    grid = ModulusGrid(5)
    s = 0.9
    taus = grid.taus(s)
    I = np.eye(sphere4.dim)
    total = 0.0
    for j1, j2 in itertools.product(range(3), repeat=2):
        D1, D2 = sphere4.generators[j1], sphere4.generators[j2]
        total += max(
            norm((expm(t1 * D1) - I) @ ((expm(t2 * D2) - I) @ f)) for t1 in taus for t2 in taus
        )
    assert mixed_modulus(sphere4, sphere4_cache, 2, s, f, grid) == pytest.approx(total, rel=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 2), st.floats(0.01, 10), st.integers(0, 2**32), st.floats(0.1, 10))
def test_modulus_bound_and_homogeneity(sphere4, sphere4_cache, r, s, seed, c):
    f = cvec(sphere4.dim, seed)
    grid = ModulusGrid(9)
    om = mixed_modulus(sphere4, sphere4_cache, r, s, f, grid)
    assert om <= (2 * 3) ** r * norm(f) * (1 + 1e-12)
    assert mixed_modulus(sphere4, sphere4_cache, r, s, c * f, grid) == pytest.approx(c * om, rel=1e-12)


def test_modulus_order_cap(sphere4, sphere4_cache):
    with pytest.raises(SizeError):
        mixed_modulus(sphere4, sphere4_cache, 3, 0.1, sphere4.mode(1))


def test_modulus_refinement_is_nested_and_increasing(sphere4, sphere4_cache):
    f = cvec(sphere4.dim, 5)
    grid = ModulusGrid(5)
    assert set(np.round(grid.taus(1.0), 12)) <= set(np.round(grid.refined().taus(1.0), 12))
    coarse = mixed_modulus(sphere4, sphere4_cache, 1, 2.0, f, grid)
    value, final = mixed_modulus_refined(sphere4, sphere4_cache, 1, 2.0, f, grid)
    assert value >= coarse
    previous = mixed_modulus(sphere4, sphere4_cache, 1, 2.0, f, ModulusGrid((final.points_per_axis + 1) // 2))
    assert abs(value - previous) <= 1e-3 * value


def test_modulus_bernstein_consistency(circle16, cache16):
    # single modes in PW_n: Omega^r(s) <= (s n)^r ||f||
    for n in range(1, 17):
        f = circle16.mode(circle_index(circle16, n))
        for r in (1, 2):
            for s in (0.01, 0.1, 0.5):
                assert mixed_modulus(circle16, cache16, r, s, f) <= 1.01 * (s * n) ** r


# --- Hardy-Steklov -------------------------------------------------------------------------

def test_steklov_signs():
    assert steklov_sign(1, 1) == -1
    assert all(steklov_sign(2, r) == 1 for r in range(1, 5))
    assert steklov_sign(3, 1) == -1


def test_steklov_sign_diagnostic_reports_disagreement():
    diag = steklov_sign_diagnostic(1, 1)
    assert diag["implemented"] == -1 and diag["literal_exponent"] == 1 and not diag["agree"]
    assert steklov_sign_diagnostic(1, 2)["agree"]


def test_steklov_r1_closed_form(circle16, cache16):
    s = 0.37
    for n in range(-16, 17):
        f = circle16.mode(circle_index(circle16, n))
        out = hardy_steklov(circle16, cache16, 1, s, f, method="multiplier")[circle_index(circle16, n)]
        expected = -1.0 if n == 0 else -(np.exp(1j * n * s) - 1) / (1j * n * s)
        assert out == pytest.approx(expected, abs=1e-14)


@pytest.mark.parametrize("r", [1, 2, 3])
def test_steklov_paths_agree(circle16, cache16, r):
    for seed in range(3):
        f = cvec(circle16.dim, seed)
        for s in np.logspace(-3, 0, 7):
            q = hardy_steklov(circle16, cache16, r, s, f, 32)
            m = hardy_steklov(circle16, cache16, r, s, f, method="multiplier")
            assert norm(q - m) <= 1e-8 * norm(f)


def test_steklov_low_order_enough_for_small_bandwidth_step():
    model = build_circle_model(CircleSpec(4))
    cache = build_group_cache(model)
    f = cvec(model.dim, 9)
    for r in (1, 2, 3):
        q = hardy_steklov(model, cache, r, 0.5, f, 8)
        m = hardy_steklov(model, cache, r, 0.5, f, method="multiplier")
        assert norm(q - m) <= 1e-8 * norm(f)


def test_steklov_small_step_first_mode(circle16, cache16):
    f = circle16.mode(circle_index(circle16, 1))
    assert norm(-hardy_steklov(circle16, cache16, 1, 1e-3, f, 16) - f) <= 1e-3


def test_steklov_sphere_quad_vec_oracle(sphere4, sphere4_cache):
    # H_{j,1}(s) f = -(1/s) int_0^s T_j(t) f dt, applied for j = 3, 2, 1
    f = cvec(sphere4.dim, 6)
    s = 0.4
    g = f
    for D in reversed(sphere4.generators):
        avg, _ = quad_vec(lambda t: expm(t * D) @ g, 0, s, epsabs=1e-13)
        g = -avg / s
    np.testing.assert_allclose(hardy_steklov(sphere4, sphere4_cache, 1, s, f, 16), g, atol=1e-11)


def test_steklov_sphere_sign_small_step(sphere4, sphere4_cache):
    f = cvec(sphere4.dim, 7)
    sigma = steklov_sign(3, 1)
    assert norm(sigma * hardy_steklov(sphere4, sphere4_cache, 1, 1e-3, f) - f) <= 1e-2 * norm(f)
    assert norm(-sigma * hardy_steklov(sphere4, sphere4_cache, 1, 1e-3, f) - f) > norm(f)


def test_steklov_multiplier_needs_diagonal(sphere4, sphere4_cache):
    with pytest.raises(CapabilityError):
        hardy_steklov(sphere4, sphere4_cache, 1, 0.1, sphere4.mode(0), method="multiplier")


def test_steklov_rejects_bad_inputs(circle16, cache16):
    with pytest.raises(DomainError):
        hardy_steklov(circle16, cache16, 1, 0.1, circle16.mode(0), quadrature_order=1)
    with pytest.raises(DomainError):
        hardy_steklov(circle16, cache16, 0, 0.1, circle16.mode(0))


@pytest.mark.parametrize("r", [1, 2, 3])
def test_steklov_error_controlled_by_modulus(circle16, cache16, r):
    sigma = steklov_sign(1, r)
    ratios = []
    for f in np.vstack([np.eye(circle16.dim)[1:], random_ensemble(11, 5, circle16.dim)]):
        for s in np.logspace(-3, 0, 7):
            err = norm(sigma * hardy_steklov(circle16, cache16, r, s, f, 32) - f)
            ratios.append(err / mixed_modulus(circle16, cache16, r, s, f))
    assert 0 < max(ratios) < 1.0
    assert max(ratios) / min(ratios) < 5


# --- K-functional --------------------------------------------------------------------------

def test_k_zero_vector(circle16):
    kb = k_functional(circle16, 0.5, np.zeros(circle16.dim), 1)
    assert (kb.lower, kb.upper) == (0.0, 0.0)


def test_k_single_mode_closed_form(circle16):
    f = circle16.mode(circle_index(circle16, 2))
    for t in (1e-3, 0.1, 1.0, 10.0):
        kb = k_functional(circle16, t, f, 1)
        assert kb.lower == pytest.approx(t * np.sqrt(5) / np.sqrt(1 + 5 * t * t), rel=1e-14)
        # the exact K of a single mode is min(1, t sqrt 5)
        exact = min(1.0, t * np.sqrt(5))
        assert kb.lower <= exact * (1 + 1e-14) and exact <= kb.upper * (1 + 1e-14)


def test_k_large_t_tends_to_norm(circle16):
    f = cvec(circle16.dim, 1)
    assert k_functional(circle16, 1e6, f, 2).upper == pytest.approx(norm(f), rel=1e-6)


@settings(max_examples=40, deadline=None)
@given(st.floats(1e-4, 1e4), st.floats(0.5, 3), st.integers(0, 2**32))
def test_k_bracket_invariant(t, r, seed):
    model = build_circle_model(CircleSpec(8))
    kb = k_functional(model, t, cvec(model.dim, seed), r)
    assert 0 <= kb.lower <= kb.upper <= np.sqrt(2) * kb.lower + 1e-12


def test_k_bracket_contains_minimizer():
    model = build_circle_model(CircleSpec(2))
    f = np.array([0.3, -1.0, 0.5, 2.0, -0.7])
    w = hilbert_scale(model, 2)
    for t in (0.05, 0.3, 2.0):
        obj = lambda g: norm(f - g) + t * norm(w * g)
        best = min(
            minimize(obj, x0, method="Nelder-Mead", options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 40000}).fun
            for x0 in (f, 0 * f, 0.5 * f)
        )
        kb = k_functional(model, t, f, 2)
        assert kb.lower <= best * (1 + 1e-9)
        assert best <= kb.upper * (1 + 1e-9)


def test_k_pair_reduces_to_default(circle16):
    f = cvec(circle16.dim, 2)
    a, b = k_functional_pair(circle16, 0.3, f, 0, 2), k_functional(circle16, 0.3, f, 2)
    assert (a.lower, a.upper) == (b.lower, b.upper)


def test_k_rejects_nonpositive_t(circle16):
    with pytest.raises(DomainError):
        k_functional(circle16, 0.0, circle16.mode(0), 1)


# --- equivalence and inequalities ------------------------------------------------------

def test_modulus_k_degenerate(circle16, cache16):
    rep = modulus_k_equivalence(circle16, cache16, 1, np.zeros(circle16.dim), [0.1, 1])
    assert rep.degenerate and rep.ok


def test_modulus_k_first_mode_ratios(circle16, cache16):
    f = circle16.mode(circle_index(circle16, 1))
    rep = modulus_k_equivalence(circle16, cache16, 1, f, np.logspace(-2, 0, 9))
    for s, om, kl, ku, rhs in rep.rows:
        assert 0.1 <= kl / om <= 10 and 0.1 <= ku / om <= 10
    assert rep.ok


def test_modulus_k_scale_invariant(circle16, cache16):
    f = cvec(circle16.dim, 3)
    s = np.logspace(-2, 0, 5)
    a = modulus_k_equivalence(circle16, cache16, 2, f, s)
    b = modulus_k_equivalence(circle16, cache16, 2, 2 * f, s)
    assert b.c_hat == pytest.approx(a.c_hat, rel=1e-12)
    assert b.C_hat == pytest.approx(a.C_hat, rel=1e-12)


def test_dilation_trivial_case(circle16, cache16):
    rep = modulus_inequalities_check(circle16, cache16, cvec(circle16.dim, 4), 2, 0, 1.0, 0.3)
    assert rep.dilation_holds and rep.dilated == rep.lhs


def test_derivative_bound_circle_mode_two(circle16, cache16):
    f = circle16.mode(circle_index(circle16, 2))
    rep = modulus_inequalities_check(circle16, cache16, f, 1, 1, 2.0, 0.1)
    assert rep.lhs == pytest.approx(2 * np.sin(0.1))
    assert rep.derivative_rhs == pytest.approx(0.2)
    assert rep.derivative_holds and rep.dilation_holds


def test_inequalities_random_sphere(sphere4, sphere4_cache):
    for seed in range(3):
        rep = modulus_inequalities_check(sphere4, sphere4_cache, cvec(sphere4.dim, seed), 2, 1, 0.5, 0.2, ModulusGrid(9))
        assert rep.derivative_holds and rep.dilation_holds
        assert math.isfinite(rep.derivative_constant)


def test_derivative_tuple_order(sphere4):
    f = cvec(sphere4.dim, 5)
    D1, D2, _ = sphere4.generators
    np.testing.assert_allclose(derivative_tuple(sphere4, (0, 1), f), D1 @ (D2 @ f))
