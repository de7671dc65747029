import math

import numpy as np
import pytest
from scipy.integrate import quad

from spectral_pw.besov import (
    BesovParams,
    applicable_methods,
    besov_approx,
    besov_derivative,
    besov_frame,
    besov_kfun,
    besov_lp,
    besov_modulus,
    besov_zygmund,
    compute_norm,
    equivalence_report,
    log_grid,
)
from spectral_pw.core import norm
from spectral_pw.errors import CoverageError, DomainError
from spectral_pw.frames import build_frame_system, calibrate_constant, dual_frame
from spectral_pw.partition import build_partition
from spectral_pw.rng import random_ensemble
from spectral_pw.semigroups import ModulusGrid

from conftest import circle_index


def chord(n, r):
    """Exact ``Omega^r(s, e_n)`` on the circle: ``(2 sin(n s / 2))^r``, saturating at ``2^r``."""
    return lambda s: (2 * math.sin(min(n * s, math.pi) / 2)) ** r


def log_integral(fun):
    """``int_{1e-4}^{1e2} fun(s) ds/s`` by adaptive quadrature in ``log s``."""
    a, b = math.log(1e-4), math.log(1e2)
    val, _ = quad(lambda u: fun(math.exp(u)), a, b, limit=400, points=[math.log(0.5), math.log(math.pi)])
    return val


@pytest.fixture(scope="module")
def pou16():
    return build_partition(4)


@pytest.fixture(scope="module")
def system8(circle8):
    C = calibrate_constant(circle8, 2.0, [1.0, 0.5, 0.25])
    return dual_frame(build_frame_system(circle8, build_partition(3), 0.1, 2.0, C))


# --- parameters -----------------------------------------------------------------

@pytest.mark.parametrize("kw", [{"alpha": 0.0}, {"alpha": 1.0, "q": 0.5}, {"alpha": 2.0, "r": 2}])
def test_params_validation(kw):
    with pytest.raises(DomainError):
        BesovParams(**kw)


def test_log_grid_endpoints():
    g = log_grid()
    assert g.size == 200 and g[0] == pytest.approx(1e-4) and g[-1] == pytest.approx(1e2)


# --- every norm -----------------------------------------------------------------

def test_zero_vector_has_zero_norm(circle16, cache16, pou16):
    p = BesovParams(0.5, 2.0, 1)
    z = np.zeros(circle16.dim)
    for meth in applicable_methods(circle16, p, False):
        assert compute_norm(meth, circle16, p, z, cache16, pou16).value == 0.0


def test_homogeneity(circle16, cache16, pou16):
    p = BesovParams(0.5, 2.0, 1)
    f = random_ensemble(4, 1, circle16.dim)[0]
    for meth in applicable_methods(circle16, p, False):
        one = compute_norm(meth, circle16, p, f, cache16, pou16).value
        three = compute_norm(meth, circle16, p, 3 * f, cache16, pou16).value
        assert three == pytest.approx(3 * one, rel=1e-12), meth


def test_modulus_norm_single_mode(circle16, cache16):
    rep = besov_modulus(circle16, cache16, BesovParams(0.5, 2.0, 1), circle16.mode(circle_index(circle16, 1)))
    om = chord(1, 1)
    integral = log_integral(lambda s: (s**-0.5 * om(s)) ** 2)
    # grid sup is a lower bound of the modulus; the certified tails sit on top of the truncated integral
    assert 1 + math.sqrt(integral) <= rep.value <= 1 + math.sqrt(integral + rep.meta["tail"]) + 1e-6
    assert rep.value == pytest.approx(1 + math.sqrt(integral + rep.meta["tail"]), rel=1e-3)


def test_modulus_norm_grows_under_refinement(circle16, cache16):
    p = BesovParams(0.5, 2.0, 1)
    f = random_ensemble(6, 1, circle16.dim)[0]
    coarse = besov_modulus(circle16, cache16, p, f, ModulusGrid(17)).value
    fine = besov_modulus(circle16, cache16, p, f, ModulusGrid(33)).value
    assert fine >= coarse - 1e-12


def test_kfun_bracket(circle16):
    for f in random_ensemble(7, 5, circle16.dim):
        rep = besov_kfun(circle16, BesovParams(0.5, 2.0, 1), f)
        assert rep.meta["lower"] <= rep.value <= rep.meta["upper"]
        assert rep.meta["upper"] / rep.meta["lower"] <= math.sqrt(2) + 1e-10


def test_kfun_reiteration_pair(circle16):
    f = random_ensemble(8, 1, circle16.dim)[0]
    rep = besov_kfun(circle16, BesovParams(1.5, 2.0), f, pair=(1, 2))
    assert rep.meta["theta"] == pytest.approx(0.5)
    with pytest.raises(DomainError):
        besov_kfun(circle16, BesovParams(2.5, 2.0), f, pair=(1, 2))


def test_approx_band_limited_equals_norm(circle16):
    f = circle16.mode(circle_index(circle16, 1)) * (2 - 1j)
    assert besov_approx(circle16, BesovParams(0.7, 2.0), f).value == pytest.approx(norm(f), rel=1e-15)


@pytest.mark.parametrize("alpha,q", [(0.5, 2.0), (1.3, 1.0), (0.25, 3.0)])
def test_approx_mode_three(circle16, alpha, q):
    f = circle16.mode(circle_index(circle16, 3))
    expected = 1 + (1 + 2 ** (alpha * q)) ** (1 / q)
    assert besov_approx(circle16, BesovParams(alpha, q), f).value == pytest.approx(expected, rel=1e-14)


def test_approx_stable_beyond_coverage(circle16):
    f = random_ensemble(9, 1, circle16.dim)[0]
    p = BesovParams(0.5, 2.0)
    assert besov_approx(circle16, p, f).value == besov_approx(circle16, p, f, J=7).value
    with pytest.raises(CoverageError):
        besov_approx(circle16, p, f, J=3)


def test_lp_constant_mode(circle16, pou16):
    assert besov_lp(circle16, pou16, BesovParams(0.5), circle16.mode(0)).value == pytest.approx(1.0)


def test_lp_mode_three(circle16, pou16):
    alpha = 0.5
    rep = besov_lp(circle16, pou16, BesovParams(alpha), circle16.mode(circle_index(circle16, 3)))
    expected = math.hypot(2**alpha * pou16.F(1, 3.0), 4**alpha * pou16.F(2, 3.0))
    assert rep.value == pytest.approx(expected, rel=1e-14)


def test_lp_coverage(circle16):
    with pytest.raises(CoverageError):
        besov_lp(circle16, build_partition(3), BesovParams(0.5), circle16.mode(0))


def test_frame_versus_lp(circle8, system8):
    pou = build_partition(3)
    p = BesovParams(0.5)
    lo = math.sqrt(1 - system8.delta)
    for f in random_ensemble(10, 10, circle8.dim):
        ratio = besov_frame(system8, p, f).value / besov_lp(circle8, pou, p, f).value
        assert lo - 1e-9 <= ratio <= 1 + 1e-9


def test_derivative_below_one_is_modulus(circle16, cache16):
    f = random_ensemble(11, 1, circle16.dim)[0]
    a = besov_derivative(circle16, cache16, 0.5, 2.0, f).value
    b = besov_modulus(circle16, cache16, BesovParams(0.5, 2.0, 1), f).value
    assert a == b


def test_derivative_three_halves(circle16, cache16):
    rep = besov_derivative(circle16, cache16, 1.5, 2.0, circle16.mode(circle_index(circle16, 2)))
    om = chord(2, 1)
    integral = log_integral(lambda s: (s**-0.5 * 2 * om(s)) ** 2)
    expected = math.sqrt(5) + math.sqrt(integral + rep.meta["tail"])
    assert rep.value == pytest.approx(expected, rel=1e-3)
    assert rep.value <= expected + 1e-9


def test_derivative_rejects_integer(circle16, cache16):
    with pytest.raises(DomainError, match="zygmund"):
        besov_derivative(circle16, cache16, 1.0, 2.0, circle16.mode(0))


def test_zygmund_first_order(circle16, cache16):
    rep = besov_zygmund(circle16, cache16, 1, 2.0, circle16.mode(circle_index(circle16, 1)))
    om = chord(1, 2)
    integral = log_integral(lambda s: (om(s) / s) ** 2)
    expected = 1 + math.sqrt(integral + rep.meta["tail"])
    assert rep.value == pytest.approx(expected, rel=1e-3)
    assert rep.value <= expected + 1e-9


def test_methods_by_capability(circle16):
    assert applicable_methods(circle16, BesovParams(1.0, 2.0, 2), True) == [
        "modulus", "kfun", "approx", "lp", "frame", "zygmund",
    ]
    assert "derivative" in applicable_methods(circle16, BesovParams(0.5, 2.0, 1), False)


def test_equivalence_report(circle8, cache8, system8):
    vecs = np.vstack([random_ensemble(12, 4, circle8.dim), np.eye(circle8.dim)[[1, 6, 15]]])
    rep = equivalence_report(
        circle8, BesovParams(0.5, 2.0, 1), vecs, cache=cache8, pou=build_partition(3), system=system8
    )
    assert rep.passed
    assert rep.scale_error <= 1e-12
    assert rep.values.shape == (7, len(rep.methods)) and "frame" in rep.methods
    assert all(st[2] < 100 for st in rep.pair_stats.values())
