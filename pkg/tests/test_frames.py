import numpy as np
import pytest

from spectral_pw.core import norm, pw_project
from spectral_pw.errors import DomainError, PreconditionError, SpectralError
from spectral_pw.frames import (
    analysis_bounds,
    build_frame_system,
    build_sampling_set,
    calibrate_constant,
    dual_frame,
    effective_band,
    frame_from_dict,
    frame_to_dict,
    poincare_calibrate,
    pw_frame,
    reconstruct,
    required_rho,
    sampling_set_from_model,
    sampling_set_from_nodes,
)
from spectral_pw.models import GraphSpec, build_graph_model, cycle_laplacian
from spectral_pw.partition import build_partition
from spectral_pw.rng import random_ensemble


@pytest.fixture(scope="module")
def system8(circle8):
    C = calibrate_constant(circle8, 2.0, [1.0, 0.5, 0.25])
    return dual_frame(build_frame_system(circle8, build_partition(3), 0.1, 2.0, C))


# --- sampling sets ------------------------------------------------------------------

def test_circle_grid_sixteen_nodes(circle8):
    sset = build_sampling_set(circle8, np.pi / 8)
    assert sset.size == 16
    np.testing.assert_allclose(sset.weights, np.pi / 8, rtol=1e-15)


def test_sample_parseval_pw4(circle8):
    sset = build_sampling_set(circle8, np.pi / 8)
    for f in random_ensemble(5, 10, circle8.dim):
        g = pw_project(circle8, 4, f)
        assert norm(sset.analysis(g)) == pytest.approx(norm(g), rel=1e-12)


def test_graph_vertex_sampling_is_parseval():
    model = build_graph_model(GraphSpec(cycle_laplacian(6)))
    sset = build_sampling_set(model, 0.3)
    assert sset.rho == 1.0 and sset.size == 6
    f = random_ensemble(0, 1, 6)[0]
    assert norm(sset.analysis(f)) == pytest.approx(norm(f), rel=1e-12)


def test_rho_must_be_positive(circle8):
    with pytest.raises(DomainError):
        build_sampling_set(circle8, 0.0)


# --- frame bounds ---------------------------------------------------------------

def test_circle_pw4_sixteen_nodes_is_tight(circle8):
    A, B = pw_frame(circle8, build_sampling_set(circle8, np.pi / 8), 4.0, 0.1).bounds
    assert A == pytest.approx(1.0, abs=1e-12) and B == pytest.approx(1.0, abs=1e-12)


def test_sphere_product_grid_bounds(sphere2):
    frame = pw_frame(sphere2, sampling_set_from_model(sphere2), np.sqrt(6), 0.1)
    A, B = frame.bounds
    assert 0.9 <= A <= B <= 1.0 + 1e-12


def test_single_node_is_not_a_frame(circle8):
    frame = pw_frame(circle8, sampling_set_from_nodes(circle8, [0.3], [1.0]), 4.0, 0.1)
    assert frame.bounds[0] == 0.0 and not frame.is_frame
    assert any("not a frame" in w for w in frame.warnings)


def test_lower_bound_grows_with_density(circle8):
    lows = [pw_frame(circle8, build_sampling_set(circle8, r), 8.0, 0.1).bounds[0] for r in (1.0, 0.5, 0.25, 0.1)]
    assert np.all(np.diff(lows) >= -1e-12) and lows[0] == 0.0 and lows[-1] > 0.99


def test_coarse_grid_warning(circle8):
    frame = pw_frame(circle8, build_sampling_set(circle8, 1.0), 4.0, 0.1, C=1.0, m=2.0)
    assert frame.rho_required == pytest.approx(required_rho(1.0, 4.0, 0.1, 2.0))
    assert any("exceeds the required" in w for w in frame.warnings)


def test_delta_domain(circle8):
    with pytest.raises(DomainError):
        pw_frame(circle8, build_sampling_set(circle8, 0.5), 4.0, 1.0)


def test_required_rho_formula():
    rho = required_rho(2.0, 3.0, 0.1, 1.5)
    assert rho ** 3 * 2.0 * 3.0**3 == pytest.approx(0.1)


def test_effective_band(circle8):
    assert effective_band(circle8, 4.5) == 4.0
    assert effective_band(circle8, 0.5) == 0.0


def test_iterative_bounds_match_svd():
    rng = np.random.default_rng(2)
    atoms = rng.standard_normal((30, 6)) + 1j * rng.standard_normal((30, 6))
    sv = np.linalg.svd(atoms, compute_uv=False) ** 2
    A, B = analysis_bounds(atoms)
    assert A == pytest.approx(sv.min(), rel=1e-12) and B == pytest.approx(sv.max(), rel=1e-12)


# --- Poincare calibration ----------------------------------------------------

def test_poincare_exact_sampling(circle8):
    # 17 nodes integrate |f|^2 exactly for degree 8, so C_hat <= 1 and c_hat = 1
    rep = poincare_calibrate(circle8, build_sampling_set(circle8, 2 * np.pi / 17), 2.0, 20, seed=1)
    assert not rep.failed
    assert rep.c_hat == pytest.approx(1.0, rel=1e-12)
    assert rep.C_hat <= 1.0 + 1e-12


def test_poincare_aliasing_finite_constant(circle8):
    rep = poincare_calibrate(circle8, build_sampling_set(circle8, 2 * np.pi / 8), 2.0, 20, seed=1)
    assert not rep.failed and np.isfinite(rep.C_hat)


def test_poincare_requires_trials(circle8):
    with pytest.raises(DomainError):
        poincare_calibrate(circle8, build_sampling_set(circle8, 0.5), 2.0, 9)


def test_poincare_smoothness_threshold(sphere2):
    with pytest.raises(PreconditionError):
        poincare_calibrate(sphere2, sampling_set_from_model(sphere2), 1.5, 20)


# --- frame system and dual ----------------------------------------------------

def test_system_bounds(system8):
    A, B = system8.bounds
    assert 1 - system8.delta <= A <= B <= 1 + 1e-10
    assert system8.meta["levels"][0]["nodes"] >= 1


def test_atoms_live_in_their_band(circle8, system8):
    lam = circle8.sqrt_eigenvalues
    for (j, _), atom in zip(system8.labels, system8.atoms):
        lo, hi = system8.bands[j]
        outside = (lam <= lo) | (lam >= hi) if j > 0 else lam >= hi
        assert np.all(atom[outside] == 0)


def test_tight_dual_matches_frame(system8):
    np.testing.assert_allclose(system8.dual, system8.atoms, atol=1e-8)


def test_reconstruction_both_ways(system8):
    for f in random_ensemble(8, 5, system8.dim):
        np.testing.assert_allclose(reconstruct(system8, system8.analysis(f)), f, atol=1e-8)
        via_dual = system8.dual_analysis(f) @ system8.atoms
        np.testing.assert_allclose(via_dual, f, atol=1e-8)


def test_reconstruct_from_mapping(system8):
    f = random_ensemble(9, 1, system8.dim)[0]
    coeffs = dict(zip(system8.labels, system8.analysis(f)))
    np.testing.assert_allclose(reconstruct(system8, coeffs), f, atol=1e-8)


def test_zero_coefficients_give_zero(system8):
    assert norm(reconstruct(system8, np.zeros(system8.size))) == 0.0


def test_reconstruction_is_stable(system8):
    f = random_ensemble(10, 1, system8.dim)[0]
    e = 1e-3 * random_ensemble(11, 1, system8.size)[0]
    err = norm(reconstruct(system8, system8.analysis(f) + e) - f)
    assert err <= norm(e) / np.sqrt(system8.bounds[0]) * (1 + 1e-8)


def test_dual_required_for_reconstruct(circle8):
    system = build_frame_system(circle8, build_partition(3), 0.1, 2.0, 1.0)
    with pytest.raises(SpectralError):
        reconstruct(system, np.zeros(system.size))


def test_serialization_round_trip(system8):
    back = frame_from_dict(frame_to_dict(system8))
    np.testing.assert_array_equal(back.atoms, system8.atoms)
    assert back.labels == system8.labels and back.bands == system8.bands
    assert back.bounds == tuple(system8.bounds)
