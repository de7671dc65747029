"""
Experiment suites: each builds its models, runs one family of checks and
returns a table plus a pass flag. The CLI writes these tables to disk.

Every suite is deterministic for a fixed config and seed; rows never carry
timings.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import models as M
from .besov import BesovParams, equivalence_report
from .config import TOL
from .core import (
    best_approx_error,
    bernstein_verify,
    hilbert_scale,
    laplace_power_norm,
    load_model,
    norm,
    pw_project,
    riesz_boas_apply,
)
from .errors import SpectralError
from .frames import (
    build_frame_system,
    build_sampling_set,
    calibrate_constant,
    dual_frame,
    effective_band,
    poincare_calibrate,
    pw_frame,
    required_rho,
    sampling_set_from_nodes,
)
from .partition import build_partition, lp_decompose, required_levels
from .rng import random_ensemble
from .semigroups import (
    ModulusGrid,
    build_group_cache,
    hardy_steklov,
    mixed_modulus,
    modulus_k_equivalence,
    steklov_sign,
)

SUITES = (
    "bernstein",
    "jackson",
    "riesz_boas",
    "steklov",
    "modulus_k",
    "frames",
    "besov_compare",
    "poincare",
    "partition",
    "sphere_algebra",
)


class ConfigError(SpectralError):
    """Malformed experiment configuration."""


@dataclass
class SuiteResult:
    suite: str
    header: list
    rows: list
    passed: bool
    worst_ratio: float
    tolerances: dict
    checks: dict = field(default_factory=dict)  # name -> bool
    plot: dict | None = None
    runtime_ms: float = 0.0

    def summary(self) -> dict:
        return {
            "suite": self.suite,
            "pass": bool(self.passed),
            "worst_ratio": float(self.worst_ratio),
            "tolerances": self.tolerances,
            "checks": {k: bool(v) for k, v in self.checks.items()},
            "runtime_ms": round(self.runtime_ms, 3),
        }


# --- config ----------------------------------------------------------------

def build_model(spec: dict):
    """Model from a config entry such as ``{"kind": "circle", "N": 16}``."""
    if not isinstance(spec, dict):
        raise ConfigError(f"model entry must be an object, got {spec!r}")
    if "file" in spec:
        return load_model(spec["file"])
    kind = spec.get("kind")
    try:
        if kind == "circle":
            return M.build_circle_model(M.CircleSpec(int(spec["N"]), spec.get("nodes")))
        if kind == "sphere":
            grid = tuple(spec["grid"]) if "grid" in spec else None
            return M.build_sphere_model(M.SphereSpec(int(spec["N"]), grid))
        if kind == "graph":
            if "laplacian" in spec:
                L = np.asarray(spec["laplacian"], dtype=float)
            elif "laplacian_csv" in spec:
                L = np.loadtxt(spec["laplacian_csv"], delimiter=",", ndmin=2)
            elif "path" in spec:
                L = M.path_laplacian(int(spec["path"]))
            elif "cycle" in spec:
                L = M.cycle_laplacian(int(spec["cycle"]))
            else:
                raise ConfigError("graph model needs laplacian, laplacian_csv, path or cycle")
            return M.build_graph_model(M.GraphSpec(L))
    except KeyError as exc:
        raise ConfigError(f"model entry {spec!r} is missing {exc}") from None
    raise ConfigError(f"unknown model kind {kind!r}")


def model_label(model) -> str:
    meta = model.meta or {}
    if "N" in meta:
        return f"{model.kind}(N={meta['N']})"
    return f"{model.kind}(dim={model.dim})"


def _models(config: dict, default: list) -> list:
    if "models" in config:
        specs = config["models"]
    elif "model" in config:
        specs = [config["model"]]
    else:
        specs = default
    return [build_model(s) for s in specs]


def _param(config: dict, key: str, default):
    return config.get("params", {}).get(key, default)


CIRCLE16 = {"kind": "circle", "N": 16}
SPHERE4 = {"kind": "sphere", "N": 4}


# --- suites ----------------------------------------------------------------

def suite_bernstein(config, seed):
    """``||L^{s/2} f|| <= omega^s ||f||`` on random band-limited vectors."""
    trials = int(_param(config, "trials", 100))
    s_list = [float(s) for s in _param(config, "s", [0.5, 1.0, 2.0])]
    fracs = _param(config, "omega_fractions", [0.5, 1.0])
    rows, worst, extremal_ok = [], 0.0, True
    for model in _models(config, [CIRCLE16, SPHERE4]):
        label = model_label(model)
        top = float(model.sqrt_eigenvalues[-1])
        ens = random_ensemble(seed, trials, model.dim)
        for frac in fracs:
            omega = frac * top
            for i, z in enumerate(ens):
                rep = bernstein_verify(model, omega, pw_project(model, omega, z), s_list)
                for s, ratio in rep.ratios.items():
                    rows.append((label, omega, i, s, ratio))
                    worst = max(worst, ratio)
            # a mode sitting at the band edge is extremal: ratio exactly 1
            w_eff = effective_band(model, omega)
            k = int(np.flatnonzero(model.sqrt_eigenvalues <= w_eff)[-1])
            if w_eff > 0:
                rep = bernstein_verify(model, w_eff, model.mode(k), s_list)
                extremal_ok &= rep.extremal and all(abs(v - 1) <= 1e-12 for v in rep.ratios.values())
    tol = 1 + 1e-12
    checks = {"ratio_bound": worst <= tol, "extremal_modes": extremal_ok}
    plot = _scatter_plot(rows, x=3, y=4, title="Bernstein ratios", xlabel="s", ylabel="ratio")
    return SuiteResult(
        "bernstein", ["model", "omega", "trial", "s", "ratio"], rows, all(checks.values()), worst,
        {"ratio": tol}, checks, plot,
    )


def suite_jackson(config, seed):
    """``E(f, omega) <= omega^{-r} ||L^{r/2} f||`` on random vectors."""
    trials = int(_param(config, "trials", 100))
    r_list = [float(r) for r in _param(config, "r", [1, 2])]
    fracs = _param(config, "omega_fractions", [0.25, 0.5])
    rows, worst = [], 0.0
    for model in _models(config, [CIRCLE16, SPHERE4]):
        label = model_label(model)
        top = float(model.sqrt_eigenvalues[-1])
        ens = random_ensemble(seed, trials, model.dim)
        for frac in fracs:
            omega = frac * top
            for i, f in enumerate(ens):
                err = best_approx_error(model, omega, f)
                for r in r_list:
                    ratio = err / (omega ** (-r) * laplace_power_norm(model, r, f))
                    rows.append((label, omega, i, r, err, ratio))
                    worst = max(worst, ratio)
    tol = 1 + 1e-12
    checks = {"ratio_bound": worst <= tol}
    plot = _scatter_plot(rows, x=3, y=5, title="Jackson ratios", xlabel="r", ylabel="ratio")
    return SuiteResult(
        "jackson", ["model", "omega", "trial", "r", "best_approx_error", "ratio"], rows, checks["ratio_bound"],
        worst, {"ratio": tol}, checks, plot,
    )


def suite_riesz_boas(config, seed):
    """Truncated Riesz-Boas error against the exact ``i sqrt(L) f`` as ``K`` doubles."""
    model = _models(config, [CIRCLE16])[0]
    omega = float(_param(config, "omega", 8.0))
    Ks = [int(k) for k in _param(config, "K", [16 * 2**k for k in range(9)])]
    trials = int(_param(config, "trials", 5))
    lo, hi = _param(config, "halving_range", [0.3, 0.8])
    rows, halvings, series = [], [], {}
    for i, z in enumerate(random_ensemble(seed, trials, model.dim)):
        f = pw_project(model, omega, z)
        errs = [riesz_boas_apply(model, omega, f, K)[1] for K in Ks]
        series[f"f{i}"] = errs
        for n, (K, e) in enumerate(zip(Ks, errs)):
            ratio = errs[n] / errs[n - 1] if n > 0 else float("nan")
            if n > 0:
                halvings.append(ratio)
            rows.append((i, K, e, ratio))
    median = float(np.median(halvings))
    checks = {"median_halving": lo <= median <= hi}
    plot = {"kind": "lines", "x": Ks, "series": series, "logx": True, "logy": True,
            "title": "Riesz-Boas truncation error", "xlabel": "K", "ylabel": "error"}
    return SuiteResult(
        "riesz_boas", ["trial", "K", "error", "halving_ratio"], rows, checks["median_halving"], median,
        {"median_halving": [lo, hi]}, checks, plot,
    )


def suite_steklov(config, seed):
    """
    Hardy-Steklov approximation on the circle.

    Quadrature and closed-form paths must agree; ``||sigma H_r(s) f - f|| / Omega^r(s, f)``
    is fitted to one constant per ``r`` on one ensemble and validated on a
    second; single modes must converge at rate ``s`` for ``r = 1``.
    """
    model = _models(config, [CIRCLE16])[0]
    cache = build_group_cache(model)
    r_list = [int(r) for r in _param(config, "r", [1, 2, 3])]
    s_list = np.logspace(-3, 0, int(_param(config, "s_points", 13)))
    order = int(_param(config, "quadrature_order", 32))
    trials = int(_param(config, "trials", 10))
    slack = float(_param(config, "holdout_slack", 2.0))
    path_tol = 1e-8
    modes = np.eye(model.dim, dtype=complex)
    fit_set = np.vstack([modes, random_ensemble(seed, trials, model.dim)])
    hold_set = random_ensemble(seed + 1, trials, model.dim)
    rows, path_diff, worst = [], 0.0, 0.0
    checks = {}
    plot_series = {}
    for r in r_list:
        sigma = steklov_sign(cache.d, r)
        fitted = {}
        for name, ens in (("fit", fit_set), ("holdout", hold_set)):
            top = 0.0
            for i, f in enumerate(ens):
                for s in s_list:
                    quad = sigma * hardy_steklov(model, cache, r, s, f, order, "quadrature")
                    mult = sigma * hardy_steklov(model, cache, r, s, f, method="multiplier")
                    diff = norm(quad - mult)
                    path_diff = max(path_diff, diff / max(norm(f), 1e-300))
                    err = norm(quad - f)
                    om = mixed_modulus(model, cache, r, s, f)
                    ratio = err / om if om > 0 else (0.0 if err <= 1e-14 * norm(f) else math.inf)
                    top = max(top, ratio)
                    rows.append((r, name, i, s, err, om, ratio, diff))
            fitted[name] = top
        C = fitted["fit"]
        checks[f"r{r}_fit_finite"] = math.isfinite(C) and C > 0
        checks[f"r{r}_holdout"] = fitted["holdout"] <= slack * C
        worst = max(worst, fitted["holdout"] / C if C > 0 else math.inf)
        if r == 1:
            slopes = []
            for k in range(1, model.dim):
                f = model.mode(k)
                e = [norm(sigma * hardy_steklov(model, cache, 1, s, f, order) - f) for s in s_list[:5]]
                slopes.append(np.polyfit(np.log(s_list[:5]), np.log(e), 1)[0])
                if k == 2:
                    plot_series["mode 1, r=1"] = e
            checks["r1_rate"] = bool(np.all(np.abs(np.array(slopes) - 1) <= 0.1))
    checks["paths_agree"] = path_diff <= path_tol
    plot = {"kind": "lines", "x": list(s_list[:5]), "series": plot_series, "logx": True, "logy": True,
            "title": "Hardy-Steklov error, single mode", "xlabel": "s", "ylabel": "error"}
    return SuiteResult(
        "steklov", ["r", "ensemble", "vector", "s", "error", "omega_r", "ratio", "path_difference"], rows,
        all(checks.values()), worst, {"path_difference": path_tol, "holdout_slack": slack, "rate": 0.1},
        checks, plot,
    )


def suite_modulus_k(config, seed):
    """Empirical constants between ``Omega^r(s, f)`` and ``K(s^r, f)`` and their grid stability."""
    model = _models(config, [CIRCLE16])[0]
    cache = build_group_cache(model)
    r = int(_param(config, "r", 2))
    trials = int(_param(config, "trials", 50))
    s_list = np.logspace(-2, math.log10(math.pi), int(_param(config, "s_points", 10)))
    base = ModulusGrid(int(_param(config, "grid", 33)))
    vectors = np.vstack([np.eye(model.dim, dtype=complex), random_ensemble(seed, trials, model.dim)])
    rows, consts = [], {}
    bracket_ok = True
    for grid in (base, base.refined()):
        lows, highs = [], []
        for i, f in enumerate(vectors):
            rep = modulus_k_equivalence(model, cache, r, f, s_list, grid)
            for s, om, kl, ku, rhs in rep.rows:
                rows.append((i, grid.points_per_axis, s, om, kl, ku, rhs))
                bracket_ok &= kl <= ku <= math.sqrt(2) * kl * (1 + 1e-12)
            if rep.c_hat is not None:
                lows.append(rep.c_hat)
            if rep.C_hat is not None:
                highs.append(rep.C_hat)
        consts[grid.points_per_axis] = (min(lows), max(highs))
    (c0, C0), (c1, C1) = consts[base.points_per_axis], consts[base.refined().points_per_axis]
    drift = max(c1 / c0, c0 / c1, C1 / C0, C0 / C1)
    checks = {
        "finite_positive": all(math.isfinite(x) and x > 0 for x in (c0, C0, c1, C1)),
        "refinement_stable": drift <= 2.0,
        "bracket": bool(bracket_ok),
    }
    plot = {"kind": "bars", "labels": ["c_hat", "C_hat", "c_hat refined", "C_hat refined"],
            "values": [c0, C0, c1, C1], "title": f"Modulus/K constants, r={r}"}
    return SuiteResult(
        "modulus_k", ["vector", "grid", "s", "omega_r", "k_lower", "k_upper", "bound_rhs"], rows,
        all(checks.values()), drift, {"refinement_factor": 2.0, "bracket": math.sqrt(2)}, checks, plot,
    )


def _frame_for(model, config, seed):
    delta = float(_param(config, "delta", 0.1))
    m = float(_param(config, "m", 2.0))
    C = calibrate_constant(model, m, _param(config, "calibration_rhos", [1.0, 0.5, 0.25]), seed=seed)
    pou = build_partition(int(_param(config, "J_max", required_levels(model))))
    return dual_frame(build_frame_system(model, pou, delta, m, C)), pou


def suite_frames(config, seed):
    """Nearly Parseval frame bounds and canonical-dual reconstruction."""
    trials = int(_param(config, "trials", 100))
    rows, checks, worst = [], {}, math.inf
    delta = float(_param(config, "delta", 0.1))
    bars_labels, bars = [], []
    for model in _models(config, [{"kind": "circle", "N": 8}, SPHERE4]):
        label = model_label(model)
        system, _ = _frame_for(model, config, seed)
        A, B = system.bounds
        ens = random_ensemble(seed, trials, model.dim)
        rec = system.analysis(ens) @ system.dual
        resid = np.linalg.norm(rec - ens, axis=1) / np.linalg.norm(ens, axis=1)
        rows += [(label, "atoms", system.size), (label, "A", A), (label, "B", B),
                 (label, "dual_A", system.dual_bounds[0]), (label, "dual_B", system.dual_bounds[1])]
        rows += [(label, f"residual_{i}", float(x)) for i, x in enumerate(resid)]
        checks[f"{label}_lower"] = A >= 1 - delta - TOL.iterative
        checks[f"{label}_upper"] = B <= 1 + TOL.iterative
        checks[f"{label}_reconstruction"] = float(resid.max()) <= 1e-10
        worst = min(worst, A / (1 - delta))
        bars_labels += [f"{label} A", f"{label} B"]
        bars += [A, B]
    plot = {"kind": "bars", "labels": bars_labels, "values": bars, "title": f"Frame bounds, delta={delta}"}
    return SuiteResult(
        "frames", ["model", "quantity", "value"], rows, all(checks.values()), worst,
        {"lower": 1 - delta - TOL.iterative, "upper": 1 + TOL.iterative, "residual": 1e-10}, checks, plot,
    )


BESOV_DEFAULT = [[0.5, 2, 1], [0.7, 2, 2], [1, 1, 2], [1.5, 2, 2]]


def suite_besov_compare(config, seed):
    """All applicable Besov norms over a single-mode sweep and random vectors."""
    model = _models(config, [CIRCLE16])[0]
    cache = build_group_cache(model) if model.has_groups else None
    trials = int(_param(config, "trials", 20))
    bound = float(_param(config, "spread_bound", 100.0))
    system, pou = _frame_for(model, config, seed) if model.has_nodes else (None, None)
    if pou is None:
        pou = build_partition(required_levels(model))
    vectors = np.vstack([np.eye(model.dim, dtype=complex), random_ensemble(seed, trials, model.dim)])
    labels = [f"mode{k}" for k in range(model.dim)] + [f"rand{i}" for i in range(trials)]
    rows, checks, worst = [], {}, 0.0
    bar_labels, bar_values = [], []
    for a, q, r in _param(config, "sets", BESOV_DEFAULT):
        params = BesovParams(float(a), float(q), int(r) if r is not None else None)
        rep = equivalence_report(model, params, vectors, labels, cache, pou, system, bound)
        tag = f"a={a},q={q},r={r}"
        lp = rep.values[:, rep.methods.index("lp")]
        for i, lab in enumerate(labels):
            for k, meth in enumerate(rep.methods):
                rows.append((tag, lab, meth, rep.values[i, k], rep.scaled[i, k] / (2 * rep.values[i, k]),
                             rep.values[i, k] / lp[i]))
        spread = max(st[2] for st in rep.pair_stats.values())
        worst = max(worst, spread)
        checks[tag] = rep.passed
        bar_labels.append(tag)
        bar_values.append(spread)
    plot = {"kind": "bars", "labels": bar_labels, "values": bar_values, "title": "Worst pairwise ratio spread"}
    return SuiteResult(
        "besov_compare", ["params", "vector_id", "method", "value", "scale_check", "ratio_to_lp"], rows,
        all(checks.values()), worst, {"spread": bound, "scale": 1e-10}, checks, plot,
    )


def suite_poincare(config, seed):
    """
    Sampling calibration: exact constants for well-sampled band-limited circle
    vectors, then frame bounds at the mesh parameter from the calibrated constant.
    """
    m = float(_param(config, "m", 2.0))
    delta = float(_param(config, "delta", 0.1))
    trials = int(_param(config, "trials", 64))
    omega_c = float(_param(config, "omega", 8.0))
    rows, checks, worst = [], {}, 1.0
    for model in _models(config, [CIRCLE16, SPHERE4]):
        label = model_label(model)
        if model.kind == "circle":
            w = int(omega_c)
            for M_nodes in _param(config, "nodes", [2 * w + 1, 2 * w + 5, 4 * w]):
                theta = 2 * np.pi * np.arange(M_nodes) / M_nodes
                sset = sampling_set_from_nodes(model, theta, np.full(M_nodes, 2 * np.pi / M_nodes), 2 * np.pi / M_nodes)
                rep = poincare_calibrate(model, sset, m, trials, seed, band=omega_c)
                rows.append((label, "exact", M_nodes, omega_c, rep.c_hat, rep.C_hat, sset.rho, "", ""))
                checks[f"{label}_M{M_nodes}_exact"] = (
                    abs(rep.c_hat - 1) <= 1e-10 and abs(rep.C_hat - 1) <= 1e-10
                )
                worst = max(worst, rep.c_hat, 1 / rep.c_hat, rep.C_hat, 1 / rep.C_hat)
        C = calibrate_constant(model, m, _param(config, "calibration_rhos", [1.0, 0.5, 0.25]), trials, seed)
        top = float(model.sqrt_eigenvalues[-1])
        omega = omega_c if model.kind == "circle" else float(_param(config, "omega_fraction", 0.75)) * top
        w_eff = effective_band(model, omega)
        rho = required_rho(C, w_eff, delta, m)
        sset = build_sampling_set(model, rho)
        pw = pw_frame(model, sset, omega, delta, C, m)
        A, B = pw.bounds
        rows.append((label, "frame", sset.size, omega, C, A, rho, B, len(pw.warnings)))
        checks[f"{label}_frame"] = A >= 1 - delta - TOL.iterative and B <= 1 + TOL.iterative and not pw.warnings
    return SuiteResult(
        "poincare", ["model", "check", "nodes", "omega", "c_hat_or_C", "C_hat_or_A", "rho", "B", "warnings"],
        rows, all(checks.values()), worst,
        {"exact": 1e-10, "lower": 1 - delta - TOL.iterative, "upper": 1 + TOL.iterative}, checks, None,
    )


def suite_partition(config, seed):
    """Partition-of-unity sum and Littlewood-Paley energy identity."""
    model = _models(config, [CIRCLE16])[0]
    J = int(_param(config, "J_max", required_levels(model)))
    pou = build_partition(J)
    points = int(_param(config, "points", 10_000))
    lam = np.logspace(-4, math.log10(pou.coverage), points)
    total = sum(pou.G(j, lam) for j in range(J + 1))
    sum_err = float(np.max(np.abs(total - 1)))
    rows = [("sum_error", -1, sum_err)]
    energy_err = 0.0
    for i, f in enumerate(random_ensemble(seed, int(_param(config, "trials", 100)), model.dim)):
        pieces = lp_decompose(model, pou, f)
        e = abs(sum(norm(p) ** 2 for p in pieces) - norm(f) ** 2) / norm(f) ** 2
        rows.append(("energy_error", i, e))
        energy_err = max(energy_err, e)
    checks = {"sum": sum_err < 1e-12, "energy": energy_err <= 1e-12}
    lam_plot = np.linspace(0, pou.coverage, 600)
    plot = {"kind": "lines", "x": list(lam_plot),
            "series": {f"G_{j}": list(pou.G(j, lam_plot)) for j in range(J + 1)},
            "title": f"Partition of unity, J_max={J}", "xlabel": "lambda", "ylabel": "G_j"}
    return SuiteResult(
        "partition", ["check", "index", "value"], rows, all(checks.values()), max(sum_err, energy_err),
        {"sum": 1e-12, "energy": 1e-12}, checks, plot,
    )


def suite_sphere_algebra(config, seed):
    """Casimir identity, the order-one Sobolev identity and so(3) commutator closure."""
    N = int(_param(config, "N", 4))
    model = M.build_sphere_model(M.SphereSpec(N))
    D = model.generators
    n = np.array([deg for deg, _ in M.sphere_index(N)], dtype=float)
    casimir = -sum(Dj @ Dj for Dj in D)
    cas_err = float(np.max(np.abs(casimir - np.diag(n * (n + 1.0)))))
    ident_err = 0.0
    rows = [("casimir", -1, cas_err)]
    for i, f in enumerate(random_ensemble(seed, int(_param(config, "trials", 100)), model.dim)):
        lhs = norm(f) ** 2 + sum(norm(Dj @ f) ** 2 for Dj in D)
        rhs = norm(hilbert_scale(model, 1.0) * f) ** 2
        e = abs(lhs - rhs) / rhs
        rows.append(("sobolev_identity", i, e))
        ident_err = max(ident_err, e)
    # [D_i, D_j] = -D_k for cyclic (i, j, k)
    comm_err = 0.0
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        e = float(np.max(np.abs(D[i] @ D[j] - D[j] @ D[i] + D[k])))
        rows.append(("commutator", i, e))
        comm_err = max(comm_err, e)
    checks = {"casimir": cas_err <= TOL.casimir, "identity": ident_err <= 1e-8, "commutators": comm_err < 1e-10}
    return SuiteResult(
        "sphere_algebra", ["check", "index", "value"], rows, all(checks.values()),
        max(cas_err, ident_err, comm_err), {"casimir": TOL.casimir, "identity": 1e-8, "commutator": 1e-10},
        checks, None,
    )


def _scatter_plot(rows, x, y, title, xlabel, ylabel):
    return {"kind": "scatter", "x": [r[x] for r in rows], "y": [r[y] for r in rows],
            "title": title, "xlabel": xlabel, "ylabel": ylabel}


RUNNERS = {
    "bernstein": suite_bernstein,
    "jackson": suite_jackson,
    "riesz_boas": suite_riesz_boas,
    "steklov": suite_steklov,
    "modulus_k": suite_modulus_k,
    "frames": suite_frames,
    "besov_compare": suite_besov_compare,
    "poincare": suite_poincare,
    "partition": suite_partition,
    "sphere_algebra": suite_sphere_algebra,
}


def run_suite(name: str, config: dict | None = None, seed: int | None = None) -> SuiteResult:
    """Run one suite; ``seed`` overrides ``config["seed"]`` (default 0)."""
    if name not in RUNNERS:
        raise ConfigError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    config = dict(config or {})
    if config.get("suite", name) != name:
        raise ConfigError(f"config is for suite {config['suite']!r}, not {name!r}")
    if not isinstance(config.get("params", {}), dict):
        raise ConfigError("params must be an object")
    seed = int(config.get("seed", 0) if seed is None else seed)
    start = time.perf_counter()
    result = RUNNERS[name](config, seed)
    result.runtime_ms = 1000 * (time.perf_counter() - start)
    return result
