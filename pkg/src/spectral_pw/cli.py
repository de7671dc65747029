"""
Command line interface.

Suites::

    spectral-pw <suite> [--config file.json] [--seed N] [--out dir] [--no-figures]

write ``report.csv``, ``summary.json`` and (unless ``--no-figures``) a PNG
figure into ``dir``. Exit code 0 when every check passes, 1 on a failed check,
2 on a configuration or input error.

Tools::

    spectral-pw model build --kind circle|sphere|graph --out model.json ...
    spectral-pw modulus|kfun|steklov --model model.json --r R [--s ...]
    spectral-pw partition dump --jmax J --grid out.csv
    spectral-pw frames build|bounds|reconstruct ...
    spectral-pw besov compute|compare ...
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from .besov import BesovParams, compute_norm, equivalence_report
from .core import load_model, norm, save_model
from .errors import SpectralError
from .frames import (
    analysis_bounds,
    build_frame_system,
    calibrate_constant,
    dual_frame,
    frame_from_dict,
    frame_to_dict,
)
from .models import (
    CircleSpec,
    GraphSpec,
    SphereSpec,
    build_circle_model,
    build_graph_model,
    build_sphere_model,
)
from .partition import build_partition, partition_table, required_levels
from .rng import random_ensemble
from .semigroups import (
    ModulusGrid,
    build_group_cache,
    hardy_steklov,
    k_functional,
    mixed_modulus,
    modulus_k_equivalence,
    steklov_sign,
)
from .suites import SUITES, ConfigError, run_suite

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_csv(header, rows, path=None) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    text = buf.getvalue()
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)
    return text


# --- suites ----------------------------------------------------------------

def _load_config(path) -> dict:
    if path is None:
        return {}
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    return doc


def run_suite_command(args) -> int:
    result = run_suite(args.command, _load_config(args.config), args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_csv(result.header, result.rows, out / "report.csv")
    (out / "summary.json").write_text(json.dumps(result.summary(), indent=2, sort_keys=True) + "\n")
    if not args.no_figures and result.plot is not None:
        from .plotting import render

        render(result.plot, out / f"{result.suite}.png")
    status = "pass" if result.passed else "FAIL"
    print(f"{result.suite}: {status} (worst ratio {result.worst_ratio:.6g}, {result.runtime_ms:.0f} ms)")
    for name, ok in result.checks.items():
        if not ok:
            print(f"  failed check: {name}")
    return EXIT_OK if result.passed else EXIT_FAIL


# --- shared input helpers ----------------------------------------------------

def _vector(args, dim: int) -> np.ndarray:
    if getattr(args, "vector", None):
        doc = json.loads(Path(args.vector).read_text())
        arr = np.asarray(doc["coefficients"] if isinstance(doc, dict) else doc, dtype=float)
        f = arr[:, 0] + 1j * arr[:, 1] if arr.ndim == 2 else arr.astype(complex)
        if f.size != dim:
            raise ConfigError(f"vector has {f.size} coefficients, model dimension is {dim}")
        return f
    if getattr(args, "mode", None) is not None:
        if not 0 <= args.mode < dim:
            raise ConfigError(f"mode index must lie in [0, {dim})")
        f = np.zeros(dim, dtype=complex)
        f[args.mode] = 1.0
        return f
    seed = args.seed if args.seed is not None else 0
    return random_ensemble(seed, 1, dim)[0]


def _add_vector_args(p):
    p.add_argument("--vector", help="JSON list of [re, im] coefficient pairs")
    p.add_argument("--mode", type=int, help="use the k-th eigenvector")
    p.add_argument("--seed", type=int, default=0, help="seed for a random vector (default 0)")


def _s_values(args):
    if args.s:
        return [float(s) for s in args.s]
    return list(np.logspace(-2, math.log10(math.pi), 10))


# --- tools -------------------------------------------------------------------

def cmd_model_build(args) -> int:
    if args.kind == "circle":
        model = build_circle_model(CircleSpec(args.degree, args.nodes))
    elif args.kind == "sphere":
        model = build_sphere_model(SphereSpec(args.degree, tuple(args.grid) if args.grid else None))
    else:
        if not args.laplacian:
            raise ConfigError("graph models need --laplacian file.csv")
        L = np.loadtxt(args.laplacian, delimiter=",", ndmin=2)
        model = build_graph_model(GraphSpec(L))
    save_model(model, args.out)
    print(f"wrote {args.kind} model of dimension {model.dim} to {args.out}")
    return EXIT_OK


def cmd_modulus(args) -> int:
    model = load_model(args.model)
    cache = build_group_cache(model)
    f = _vector(args, model.dim)
    rep = modulus_k_equivalence(model, cache, args.r, f, _s_values(args), ModulusGrid(args.grid_points))
    write_csv(["s", "omega_r", "k_lower", "k_upper", "bound_rhs"], rep.rows, args.out)
    return EXIT_OK


def cmd_kfun(args) -> int:
    model = load_model(args.model)
    f = _vector(args, model.dim)
    cache = build_group_cache(model) if model.has_groups else None
    rows = []
    for s in _s_values(args):
        kb = k_functional(model, s**args.r, f, args.r)
        om = mixed_modulus(model, cache, args.r, s, f, ModulusGrid(args.grid_points)) if cache else ""
        rhs = om + min(s**args.r, 1.0) * norm(f) if cache else ""
        rows.append((s, om, kb.lower, kb.upper, rhs))
    write_csv(["s", "omega_r", "k_lower", "k_upper", "bound_rhs"], rows, args.out)
    return EXIT_OK


def cmd_steklov(args) -> int:
    if args.model is None:
        return run_suite_command(args)
    model = load_model(args.model)
    cache = build_group_cache(model)
    f = _vector(args, model.dim)
    sigma = steklov_sign(cache.d, args.r)
    rows = []
    for s in _s_values(args):
        err = norm(sigma * hardy_steklov(model, cache, args.r, s, f, args.quadrature_order) - f)
        om = mixed_modulus(model, cache, args.r, s, f, ModulusGrid(args.grid_points))
        rows.append((s, om, err, err / om if om > 0 else ""))
    write_csv(["s", "omega_r", "steklov_error", "ratio"], rows, args.csv)
    return EXIT_OK


def cmd_partition_dump(args) -> int:
    pou = build_partition(args.jmax)
    lmax = args.lmax if args.lmax is not None else pou.coverage
    lam = np.linspace(0.0, lmax, args.points)
    table = partition_table(pou, lam)
    header = ["lambda"] + [f"G_{j}" for j in range(pou.J_max + 1)]
    write_csv(header, table.tolist(), args.grid)
    return EXIT_OK


def _frame_system(args):
    model = load_model(args.model)
    jmax = args.jmax if args.jmax is not None else required_levels(model)
    C = args.C if args.C is not None else calibrate_constant(model, args.m, [1.0, 0.5, 0.25], seed=args.seed)
    return build_frame_system(model, build_partition(jmax), args.delta, args.m, C)


def cmd_frames_build(args) -> int:
    system = _frame_system(args)
    Path(args.out).write_text(json.dumps(frame_to_dict(system)) + "\n")
    A, B = system.bounds
    print(f"wrote {system.size} atoms to {args.out}; bounds A={A:.12g} B={B:.12g}")
    return EXIT_OK


def cmd_frames_bounds(args) -> int:
    system = frame_from_dict(json.loads(Path(args.frame).read_text()))
    A, B = analysis_bounds(system.atoms)
    write_csv(["quantity", "value"], [("A", A), ("B", B), ("atoms", system.size)], args.out)
    ok = A >= 1 - system.delta - 1e-8 and B <= 1 + 1e-8
    return EXIT_OK if ok else EXIT_FAIL


def cmd_frames_reconstruct(args) -> int:
    system = dual_frame(frame_from_dict(json.loads(Path(args.frame).read_text())))
    f = _vector(args, system.dim)
    coeffs = system.analysis(f)
    partial = np.cumsum(coeffs[:, None] * system.dual, axis=0)
    resid = np.linalg.norm(partial - f[None, :], axis=1) / norm(f)
    rows = [(j, k, c.real, c.imag, r) for (j, k), c, r in zip(system.labels, coeffs, resid)]
    write_csv(["j", "k", "coefficient_re", "coefficient_im", "residual"], rows, args.out)
    return EXIT_OK if resid[-1] <= 1e-10 else EXIT_FAIL


def _besov_setup(args, model, need_frame: bool):
    cache = build_group_cache(model) if model.has_groups else None
    jmax = args.jmax if args.jmax is not None else required_levels(model)
    pou = build_partition(jmax)
    system = None
    if need_frame and model.has_nodes:
        C = calibrate_constant(model, args.m, [1.0, 0.5, 0.25], seed=args.seed)
        system = dual_frame(build_frame_system(model, pou, args.delta, args.m, C))
    return cache, pou, system


def cmd_besov_compute(args) -> int:
    model = load_model(args.model)
    params = BesovParams(args.alpha, args.q, args.r)
    cache, pou, system = _besov_setup(args, model, args.method == "frame")
    f = _vector(args, model.dim)
    rep = compute_norm(args.method, model, params, f, cache, pou, system)
    lo, hi = rep.truncation
    write_csv(["vector_id", "method", "value", "truncation_lo", "truncation_hi"], [("v0", rep.method, rep.value, lo, hi)], args.out)
    return EXIT_OK


def cmd_besov_compare(args) -> int:
    model = load_model(args.model)
    params = BesovParams(args.alpha, args.q, args.r)
    cache, pou, system = _besov_setup(args, model, True)
    vectors = np.vstack([np.eye(model.dim, dtype=complex), random_ensemble(args.seed, args.count, model.dim)])
    labels = [f"mode{k}" for k in range(model.dim)] + [f"rand{i}" for i in range(args.count)]
    rep = equivalence_report(model, params, vectors, labels, cache, pou, system, args.spread_bound)
    lp = rep.values[:, rep.methods.index("lp")]
    rows = []
    for i, lab in enumerate(labels):
        for k, meth in enumerate(rep.methods):
            rows.append((lab, meth, rep.values[i, k], rep.values[i, k] / lp[i]))
    write_csv(["vector_id", "method", "value", "ratio_to_lp"], rows, args.out)
    for (a, b), (lo, hi, spread) in rep.pair_stats.items():
        print(f"{a}/{b}: min {lo:.6g} max {hi:.6g} spread {spread:.6g}", file=sys.stderr)
    return EXIT_OK if rep.passed else EXIT_FAIL


# --- parser ------------------------------------------------------------------

def _suite_args(p):
    p.add_argument("--config", help="JSON experiment config")
    p.add_argument("--seed", type=int, default=None, help="overrides the config seed")
    p.add_argument("--out", default=".", help="output directory (default: current)")
    p.add_argument("--no-figures", action="store_true", help="skip the PNG figure")


def _tool_args(p, r_default=2):
    p.add_argument("--model", help="model JSON written by 'model build'")
    p.add_argument("--r", type=int, default=r_default)
    p.add_argument("--s", nargs="*", help="step sizes (default: 10 log-spaced in [0.01, pi])")
    p.add_argument("--grid-points", type=int, default=33, help="tau grid points per axis")
    p.add_argument("--out", default=None, help="CSV path (default: stdout)")


def _dispatch(args) -> int:
    return args.tool(args) if getattr(args, "tool", None) else run_suite_command(args)


def _shared_group(sub, name, help_text):
    p = sub.add_parser(name, help=help_text)
    _suite_args(p)
    p.set_defaults(func=_dispatch, tool=None)
    return p.add_subparsers(dest="action")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spectral-pw", description="Spectral Paley-Wiener and Besov toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    # these names double as tool groups; without an action they run the suite
    shared = {"steklov", "partition", "frames"}
    for name in SUITES:
        if name in shared:
            continue
        p = sub.add_parser(name, help=f"run the {name} suite")
        _suite_args(p)
        p.set_defaults(func=run_suite_command)

    p = sub.add_parser("steklov", help="steklov suite, or a single Hardy-Steklov table with --model")
    _suite_args(p)
    p.add_argument("--model")
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--s", nargs="*")
    p.add_argument("--grid-points", type=int, default=33)
    p.add_argument("--quadrature-order", type=int, default=32)
    p.add_argument("--csv", default=None, help="table path with --model (default: stdout)")
    p.add_argument("--vector")
    p.add_argument("--mode", type=int)
    p.set_defaults(func=cmd_steklov)

    model = sub.add_parser("model", help="build models").add_subparsers(dest="action", required=True)
    p = model.add_parser("build")
    p.add_argument("--kind", choices=["circle", "sphere", "graph"], required=True)
    p.add_argument("--degree", type=int, default=8, help="N: top frequency or degree")
    p.add_argument("--nodes", type=int, help="circle node count (default 2N+1)")
    p.add_argument("--grid", type=int, nargs=2, metavar=("NLAT", "NLON"), help="sphere quadrature grid")
    p.add_argument("--laplacian", help="dense CSV matrix for graph models")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_model_build)

    for name, func in (("modulus", cmd_modulus), ("kfun", cmd_kfun)):
        p = sub.add_parser(name, help=f"{name} table for one vector")
        _tool_args(p)
        _add_vector_args(p)
        p.set_defaults(func=func)

    part = _shared_group(sub, "partition", "partition suite, or 'partition dump' for the G_j table")
    p = part.add_parser("dump")
    p.add_argument("--jmax", type=int, required=True)
    p.add_argument("--grid", default=None, help="output CSV (default: stdout)")
    p.add_argument("--points", type=int, default=1001)
    p.add_argument("--lmax", type=float, default=None)
    p.set_defaults(tool=cmd_partition_dump)

    frames = _shared_group(sub, "frames", "frames suite, or the build/bounds/reconstruct tools")
    p = frames.add_parser("build")
    p.add_argument("--model", required=True)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--m", type=float, default=2.0)
    p.add_argument("--C", type=float, default=None, help="Poincare constant (default: calibrated)")
    p.add_argument("--jmax", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(tool=cmd_frames_build)
    p = frames.add_parser("bounds")
    p.add_argument("--frame", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(tool=cmd_frames_bounds)
    p = frames.add_parser("reconstruct")
    p.add_argument("--frame", required=True)
    p.add_argument("--out", default=None)
    _add_vector_args(p)
    p.set_defaults(tool=cmd_frames_reconstruct)

    besov = sub.add_parser("besov", help="Besov norms").add_subparsers(dest="action", required=True)
    for name, func in (("compute", cmd_besov_compute), ("compare", cmd_besov_compare)):
        p = besov.add_parser(name)
        p.add_argument("--model", required=True)
        p.add_argument("--alpha", type=float, required=True)
        p.add_argument("--q", type=float, default=2.0, help="1 <= q <= inf")
        p.add_argument("--r", type=int, default=None)
        p.add_argument("--jmax", type=int, default=None)
        p.add_argument("--delta", type=float, default=0.1)
        p.add_argument("--m", type=float, default=2.0)
        p.add_argument("--out", default=None)
        _add_vector_args(p)
        if name == "compute":
            p.add_argument(
                "--method", required=True,
                choices=["modulus", "kfun", "approx", "lp", "frame", "derivative", "zygmund"],
            )
        else:
            p.add_argument("--count", type=int, default=20, help="random vectors besides the mode sweep")
            p.add_argument("--spread-bound", type=float, default=100.0)
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SpectralError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
