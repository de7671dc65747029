"""
Besov norms computed seven ways: modulus of continuity, K-functional, dyadic
best approximation, Littlewood-Paley pieces, frame coefficients, derivative
form and Zygmund form.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .config import MAX_TUPLE_ORDER
from .core import SpectralModel, best_approx_error, norm, sobolev_norm
from .errors import CoverageError, DomainError, SizeError
from .frames import FrameSystem
from .partition import PartitionOfUnity, check_coverage, lp_decompose
from .semigroups import (
    GroupCache,
    ModulusGrid,
    derivative_tuple,
    k_functional_pair,
    mixed_modulus,
)

S_MIN, S_MAX, S_POINTS = 1e-4, 1e2, 200


@dataclass(frozen=True)
class BesovParams:
    alpha: float
    q: float = 2.0
    r: int | None = None

    def __post_init__(self):
        if not self.alpha > 0:
            raise DomainError("alpha must be positive")
        if not self.q >= 1:
            raise DomainError("q must be at least 1")
        if self.r is not None and not self.alpha < self.r:
            raise DomainError(f"need alpha < r, got alpha={self.alpha}, r={self.r}")

    def need_r(self) -> int:
        if self.r is None:
            raise DomainError("this norm needs the integer r > alpha")
        return self.r


@dataclass
class BesovReport:
    value: float
    method: str
    truncation: tuple
    meta: dict = field(default_factory=dict)


def log_grid(s_min: float = S_MIN, s_max: float = S_MAX, points: int = S_POINTS) -> np.ndarray:
    return np.logspace(math.log10(s_min), math.log10(s_max), points)


def _lq(values: np.ndarray, q: float, grid: np.ndarray, tail: float) -> float:
    """``(int values^q ds/s + tail)^{1/q}`` by the trapezoid rule in ``log s``; sup for ``q = inf``."""
    if math.isinf(q):
        return float(np.max(values)) if values.size else 0.0
    integral = float(np.trapezoid(values**q, np.log(grid)))
    return (integral + tail) ** (1.0 / q)


def _power_tails(q, s_min, s_max, c0, p0, c_inf, p_inf):
    """
    Integrals of the bounds ``(c0 s^p0)^q`` on ``(0, s_min)`` and
    ``(c_inf s^-p_inf)^q`` on ``(s_max, inf)`` against ``ds/s``.
    """
    if math.isinf(q):
        return 0.0, 0.0
    near = c0**q * s_min ** (p0 * q) / (p0 * q) if c0 > 0 else 0.0
    far = c_inf**q * s_max ** (-p_inf * q) / (p_inf * q) if c_inf > 0 else 0.0
    return near, far


def _dmax(cache: GroupCache) -> float:
    return max(cache.operator_norm(j) for j in range(cache.d))


def _modulus_integral(model, cache, r, weight_power, q, g, grid, s_grid):
    """``(int (s^{-weight_power} Omega^r(s, g))^q ds/s)^{1/q}`` with certified tails."""
    om = np.array([mixed_modulus(model, cache, r, s, g, grid) for s in s_grid])
    vals = s_grid ** (-weight_power) * om
    d = cache.d
    ng = norm(g)
    near, far = _power_tails(
        q, s_grid[0], s_grid[-1], (d * _dmax(cache)) ** r * ng, r - weight_power, (2 * d) ** r * ng, weight_power
    )
    return _lq(vals, q, s_grid, near + far), near + far


def besov_modulus(
    model: SpectralModel,
    cache: GroupCache,
    params: BesovParams,
    f,
    grid: ModulusGrid = ModulusGrid(),
    s_grid: np.ndarray | None = None,
) -> BesovReport:
    """``||f|| + (int (s^-alpha Omega^r(s,f))^q ds/s)^{1/q}``."""
    model.require_groups()
    r = params.need_r()
    if r * cache.d > MAX_TUPLE_ORDER:
        raise SizeError(f"r*d = {r * cache.d} exceeds the cap {MAX_TUPLE_ORDER}")
    f = model.vector(f)
    s_grid = log_grid() if s_grid is None else s_grid
    part, tail = _modulus_integral(model, cache, r, params.alpha, params.q, f, grid, s_grid)
    return BesovReport(
        norm(f) + part,
        "modulus",
        (float(s_grid[0]), float(s_grid[-1])),
        {"tail": tail, "points": s_grid.size, "grid": grid.points_per_axis},
    )


def besov_kfun(
    model: SpectralModel,
    params: BesovParams,
    f,
    pair: tuple | None = None,
    s_grid: np.ndarray | None = None,
) -> BesovReport:
    """
    ``(int (t^-theta K(t, f))^q dt/t)^{1/q}`` for the pair ``(H^{k1}, H^{k2})``.

    The default pair is ``(H, H^r)`` with ``theta = alpha / r``; the value uses
    the bracket midpoint and the bracket ends are kept in ``meta``.
    """
    k1, k2 = pair if pair is not None else (0, params.need_r())
    if not k1 < params.alpha < k2:
        raise DomainError(f"need k1 < alpha < k2, got {k1}, {params.alpha}, {k2}")
    theta = (params.alpha - k1) / (k2 - k1)
    f = model.vector(f)
    span = k2 - k1
    s_grid = log_grid() if s_grid is None else s_grid
    t_grid = s_grid**span
    brackets = [k_functional_pair(model, t, f, k1, k2) for t in t_grid]
    weights = t_grid ** (-theta)
    low = weights * np.array([b.lower for b in brackets])
    high = weights * np.array([b.upper for b in brackets])
    mid = 0.5 * (low + high)
    near, far = _power_tails(
        params.q, t_grid[0], t_grid[-1], sobolev_norm(model, k2, f), 1 - theta, sobolev_norm(model, k1, f), theta
    )
    tail = near + far
    lower = _lq(low, params.q, t_grid, tail)
    upper = _lq(high, params.q, t_grid, tail)
    return BesovReport(
        _lq(mid, params.q, t_grid, tail),
        "kfun",
        (float(t_grid[0]), float(t_grid[-1])),
        {"lower": lower, "upper": upper, "tail": tail, "pair": (k1, k2), "theta": theta},
    )


def _required_J(model: SpectralModel) -> int:
    top = float(model.sqrt_eigenvalues[-1])
    return max(0, math.ceil(math.log2(top))) if top > 1 else 0


def _lq_sum(terms, q) -> float:
    terms = np.asarray(terms, dtype=float)
    if math.isinf(q):
        return float(terms.max()) if terms.size else 0.0
    # fsum is exactly rounded, so trailing zero levels cannot perturb the value
    return math.fsum(terms**q) ** (1.0 / q)


def besov_approx(model: SpectralModel, params: BesovParams, f, J: int | None = None) -> BesovReport:
    """``||f|| + (sum_j (2^{j alpha} E(f, 2^j))^q)^{1/q}``; exact once ``2^J`` covers the spectrum."""
    f = model.vector(f)
    need = _required_J(model)
    J = need if J is None else J
    if J < need:
        raise CoverageError(f"2^{J} does not reach the top of the spectrum; need J >= {need}")
    terms = [2.0 ** (j * params.alpha) * best_approx_error(model, 2.0**j, f) for j in range(J + 1)]
    return BesovReport(norm(f) + _lq_sum(terms, params.q), "approx", (0, J), {"terms": terms})


def besov_lp(model: SpectralModel, pou: PartitionOfUnity, params: BesovParams, f) -> BesovReport:
    """``(sum_j (2^{j alpha} ||F_j(sqrt L) f||)^q)^{1/q}``."""
    check_coverage(model, pou)
    pieces = lp_decompose(model, pou, f)
    terms = [2.0 ** (j * params.alpha) * norm(p) for j, p in enumerate(pieces)]
    return BesovReport(_lq_sum(terms, params.q), "lp", (0, pou.J_max), {"terms": terms})


def besov_frame(system: FrameSystem, params: BesovParams, f) -> BesovReport:
    """``(sum_j 2^{j alpha q} (sum_k |<f, Phi_k^j>|^2)^{q/2})^{1/q}``."""
    coeffs = system.analysis(np.asarray(f, dtype=complex))
    terms = []
    levels = system.band_slices()
    for j in sorted(levels):
        energy = float(np.sum(np.abs(coeffs[levels[j]]) ** 2))
        terms.append(2.0 ** (j * params.alpha) * math.sqrt(energy))
    return BesovReport(_lq_sum(terms, params.q), "frame", (min(levels), max(levels)), {"terms": terms})


def besov_derivative(
    model: SpectralModel,
    cache: GroupCache,
    alpha: float,
    q: float,
    f,
    grid: ModulusGrid = ModulusGrid(),
    s_grid: np.ndarray | None = None,
) -> BesovReport:
    """
    ``||f||_{[alpha]} + sum_tuples (int (s^{[alpha]-alpha} Omega^1(s, D_tuple f))^q ds/s)^{1/q}``
    for non-integer ``alpha``.
    """
    model.require_groups()
    if float(alpha).is_integer():
        raise DomainError("alpha is an integer: use besov_zygmund")
    k = int(math.floor(alpha))
    if k * cache.d > MAX_TUPLE_ORDER:
        raise SizeError(f"[alpha]*d = {k * cache.d} exceeds the cap {MAX_TUPLE_ORDER}")
    f = model.vector(f)
    s_grid = log_grid() if s_grid is None else s_grid
    total, tails = sobolev_norm(model, k, f), 0.0
    for tup in itertools.product(range(cache.d), repeat=k):
        g = derivative_tuple(model, tup, f)
        part, tail = _modulus_integral(model, cache, 1, alpha - k, q, g, grid, s_grid)
        total += part
        tails += tail
    return BesovReport(total, "derivative", (float(s_grid[0]), float(s_grid[-1])), {"tail": tails, "order": k})


def besov_zygmund(
    model: SpectralModel,
    cache: GroupCache,
    k: int,
    q: float,
    f,
    grid: ModulusGrid = ModulusGrid(),
    s_grid: np.ndarray | None = None,
) -> BesovReport:
    """``||f||_{k-1} + sum_{(k-1)-tuples} (int (s^-1 Omega^2(s, D_tuple f))^q ds/s)^{1/q}``."""
    model.require_groups()
    if k < 1:
        raise DomainError("k must be a positive integer")
    if max(k - 1, 2) * cache.d > MAX_TUPLE_ORDER:
        raise SizeError("tuple order exceeds the cap")
    f = model.vector(f)
    s_grid = log_grid() if s_grid is None else s_grid
    total, tails = sobolev_norm(model, k - 1, f), 0.0
    for tup in itertools.product(range(cache.d), repeat=k - 1):
        g = derivative_tuple(model, tup, f)
        part, tail = _modulus_integral(model, cache, 2, 1.0, q, g, grid, s_grid)
        total += part
        tails += tail
    return BesovReport(total, "zygmund", (float(s_grid[0]), float(s_grid[-1])), {"tail": tails, "order": k})


# --- equivalence study -----------------------------------------------------

@dataclass
class EquivalenceReport:
    params: BesovParams
    methods: list
    values: np.ndarray  # (vectors, methods)
    scaled: np.ndarray  # same for 2 f
    labels: list
    pair_stats: dict  # (a, b) -> (min, max, spread)
    scale_error: float
    frame_lp: tuple | None
    delta: float | None
    spread_bound: float

    @property
    def passed(self) -> bool:
        ok = all(np.isfinite(self.values).ravel()) and np.all(self.values > 0)
        ok &= all(st[2] < self.spread_bound for st in self.pair_stats.values())
        ok &= self.scale_error <= 1e-10
        if self.frame_lp is not None:
            lo = math.sqrt(1 - self.delta) - 1e-6
            ok &= self.frame_lp[0] >= lo and self.frame_lp[1] <= 1 + 1e-6
        return bool(ok)


def applicable_methods(model: SpectralModel, params: BesovParams, with_frame: bool) -> list:
    methods = []
    if model.has_groups and params.r is not None:
        methods.append("modulus")
    if params.r is not None:
        methods.append("kfun")
    methods += ["approx", "lp"]
    if with_frame:
        methods.append("frame")
    if model.has_groups:
        methods.append("zygmund" if float(params.alpha).is_integer() else "derivative")
    return methods


def compute_norm(method, model, params, f, cache=None, pou=None, system=None, grid=ModulusGrid()) -> BesovReport:
    if method == "modulus":
        return besov_modulus(model, cache, params, f, grid)
    if method == "kfun":
        return besov_kfun(model, params, f)
    if method == "approx":
        return besov_approx(model, params, f)
    if method == "lp":
        return besov_lp(model, pou, params, f)
    if method == "frame":
        return besov_frame(system, params, f)
    if method == "derivative":
        return besov_derivative(model, cache, params.alpha, params.q, f, grid)
    if method == "zygmund":
        return besov_zygmund(model, cache, int(params.alpha), params.q, f, grid)
    raise ValueError(f"unknown Besov method {method!r}")


def equivalence_report(
    model: SpectralModel,
    params: BesovParams,
    vectors,
    labels=None,
    cache: GroupCache | None = None,
    pou: PartitionOfUnity | None = None,
    system: FrameSystem | None = None,
    spread_bound: float = 100.0,
    grid: ModulusGrid = ModulusGrid(),
) -> EquivalenceReport:
    """
    Every applicable norm on every vector (and on twice the vector).

    For each pair of methods the ratio ``a/b`` is tracked across vectors; the
    spread ``max/min`` must stay below ``spread_bound``.
    """
    vectors = np.atleast_2d(np.asarray(vectors, dtype=complex))
    labels = list(labels) if labels is not None else [f"v{i}" for i in range(len(vectors))]
    methods = applicable_methods(model, params, system is not None)
    vals = np.zeros((len(vectors), len(methods)))
    scaled = np.zeros_like(vals)
    for i, f in enumerate(vectors):
        for k, meth in enumerate(methods):
            vals[i, k] = compute_norm(meth, model, params, f, cache, pou, system, grid).value
            scaled[i, k] = compute_norm(meth, model, params, 2 * f, cache, pou, system, grid).value
    stats = {}
    scale_err = 0.0
    for a, b in itertools.combinations(range(len(methods)), 2):
        ratio = vals[:, a] / vals[:, b]
        ratio2 = scaled[:, a] / scaled[:, b]
        scale_err = max(scale_err, float(np.max(np.abs(ratio2 - ratio) / np.abs(ratio))))
        stats[(methods[a], methods[b])] = (float(ratio.min()), float(ratio.max()), float(ratio.max() / ratio.min()))
    frame_lp = None
    if "frame" in methods:
        r = vals[:, methods.index("frame")] / vals[:, methods.index("lp")]
        frame_lp = (float(r.min()), float(r.max()))
    return EquivalenceReport(
        params,
        methods,
        vals,
        scaled,
        labels,
        stats,
        scale_err,
        frame_lp,
        system.delta if system is not None else None,
        spread_bound,
    )
