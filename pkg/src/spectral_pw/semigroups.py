"""
One-parameter unitary groups ``T_j(t) = exp(t D_j)`` and what is built from them:
mixed moduli of continuity, Hardy-Steklov averages and the K-functional.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .config import MAX_TUPLE_ORDER, TOL
from .core import SpectralModel, hilbert_scale, norm
from .errors import CapabilityError, DomainError, SizeError

# complex entries per intermediate array in the modulus sweep
_BUDGET = 1 << 21


@dataclass(frozen=True)
class GroupCache:
    """
    Unitary diagonalizations ``D_j = U_j diag(i mu_j) U_j^H``.

    ``diagonal[j]`` marks generators that are already diagonal in the
    eigenbasis of ``L``; for those ``U_j`` is the identity and is skipped.
    """

    U: tuple
    mu: tuple
    diagonal: tuple

    @property
    def d(self) -> int:
        return len(self.mu)

    def operator_norm(self, j: int) -> float:
        return float(np.abs(self.mu[j]).max()) if self.mu[j].size else 0.0


def build_group_cache(model: SpectralModel) -> GroupCache:
    model.require_groups()
    Us, mus, diag = [], [], []
    for D in model.generators:
        off = D - np.diag(np.diag(D))
        if not np.any(off):
            mus.append(np.diag(D).imag.copy())
            Us.append(np.eye(model.dim, dtype=complex))
            diag.append(True)
            continue
        mu, U = np.linalg.eigh(-1j * D)
        n = model.dim
        if np.abs(U @ U.conj().T - np.eye(n)).max() > TOL.algebraic:
            raise RuntimeError("generator eigenvectors are not unitary")
        if np.abs((U * (1j * mu)) @ U.conj().T - D).max() > TOL.iterative * max(1.0, np.abs(D).max()):
            raise RuntimeError("generator diagonalization is inaccurate")
        mus.append(mu)
        Us.append(U)
        diag.append(False)
    return GroupCache(tuple(Us), tuple(mus), tuple(diag))


def _check_index(cache: GroupCache, j: int):
    if not 0 <= j < cache.d:
        raise IndexError(f"generator index {j} out of range 0..{cache.d - 1}")


def _apply_diag_rows(cache: GroupCache, j: int, rows: np.ndarray, symbol: np.ndarray) -> np.ndarray:
    """Apply ``U_j diag(symbol) U_j^H`` to each row of ``rows``; ``symbol`` broadcasts over rows."""
    if cache.diagonal[j]:
        return rows * symbol
    U = cache.U[j]
    return ((rows @ U.conj()) * symbol) @ U.T


def group_apply(model: SpectralModel, cache: GroupCache, j: int, t: float, f) -> np.ndarray:
    """``T_j(t) f = exp(t D_j) f``."""
    model.require_groups()
    _check_index(cache, j)
    f = model.vector(f)
    return _apply_diag_rows(cache, j, f[None, :], np.exp(1j * t * cache.mu[j]))[0]


def generator_apply(model: SpectralModel, j: int, f) -> np.ndarray:
    model.require_groups()
    return model.generators[j] @ model.vector(f)


def derivative_tuple(model: SpectralModel, tup, f) -> np.ndarray:
    """``D_{j_1} ... D_{j_k} f`` (rightmost factor applied first)."""
    g = model.vector(f)
    for j in reversed(tup):
        g = generator_apply(model, j, g)
    return g


# --- mixed modulus of continuity -------------------------------------------

@dataclass(frozen=True)
class ModulusGrid:
    points_per_axis: int = 33

    def __post_init__(self):
        if self.points_per_axis < 2:
            raise ValueError("modulus grid needs at least 2 points per axis")

    def taus(self, s: float) -> np.ndarray:
        return np.linspace(0.0, s, self.points_per_axis)

    def refined(self) -> "ModulusGrid":
        # nested: every old node survives
        return ModulusGrid(2 * self.points_per_axis - 1)


def _check_order(r: int, d: int):
    if r * d > MAX_TUPLE_ORDER:
        raise SizeError(f"r*d = {r * d} exceeds the cap {MAX_TUPLE_ORDER}")


def _tuple_sup(cache: GroupCache, tup, f: np.ndarray, taus: np.ndarray) -> float:
    """max over the tau grid of ``||(T_{j1}(t1)-I)...(T_{jr}(tr)-I) f||``."""
    order = tuple(reversed(tup))
    p = taus.size
    n = f.size

    def expand(states, last, k):
        if k == len(order):
            return float(np.sqrt(np.max(np.sum(np.abs(states) ** 2, axis=1))))
        j = order[k]
        rows = np.repeat(np.arange(len(states)), p)
        idx = np.tile(np.arange(p), len(states))
        if k > 0 and order[k - 1] == j:
            # adjacent factors of one generator commute: keep nondecreasing taus
            keep = idx >= last[rows]
            rows, idx = rows[keep], idx[keep]
        if rows.size * n > _BUDGET and len(states) > 1:
            half = len(states) // 2
            return max(
                expand(states[:half], last[:half], k),
                expand(states[half:], last[half:], k),
            )
        symbol = np.expm1(1j * np.outer(taus[idx], cache.mu[j]))
        new = _apply_diag_rows(cache, j, states[rows], symbol)
        return expand(new, idx, k + 1)

    return expand(f[None, :], np.zeros(1, dtype=int), 0)


def mixed_modulus(
    model: SpectralModel,
    cache: GroupCache,
    r: int,
    s: float,
    f,
    grid: ModulusGrid = ModulusGrid(),
) -> float:
    """
    Mixed modulus of continuity of order ``r`` at step ``s``.

    Sums, over all index tuples in ``{0..d-1}^r`` (with repetition), the sup of
    the iterated difference norm over the box ``[0, s]^r``. The sup is taken on
    a uniform grid with endpoints, so the value is a lower bound of the exact
    modulus; see :func:`mixed_modulus_refined`.
    """
    model.require_groups()
    f = model.vector(f)
    if r == 0:
        return norm(f)
    d = cache.d
    _check_order(r, d)
    if s <= 0 or not np.any(f):
        return 0.0
    taus = grid.taus(s)
    return float(sum(_tuple_sup(cache, tup, f, taus) for tup in itertools.product(range(d), repeat=r)))


def mixed_modulus_refined(
    model: SpectralModel,
    cache: GroupCache,
    r: int,
    s: float,
    f,
    grid: ModulusGrid = ModulusGrid(),
    rtol: float = 1e-3,
    max_points: int = 1025,
):
    """Double the grid until the relative change drops below ``rtol``; returns ``(value, grid)``."""
    value = mixed_modulus(model, cache, r, s, f, grid)
    while grid.refined().points_per_axis <= max_points:
        grid = grid.refined()
        new = mixed_modulus(model, cache, r, s, f, grid)
        done = abs(new - value) <= rtol * max(abs(new), 1e-300)
        value = new
        if done:
            break
    return value, grid


# --- Hardy-Steklov ---------------------------------------------------------

def steklov_sign(d: int, r: int) -> int:
    """
    Sign ``sigma`` with ``sigma * H_r(s) f -> f`` as ``s -> 0``.

    Each factor tends to ``sum_{k=1}^r (-1)^k C(r,k) I = -I``, so the product
    of ``d`` factors tends to ``(-1)^d I`` independently of ``r``.
    """
    return -1 if d % 2 else 1


def steklov_sign_diagnostic(d: int, r: int) -> dict:
    implemented = steklov_sign(d, r)
    literal = (-1) ** (d * (r + 1))
    return {"d": d, "r": r, "implemented": implemented, "literal_exponent": literal, "agree": implemented == literal}


def _gauss_rule(h: float, order: int):
    """Gauss-Legendre nodes on ``[0, h]`` with averaging weights summing to 1."""
    x, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * h * (x + 1.0), 0.5 * w


def _steklov_symbol_quadrature(mu: np.ndarray, r: int, s: float, order: int) -> np.ndarray:
    # the tensor rule on [0, h]^r applied to exp(i k mu (t_1 + ... + t_r))
    # factors into the r-th power of the one-axis rule
    nodes, weights = _gauss_rule(s / r, order)
    out = np.zeros(mu.size, dtype=complex)
    for k in range(1, r + 1):
        avg = np.exp(1j * k * np.outer(mu, nodes)) @ weights
        out += (-1) ** k * comb(r, k) * avg**r
    return out


def _steklov_symbol_closed(mu: np.ndarray, r: int, s: float) -> np.ndarray:
    out = np.zeros(mu.size, dtype=complex)
    h = s / r
    for k in range(1, r + 1):
        x = 1j * k * mu * h
        safe = np.where(x == 0, 1.0, x)
        avg = np.where(x == 0, 1.0, np.expm1(safe) / safe)
        out += (-1) ** k * comb(r, k) * avg**r
    return out


def hardy_steklov(
    model: SpectralModel,
    cache: GroupCache,
    r: int,
    s: float,
    f,
    quadrature_order: int = 16,
    method: str = "quadrature",
) -> np.ndarray:
    """
    Hardy-Steklov operator ``H_r(s) f = H_{1,r}(s) ... H_{d,r}(s) f``.

    ``method="quadrature"`` integrates each factor with a tensor Gauss-Legendre
    rule of the given order per axis. ``method="multiplier"`` uses the closed
    form of the averages and needs every generator to be diagonal in the
    eigenbasis (the circle).
    """
    model.require_groups()
    f = model.vector(f)
    if r < 1 or s <= 0:
        raise DomainError("Hardy-Steklov operator needs r >= 1 and s > 0")
    d = cache.d
    if method == "quadrature":
        _check_order(r, d)
        if quadrature_order < 2:
            raise DomainError("quadrature order must be at least 2")
        symbol = lambda mu: _steklov_symbol_quadrature(mu, r, s, quadrature_order)
    elif method == "multiplier":
        if not all(cache.diagonal):
            raise CapabilityError("closed-form multiplier needs diagonal generators")
        symbol = lambda mu: _steklov_symbol_closed(mu, r, s)
    else:
        raise ValueError(f"unknown method {method!r}")
    g = f[None, :]
    for j in reversed(range(d)):
        g = _apply_diag_rows(cache, j, g, symbol(cache.mu[j]))
    return g[0]


# --- K-functional ----------------------------------------------------------

@dataclass(frozen=True)
class KBracket:
    lower: float
    upper: float
    t: float
    r: float

    @property
    def mid(self) -> float:
        return 0.5 * (self.lower + self.upper)


_BETAS = np.logspace(-8, 8, 401)


def k_functional_pair(model: SpectralModel, t: float, f, k1: float, k2: float) -> KBracket:
    """
    Bracket for ``K(t, f; H^{k1}, H^{k2}) = inf ||f - g||_{k1} + t ||g||_{k2}``.

    The lower end is the quadratic functional ``(inf ||f-g||^2 + t^2 ||g||^2)^{1/2}``
    in closed form; the upper end evaluates the exact objective along the
    family of its minimizers, which traces the whole Pareto front.
    """
    if t <= 0:
        raise DomainError(f"t must be positive, got {t}")
    f = model.vector(f)
    a = hilbert_scale(model, k1) ** 2
    b = hilbert_scale(model, k2) ** 2
    c2 = np.abs(f) ** 2
    lower = float(np.sqrt(np.sum(c2 * a * t * t * b / (a + t * t * b))))
    betas = np.concatenate([_BETAS, [t * t]])
    shrink = a[None, :] / (a[None, :] + betas[:, None] * b[None, :])
    resid = np.sqrt(((1 - shrink) ** 2 * c2 * a).sum(axis=1))
    kept = np.sqrt((shrink**2 * c2 * b).sum(axis=1))
    candidates = np.concatenate([resid + t * kept, [np.sqrt(np.sum(c2 * a)), t * np.sqrt(np.sum(c2 * b))]])
    upper = float(candidates.min())
    upper = max(upper, lower)
    return KBracket(lower=lower, upper=upper, t=float(t), r=float(k2 - k1))


def k_functional(model: SpectralModel, t: float, f, r: float) -> KBracket:
    """Bracket for the K-functional of the pair ``(H, H^r)``; ``lower <= K <= upper <= sqrt(2) lower``."""
    if r <= 0:
        raise DomainError(f"r must be positive, got {r}")
    return k_functional_pair(model, t, f, 0.0, r)


# --- equivalence and inequality reports ------------------------------------

@dataclass
class ModulusKReport:
    r: int
    rows: list = field(default_factory=list)  # (s, omega_r, k_lower, k_upper, bound_rhs)
    c_hat: float | None = None
    C_hat: float | None = None
    degenerate: bool = False

    @property
    def ok(self) -> bool:
        if self.degenerate:
            return True
        return all(
            v is not None and np.isfinite(v) and v > 0 for v in (self.c_hat, self.C_hat)
        )


def modulus_k_equivalence(
    model: SpectralModel,
    cache: GroupCache,
    r: int,
    f,
    s_list,
    grid: ModulusGrid = ModulusGrid(),
) -> ModulusKReport:
    """
    Compare ``Omega^r(s, f)`` with ``K(s^r, f; H, H^r)``.

    ``c_hat = min_s K_lower / Omega`` and
    ``C_hat = max_s K_upper / (Omega + min(s^r, 1) ||f||)``.
    """
    model.require_groups()
    f = model.vector(f)
    report = ModulusKReport(r=r)
    nf = norm(f)
    lows, highs = [], []
    for s in s_list:
        om = mixed_modulus(model, cache, r, s, f, grid)
        kb = k_functional(model, s**r, f, r)
        rhs = om + min(s**r, 1.0) * nf
        report.rows.append((float(s), om, kb.lower, kb.upper, rhs))
        if om > 0:
            lows.append(kb.lower / om)
        if rhs > 0:
            highs.append(kb.upper / rhs)
    if nf == 0:
        report.degenerate = True
        return report
    report.c_hat = min(lows) if lows else None
    report.C_hat = max(highs) if highs else None
    return report


@dataclass
class ModulusInequalityReport:
    m: int
    k: int
    a: float
    s: float
    lhs: float
    derivative_rhs: float
    derivative_constant: float
    dilated: float
    dilation_rhs: float
    derivative_holds: bool
    dilation_holds: bool


def modulus_inequalities_check(
    model: SpectralModel,
    cache: GroupCache,
    f,
    m: int,
    k: int,
    a: float,
    s: float,
    grid: ModulusGrid = ModulusGrid(),
    commuting_tol: float = 1e-12,
) -> ModulusInequalityReport:
    """
    Check ``Omega^m(s,f) <= C s^k sum_tuples Omega^{m-k}(s, D_tuple f)`` and
    ``Omega^m(a s, f) <= (1+a)^m Omega^m(s, f)``.

    With commuting generators the first inequality holds with ``C = 1`` even
    on the discrete grid; otherwise the fitted constant is only reported.
    """
    if not 0 <= k <= m:
        raise DomainError("need 0 <= k <= m")
    f = model.vector(f)
    d = cache.d
    lhs = mixed_modulus(model, cache, m, s, f, grid)
    rhs = 0.0
    for tup in itertools.product(range(d), repeat=k):
        rhs += mixed_modulus(model, cache, m - k, s, derivative_tuple(model, tup, f), grid)
    rhs *= s**k
    const = lhs / rhs if rhs > 0 else (0.0 if lhs == 0 else np.inf)
    commuting = all(cache.diagonal)
    dilated = mixed_modulus(model, cache, m, a * s, f, grid)
    dil_rhs = (1 + a) ** m * lhs
    return ModulusInequalityReport(
        m=m,
        k=k,
        a=a,
        s=s,
        lhs=lhs,
        derivative_rhs=rhs,
        derivative_constant=float(const),
        dilated=dilated,
        dilation_rhs=dil_rhs,
        derivative_holds=bool(const <= 1 + commuting_tol) if commuting else bool(np.isfinite(const)),
        dilation_holds=bool(dilated <= dil_rhs * (1 + 1e-3) + 1e-15),
    )
