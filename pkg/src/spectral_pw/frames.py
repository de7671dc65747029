"""
Sampling functionals, Paley-Wiener frames and the nearly Parseval frame
assembled from a quadratic partition of unity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .config import SVD_ATOM_LIMIT, TOL
from .core import SpectralModel, apply_multiplier
from .errors import CapabilityError, DomainError, PreconditionError, SizeError, SpectralError
from .models import circle_basis, sphere_basis
from .partition import PartitionOfUnity, check_coverage
from .rng import random_ensemble

# order above which point evaluations are bounded functionals (Sobolev embedding)
M0 = {"circle": 1.0, "sphere": 1.5, "graph": 0.0}
MAX_NODES = 200_000


@dataclass(frozen=True)
class SamplingSet:
    """
    Node functionals ``A_k f = sqrt(w_k) f(x_k)``.

    ``mu[k]`` is the Riesz representer: ``A_k f = <f, mu[k]>``.
    """

    rho: float
    points: np.ndarray
    weights: np.ndarray
    mu: np.ndarray  # (M, dim)

    @property
    def size(self) -> int:
        return len(self.weights)

    def analysis(self, f) -> np.ndarray:
        return self.mu.conj() @ f


def _from_eval(rho, points, weights, E) -> SamplingSet:
    mu = np.sqrt(weights)[:, None] * E.T.conj()
    return SamplingSet(float(rho), np.asarray(points), np.asarray(weights, dtype=float), mu)


def _nodes_for(length: float, rho: float) -> int:
    # tolerate roundoff in length/rho landing just above an integer
    return max(1, math.ceil(length / rho - 1e-9))


def build_sampling_set(model: SpectralModel, rho: float) -> SamplingSet:
    """
    Product-grid node set with mesh parameter ``rho``.

    circle: ``ceil(2 pi / rho)`` equispaced nodes; sphere: Gauss-Legendre order
    ``ceil(pi / rho)`` times ``ceil(2 pi / rho)`` longitudes; graph: every
    vertex with unit weight (``rho`` is reported as 1).
    """
    model.require_nodes()
    if rho <= 0:
        raise DomainError("rho must be positive")
    kind = model.kind
    if kind == "circle":
        M = _nodes_for(2 * np.pi, rho)
        if M > MAX_NODES:
            raise SizeError(f"rho={rho:g} needs {M} nodes")
        theta = 2 * np.pi * np.arange(M) / M
        return _from_eval(rho, theta, np.full(M, 2 * np.pi / M), circle_basis(model.meta["N"], theta))
    if kind == "sphere":
        n_lat, n_lon = _nodes_for(np.pi, rho), _nodes_for(2 * np.pi, rho)
        if n_lat * n_lon > MAX_NODES:
            raise SizeError(f"rho={rho:g} needs {n_lat * n_lon} nodes")
        x, wx = np.polynomial.legendre.leggauss(n_lat)
        T, F = np.meshgrid(np.arccos(x), 2 * np.pi * np.arange(n_lon) / n_lon, indexing="ij")
        W = np.outer(wx, np.full(n_lon, 2 * np.pi / n_lon)).ravel()
        E = sphere_basis(model.meta["N"], T.ravel(), F.ravel())
        return _from_eval(rho, np.column_stack([T.ravel(), F.ravel()]), W, E)
    nd = model.node_data
    return _from_eval(1.0 if kind == "graph" else rho, nd.points, nd.weights, nd.eval_matrix)


def sampling_set_from_model(model: SpectralModel, rho: float = float("nan")) -> SamplingSet:
    """Use the node data stored on the model as the sampling set."""
    model.require_nodes()
    nd = model.node_data
    return _from_eval(rho, nd.points, nd.weights, nd.eval_matrix)


def sampling_set_from_nodes(model: SpectralModel, points, weights, rho: float = float("nan")) -> SamplingSet:
    """Explicit nodes for models with an analytic basis (circle angles or sphere (theta, phi))."""
    weights = np.asarray(weights, dtype=float)
    if model.kind == "circle":
        E = circle_basis(model.meta["N"], points)
    elif model.kind == "sphere":
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        E = sphere_basis(model.meta["N"], pts[:, 0], pts[:, 1])
    else:
        raise CapabilityError(f"model kind {model.kind!r} has no analytic basis")
    return _from_eval(rho, points, weights, E)


# --- Poincare calibration -----------------------------------------------------

@dataclass
class PoincareReport:
    c_hat: float
    C_hat: float
    m: float
    rho: float
    trials: int
    failed: bool


def smoothness_threshold(model: SpectralModel) -> float:
    return M0.get(model.kind, 0.0)


def poincare_ensemble(model: SpectralModel, m: float, trials: int, seed: int, band: float | None = None):
    """Random vectors with coefficients damped by ``(1 + lam^2)^{-m/2}``, plus every single mode."""
    lam = model.sqrt_eigenvalues
    inside = lam <= band if band is not None else np.ones(model.dim, dtype=bool)
    Z = random_ensemble(seed, trials, model.dim) * (1.0 + lam**2) ** (-m / 2.0)
    Z = Z * inside
    modes = np.eye(model.dim, dtype=complex)[inside]
    ens = np.vstack([modes, Z])
    return ens[np.linalg.norm(ens, axis=1) > 0]


def poincare_calibrate(
    model: SpectralModel,
    sset: SamplingSet,
    m: float,
    trials: int,
    seed: int = 0,
    band: float | None = None,
) -> PoincareReport:
    """
    Empirical constants in ``c sum|A_k f|^2 <= ||f||^2 <= C (sum|A_k f|^2 + rho^{2m} ||L^{m/2} f||^2)``.

    ``c_hat`` is the largest and ``C_hat`` the smallest constant consistent
    with the ensemble; ``band`` restricts the ensemble to ``PW_band``.
    """
    if trials < 10:
        raise DomainError("need at least 10 trials")
    m0 = smoothness_threshold(model)
    if not m > m0:
        raise PreconditionError(f"smoothness m={m} must exceed {m0} for this model")
    ens = poincare_ensemble(model, m, trials, seed, band)
    samples = np.sum(np.abs(ens @ sset.mu.conj().T) ** 2, axis=1)
    energy = np.sum(np.abs(ens) ** 2, axis=1)
    rho = sset.rho if np.isfinite(sset.rho) else 0.0
    remainder = rho ** (2 * m) * np.sum(np.abs(ens * model.sqrt_eigenvalues**m) ** 2, axis=1)
    pos = samples > 0
    c_hat = float(np.min(energy[pos] / samples[pos])) if pos.any() else float("inf")
    denom = samples + remainder
    C_hat = float(np.max(np.divide(energy, denom, out=np.full_like(energy, np.inf), where=denom > 0)))
    failed = not (np.isfinite(C_hat) and 0 < c_hat <= C_hat * (1 + 1e-12))
    return PoincareReport(c_hat, C_hat, float(m), float(sset.rho), int(trials), failed)


def calibrate_constant(model: SpectralModel, m: float, rhos, trials: int = 64, seed: int = 0) -> float:
    """Largest ``C_hat`` over several node densities (the constant must not depend on rho)."""
    C = 0.0
    for rho in rhos:
        rep = poincare_calibrate(model, build_sampling_set(model, rho), m, trials, seed)
        if rep.failed:
            raise SpectralError(f"Poincare calibration failed at rho={rho}")
        C = max(C, rep.C_hat)
    return C


def required_rho(C: float, omega: float, delta: float, m: float) -> float:
    """``rho`` with ``rho^{2m} = delta / (C omega^{2m})``."""
    return (delta / C) ** (1.0 / (2 * m)) / omega


def effective_band(model: SpectralModel, omega: float) -> float:
    """Largest eigenvalue of ``sqrt(L)`` not exceeding ``omega``: ``PW_omega`` equals ``PW`` of it."""
    lam = model.sqrt_eigenvalues
    inside = lam[lam <= omega]
    return float(inside[-1]) if inside.size else 0.0


# --- frame bounds --------------------------------------------------------

def _cg(apply_S, B, tol=TOL.cg_residual, maxiter=None):
    """Independent conjugate-gradient solves ``S X = B`` for every column of ``B``."""
    n, k = B.shape
    maxiter = maxiter or 10 * n
    X = np.zeros_like(B)
    R = B.copy()
    P = R.copy()
    rs = np.sum(np.abs(R) ** 2, axis=0)
    bnorm = np.sqrt(rs)
    bnorm[bnorm == 0] = 1.0
    for _ in range(maxiter):
        active = np.sqrt(rs) > tol * bnorm
        if not active.any():
            break
        SP = apply_S(P)
        pSp = np.real(np.sum(P.conj() * SP, axis=0))
        alpha = np.where(active, rs / np.where(active, pSp, 1.0), 0.0)
        X += alpha * P
        R -= alpha * SP
        rs_new = np.sum(np.abs(R) ** 2, axis=0)
        beta = np.where(active, rs_new / np.where(active, rs, 1.0), 0.0)
        P = R + beta * P
        rs = rs_new
    else:
        raise RuntimeError("conjugate gradient did not converge")
    return X


def _power_extremes(apply_S, dim: int, iters: int = 500, tol: float = 1e-10):
    """Largest and smallest eigenvalue of a positive semidefinite ``S`` by power and inverse power iteration."""
    v = np.ones((dim, 1), dtype=complex) / np.sqrt(dim)
    top = 0.0
    for _ in range(iters):
        w = apply_S(v)
        new = float(np.linalg.norm(w))
        v = w / new
        if abs(new - top) <= tol * new:
            break
        top = new
    v = np.ones((dim, 1), dtype=complex) / np.sqrt(dim)
    low = np.inf
    for _ in range(iters):
        try:
            w = _cg(apply_S, v, tol=1e-13)
        except RuntimeError:
            return top, 0.0
        inv = float(np.linalg.norm(w))
        v = w / inv
        if abs(1 / inv - low) <= tol / inv:
            low = 1 / inv
            break
        low = 1 / inv
    return top, low


def analysis_bounds(atoms: np.ndarray, columns=None) -> tuple:
    """
    Frame bounds ``(A, B)`` of the rows of ``atoms`` on the coordinate
    subspace ``columns`` (default: the whole space).
    """
    T = atoms.conj()
    if columns is not None:
        T = T[:, columns]
    k, n = T.shape
    if n == 0:
        return 1.0, 1.0
    if k <= SVD_ATOM_LIMIT:
        sv = np.linalg.svd(T, compute_uv=False)
        sq = sv**2
        A = float(sq.min()) if k >= n else 0.0
        return A, float(sq.max())
    apply_S = lambda X: T.conj().T @ (T @ X)
    B, A = _power_extremes(apply_S, n)
    return A, B


@dataclass
class PWFrame:
    atoms: np.ndarray  # (M, dim)
    omega: float
    bounds: tuple
    rho: float
    rho_required: float | None = None
    warnings: list = field(default_factory=list)

    @property
    def is_frame(self) -> bool:
        return self.bounds[0] > 0


def pw_frame(
    model: SpectralModel,
    sset: SamplingSet,
    omega: float,
    delta: float,
    C: float | None = None,
    m: float | None = None,
) -> PWFrame:
    """
    ``phi_k = P_omega mu_k`` and its frame bounds on ``PW_omega``.

    If ``C`` and ``m`` are given, the node set is checked against the
    required mesh parameter and a warning is recorded when it is more than 10%
    too coarse.
    """
    if not 0 < delta < 1:
        raise DomainError("delta must lie in (0, 1)")
    band = model.sqrt_eigenvalues <= omega
    atoms = np.where(band[None, :], sset.mu, 0.0)
    A, B = analysis_bounds(atoms, np.flatnonzero(band))
    frame = PWFrame(atoms, float(omega), (A, B), sset.rho)
    if C is not None and m is not None:
        w_eff = effective_band(model, omega)
        if w_eff > 0:
            need = required_rho(C, w_eff, delta, m)
            frame.rho_required = need
            if np.isfinite(sset.rho) and sset.rho > 1.1 * need:
                frame.warnings.append(f"rho={sset.rho:.4g} exceeds the required {need:.4g} by more than 10%")
    if A <= 0:
        frame.warnings.append("analysis map is rank deficient on PW_omega: not a frame")
    return frame


# --- full frame system -----------------------------------------------------

@dataclass
class FrameSystem:
    atoms: np.ndarray  # (K, dim) rows Phi_k^j
    labels: list  # [(j, k)]
    bands: dict  # j -> (lo, hi)
    delta: float
    bounds: tuple
    dual: np.ndarray | None = None
    dual_bounds: tuple | None = None
    meta: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def dim(self) -> int:
        return self.atoms.shape[1]

    def analysis(self, f) -> np.ndarray:
        """``<f, Phi_k^j>`` in label order; ``f`` may be a batch of rows."""
        return np.asarray(f) @ self.atoms.conj().T

    def dual_analysis(self, f) -> np.ndarray:
        if self.dual is None:
            raise SpectralError("dual frame not computed")
        return np.asarray(f) @ self.dual.conj().T

    def frame_operator(self, X: np.ndarray) -> np.ndarray:
        """``S X = sum <X, Phi> Phi`` on columns of ``X``."""
        return self.atoms.T @ (self.atoms.conj() @ X)

    def band_slices(self) -> dict:
        out = {}
        for idx, (j, _) in enumerate(self.labels):
            out.setdefault(j, []).append(idx)
        return {j: np.array(v) for j, v in out.items()}


def build_frame_system(
    model: SpectralModel,
    pou: PartitionOfUnity,
    delta: float,
    m: float,
    C: float,
) -> FrameSystem:
    """
    Nearly Parseval frame ``Phi_k^j = F_j(sqrt(L)) phi_k^j``.

    For each level ``j`` the node set is chosen from the mesh condition at
    ``omega = 2^{j+1}`` (capped at the top of the spectrum inside that band),
    and ``phi_k^j`` are the projected node representers.
    """
    check_coverage(model, pou)
    if not 0 < delta < 1:
        raise DomainError("delta must lie in (0, 1)")
    blocks, labels, bands, per_level = [], [], {}, {}
    for j in range(pou.J_max + 1):
        omega = 2.0 ** (j + 1)
        w_eff = effective_band(model, omega)
        rho = required_rho(C, w_eff, delta, m) if w_eff > 0 else 1.0
        sset = build_sampling_set(model, rho)
        pw = pw_frame(model, sset, omega, delta, C, m)
        if not pw.is_frame:
            raise SpectralError(f"sampling frame at level j={j} is rank deficient")
        atoms = apply_multiplier(model, lambda lam, j=j: pou.F(j, lam), pw.atoms)
        keep = np.flatnonzero(np.any(atoms != 0, axis=1))
        blocks.append(atoms[keep])
        labels += [(j, int(k)) for k in keep]
        bands[j] = pou.support(j)
        per_level[j] = {"omega": omega, "rho": sset.rho, "nodes": sset.size, "bounds": pw.bounds}
    atoms = np.vstack(blocks)
    A, B = analysis_bounds(atoms)
    return FrameSystem(atoms, labels, bands, float(delta), (A, B), meta={"levels": per_level, "m": m, "C": C})


def dual_frame(system: FrameSystem) -> FrameSystem:
    """Canonical dual ``Psi = S^{-1} Phi`` by conjugate gradients."""
    if system.bounds[0] <= 0:
        raise SpectralError("frame operator is not invertible (lower bound is zero)")
    dual = _cg(system.frame_operator, system.atoms.T.copy()).T
    dual_bounds = analysis_bounds(dual)
    return replace(system, dual=dual, dual_bounds=dual_bounds)


def reconstruct(system: FrameSystem, coefficients) -> np.ndarray:
    """``sum_{j,k} c_{jk} Psi_k^j``; ``coefficients`` is an array in label order or a mapping."""
    if system.dual is None:
        raise SpectralError("dual frame missing; call dual_frame first")
    if isinstance(coefficients, dict):
        c = np.zeros(system.size, dtype=complex)
        pos = {lab: i for i, lab in enumerate(system.labels)}
        for lab, val in coefficients.items():
            c[pos[tuple(lab)]] = val
    else:
        c = np.asarray(coefficients, dtype=complex)
    return c @ system.dual


# --- serialization ----------------------------------------------------------

def _sparse(row: np.ndarray) -> dict:
    idx = np.flatnonzero(row)
    return {"idx": idx.tolist(), "values": [[float(z.real), float(z.imag)] for z in row[idx]]}


def frame_to_dict(system: FrameSystem) -> dict:
    return {
        "delta": system.delta,
        "dim": system.dim,
        "bands": [[j, lo, hi] for j, (lo, hi) in sorted(system.bands.items())],
        "bounds": list(system.bounds),
        "atoms": [{"j": j, "k": k, **_sparse(row)} for (j, k), row in zip(system.labels, system.atoms)],
    }


def frame_from_dict(doc: dict) -> FrameSystem:
    dim = int(doc["dim"])
    atoms = np.zeros((len(doc["atoms"]), dim), dtype=complex)
    labels = []
    for i, a in enumerate(doc["atoms"]):
        vals = np.asarray(a["values"], dtype=float).reshape(-1, 2)
        atoms[i, a["idx"]] = vals[:, 0] + 1j * vals[:, 1]
        labels.append((int(a["j"]), int(a["k"])))
    bands = {int(j): (lo, hi) for j, lo, hi in doc["bands"]}
    return FrameSystem(atoms, labels, bands, float(doc["delta"]), tuple(doc["bounds"]))
