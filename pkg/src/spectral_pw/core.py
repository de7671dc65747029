"""
Finite spectral models of a Hilbert space.

A model stores everything in the eigenbasis of ``L``: a vector is simply its
coefficient array, so the spectral Fourier transform is the identity on the
stored data. Functions of ``sqrt(L)`` act diagonally.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .config import TOL
from .errors import CapabilityError, DomainError, PreconditionError, SpectralError


@dataclass(frozen=True)
class NodeData:
    """Point-evaluation data: column ``k`` of ``eval_matrix`` holds the basis values at node ``k``."""

    points: np.ndarray
    weights: np.ndarray
    eval_matrix: np.ndarray

    def __post_init__(self):
        if np.any(self.weights <= 0):
            raise SpectralError("node weights must be positive")
        if self.eval_matrix.shape[1] != len(self.weights):
            raise SpectralError("eval_matrix must have one column per node")

    @property
    def size(self) -> int:
        return len(self.weights)


@dataclass(frozen=True, eq=False)
class SpectralModel:
    """
    Truncated Hilbert space presented in the eigenbasis of ``sqrt(L)``.

    Parameters
    ----------
    sqrt_eigenvalues : array_like
        Nondecreasing spectrum of ``sqrt(L)``.
    generators : sequence of (n, n) arrays, optional
        Skew-Hermitian ``D_j`` with ``L = -sum_j D_j^2``.
    node_data : NodeData, optional
        Basis values at sampling nodes.
    meta : dict
        Free-form description (``kind`` and builder parameters).
    """

    sqrt_eigenvalues: np.ndarray
    generators: tuple | None = None
    node_data: NodeData | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        lam = np.asarray(self.sqrt_eigenvalues, dtype=float)
        if lam.ndim != 1 or lam.size == 0:
            raise SpectralError("sqrt_eigenvalues must be a nonempty 1-d sequence")
        if np.any(lam < 0) or np.any(np.diff(lam) < 0):
            raise SpectralError("sqrt_eigenvalues must be nonnegative and sorted ascending")
        lam.setflags(write=False)
        object.__setattr__(self, "sqrt_eigenvalues", lam)
        if self.generators is not None:
            gens = tuple(np.array(D, dtype=complex) for D in self.generators)
            n = lam.size
            casimir = np.zeros((n, n), dtype=complex)
            for D in gens:
                if D.shape != (n, n):
                    raise SpectralError("generator shape does not match dim")
                scale = max(1.0, np.abs(D).max())
                if np.abs(D + D.conj().T).max() > TOL.skew * scale:
                    raise SpectralError("generators must be skew-Hermitian")
                D.setflags(write=False)
                casimir -= D @ D
            target = np.diag(lam**2)
            scale = max(1.0, np.abs(target).max())
            if np.abs(casimir - target).max() > TOL.casimir * scale:
                raise SpectralError("-sum D_j^2 does not match diag(sqrt_eigenvalues^2)")
            object.__setattr__(self, "generators", gens)
        if self.node_data is not None and self.node_data.eval_matrix.shape[0] != lam.size:
            raise SpectralError("eval_matrix must have dim rows")

    @property
    def dim(self) -> int:
        return self.sqrt_eigenvalues.size

    @property
    def has_groups(self) -> bool:
        return self.generators is not None and len(self.generators) > 0

    @property
    def has_nodes(self) -> bool:
        return self.node_data is not None

    @property
    def capabilities(self) -> set[str]:
        caps = set()
        if self.has_groups:
            caps.add("has_groups")
        if self.has_nodes:
            caps.add("has_nodes")
        return caps

    @property
    def n_generators(self) -> int:
        return len(self.generators) if self.has_groups else 0

    @property
    def kind(self) -> str:
        return self.meta.get("kind", "generic")

    def require_groups(self):
        if not self.has_groups:
            raise CapabilityError("model has no generators")

    def require_nodes(self):
        if not self.has_nodes:
            raise CapabilityError("model has no node data")

    def vector(self, coeffs) -> np.ndarray:
        f = np.asarray(coeffs, dtype=complex)
        if f.shape[-1] != self.dim:
            raise SpectralError(f"expected {self.dim} coefficients, got {f.shape[-1]}")
        return f

    def mode(self, i: int) -> np.ndarray:
        e = np.zeros(self.dim, dtype=complex)
        e[i] = 1.0
        return e


def inner(f, g) -> complex:
    """``<f, g>``, linear in the first slot."""
    return complex(np.vdot(g, f))


def norm(f) -> float:
    return float(np.linalg.norm(f))


def hilbert_scale(model: SpectralModel, r: float) -> np.ndarray:
    """Diagonal of ``Lambda^{r/2}`` with ``Lambda = I + L``."""
    if r < 0:
        raise DomainError(f"smoothness order must be nonnegative, got {r}")
    return (1.0 + model.sqrt_eigenvalues**2) ** (r / 2.0)


def _evaluate(F: Callable, lam: np.ndarray) -> np.ndarray:
    try:
        vals = np.asarray(F(lam), dtype=complex)
    except TypeError:
        vals = None
    if vals is None or vals.shape != lam.shape:
        vals = np.array([complex(F(x)) for x in lam])
    return vals


def apply_multiplier(model: SpectralModel, F: Callable, f) -> np.ndarray:
    """Return ``F(sqrt(L)) f``."""
    f = model.vector(f)
    vals = _evaluate(F, model.sqrt_eigenvalues)
    bad = ~np.isfinite(vals)
    if bad.any():
        lam = model.sqrt_eigenvalues[np.argmax(bad)]
        raise DomainError(f"multiplier is not finite at eigenvalue {lam!r}")
    return vals * f


def pw_project(model: SpectralModel, omega: float, f) -> np.ndarray:
    """Orthogonal projection onto the Paley-Wiener space ``PW_omega``."""
    if not omega > 0:
        raise DomainError(f"bandwidth must be positive, got {omega}")
    f = model.vector(f)
    return np.where(model.sqrt_eigenvalues <= omega, f, 0.0)


def in_paley_wiener(model: SpectralModel, omega: float, f, tol: float = TOL.pw_membership) -> bool:
    f = model.vector(f)
    return norm(f - pw_project(model, omega, f)) <= tol * max(norm(f), 1.0)


def sobolev_norm(model: SpectralModel, r: float, f) -> float:
    """``||Lambda^{r/2} f||``."""
    f = model.vector(f)
    return norm(hilbert_scale(model, r) * f)


def laplace_power_norm(model: SpectralModel, s: float, f) -> float:
    """``||L^{s/2} f||``; ``L^0`` is the identity."""
    f = model.vector(f)
    if s == 0:
        return norm(f)
    return norm(model.sqrt_eigenvalues**s * f)


def best_approx_error(model: SpectralModel, omega: float, f) -> float:
    """Distance from ``f`` to ``PW_omega``."""
    f = model.vector(f)
    return norm(f - pw_project(model, omega, f))


@dataclass
class BernsteinReport:
    omega: float
    ratios: dict
    passed: bool
    extremal: bool


def bernstein_verify(model: SpectralModel, omega: float, f, s_list: Sequence[float]) -> BernsteinReport:
    """
    Check ``||L^{s/2} f|| <= omega^s ||f||`` for ``f`` in ``PW_omega``.

    Ratios are ``||L^{s/2} f|| / (omega^s ||f||)``; they equal 1 exactly when
    all of the spectral mass sits at ``omega``.
    """
    f = model.vector(f)
    if not in_paley_wiener(model, omega, f):
        raise PreconditionError(f"vector is not band-limited to {omega}")
    nf = norm(f)
    ratios = {}
    for s in s_list:
        ratios[float(s)] = 0.0 if nf == 0 else laplace_power_norm(model, s, f) / (omega**s * nf)
    support = model.sqrt_eigenvalues[np.abs(f) > 0]
    extremal = nf > 0 and bool(np.all(np.isclose(support, omega)))
    passed = all(v <= 1 + 1e-12 for v in ratios.values())
    return BernsteinReport(omega=omega, ratios=ratios, passed=passed, extremal=extremal)


def riesz_boas_multiplier(omega: float, K: int) -> Callable:
    """Scalar symbol of the truncated Riesz-Boas series, ``|k| <= K``."""
    if K <= 0:
        raise DomainError(f"truncation K must be positive, got {K}")
    k = np.arange(-K, K + 1, dtype=float)
    shifts = k - 0.5
    coeffs = (omega / np.pi**2) * np.where(k % 2 == 0, -1.0, 1.0) / shifts**2
    steps = (np.pi / omega) * shifts

    def F(lam):
        lam = np.atleast_1d(np.asarray(lam, dtype=float))
        # summed from the smallest terms up to limit rounding
        order = np.argsort(-np.abs(shifts))
        phase = np.exp(1j * np.outer(lam, steps[order]))
        return phase @ coeffs[order]

    return F


def riesz_boas_apply(model: SpectralModel, omega: float, f, K: int):
    """
    Truncated Riesz-Boas series for ``i sqrt(L) f``.

    Returns
    -------
    g : ndarray
        Partial sum over ``|k| <= K``.
    error : float
        ``||g - i sqrt(L) f||`` against the exact multiplier.
    """
    f = model.vector(f)
    if not in_paley_wiener(model, omega, f):
        raise PreconditionError(f"vector is not band-limited to {omega}")
    g = apply_multiplier(model, riesz_boas_multiplier(omega, K), f)
    exact = apply_multiplier(model, lambda lam: 1j * lam, f)
    return g, norm(g - exact)


# --- serialization -------------------------------------------------------

def _pairs(a: np.ndarray) -> list:
    a = np.asarray(a, dtype=complex).ravel()
    return [[float(z.real), float(z.imag)] for z in a]


def _from_pairs(pairs, shape) -> np.ndarray:
    arr = np.asarray(pairs, dtype=float)
    return (arr[:, 0] + 1j * arr[:, 1]).reshape(shape)


def model_to_dict(model: SpectralModel) -> dict:
    doc = {"dim": model.dim, "sqrt_eigenvalues": [float(x) for x in model.sqrt_eigenvalues]}
    if model.has_groups:
        doc["generators"] = [_pairs(D) for D in model.generators]
    if model.has_nodes:
        nd = model.node_data
        doc["nodes"] = {
            "points": np.asarray(nd.points).tolist(),
            "weights": [float(w) for w in nd.weights],
            "eval_matrix": _pairs(nd.eval_matrix),
        }
    if model.meta:
        doc["meta"] = model.meta
    return doc


def model_from_dict(doc: dict) -> SpectralModel:
    n = int(doc["dim"])
    lam = np.asarray(doc["sqrt_eigenvalues"], dtype=float)
    if lam.size != n:
        raise SpectralError("dim does not match sqrt_eigenvalues")
    gens = None
    if doc.get("generators"):
        gens = tuple(_from_pairs(g, (n, n)) for g in doc["generators"])
    nodes = None
    if doc.get("nodes"):
        nd = doc["nodes"]
        weights = np.asarray(nd["weights"], dtype=float)
        nodes = NodeData(
            points=np.asarray(nd["points"]),
            weights=weights,
            eval_matrix=_from_pairs(nd["eval_matrix"], (n, weights.size)),
        )
    return SpectralModel(lam, gens, nodes, dict(doc.get("meta", {})))


def save_model(model: SpectralModel, path) -> None:
    Path(path).write_text(json.dumps(model_to_dict(model)))


def load_model(path) -> SpectralModel:
    return model_from_dict(json.loads(Path(path).read_text()))
