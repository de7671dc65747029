"""Concrete spectral models: circle, 2-sphere and graph Laplacians."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import MAX_GRAPH_DIM
from .core import NodeData, SpectralModel
from .errors import CapabilityError, SizeError, SpectralError, UndersampledError
from .jacobi import jacobi_eigh


@dataclass(frozen=True)
class CircleSpec:
    N: int
    M_nodes: int | None = None


@dataclass(frozen=True)
class SphereSpec:
    N: int
    grid: tuple | None = None  # (n_lat, n_lon)


@dataclass(frozen=True)
class GraphSpec:
    laplacian: np.ndarray


# --- circle ----------------------------------------------------------------

def circle_modes(N: int) -> np.ndarray:
    """Fourier indices ordered by ``|n|``: 0, -1, 1, -2, 2, ..."""
    modes = [0]
    for k in range(1, N + 1):
        modes += [-k, k]
    return np.array(modes)


def circle_basis(N: int, theta) -> np.ndarray:
    """Values of ``e^{in theta}/sqrt(2 pi)``; shape ``(2N+1, len(theta))``."""
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    return np.exp(1j * np.outer(circle_modes(N), theta)) / np.sqrt(2 * np.pi)


def circle_nodes(N: int, M: int) -> NodeData:
    theta = 2 * np.pi * np.arange(M) / M
    return NodeData(theta, np.full(M, 2 * np.pi / M), circle_basis(N, theta))


def build_circle_model(spec: CircleSpec) -> SpectralModel:
    N = spec.N
    if N < 1:
        raise SpectralError("circle model needs N >= 1")
    M = spec.M_nodes if spec.M_nodes is not None else 2 * N + 1
    if M < 2 * N + 1:
        raise UndersampledError(f"undersampled model: {M} nodes cannot resolve degree {N}")
    modes = circle_modes(N)
    D = np.diag(1j * modes.astype(float))
    return SpectralModel(
        np.abs(modes).astype(float),
        (D,),
        circle_nodes(N, M),
        {"kind": "circle", "N": N, "M_nodes": M},
    )


# --- sphere ----------------------------------------------------------------

def sphere_index(N: int):
    """``(n, m)`` labels in storage order: degree-major, ``m = -n..n``."""
    return [(n, m) for n in range(N + 1) for m in range(-n, n + 1)]


def normalized_legendre(N: int, x) -> np.ndarray:
    """
    Orthonormal associated Legendre functions with Condon-Shortley phase.

    Returns ``P[n, m, :]`` for ``0 <= m <= n <= N`` such that
    ``P[n, m] * exp(i m phi)`` is orthonormal on the unit sphere.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    sin = np.sqrt(np.clip(1.0 - x * x, 0.0, None))
    P = np.zeros((N + 1, N + 1, x.size))
    P[0, 0] = 1.0 / np.sqrt(4 * np.pi)
    for m in range(1, N + 1):
        P[m, m] = -np.sqrt((2 * m + 1) / (2.0 * m)) * sin * P[m - 1, m - 1]
    for m in range(N):
        P[m + 1, m] = np.sqrt(2 * m + 3.0) * x * P[m, m]
    for m in range(N + 1):
        for n in range(m + 2, N + 1):
            a = np.sqrt((4.0 * n * n - 1) / (n * n - m * m))
            b = np.sqrt(((n - 1.0) ** 2 - m * m) / (4.0 * (n - 1) ** 2 - 1))
            P[n, m] = a * (x * P[n - 1, m] - b * P[n - 2, m])
    return P


def sphere_basis(N: int, theta, phi) -> np.ndarray:
    """Complex ``Y_{n,m}(theta, phi)`` (colatitude, longitude); shape ``((N+1)^2, len)``."""
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    P = normalized_legendre(N, np.cos(theta))
    out = np.empty(((N + 1) ** 2, theta.size), dtype=complex)
    for row, (n, m) in enumerate(sphere_index(N)):
        am = abs(m)
        y = P[n, am] * np.exp(1j * am * phi)
        out[row] = y if m >= 0 else (-1) ** am * np.conj(y)
    return out


def sphere_nodes(N: int, n_lat: int, n_lon: int) -> NodeData:
    """Gauss-Legendre in ``cos(theta)`` times equispaced longitudes."""
    x, wx = np.polynomial.legendre.leggauss(n_lat)
    theta = np.arccos(x)
    phi = 2 * np.pi * np.arange(n_lon) / n_lon
    T, F = np.meshgrid(theta, phi, indexing="ij")
    W = np.outer(wx, np.full(n_lon, 2 * np.pi / n_lon))
    points = np.column_stack([T.ravel(), F.ravel()])
    return NodeData(points, W.ravel(), sphere_basis(N, T.ravel(), F.ravel()))


def angular_momentum(N: int):
    """``J_z, J_+, J_-`` on spherical harmonics of degree ``<= N``."""
    labels = sphere_index(N)
    pos = {lm: i for i, lm in enumerate(labels)}
    dim = len(labels)
    Jz = np.zeros((dim, dim))
    Jp = np.zeros((dim, dim))
    Jm = np.zeros((dim, dim))
    for i, (n, m) in enumerate(labels):
        Jz[i, i] = m
        if m < n:
            Jp[pos[(n, m + 1)], i] = np.sqrt(n * (n + 1) - m * (m + 1))
        if m > -n:
            Jm[pos[(n, m - 1)], i] = np.sqrt(n * (n + 1) - m * (m - 1))
    return Jz, Jp, Jm


def sphere_generators(N: int):
    """Skew-Hermitian rotation generators ``D_1, D_2, D_3``."""
    Jz, Jp, Jm = angular_momentum(N)
    D1 = 0.5j * (Jp + Jm)
    D2 = 0.5 * (Jp - Jm) + 0j
    D3 = 1j * Jz
    return D1, D2, D3


def build_sphere_model(spec: SphereSpec) -> SpectralModel:
    N = spec.N
    if N < 1:
        raise SpectralError("sphere model needs N >= 1")
    n_lat, n_lon = spec.grid if spec.grid is not None else (N + 1, 2 * N + 1)
    if n_lat < N + 1 or n_lon < 2 * N + 1:
        raise UndersampledError(
            f"undersampled model: grid ({n_lat}, {n_lon}) cannot resolve degree {N}"
        )
    lam = np.array([np.sqrt(n * (n + 1.0)) for n, _ in sphere_index(N)])
    return SpectralModel(
        lam,
        sphere_generators(N),
        sphere_nodes(N, n_lat, n_lon),
        {"kind": "sphere", "N": N, "grid": [n_lat, n_lon]},
    )


# --- graph -----------------------------------------------------------------

def build_graph_model(spec: GraphSpec) -> SpectralModel:
    Lg = np.asarray(spec.laplacian, dtype=float)
    if Lg.ndim != 2 or Lg.shape[0] != Lg.shape[1]:
        raise SpectralError("laplacian must be a square matrix")
    n = Lg.shape[0]
    if n > MAX_GRAPH_DIM:
        raise SizeError(f"graph dimension {n} exceeds {MAX_GRAPH_DIM}")
    scale = max(1.0, np.abs(Lg).max())
    if np.abs(Lg - Lg.T).max() > 1e-12 * scale:
        raise SpectralError("laplacian must be symmetric")
    w, V = jacobi_eigh(Lg)
    if w.min() < -1e-10 * scale:
        raise SpectralError(f"laplacian is not positive semidefinite (eigenvalue {w.min():.3e})")
    # roundoff-level eigenvalues would otherwise become ~1e-8 after the square root
    w = np.where(np.abs(w) <= 1e-12 * scale, 0.0, np.clip(w, 0.0, None))
    nodes = NodeData(np.arange(n), np.ones(n), V.T.astype(complex))
    return SpectralModel(np.sqrt(w), None, nodes, {"kind": "graph", "n": n})


def path_laplacian(n: int) -> np.ndarray:
    A = np.zeros((n, n))
    i = np.arange(n - 1)
    A[i, i + 1] = A[i + 1, i] = 1
    return np.diag(A.sum(1)) - A


def cycle_laplacian(n: int) -> np.ndarray:
    A = np.zeros((n, n))
    i = np.arange(n)
    A[i, (i + 1) % n] = A[(i + 1) % n, i] = 1
    return np.diag(A.sum(1)) - A


# --- point evaluation ------------------------------------------------------

def evaluate_at_nodes(model: SpectralModel, f) -> np.ndarray:
    """Values ``f(x_k)`` at the model's nodes."""
    if not model.has_nodes:
        raise CapabilityError("model has no node data")
    return model.node_data.eval_matrix.T @ model.vector(f)


def basis_at(model: SpectralModel, points) -> np.ndarray:
    """Basis values at arbitrary points for models with an analytic basis."""
    kind = model.kind
    if kind == "circle":
        return circle_basis(model.meta["N"], points)
    if kind == "sphere":
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return sphere_basis(model.meta["N"], pts[:, 0], pts[:, 1])
    raise CapabilityError(f"model kind {kind!r} has no analytic basis")
