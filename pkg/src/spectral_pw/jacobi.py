"""Cyclic Jacobi eigensolver for dense real symmetric matrices."""

import numpy as np


def _arrangements(m: int):
    """
    Round-robin schedule as orderings of ``range(m)``.

    In each yielded ordering, positions ``i`` and ``i + m/2`` form a pair; the
    ``m - 1`` orderings together pair every two indices exactly once.
    """
    players = list(range(m))
    h = m // 2
    for _ in range(m - 1):
        yield players[:h] + players[::-1][:h]
        players = [players[0], players[-1]] + players[1:-1]


def _rotation(app, aqq, apq):
    active = apq != 0
    theta = (aqq - app) / (2.0 * np.where(active, apq, 1.0))
    big = np.abs(theta) > 1e150
    th = np.where(big, 1.0, theta)
    t = np.where(th >= 0, 1.0, -1.0) / (np.abs(th) + np.sqrt(th * th + 1.0))
    # t ~ 1/(2 theta) once theta^2 overflows
    t = np.where(big, 0.5 / np.where(big, theta, 1.0), t)
    t = np.where(active, t, 0.0)
    c = 1.0 / np.sqrt(1.0 + t * t)
    return c, t * c


def jacobi_eigh(A, tol: float = 1e-12, max_sweeps: int = 60):
    """
    Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.

    A sweep visits every off-diagonal pair once, in ``n - 1`` rounds of
    ``n/2`` disjoint rotations applied simultaneously.

    Parameters
    ----------
    A : (n, n) array_like
        Symmetric input.
    tol : float
        Stop once the off-diagonal Frobenius norm is below ``tol * ||A||_F``.
    max_sweeps : int
        Raise ``RuntimeError`` if not converged after this many sweeps.

    Returns
    -------
    w : (n,) ndarray
        Eigenvalues in ascending order.
    V : (n, n) ndarray
        Orthonormal eigenvectors as columns, ``A = V diag(w) V^T``.
    """
    A = np.array(A, dtype=float)
    n = A.shape[0]
    scale = np.linalg.norm(A)
    if n == 1 or scale == 0:
        return np.diag(A).copy(), np.eye(n)

    # pad to even size; the extra coordinate has zero coupling and never mixes
    m = n + (n % 2)
    if m != n:
        A = np.pad(A, ((0, 1), (0, 1)))
    V = np.eye(m)
    h = m // 2
    ii = np.arange(h)
    labels = np.arange(m)  # labels[pos] = original index stored at pos
    mask = ~np.eye(m, dtype=bool)

    for _ in range(max_sweeps):
        if np.sqrt(np.sum(A[mask] ** 2)) < tol * scale:
            break
        for arrangement in _arrangements(m):
            target = np.asarray(arrangement)
            where = np.empty(m, dtype=int)
            where[labels] = np.arange(m)
            idx = where[target]
            A = A[np.ix_(idx, idx)]
            V = V[:, idx]
            labels = target

            c, s = _rotation(A[ii, ii], A[ii + h, ii + h], A[ii, ii + h])
            # A <- J^T A J with J[p,p]=J[q,q]=c, J[p,q]=s, J[q,p]=-s
            P, Q = A[:, :h].copy(), A[:, h:].copy()
            A[:, :h] = c * P - s * Q
            A[:, h:] = s * P + c * Q
            P, Q = A[:h, :].copy(), A[h:, :].copy()
            A[:h, :] = c[:, None] * P - s[:, None] * Q
            A[h:, :] = s[:, None] * P + c[:, None] * Q
            A[ii, ii + h] = 0.0
            A[ii + h, ii] = 0.0
            P, Q = V[:, :h].copy(), V[:, h:].copy()
            V[:, :h] = c * P - s * Q
            V[:, h:] = s * P + c * Q
    else:
        raise RuntimeError("Jacobi iteration did not converge")

    keep = labels < n  # drops the padding slot, which still holds e_n
    w = np.diag(A)[keep]
    V = V[:n, keep]
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]
