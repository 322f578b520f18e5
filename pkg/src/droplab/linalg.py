"""Dense symmetric eigenvalues via cyclic Jacobi rotations.

The topic-probability Gram matrices this library needs are tiny (T x T with
T <= 64), so a self-contained Jacobi sweep is plenty and keeps the smallest
singular value free of external-solver variability.
"""

from __future__ import annotations

import numpy as np

MAX_TOPICS = 64


def jacobi_eigenvalues(matrix: np.ndarray, tol: float = 1e-12,
                       max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues of a real symmetric matrix, ascending.

    Cyclic-by-row Jacobi iteration; converges when the off-diagonal
    Frobenius mass drops below tol * ||A||_F.
    """
    a = np.array(matrix, dtype=float, copy=True)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    if n > MAX_TOPICS:
        raise ValueError(f"matrix order {n} exceeds supported size {MAX_TOPICS}")
    if not np.allclose(a, a.T, atol=1e-12 * max(1.0, np.abs(a).max())):
        raise ValueError("matrix must be symmetric")
    if n == 1:
        return a[0, :1].copy()

    norm = np.linalg.norm(a)
    if norm == 0.0:
        return np.zeros(n)

    def off(m):
        return np.sqrt(max(np.sum(m ** 2) - np.sum(np.diag(m) ** 2), 0.0))

    for _ in range(max_sweeps):
        if off(a) <= tol * norm:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= tol * norm / (n * n):
                    continue
                # rotation angle zeroing a[p, q]
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rot_p = c * a[:, p] - s * a[:, q]
                rot_q = s * a[:, p] + c * a[:, q]
                a[:, p], a[:, q] = rot_p, rot_q
                rot_p = c * a[p, :] - s * a[q, :]
                rot_q = s * a[p, :] + c * a[q, :]
                a[p, :], a[q, :] = rot_p, rot_q
    return np.sort(np.diag(a))


def min_singular_value(matrix: np.ndarray) -> float:
    """Smallest singular value of a d x T matrix (T small) via its Gram matrix."""
    m = np.asarray(matrix, dtype=float)
    gram = m.T @ m
    eigs = jacobi_eigenvalues(gram)
    return float(np.sqrt(max(eigs[0], 0.0)))
