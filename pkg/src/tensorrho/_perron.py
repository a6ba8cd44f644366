"""Perron root of a nonnegative irreducible matrix by shifted power iteration."""

from __future__ import annotations

import numpy as np
from scipy.sparse.csgraph import connected_components

from .errors import InputError, PrecisionError, ReducibilityError


def strong_components(adj) -> list:
    """Strongly connected components of a boolean adjacency matrix, as sorted tuples."""
    adj = np.asarray(adj, dtype=bool)
    if adj.shape[0] == 0:
        return []
    k, labels = connected_components(adj.astype(np.int8), directed=True, connection="strong")
    comps = [tuple(int(i) for i in np.flatnonzero(labels == c)) for c in range(k)]
    return sorted(comps)


def perron_power(A, tol: float = 1e-13, max_iter: int = 1_000_000):
    """Perron root and positive vector of ``A`` (sum-normalized).

    Iterates on ``A + I`` so periodic matrices converge too, and stops once
    the Collatz-Wielandt gap ``max (Ax)_i/x_i - min (Ax)_i/x_i`` is at most
    ``tol * max(1, rho)``.

    Raises
    ------
    ReducibilityError
        If the digraph of ``A`` is not strongly connected.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise InputError("expected a nonempty square matrix")
    if (A < 0).any() or not np.isfinite(A).all():
        raise InputError("matrix must be finite and nonnegative")
    comps = strong_components(A > 0)
    if len(comps) > 1:
        raise ReducibilityError("matrix is reducible", components=comps)
    m = A.shape[0]
    x = np.full(m, 1.0 / m)
    B = A + np.eye(m)
    for _ in range(max_iter):
        y = B @ x
        ratio = y / x
        lo, hi = ratio.min() - 1.0, ratio.max() - 1.0
        x = y / y.sum()
        if hi - lo <= tol * max(1.0, hi):
            return 0.5 * (lo + hi), x
    raise PrecisionError("power iteration did not reach the requested gap")
