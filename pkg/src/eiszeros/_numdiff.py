"""Finite-difference stencils (Fornberg weights) for internal derivatives.

Derivatives of special functions are never part of the public API; the
helpers here back the few places that need them (entire-function Taylor
seeds, log-derivative probes, simplicity tests).
"""

from __future__ import annotations

import numpy as np


def fornberg_weights(order: int, offsets) -> np.ndarray:
    """Weights w_j with f^(order)(0) ~ sum_j w_j f(offsets[j]).

    Offsets are in units of the step already (pass actual grid offsets);
    classic recursion from Fornberg, Math. Comp. 1988.
    """
    x = np.asarray(offsets, dtype=float)
    n = len(x)
    if order >= n:
        raise ValueError("need more stencil points than derivative order")
    c = np.zeros((n, order + 1))
    c[0, 0] = 1.0
    c1 = 1.0
    c4 = x[0]
    for i in range(1, n):
        mn = min(i, order)
        c2 = 1.0
        c5 = c4
        c4 = x[i]
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, order]


def central_derivative(f, x0: float, order: int, h: float, points: int = 9):
    """order-th derivative of f at x0 from a symmetric points-wide stencil."""
    if points % 2 == 0:
        raise ValueError("points must be odd for a centered stencil")
    half = points // 2
    offsets = np.arange(-half, half + 1) * h
    w = fornberg_weights(order, offsets)
    return sum(wj * f(x0 + dj) for wj, dj in zip(w, offsets))
