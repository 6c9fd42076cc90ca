"""Gauss panel helpers used by the singular and oscillatory integrals."""
from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


def panel_rule(edges, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss rule over consecutive panels given by ``edges``."""
    edges = np.asarray(edges, dtype=float)
    t, w = gauss_legendre(n)
    a, b = edges[:-1, None], edges[1:, None]
    return (a + (b - a) * t).ravel(), ((b - a) * w).ravel()


def geometric_edges(a: float, b: float, ratio: float = 1.2, max_width: float = np.inf) -> np.ndarray:
    """Panel edges from a to b (0 < a < b), growing geometrically with a width cap."""
    edges = [a]
    x = a
    while x < b:
        x = min(b, x + min(x * (ratio - 1.0), max_width))
        if b - x < 1e-12 * b:
            x = b
        edges.append(x)
    return np.asarray(edges)


def graded_edges(center_scale: float, length: float, ratio: float = 1.5, smallest: float = 1e-9) -> np.ndarray:
    """Edges 0 < smallest*scale ... growing geometrically up to ``length``.

    Suited to integrands with an algebraic singularity at 0.
    """
    a = smallest * center_scale
    return np.concatenate([[0.0], geometric_edges(a, length, ratio)])
