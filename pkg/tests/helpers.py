import numpy as np

from fracwill.heatkernel import fundamental_solution, fundamental_tail_mass, heat_kernel, kernel_tail_mass
from fracwill.quadrature import geometric_edges, panel_rule


def line_nodes(X=60.0, near_zero=False):
    """Gauss nodes on [0, X]: uniform near 0, geometric beyond 2."""
    edges = [np.arange(0, 2, 0.25), geometric_edges(2, X, 1.3)]
    if near_zero:
        edges.append(1e-6 * 4.0 ** np.arange(8))
    return panel_rule(np.unique(np.concatenate(edges)), 12)


def kernel_mass(s, X=60.0):
    x, w = line_nodes(X)
    return 2 * (np.dot(w, heat_kernel(1.0, x, s)) + kernel_tail_mass(X, s))


def fundamental_mass(lam, s, X=60.0):
    x, w = line_nodes(X, near_zero=True)
    return 2 * (np.dot(w, fundamental_solution(lam, x, s)) + fundamental_tail_mass(lam, X, s))


def loglog_slope(x, y):
    return float(np.polyfit(np.log(x), np.log(np.abs(y)), 1)[0])
