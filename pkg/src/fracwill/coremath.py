"""Special functions and closed-form constants for the fractional Laplacian."""
from __future__ import annotations

import math

from scipy import special

from .errors import DomainError


def gamma_fn(x: float) -> float:
    """Euler Gamma function for real x > 0."""
    x = float(x)
    if not x > 0 or not math.isfinite(x):
        raise DomainError(f"gamma_fn requires x > 0, got {x!r}")
    return float(special.gamma(x))


def beta_fn(x: float, y: float) -> float:
    """Euler Beta function B(x, y) = G(x)G(y)/G(x+y) for x, y > 0."""
    x, y = float(x), float(y)
    if not (x > 0 and y > 0):
        raise DomainError(f"beta_fn requires positive arguments, got ({x!r}, {y!r})")
    return float(special.beta(x, y))


def _check_s(s: float, lo: float = 0.0, hi: float = 1.0) -> float:
    s = float(s)
    if not (lo < s < hi):
        raise DomainError(f"s must lie in ({lo}, {hi}), got {s!r}")
    return s


def gamma_ds(d: int, s: float) -> float:
    """Normalization constant of (-Laplacian)^s in dimension d.

    gamma_{d,s} = s 4^s pi^{-d/2} Gamma((d+2s)/2) / Gamma(1-s).
    """
    if int(d) != d or d < 1:
        raise DomainError(f"dimension must be a positive integer, got {d!r}")
    s = _check_s(s)
    return s * 4.0**s * math.pi ** (-d / 2) * gamma_fn((d + 2 * s) / 2) / gamma_fn(1 - s)


def radial_moment(a: float, b: float) -> float:
    """Return 2 * int_0^inf r^a (r^2+1)^(-b/2) dr for a > -1, b > a+1."""
    a, b = float(a), float(b)
    if not (a > -1 and b > a + 1):
        raise DomainError(f"radial_moment needs a > -1 and b > a+1, got a={a}, b={b}")
    return gamma_fn((a + 1) / 2) * gamma_fn((b - a - 1) / 2) / gamma_fn(b / 2)


def sphere_area(d: int) -> float:
    """Surface measure of the unit sphere in R^d (two points when d = 1)."""
    if int(d) != d or d < 1:
        raise DomainError(f"dimension must be a positive integer, got {d!r}")
    return 2 * math.pi ** (d / 2) / gamma_fn(d / 2)


def kernel_reduction_constant(d: int, s: float, alpha: float, beta: float) -> float:
    """M(d,s,alpha,beta) = int_{R^{d-1}} |y|^alpha (1+|y|^2)^{-(d+2s+beta)/2} dy."""
    if int(d) != d or d < 2:
        raise DomainError(f"kernel_reduction_constant needs d >= 2, got {d!r}")
    s = _check_s(s, 0.5, 1.0)
    if alpha < 0 or beta < 0:
        raise DomainError("alpha and beta must be nonnegative")
    if not 2 * s + beta + 1 > alpha:
        raise DomainError(f"integrand not integrable: need 2s+beta+1 > alpha, got alpha={alpha}")
    return 0.5 * sphere_area(d - 1) * radial_moment(alpha + d - 2, d + 2 * s + beta)
