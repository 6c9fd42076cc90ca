"""The eta functional of the profile, mu_w, the s = 3/4 logarithmic rate and kappa_star.

eta_{eps,l}(z0) = int_{-l}^{l} w_eps'(z0 + z) |z|^{1-2s} dz with w_eps(z) = w(z/eps).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .coremath import gamma_ds
from .errors import ConvergenceError, DomainError
from .profile import SampledProfile
from .quadrature import gauss_legendre, panel_rule

DEFAULT_LADDER = (25.0, 50.0, 100.0, 200.0, 400.0)
# the s = 3/4 rate carries an O(1/log T) offset and needs larger cutoffs
LOG_RATE_LADDER = (25.0, 100.0, 400.0, 1600.0, 6400.0)


@dataclass(frozen=True)
class EtaSpec:
    epsilon: float
    ell: float
    profile: SampledProfile

    def __post_init__(self):
        if not (self.epsilon > 0 and self.ell > 0):
            raise DomainError("epsilon and ell must be positive")
        if not 0.5 < self.profile.s < 1:
            raise DomainError("eta needs s in (1/2, 1)")


def _edges(ell, feature, scale, first):
    """Panel edges on [first, ell] refined near ``feature`` (width ~ scale) and near 0."""
    edges = [first]
    z = first
    while z < ell:
        width = min(max(0.5 * scale, 0.3 * abs(z - feature)), 0.3 * z)
        z = min(ell, z + width)
        if ell - z < 1e-12 * ell:
            z = ell
        edges.append(z)
    return np.asarray(edges)


def _singular_rule(sigma, s, n=24):
    """Nodes/weights for int_0^sigma f(z) z^{1-2s} dz via z = sigma u^{1/(2-2s)}."""
    t, w = gauss_legendre(n)
    z = sigma * t ** (1 / (2 - 2 * s))
    return z, w * sigma ** (2 - 2 * s) / (2 - 2 * s)


def _radial_rule(ell, z0, eps, s):
    """Rule for int_0^ell f(z) z^{1-2s} dz with f peaked at |z0| on scale eps."""
    sigma = min(ell, 0.25 * eps, 0.5 * abs(z0) if z0 != 0 else np.inf)
    zs, ws = _singular_rule(sigma, s)
    if sigma >= ell:
        return zs, ws
    zr, wr = panel_rule(_edges(ell, abs(z0), eps, sigma), 10)
    return np.concatenate([zs, zr]), np.concatenate([ws, wr * zr ** (1 - 2 * s)])


def eta(spec: EtaSpec, z0):
    """eta_{eps,l}(z0); vectorized over z0."""
    prof, eps, ell, s = spec.profile, spec.epsilon, spec.ell, spec.profile.s
    z0s = np.atleast_1d(np.asarray(z0, float))
    out = np.empty_like(z0s)
    for i, zi in enumerate(z0s):
        z, w = _radial_rule(ell, zi, eps, s)
        f = prof((zi + z) / eps, 1) + prof((zi - z) / eps, 1)
        out[i] = np.dot(w, f) / eps
    return float(out[0]) if np.ndim(z0) == 0 else out


def ibp_identity_residual(spec: EtaSpec, z0: float) -> float:
    """|LHS - RHS| of the integration-by-parts formula linking the odd moment to eta."""
    prof, eps, ell, s = spec.profile, spec.epsilon, spec.ell, spec.profile.s
    z, w = _radial_rule(ell, z0, eps, s)
    # int_0^l (w(z0+z) - w(z0-z)) z^{-2s} dz, written against z^{1-2s}
    diff = prof((z0 + z) / eps) - prof((z0 - z) / eps)
    lhs = np.dot(w, diff / z)
    boundary = ell ** (1 - 2 * s) / (1 - 2 * s) * (prof((ell + z0) / eps) - prof((z0 - ell) / eps))
    rhs = boundary + eta(spec, z0) / (2 * s - 1)
    return float(abs(lhs - rhs))


def _z_rule(T):
    """Panels on [0, T] for integrating eta^2: fine near 0 and T, geometric between."""
    left = list(np.arange(0.0, min(4.0, T), 0.5))
    z = left[-1] + 0.5 if left else 0.0
    edges = left + [min(z, T)]
    while z < T:
        width = max(0.5, min(0.3 * z, 0.3 * (T - z)))
        z = min(T, z + width)
        edges.append(z)
    return panel_rule(np.unique(edges), 8)


def eta_square_integral(profile: SampledProfile, T: float, rho: float = 1.0) -> float:
    """int_{-rho T}^{rho T} eta_{1,T}(z)^2 dz (even integrand)."""
    z, w = _z_rule(rho * T)
    spec = EtaSpec(1.0, T, profile)
    return float(2 * np.dot(w, eta(spec, z) ** 2))


def richardson(values, ladder, power):
    """Eliminate a c * T^{-power} term using consecutive ladder pairs."""
    out = []
    for (I1, T1), (I2, T2) in zip(zip(values, ladder), zip(values[1:], ladder[1:])):
        r = (T2 / T1) ** power
        out.append((r * I2 - I1) / (r - 1))
    return out


def mu_w_ladder(profile: SampledProfile, cutoff_ladder=DEFAULT_LADDER, rho: float = 1.0):
    """Raw ladder of truncated integrals and its Richardson-extrapolated companion."""
    s = profile.s
    if not 0.75 < s < 1:
        raise DomainError("mu_w is finite only for s in (3/4, 1)")
    ladder = [float(T) for T in cutoff_ladder]
    raw = [eta_square_integral(profile, T, rho) for T in ladder]
    return raw, richardson(raw, ladder, 4 * s - 3)


def mu_w(profile: SampledProfile, s: float | None = None, cutoff_ladder=DEFAULT_LADDER,
         rho: float = 1.0, rtol: float = 0.01) -> float:
    """Limit of int eta_{1,T}^2 over [-rho T, rho T] as T grows, extrapolated in T^{3-4s}."""
    if s is not None and abs(s - profile.s) > 1e-12:
        raise DomainError("s does not match the profile")
    raw, ext = mu_w_ladder(profile, cutoff_ladder, rho)
    if len(ext) < 2 or not abs(ext[-1] - ext[-2]) < rtol * abs(ext[-1]):
        raise ConvergenceError("mu_w ladder did not stabilize", sequence={"raw": raw, "extrapolated": ext})
    if not (ext[-1] > 0 and math.isfinite(ext[-1])):
        raise ConvergenceError("mu_w is not positive", sequence={"raw": raw, "extrapolated": ext})
    return float(ext[-1])


def mu_log_rate(profile: SampledProfile, cutoff_ladder=LOG_RATE_LADDER) -> np.ndarray:
    """(1/|log eps|) int eta^2 with eps = 1/T along the ladder; tends to 8 at s = 3/4."""
    if abs(profile.s - 0.75) > 1e-12:
        raise DomainError("the logarithmic rate applies to s = 3/4")
    return np.array([eta_square_integral(profile, T) / math.log(T) for T in cutoff_ladder])


def kappa_star(s: float, profile: SampledProfile | None = None, cutoff_ladder=DEFAULT_LADDER) -> float:
    """Willmore prefactor: 8 gamma_{1,3/4}^2 at s = 3/4, gamma^2 mu_w / (4 (2s-1)^2) above."""
    if not 0.75 <= s < 1:
        raise DomainError("kappa_star is defined for s in [3/4, 1)")
    g = gamma_ds(1, s)
    if s == 0.75:
        return 8.0 * g * g
    if profile is None:
        raise DomainError("kappa_star for s > 3/4 needs the profile")
    return g * g / (4 * (2 * s - 1) ** 2) * mu_w(profile, s, cutoff_ladder)


def constants_row(s: float, profile: SampledProfile | None, cutoff_ladder=None) -> dict:
    """One row of the constants report."""
    if cutoff_ladder is None:
        cutoff_ladder = LOG_RATE_LADDER if s == 0.75 else DEFAULT_LADDER
    g = gamma_ds(1, s)
    if s == 0.75:
        seq = mu_log_rate(profile, cutoff_ladder).tolist() if profile is not None else []
        ladder = {"cutoffs": list(cutoff_ladder), "log_rate": seq}
        return {"s": s, "gamma_1s": g, "mu_w_or_na": "na", "kappa_star": kappa_star(s), "ladder_json": ladder}
    raw, ext = mu_w_ladder(profile, cutoff_ladder)
    mu = ext[-1]
    if not abs(ext[-1] - ext[-2]) < 0.01 * abs(mu):
        raise ConvergenceError("mu_w ladder did not stabilize", sequence={"raw": raw, "extrapolated": ext})
    ladder = {"cutoffs": list(cutoff_ladder), "raw": raw, "extrapolated": ext}
    return {"s": s, "gamma_1s": g, "mu_w_or_na": mu, "kappa_star": g * g / (4 * (2 * s - 1) ** 2) * mu,
            "ladder_json": ladder}


def format_ladder(ladder: dict) -> str:
    return json.dumps(ladder, separators=(",", ":"), sort_keys=True)
