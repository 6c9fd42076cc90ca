"""Recovery fields u_eps = w(beta/eps) in the plane, the 2D fractional Laplacian,
the energies F and G, and the Gamma-limsup experiment.

Circles use an exact radial reduction: for radial U,

    (-Lap)^s U(r) = gamma_{2,s} PV int_0^inf (U(r) - U(r')) r' K(r, r') dr',
    K(r, r') = int_0^{2 pi} (r^2 + r'^2 - 2 r r' cos phi)^{-1-s} dphi,

with K written through a Gauss hypergeometric function.  Other curves use a
polar quadrature centred at the evaluation point.
"""
from __future__ import annotations

import csv
import io
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import special

from .constants import EtaSpec, eta, kappa_star
from .coremath import gamma_ds
from .errors import AccuracyError, ConfigurationError, DomainError, FracwillError, RangeError
from .fraclap import flap_pointwise
from .geometry import PlanarCurve, SmoothedDistance, curvature, perimeter_and_willmore, project_to_boundary, \
    signed_distance, smoothed_distance
from .profile import DoubleWell, SampledProfile, get_potential
from .quadrature import panel_rule

FAR_END = 1.0e7
CSV_HEADER = ("epsilon", "F", "G", "F_per_ratio", "G_kappaW_ratio", "tube_share", "runtime_s")


def workers() -> int:
    """Worker cap from FRACWILL_THREADS (default 1)."""
    raw = os.environ.get("FRACWILL_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ConfigurationError(f"FRACWILL_THREADS must be an integer, got {raw!r}") from None
    return max(1, n)


def _map(func, items):
    items = list(items)
    n = workers()
    if n == 1 or len(items) < 2:
        return [func(it) for it in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(func, items))


# ---------------------------------------------------------------- kernels

def ring_kernel(r, rp, s: float, h=None):
    """K(r, r') = int_0^{2 pi} (r^2 + r'^2 - 2 r r' cos phi)^{-1-s} dphi.

    Equal to 2 pi (r + r')^{-2-2s} 2F1(1+s, 1/2; 1; m) with m = 4 r r' / (r + r')^2;
    for m > 1/2 the connection formula around m = 1 keeps full accuracy near
    the diagonal.  Passing the exact offset ``h = r' - r`` avoids the rounding
    of r' - r there.
    """
    r, rp = np.broadcast_arrays(np.asarray(r, float), np.asarray(rp, float))
    a, b = 1.0 + s, 0.5
    S = r + rp
    m = 4.0 * r * rp / S**2
    q = (((r - rp) if h is None else np.broadcast_to(h, r.shape)) / S) ** 2
    out = np.empty(r.shape)
    lo = m <= 0.5
    out[lo] = special.hyp2f1(a, b, 1.0, m[lo])
    hi = ~lo
    A = special.gamma(a + b - 1) / (special.gamma(a) * special.gamma(b))
    B = special.gamma(1 - a - b) / (special.gamma(1 - a) * special.gamma(1 - b))
    qh = q[hi]
    out[hi] = (A * qh ** (1 - a - b) * special.hyp2f1(1 - a, 1 - b, 2 - a - b, qh)
               + B * special.hyp2f1(a, b, a + b, qh))
    return 2 * math.pi * S ** (-2 * a) * out


# ------------------------------------------------------------ field types

@dataclass(frozen=True, eq=False)
class RadialProfile:
    """Radial function U(|x - center|) that is constant beyond ``outer``.

    ``func(r, nu)`` returns the nu-th radial derivative (nu <= 2).  ``features``
    are radii where U varies on the length ``scale``; ``breaks`` are radii where
    U is only C^2.
    """

    func: Callable
    center: tuple = (0.0, 0.0)
    features: tuple = ()
    breaks: tuple = ()
    scale: float = 1.0
    outer: float = np.inf
    cap: float = 0.25

    def radius(self, x):
        x = np.asarray(x, float)
        return np.hypot(x[..., 0] - self.center[0], x[..., 1] - self.center[1])

    def __call__(self, x):
        return self.func(self.radius(x), 0)

    def laplacian(self, x):
        r = self.radius(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            lap = self.func(r, 2) + np.where(r > 0, self.func(r, 1) / r, self.func(r, 2))
        return lap

    @property
    def far_value(self) -> float:
        return float(self.func(np.asarray(max(self.outer, 0.0) if np.isfinite(self.outer) else 1e300), 0))

    def tangent_radii(self, x) -> list:
        """Radii of circles about x tangent to the feature circles."""
        d = float(self.radius(x))
        out = []
        for f in tuple(self.features) + tuple(self.breaks):
            out += [abs(f - d), f + d]
        return out

    def far_radius(self, x) -> float:
        return float(self.radius(x)) + self.outer


@dataclass(frozen=True, eq=False)
class RecoveryField:
    """u_eps(x) = w(beta(x) / eps) for the smoothed distance beta of a curve."""

    curve: PlanarCurve
    sd: SmoothedDistance
    profile: SampledProfile
    epsilon: float

    def __post_init__(self):
        if self.sd.curve is not self.curve and self.sd.curve != self.curve:
            raise ConfigurationError("smoothed distance belongs to another curve")
        if not 0 < self.epsilon < self.sd.delta:
            raise ConfigurationError(f"epsilon must lie in (0, delta = {self.sd.delta:g})")

    @property
    def s(self) -> float:
        return self.profile.s

    @property
    def delta(self) -> float:
        return self.sd.delta

    @property
    def scale(self) -> float:
        return self.epsilon

    @property
    def u_in(self) -> float:
        return float(self.profile(1.0 / self.epsilon))

    @property
    def far_value(self) -> float:
        return float(self.profile(-1.0 / self.epsilon))

    def of_distance(self, dist, nu: int = 0):
        """nu-th derivative of w(beta(d) / eps) in the signed distance d."""
        eps = self.epsilon
        b = self.sd.of_distance(dist)
        z = b / eps
        if nu == 0:
            return self.profile(z)
        b1 = self.sd.of_distance(dist, 1)
        if nu == 1:
            return self.profile(z, 1) * b1 / eps
        if nu == 2:
            b2 = self.sd.of_distance(dist, 2)
            return self.profile(z, 2) * b1 * b1 / eps**2 + self.profile(z, 1) * b2 / eps
        raise ConfigurationError("derivative order must be <= 2")

    def __call__(self, x):
        x = np.asarray(x, float)
        if self.curve.kind == "circle":
            u, v = self.curve.local(x)
            return self.of_distance(self.curve.R - np.hypot(u, v))
        return self.profile(self.sd(x) / self.epsilon)

    def laplacian(self, x):
        """Local Laplacian of u, used by the singular core of the polar rule."""
        beta, grad, hess = smoothed_distance(self.sd, x, derivatives=True)
        z = beta / self.epsilon
        g2 = np.sum(grad * grad, axis=-1)
        return (self.profile(z, 2) * g2 / self.epsilon**2
                + self.profile(z, 1) * np.trace(hess, axis1=-2, axis2=-1) / self.epsilon)

    def radial(self) -> RadialProfile:
        if self.curve.kind != "circle":
            raise ConfigurationError("the radial reduction needs a circle")
        R, d = self.curve.R, self.delta

        def U(r, nu=0):
            v = self.of_distance(R - np.asarray(r, float), nu)
            return -v if nu == 1 else v

        breaks = tuple(R + k * d for k in (-5, -4, 4, 5) if R + k * d > 0)
        return RadialProfile(U, self.curve.center, (R,), breaks, self.epsilon, R + 5 * d, min(0.25, d / 4))

    def tangent_radii(self, x) -> list:
        """Critical distances from x to the curve and to its offsets at 4 and 5 delta."""
        x = np.asarray(x, float)
        ts = np.linspace(0, 2 * np.pi, 2048, endpoint=False)
        dist = np.linalg.norm(self.curve.point(ts) - x, axis=-1)
        prev, nxt = np.roll(dist, 1), np.roll(dist, -1)
        crit = dist[((dist <= prev) & (dist <= nxt)) | ((dist >= prev) & (dist >= nxt))]
        out = []
        for c in np.unique(np.round(crit, 12)):
            out += [c] + [abs(c + k * self.delta) for k in (-5, -4, 4, 5)]
        return out

    def far_radius(self, x) -> float:
        x = np.asarray(x, float)
        return float(np.hypot(x[0] - self.curve.center[0], x[1] - self.curve.center[1])
                     + self.curve.outer_radius + 5 * self.delta)


def recovery_field(curve: PlanarCurve, profile: SampledProfile, epsilon: float,
                   delta: float | None = None) -> RecoveryField:
    sd = SmoothedDistance(curve, curve.default_delta() if delta is None else delta)
    return RecoveryField(curve, sd, profile, float(epsilon))


# ------------------------------------------------------------ radial path

def _walk(a, b, width):
    """Panel edges on [a, b] with local width bound ``width(x)``."""
    edges = [a]
    x = a
    while x < b:
        x = min(b, x + width(x))
        if b - x < 1e-13 * max(1.0, abs(b)):
            x = b
        edges.append(x)
    return edges


def _outer_edges(U: RadialProfile, r, lo, hi):
    """Edges on [lo, hi] graded towards r (kernel) and the features (layer)."""
    feats = np.asarray(U.features, float)

    def width(x):
        w = min(U.cap, max(0.3 * abs(x - r), 1e-300))
        if feats.size:
            w = min(w, max(0.5 * U.scale, 0.3 * float(np.min(np.abs(x - feats)))))
        return w

    pts = sorted({lo, hi} | {p for p in tuple(U.features) + tuple(U.breaks) if lo < p < hi})
    edges = [lo]
    for a, b in zip(pts[:-1], pts[1:]):
        edges += _walk(a, b, width)[1:]
    return np.asarray(edges)


def _core_edges(h0, ratio=4.0, depth=1e-5):
    # below depth * h0 the subtracted integrand is smaller than the roundoff of the pair sum
    n = int(math.ceil(math.log(1 / depth) / math.log(ratio)))
    return h0 * ratio ** -np.arange(n, -1, -1.0)


def radial_integral(U: RadialProfile, r: float, s: float, power: int = 1, order: int = 10) -> float:
    """PV int_0^inf (U(r) - U(r'))^power r' K(r, r') dr' for power 1 or 2."""
    if power not in (1, 2):
        raise ConfigurationError("power must be 1 or 2")
    r = float(r)
    u0 = float(U.func(np.asarray(r), 0))
    c1 = gamma_ds(1, s) / gamma_ds(2, s)
    h0 = 0.25 * U.scale if r == 0 else min(0.25 * U.scale, 0.5 * r)
    he, hw = panel_rule(_core_edges(h0), 8)
    if r == 0:
        # K(0, r') = 2 pi r'^{-2-2s}, U'(0) = 0
        u2 = float(U.func(np.asarray(0.0), 2))
        pair = (u0 - U.func(he, 0)) ** power * 2 * math.pi * he ** (-1 - 2 * s)
        lead = -math.pi * u2 if power == 1 else 0.0
        lo = h0
    else:
        rp, rm = r + he, r - he
        pair = ((u0 - U.func(rp, 0)) ** power * rp * ring_kernel(r, rp, s, he)
                + (u0 - U.func(rm, 0)) ** power * rm * ring_kernel(r, rm, s, -he))
        u1 = float(U.func(np.asarray(r), 1))
        if power == 1:
            lead = -c1 * (float(U.func(np.asarray(r), 2)) + u1 / r)
        else:
            lead = 2 * c1 * u1 * u1
        lo = r + h0
    core = np.dot(hw, pair - lead * he ** (1 - 2 * s)) + lead * h0 ** (2 - 2 * s) / (2 - 2 * s)

    def one_sided(edges):
        x, w = panel_rule(edges, order)
        return np.dot(w, (u0 - U.func(x, 0)) ** power * x * ring_kernel(r, x, s))

    total = core
    X = U.outer if np.isfinite(U.outer) else max(r, max(U.features, default=0.0)) + 40 * U.scale
    if r > 0:
        total += one_sided(_outer_edges(U, r, 0.0, r - h0))
    if lo < X:
        total += one_sided(_outer_edges(U, r, lo, X))
    start = max(lo, X)
    gap = u0 - U.far_value
    if gap != 0.0:
        # U is constant beyond X: geometric panels, then the r'^{-1-2s} remainder
        edges = [start]
        while edges[-1] < FAR_END:
            edges.append(min(FAR_END, edges[-1] + max(0.5 * (edges[-1] - r), 0.25 * U.scale)))
        x, w = panel_rule(np.asarray(edges), order)
        total += gap**power * (np.dot(w, x * ring_kernel(r, x, s))
                               + 2 * math.pi * FAR_END ** (-2 * s) / (2 * s))
    return float(total)


def _flap_radial(U: RadialProfile, r: float, s: float, tol: float | None) -> float:
    val = gamma_ds(2, s) * radial_integral(U, r, s, 1, 10)
    if tol is not None:
        alt = gamma_ds(2, s) * radial_integral(U, r, s, 1, 7)
        err = abs(val - alt)
        if not (math.isfinite(val) and err <= tol * max(1.0, abs(val))):
            raise AccuracyError(f"radial quadrature unstable at r={r:g}", estimate=err)
    return val


# ------------------------------------------------------------- polar path

def _angular(field_, x, rho, u0, eps, density):
    """int_0^pi (2 u0 - u(x + rho e) - u(x - rho e)) dtheta, per rho (midpoint rule)."""
    out = np.empty(rho.size)
    for i, p in enumerate(rho):
        n = int(max(64, 8 * math.ceil(density * p / eps / 8)))
        th = (np.arange(n) + 0.5) * (math.pi / n)
        e = np.stack([np.cos(th), np.sin(th)], axis=-1) * p
        vals = field_(x + e) + field_(x - e)
        out[i] = math.pi / n * float(np.sum(2 * u0 - vals))
    return out


def _flap_polar(field_, x, s: float, density: float = 24.0, order: int = 8) -> float:
    x = np.asarray(x, float)
    eps = field_.scale
    u0 = float(field_(x))
    lap = float(field_.laplacian(x))
    rho0 = 0.25 * eps
    he, hw = panel_rule(_core_edges(rho0), 6)
    A = _angular(field_, x, he, u0, eps, density)
    core = (np.dot(hw, (A + 0.5 * math.pi * lap * he**2) * he ** (-1 - 2 * s))
            - 0.5 * math.pi * lap * rho0 ** (2 - 2 * s) / (2 - 2 * s))
    rho1 = field_.far_radius(x)
    feats = np.asarray(sorted(f for f in field_.tangent_radii(x) if rho0 < f < rho1))

    def width(p):
        w = min(0.25, 0.5 * p)
        if feats.size:
            w = min(w, max(0.5 * eps, 0.3 * float(np.min(np.abs(p - feats)))))
        return w

    pts = [rho0] + list(feats) + [rho1]
    edges = [rho0]
    for a, b in zip(pts[:-1], pts[1:]):
        if b > a:
            edges += _walk(a, b, width)[1:]
    pr, pw = panel_rule(np.asarray(edges), order)
    mid = np.dot(pw, _angular(field_, x, pr, u0, eps, density) * pr ** (-1 - 2 * s))
    far = 2 * math.pi * (u0 - field_.far_value) * rho1 ** (-2 * s) / (2 * s)
    return float(gamma_ds(2, s) * (core + mid + far))


def flap2d(field_, x, s: float | None = None, method: str = "auto", tol: float | None = 1e-4):
    """gamma_{2,s}/2 int (2u(x) - u(x+y) - u(x-y)) |y|^{-2-2s} dy.

    ``field_`` is a RecoveryField or a RadialProfile.  ``method`` is "radial"
    (exact reduction, circles and radial functions), "polar" (any field) or
    "auto".  ``tol`` bounds the relative gap between two Gauss orders on the
    radial path; exceeding it raises AccuracyError.
    """
    if s is None:
        if not isinstance(field_, RecoveryField):
            raise ConfigurationError("s is required for a bare radial profile")
        s = field_.s
    s = float(s)
    if not 0 < s < 1:
        raise DomainError(f"s must lie in (0, 1), got {s!r}")
    if isinstance(field_, RecoveryField) and abs(s - field_.s) > 1e-12:
        raise DomainError("s does not match the profile of the field")
    radial_ok = isinstance(field_, RadialProfile) or field_.curve.kind == "circle"
    if method == "auto":
        method = "radial" if radial_ok else "polar"
    if method not in ("radial", "polar"):
        raise ConfigurationError(f"unknown method {method!r}")
    if method == "radial" and not radial_ok:
        raise ConfigurationError("the radial path needs a circle")
    pts = np.asarray(x, float)
    flat = pts.reshape(-1, 2)
    if method == "radial":
        U = field_ if isinstance(field_, RadialProfile) else field_.radial()
        out = _map(lambda p: _flap_radial(U, float(U.radius(p)), s, tol), flat)
    else:
        out = _map(lambda p: _flap_polar(field_, p, s), flat)
    out = np.asarray(out)
    return float(out[0]) if pts.ndim == 1 else out.reshape(pts.shape[:-1])


def gaussian_radial(a: float = math.pi) -> RadialProfile:
    """exp(-a r^2) as a radial profile (a test function with a closed form)."""
    def U(r, nu=0):
        r = np.asarray(r, float)
        g = np.exp(-a * r * r)
        return (g, -2 * a * r * g, (4 * a * a * r * r - 2 * a) * g)[nu]

    return RadialProfile(U, scale=1.0 / math.sqrt(a), outer=math.sqrt(700.0 / a), cap=0.1)


# ---------------------------------------------------------- Fermi expansion

def fermi_expansion_terms(field_: RecoveryField, x0, Lambda: float = 20.0, method: str = "auto") -> dict:
    """Both sides of the tube expansion of (-Lap)^s u_eps at x0."""
    x0 = np.asarray(x0, float)
    s, eps, delta = field_.s, field_.epsilon, field_.delta
    if not 0.5 < s < 1:
        raise DomainError("the expansion needs s in (1/2, 1)")
    if not Lambda >= 1:
        raise ConfigurationError("Lambda must be >= 1")
    z0 = float(signed_distance(field_.curve, x0))
    if abs(z0) >= delta / (10 * Lambda):
        raise RangeError(f"x0 lies outside the thin tube |dist| < {delta / (10 * Lambda):g}")
    H = float(curvature(field_.curve, project_to_boundary(field_.curve, x0)))
    full = flap2d(field_, x0, s, method)
    lead = float(flap_pointwise(field_.profile.scaled(eps), z0, s))
    curv = gamma_ds(1, s) / (2 * (2 * s - 1)) * H * eta(EtaSpec(eps, delta / Lambda, field_.profile), z0)
    return {"z0": z0, "H": H, "full": full, "leading": lead, "curvature": float(curv),
            "residual": abs(full - lead - curv)}


def fermi_expansion_residual(field_: RecoveryField, x0, Lambda: float = 20.0) -> float:
    """|flap2d - (1D leading term + curvature term)| at a point of the thin tube."""
    return fermi_expansion_terms(field_, x0, Lambda)["residual"]


# ---------------------------------------------------------------- energies

@dataclass(frozen=True)
class EnergyConfig:
    """Energy evaluation settings; Omega is the disk of radius ``omega_radius``."""

    s: float = 0.8
    omega_radius: float | None = None
    epsilon_ladder: tuple = (0.08, 0.04, 0.02)
    order: int = 8
    potential: str = "quartic"

    def __post_init__(self):
        object.__setattr__(self, "epsilon_ladder", tuple(float(e) for e in self.epsilon_ladder))
        lad = self.epsilon_ladder
        if not lad or any(e <= 0 for e in lad) or any(b >= a for a, b in zip(lad, lad[1:])):
            raise ConfigurationError("epsilon ladder must be positive and strictly decreasing")
        if not 0.5 < self.s < 1:
            raise DomainError("energies need s in (1/2, 1)")

    def radius_for(self, curve: PlanarCurve, delta: float) -> float:
        need = float(np.hypot(*curve.center)) + curve.outer_radius + 5 * delta + 1.0
        if self.omega_radius is None:
            return need
        if self.omega_radius < need - 1e-12:
            raise ConfigurationError(f"Omega radius must be >= {need:g}")
        return float(self.omega_radius)


def _potential(config: EnergyConfig) -> DoubleWell:
    return get_potential(config.potential)


def _radius_rule(U: RadialProfile, R_omega: float, order: int):
    """Gauss nodes on [0, R_Omega] in the radius about the curve's centre."""
    feats = np.asarray(U.features, float)

    def width(x):
        return min(U.cap, max(0.5 * U.scale, 0.3 * float(np.min(np.abs(x - feats)))))

    pts = sorted({0.0, R_omega} | {p for p in tuple(U.features) + tuple(U.breaks) if 0 < p < R_omega})
    edges = [0.0]
    for a, b in zip(pts[:-1], pts[1:]):
        edges += _walk(a, b, width)[1:]
    return panel_rule(np.asarray(edges), order)


def _circle_setup(field_: RecoveryField, config: EnergyConfig):
    if field_.curve.kind != "circle":
        raise ConfigurationError("energies are computed by radial reduction on circles")
    if abs(config.s - field_.s) > 1e-12:
        raise DomainError("config s does not match the profile")
    U = field_.radial()
    # distances are measured from the circle's own centre; Omega is centred there too
    R_omega = config.radius_for(PlanarCurve.circle(field_.curve.R), field_.delta)
    return U, R_omega


def g_integrand(field_: RecoveryField, config: EnergyConfig):
    """Radius nodes, weights (with 2 pi r) and the squared first-variation integrand."""
    U, R_omega = _circle_setup(field_, config)
    s, eps = field_.s, field_.epsilon
    r, w = _radius_rule(U, R_omega, config.order)
    lap = np.asarray(_map(lambda ri: _flap_radial(U, ri, s, None), r))
    dW = _potential(config).dW(U.func(r, 0))
    g = (eps ** (2 * s - 1) * lap + dW / eps) ** 2 / eps
    return r, 2 * math.pi * r * w, g


def _g_scale(s, eps):
    return 1.0 / abs(math.log(eps)) if s == 0.75 else 1.0


def energy_G(field_: RecoveryField, config: EnergyConfig) -> float:
    """(1/eps) int_Omega (eps^{2s-1} (-Lap)^s u + W'(u)/eps)^2, divided by |log eps| at s = 3/4."""
    if not 0.75 <= field_.s < 1:
        raise DomainError("G is considered for s in [3/4, 1)")
    _, w, g = g_integrand(field_, config)
    return float(np.dot(w, g) * _g_scale(field_.s, field_.epsilon))


def energy_G_split(field_: RecoveryField, config: EnergyConfig, tube: float | None = None):
    """(G, G restricted to the tube |dist| < tube); tube defaults to delta."""
    if not 0.75 <= field_.s < 1:
        raise DomainError("G is considered for s in [3/4, 1)")
    r, w, g = g_integrand(field_, config)
    tube = field_.delta if tube is None else tube
    sel = np.abs(field_.curve.R - r) < tube
    sc = _g_scale(field_.s, field_.epsilon)
    return float(np.dot(w, g) * sc), float(np.dot(w[sel], g[sel]) * sc)


def energy_F(field_: RecoveryField, config: EnergyConfig) -> float:
    """Fractional Allen-Cahn energy of u_eps on the disk Omega.

    The Gagliardo part over R^4 minus (Omega^c)^2 equals
    2 int_Omega int_{R^2} - int_Omega int_Omega.
    """
    U, R_omega = _circle_setup(field_, config)
    s, eps = field_.s, field_.epsilon
    r, w = _radius_rule(U, R_omega, config.order)
    w = 2 * math.pi * r * w
    out = U.far_value

    def inner(ri):
        full = radial_integral(U, ri, s, 2, 10)
        gap = float(U.func(np.asarray(ri), 0)) - out
        if gap == 0.0:
            return full
        # mass of r' > R_Omega, where U = u_out
        edges = [R_omega]
        while edges[-1] < FAR_END:
            edges.append(min(FAR_END, edges[-1] + 0.5 * (edges[-1] - ri)))
        x, wx = panel_rule(np.asarray(edges), 10)
        tail = np.dot(wx, x * ring_kernel(ri, x, s)) + 2 * math.pi * FAR_END ** (-2 * s) / (2 * s)
        return full + gap * gap * tail  # 2 J_full - J_in = J_full + (J_full - J_in)

    J = np.asarray(_map(inner, r))
    gag = gamma_ds(2, s) / 4 * eps ** (2 * s - 1) * np.dot(w, J)
    pot = np.dot(w, _potential(config).W(U.func(r, 0))) / eps
    return float(gag + pot)


# -------------------------------------------------------------- experiment

@dataclass
class ExperimentReport:
    rows: list = field(default_factory=list)
    limits: dict = field(default_factory=dict)
    errors: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def to_csv(self, header_comment: str | None = None) -> str:
        buf = io.StringIO()
        if header_comment is not None:
            buf.write(f"# {header_comment}\n")
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(CSV_HEADER)
        for row in self.rows:
            wr.writerow([_fmt(row.get(k, "na")) for k in CSV_HEADER])
        for key in sorted(self.limits):
            buf.write(f"# {key}={_fmt(self.limits[key])}\n")
        for msg in self.errors:
            buf.write(f"# error {msg}\n")
        return buf.getvalue()


def _fmt(v):
    if isinstance(v, float):
        return repr(v) if math.isfinite(v) else "nan"
    return str(v)


def richardson_eps(values, eps, power: float = 1.0):
    """Limit estimates from consecutive pairs assuming an O(eps^power) correction."""
    out = []
    for (a, ea), (b, eb) in zip(zip(values, eps), zip(values[1:], eps[1:])):
        r = (ea / eb) ** power
        out.append((r * b - a) / (r - 1))
    return out


def run_limsup_experiment(config: EnergyConfig, curve: PlanarCurve, profile: SampledProfile,
                          timing: bool = False) -> ExperimentReport:
    """F, G and their normalized ratios along the epsilon ladder."""
    s = config.s
    if not 0.75 <= s < 1:
        raise DomainError("the limsup experiment needs s in [3/4, 1)")
    if abs(profile.s - s) > 1e-12:
        raise DomainError("profile s does not match the config")
    per, will = perimeter_and_willmore(curve)
    kstar = kappa_star(s, profile)
    report = ExperimentReport()
    for eps in config.epsilon_ladder:
        t0 = time.perf_counter()
        row = {"epsilon": eps}
        try:
            fld = recovery_field(curve, profile, eps)
            F = energy_F(fld, config)
            G, G_tube = energy_G_split(fld, config)
            row.update(F=F, G=G, F_per_ratio=F / per, G_kappaW_ratio=G / (kstar * will),
                       tube_share=G_tube / G if G > 0 else float("nan"))
        except FracwillError as exc:
            report.errors.append(f"epsilon={eps!r} {type(exc).__name__}: {exc}")
        row["runtime_s"] = round(time.perf_counter() - t0, 3) if timing else "na"
        report.rows.append(row)
    done = [r for r in report.rows if "G" in r]
    report.limits["kappa_star"] = kstar
    report.limits["G_target"] = kstar * will
    if len(done) >= 2:
        e = [r["epsilon"] for r in done]
        G = [r["G"] for r in done]
        report.limits["F_extrapolated_linear"] = richardson_eps([r["F"] for r in done], e)[-1]
        report.limits["G_extrapolated_linear"] = richardson_eps(G, e)[-1]
        # corrections to G are expected at order eps^{4s-3}
        ext = richardson_eps(G, e, 4 * s - 3) if s > 0.75 else richardson_eps(G, e)
        report.limits["G_extrapolated"] = ext[-1]
        report.limits["G_tolerance"] = abs(ext[-1] - ext[-2]) if len(ext) >= 2 else abs(ext[-1] - G[-1])
    return report
