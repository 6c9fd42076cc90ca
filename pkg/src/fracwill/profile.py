"""Optimal profile of the one-dimensional fractional Allen-Cahn equation.

Solves (-d^2/dz^2)^s w + W'(w) = 0 with w(0) = 0 and w -> +-1 at +-infinity,
using a damped fixed-point (gradient-flow) iteration on a uniform grid with a
power-law far field |w - sgn z| ~ c |z|^{-2s}.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .coremath import gamma_ds
from .errors import ConfigurationError, ConvergenceError, DomainError, RangeError
from .fraclap import GridFracLap, TailedFunction1D, flap_pointwise

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class DoubleWell:
    """Even double-well potential with its first three derivatives."""

    name: str
    W: Callable
    dW: Callable
    d2W: Callable
    d3W: Callable
    lam: float

    def check(self, n: int = 401) -> None:
        """Verify W >= 0, W(+-1) = 0, evenness and W''(+-1) = lam on a grid."""
        u = np.linspace(-1.5, 1.5, n)
        ok = (np.all(self.W(u) >= -1e-14) and abs(self.W(1.0)) < 1e-14 and abs(self.W(-1.0)) < 1e-14
              and np.allclose(self.W(u), self.W(-u), atol=1e-14)
              and abs(self.d2W(1.0) - self.lam) < 1e-12 and abs(self.d2W(-1.0) - self.lam) < 1e-12
              and self.lam > 0)
        if not ok:
            raise ConfigurationError(f"potential {self.name!r} violates the double-well assumptions")


def quartic() -> DoubleWell:
    """W(u) = (1 - u^2)^2."""
    return DoubleWell("quartic", lambda u: (1 - u**2) ** 2, lambda u: 4 * u**3 - 4 * u,
                      lambda u: 12 * u**2 - 4, lambda u: 24 * u, 8.0)


def cosine() -> DoubleWell:
    """W(u) = (1 + cos(pi u)) / pi^2; its s = 1/2 layer is (2/pi) arctan z."""
    pi = math.pi
    return DoubleWell("cosine", lambda u: (1 + np.cos(pi * u)) / pi**2, lambda u: -np.sin(pi * u) / pi,
                      lambda u: -np.cos(pi * u), lambda u: pi * np.sin(pi * u), 1.0)


POTENTIALS = {"quartic": quartic, "cosine": cosine}


def get_potential(name: str) -> DoubleWell:
    try:
        return POTENTIALS[name]()
    except KeyError:
        raise ConfigurationError(f"unknown potential {name!r}; choose from {sorted(POTENTIALS)}") from None


@dataclass(frozen=True, eq=False)
class SampledProfile:
    """Solved profile: odd samples on [-L, L] with tail 1 - w ~ c z^{-2s}."""

    func: TailedFunction1D
    s: float
    residual_sup: float
    iterations: int = 0

    @property
    def z(self):
        return self.func.z

    @property
    def values(self):
        return self.func.values

    @property
    def L(self):
        return self.func.L

    @property
    def n(self):
        return self.func.z.size - 1

    @property
    def tail_coefficient(self):
        return self.func.tail_coefficients[1]

    def __call__(self, x, nu=0):
        return self.func(x, nu)

    def scaled(self, epsilon: float) -> TailedFunction1D:
        """Samples of w_eps(z) = w(z / eps) on the stretched grid."""
        f = self.func
        p = f.tail_exponent
        c = tuple(ci * epsilon**p for ci in f.tail_coefficients)
        return TailedFunction1D(f.z * epsilon, f.values, -1.0, 1.0, p, c)


def _fit_tail(z, w, p):
    """Least-squares c in 1 - w = c z^{-p} over the outer 10% of the grid."""
    sel = z >= 0.9 * z[-1]
    zz = z[sel] ** -p
    return float(np.dot(1.0 - w[sel], zz) / np.dot(zz, zz))


def _make_profile(z, w, s, c, residual, iters):
    f = TailedFunction1D(z, w, -1.0, 1.0, 2 * s, (c, c))
    return SampledProfile(f, s, residual, iters)


def solve_profile(potential: DoubleWell | None = None, s: float = 0.75, L: float = 40.0, n: int = 4096,
                  tol: float = 1e-3, max_iter: int = 50_000, refit_every: int = 100,
                  warm_start: bool = True, initial: SampledProfile | None = None) -> SampledProfile:
    """Damped fixed-point solve of (-d_zz)^s w + W'(w) = 0.

    The iteration is w <- w - tau (A w + W'(w)) with tau = 0.5 / (max symbol + sup W''),
    followed by odd symmetrization.  The far-field coefficient is refit every
    ``refit_every`` steps.  ``tol`` bounds the sup of the grid residual on
    [-L/2, L/2]; the returned ``residual_sup`` is measured there with the
    independent pointwise evaluator.  With ``warm_start`` the iteration starts
    from a solve on a 4x coarser grid, which removes most of the slow transient.
    """
    potential = potential or quartic()
    if not 0 < s < 1:
        raise DomainError(f"s must lie in (0, 1), got {s}")
    if n < 1024 or L < 20:
        raise ConfigurationError("solve_profile requires n >= 1024 and L >= 20")
    if n % 2:
        raise ConfigurationError("n must be even")
    op = GridFracLap(L, n, s)
    z = op.z
    p = 2 * s
    lam = potential.lam
    c = gamma_ds(1, s) / (s * lam)
    if initial is not None:
        w = np.asarray(initial(z), float)
        c = initial.tail_coefficient
    elif warm_start and n // 4 >= 1024:
        coarse = solve_profile(potential, s, L, n // 4, tol, max_iter, refit_every, warm_start, None)
        w = coarse(z)
        c = coarse.tail_coefficient
    else:
        w = np.tanh(z)
    w = 0.5 * (w - w[::-1])
    sup_d2 = float(np.max(np.abs(potential.d2W(np.linspace(-1, 1, 201)))))
    tau = 0.5 / (op.symbol_max() + sup_d2)
    inner = np.abs(z) <= L / 2
    tail = op.tail_term((-1.0, 1.0), (c, c), p)
    res = np.inf
    it = 0
    for it in range(1, max_iter + 1):
        r = op.apply(w, (-1.0, 1.0), (c, c), p, tail) + potential.dW(w)
        res = float(np.max(np.abs(r[inner])))
        if res < tol:
            break
        w = w - tau * r
        w = 0.5 * (w - w[::-1])
        if it % refit_every == 0:
            c = _fit_tail(z, w, p)
            tail = op.tail_term((-1.0, 1.0), (c, c), p)
    else:
        raise ConvergenceError(f"profile iteration stalled at residual {res:.3e} after {max_iter} steps",
                               last_residual=res)
    c = _fit_tail(z, w, p)
    prof = _make_profile(z, w, s, c, np.nan, it)
    if np.any(np.diff(w) <= 0):
        raise ConvergenceError("solved profile is not strictly increasing", last_residual=res)
    rs = profile_residual(prof, potential, (-L / 2, L / 2))
    log.debug("profile s=%g n=%d: %d iterations, grid residual %.2e, pointwise %.2e", s, n, it, res, rs)
    return SampledProfile(prof.func, s, rs, it)


def profile_residual(profile: SampledProfile, potential: DoubleWell, region, stride: int = 4) -> float:
    """Sup over grid nodes (every ``stride``-th) in the region of |flap w + W'(w)|."""
    lo, hi = region
    L = profile.L
    if lo < -L / 2 - 1e-12 or hi > L / 2 + 1e-12:
        raise RangeError("region must lie inside [-L/2, L/2]")
    z = profile.z
    pts = z[(z >= lo) & (z <= hi)][::stride]
    out = 0.0
    for chunk in np.array_split(pts, max(1, pts.size // 128)):
        r = flap_pointwise(profile.func, chunk, profile.s) + potential.dW(profile(chunk))
        out = max(out, float(np.max(np.abs(r))))
    return out


def derivative_samples(profile: SampledProfile, k: int) -> np.ndarray:
    """k-th derivative on the grid by centered finite differences (k = 1, 2)."""
    w, h = profile.values, profile.func.h
    d = np.full_like(w, np.nan)
    if k == 1:
        d[2:-2] = (-w[4:] + 8 * w[3:-1] - 8 * w[1:-3] + w[:-4]) / (12 * h)
    elif k == 2:
        d[2:-2] = (-w[4:] + 16 * w[3:-1] - 30 * w[2:-2] + 16 * w[1:-3] - w[:-4]) / (12 * h * h)
    else:
        raise ConfigurationError("derivative order must be 1 or 2")
    return d


def decay_fit(profile: SampledProfile, k: int, window=(10.0, 20.0)) -> float:
    """Least-squares slope of log|d^k (w - sgn)| against log z over the window."""
    lo, hi = window
    if lo < 10 - 1e-12 or hi > profile.L / 2 + 1e-12 or lo >= hi:
        raise RangeError(f"window must lie in [10, L/2], got {window}")
    z = profile.z
    if k == 0:
        q = 1.0 - profile.values
    elif k in (1, 2):
        q = derivative_samples(profile, k)
    else:
        raise ConfigurationError("k must be 0, 1 or 2")
    sel = (z >= lo) & (z <= hi)
    slope, _ = np.polyfit(np.log(z[sel]), np.log(np.abs(q[sel])), 1)
    return float(slope)


def save_profile(profile: SampledProfile, path) -> None:
    """Write a (z, w) table with a header holding s, L, n and the tail coefficients."""
    cm, cp = profile.func.tail_coefficients
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# s={profile.s!r} L={profile.L!r} n={profile.n} c_minus={cm!r} c_plus={cp!r} "
                 f"residual_sup={profile.residual_sup!r}\n")
        for zi, wi in zip(profile.z, profile.values):
            fh.write(f"{zi:.17g} {wi:.17g}\n")


def load_profile(path) -> SampledProfile:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline()
        if not header.startswith("#"):
            raise ConfigurationError("profile file lacks its header line")
        meta = dict(item.split("=", 1) for item in header[1:].split())
        data = np.loadtxt(fh, ndmin=2)
    s = float(meta["s"])
    f = TailedFunction1D(data[:, 0], data[:, 1], -1.0, 1.0, 2 * s,
                         (float(meta["c_minus"]), float(meta["c_plus"])))
    if f.z.size - 1 != int(meta["n"]):
        raise ConfigurationError("profile header n does not match the table")
    return SampledProfile(f, s, float(meta["residual_sup"]))


__all__ = ["DoubleWell", "SampledProfile", "quartic", "cosine", "get_potential", "solve_profile",
           "profile_residual", "decay_fit", "derivative_samples", "save_profile", "load_profile"]
