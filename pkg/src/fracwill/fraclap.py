"""One-dimensional fractional Laplacian.

Two evaluators are provided: a pointwise singular-integral quadrature acting on
sampled functions with power-law tails (or periodic samples), and the FFT
multiplier |2 pi xi|^{2s} for periodic samples.  ``GridFracLap`` is the
Toeplitz discretization used inside the profile solver.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import special
from scipy.interpolate import PPoly, make_interp_spline

from .coremath import gamma_ds
from .errors import ConfigurationError, DomainError, RangeError
from .quadrature import gauss_legendre, geometric_edges, panel_rule

TAIL_END = 1.0e6
TAIL_NODES = 40


def _check_s(s):
    s = float(s)
    if not 0.0 < s < 1.0:
        raise DomainError(f"s must lie in (0, 1), got {s!r}")
    return s


@dataclass(frozen=True, eq=False)
class TailedFunction1D:
    """Samples on a uniform symmetric grid plus a far-field model.

    Beyond the grid the function is ``right_limit - c_plus * z**-p`` for z > L and
    ``left_limit + c_minus * |z|**-p`` for z < -L, with p = ``tail_exponent``.
    If ``period`` is set the samples are one period on [-P/2, P/2] (both
    endpoints included) and evaluation wraps around instead.
    """

    z: np.ndarray
    values: np.ndarray
    left_limit: float = 0.0
    right_limit: float = 0.0
    tail_exponent: float = 1.0
    tail_coefficients: tuple = (0.0, 0.0)
    period: float | None = None
    _spline: PPoly = field(init=False, repr=False)

    def __post_init__(self):
        z = np.asarray(self.z, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if z.ndim != 1 or z.shape != v.shape or z.size < 8:
            raise ConfigurationError("grid and values must be 1D arrays of equal length >= 8")
        dz = np.diff(z)
        if np.any(dz <= 0):
            raise ConfigurationError("grid must be strictly increasing")
        h = (z[-1] - z[0]) / (z.size - 1)
        if np.max(np.abs(dz - h)) > 1e-9 * max(1.0, h) or abs(z[0] + z[-1]) > 1e-9 * max(1.0, z[-1]):
            raise ConfigurationError("grid must be uniform and symmetric about 0")
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "tail_coefficients", tuple(float(c) for c in self.tail_coefficients))
        if self.period is not None:
            if abs(z[-1] - z[0] - self.period) > 1e-9 * self.period:
                raise ConfigurationError("periodic samples must span exactly one period")
            if abs(v[0] - v[-1]) > 1e-12 * max(1.0, np.max(np.abs(v))):
                raise ConfigurationError("periodic samples must repeat at the endpoints")
            v = v.copy()
            v[-1] = v[0]
            spline = make_interp_spline(z, v, k=5, bc_type="periodic")
        else:
            L, p = z[-1], self.tail_exponent
            cm, cp = self.tail_coefficients
            slack = 1e-9 + 1e-9 * np.max(np.abs(v))
            if (abs(v[-1] - self.right_limit) > 1.5 * abs(cp) * L**-p + slack
                    or abs(v[0] - self.left_limit) > 1.5 * abs(cm) * L**-p + slack):
                raise ConfigurationError("edge samples inconsistent with the tail model")
            spline = make_interp_spline(z, v, k=5)
        object.__setattr__(self, "_spline", PPoly.from_spline(spline))

    @classmethod
    def from_callable(cls, func, L, n, **kwargs):
        """Sample ``func`` on n+1 uniform nodes of [-L, L]."""
        z = np.linspace(-L, L, int(n) + 1)
        return cls(z, func(z), **kwargs)

    @property
    def h(self) -> float:
        return (self.z[-1] - self.z[0]) / (self.z.size - 1)

    @property
    def L(self) -> float:
        return self.z[-1]

    def __call__(self, x, nu: int = 0):
        """Evaluate the function (or derivative of order ``nu`` <= 2)."""
        x = np.asarray(x, dtype=float)
        if self.period is not None:
            P = self.period
            xw = np.mod(x - self.z[0], P) + self.z[0]
            return self._spline(xw, nu)
        L = self.L
        out = np.empty_like(x)
        inside = np.abs(x) <= L
        out[inside] = self._spline(x[inside], nu)
        p = self.tail_exponent
        cm, cp = self.tail_coefficients
        # derivative of z^-p of order nu carries (-p)(-p-1)... factors
        fac = 1.0
        for j in range(nu):
            fac *= -p - j
        right = x > L
        left = x < -L
        xr, xl = x[right], -x[left]
        if nu == 0:
            out[right] = self.right_limit - cp * xr**-p
            out[left] = self.left_limit + cm * xl**-p
        else:
            out[right] = -cp * fac * xr ** (-p - nu)
            # d/dx of g(-x) brings (-1)^nu
            out[left] = cm * fac * (-1) ** nu * xl ** (-p - nu)
        return out


def _periodic_kernel(y, q, P, smooth_only=False):
    """Sum over n of |y + nP|^{-q} for 0 < y < P (or that sum minus y^-q)."""
    a = special.zeta(q, 1.0 - y / P)
    if smooth_only:
        return P**-q * (special.zeta(q, 1.0 + y / P) + a)
    return P**-q * (special.zeta(q, y / P) + a)


def _core_panels(f: TailedFunction1D, x):
    """Panel edges on [0, 2h] aligned with the spline knots seen from each x."""
    h = f.h
    phi = np.mod((x - f.z[0]) / h, 1.0)
    e = np.stack([np.zeros_like(phi), phi, 1 - phi, 1 + phi, 2 - phi, 2 * np.ones_like(phi)], axis=-1)
    return np.sort(np.clip(e, 0.0, 2.0), axis=-1) * h


def flap_pointwise(f: TailedFunction1D, x, s: float):
    """(-d^2/dz^2)^s f at the points x by singular-integral quadrature.

    Uses the symmetric second-difference form with the quadratic Taylor term
    removed analytically on |y| <= 2h.
    """
    s = _check_s(s)
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if f.period is None and np.any(np.abs(x) > f.L / 2 + 1e-12):
        raise RangeError(f"evaluation points must lie in [-{f.L / 2}, {f.L / 2}]")
    q = 1.0 + 2.0 * s
    h = f.h
    fx = f(x)
    f2 = f(x, 2)
    periodic = f.period is not None

    def g(y):
        return 2.0 * fx[:, None] - f(x[:, None] + y) - f(x[:, None] - y)

    # core [0, 2h]
    t6, w6 = gauss_legendre(6)
    e = _core_panels(f, x)
    a, b = e[:, :-1, None], e[:, 1:, None]
    yc = (a + (b - a) * t6).reshape(x.size, -1)
    wc = ((b - a) * w6).reshape(x.size, -1)
    gc = g(yc)
    ok = yc > 0
    yc_safe = np.where(ok, yc, 1.0)
    integrand = np.where(ok, (gc + f2[:, None] * yc**2) * yc_safe**-q, 0.0)
    if periodic:
        integrand = integrand + gc * _periodic_kernel(yc, q, f.period, smooth_only=True)
    total = np.sum(wc * integrand, axis=1) - f2 * (2 * h) ** (2 - 2 * s) / (2 - 2 * s)

    # middle: cell-sized panels near the core, geometric further out
    ymax = f.period / 2 if periodic else 2.0 * f.L
    near = 2 * h + h * np.arange(0, 31)
    near = near[near < ymax]
    edges = np.concatenate([near, geometric_edges(near[-1], ymax, 1.15, 16 * h)[1:]]) if near[-1] < ymax else near
    edges = np.unique(np.clip(edges, 2 * h, ymax))
    if edges.size > 1:
        ym, wm = panel_rule(edges, 6)
        kern = _periodic_kernel(ym, q, f.period) if periodic else ym**-q
        total = total + g(ym[None, :]) @ (wm * kern)

    if not periodic:
        # log-spaced tail out to TAIL_END, exact power law beyond
        u, wu = panel_rule(np.log([ymax, TAIL_END]), TAIL_NODES)
        yt = np.exp(u)
        total = total + g(yt[None, :]) @ (wu * yt ** (1 - q))
        cm, cp = f.tail_coefficients
        p = f.tail_exponent
        lim = f.left_limit + f.right_limit
        total = total + (2 * fx - lim) * TAIL_END ** (-2 * s) / (2 * s)
        total = total + (cp - cm) * TAIL_END ** (-p - 2 * s) / (p + 2 * s)

    out = gamma_ds(1, s) * total
    return float(out[0]) if scalar else out


def flap_spectral(samples, period: float, s: float) -> np.ndarray:
    """Apply the multiplier |2 pi xi|^{2s} to one period of uniform samples."""
    s = _check_s(s)
    samples = np.asarray(samples, dtype=float)
    n = samples.size
    if n < 2 or n & (n - 1):
        raise ConfigurationError(f"sample count must be a power of two, got {n}")
    xi = np.fft.rfftfreq(n, d=period / n)
    return np.fft.irfft(np.abs(2 * np.pi * xi) ** (2 * s) * np.fft.rfft(samples), n)


def flap_bound_check(f: TailedFunction1D, region, s: float, n_points: int = 201) -> float:
    """Sup of |flap_pointwise| over ``n_points`` uniform points of the region."""
    lo, hi = region
    if f.period is None and (lo <= f.z[0] or hi >= f.z[-1]):
        raise RangeError("region must lie strictly inside the grid")
    return float(np.max(np.abs(flap_pointwise(f, np.linspace(lo, hi, n_points), s))))


class GridFracLap:
    """Toeplitz discretization of (-d^2/dz^2)^s on the nodes of a uniform grid.

    For node z_i the integral over y in [0, K h] uses an even quartic fit on
    [0, h] and local cubic Lagrange interpolation of y -> 2f_i - f_{i+k} - f_{i-k}
    on each later cell, integrated exactly against y^{-1-2s}.  Grid values
    beyond [-L, L] come from the tail model; y > K h is integrated from the tail
    model directly.
    """

    def __init__(self, L: float, n: int, s: float, far: float = 2.0):
        self.s = _check_s(s)
        self.L = float(L)
        self.n = int(n)
        if self.n % 2:
            raise ConfigurationError("n must be even so that z = 0 is a node")
        self.h = 2 * self.L / self.n
        self.z = np.linspace(-self.L, self.L, self.n + 1)
        self.K = int(round(far * self.L / self.h))
        self.gamma = gamma_ds(1, s)
        self.weights = self._weights()
        m = self.K + 1
        self.pad = m
        self.z_ext = self.h * np.arange(-(self.n // 2 + m), self.n // 2 + m + 1)
        size = self.z_ext.size + 2 * m
        self.nfft = 1 << int(np.ceil(np.log2(size)))
        kern = np.zeros(self.nfft)
        kern[1:m + 1] = self.weights
        kern[-m:] = self.weights[::-1]
        self._kern_hat = np.fft.rfft(kern)
        self._wsum = self.weights.sum()
        # tail in y beyond K h: log-spaced nodes
        Y = self.K * self.h
        u, wu = panel_rule(np.log([Y, TAIL_END]), TAIL_NODES)
        self._yt = np.exp(u)
        self._wt = wu * self._yt ** (-2 * self.s)
        self._Y = Y

    def _weights(self):
        s, K = self.s, self.K
        q = 1 + 2 * s
        W = np.zeros(K + 2)
        W[1] += (16 / 12) / (2 - 2 * s) - (4 / 12) / (4 - 2 * s)
        W[2] += (-1 / 12) / (2 - 2 * s) + (1 / 12) / (4 - 2 * s)
        t, w = gauss_legendre(20)
        k = np.arange(1, K)[:, None].astype(float)
        kern = w * (k + t) ** -q
        basis = [
            -t * (t - 1) * (t - 2) / 6,
            (t + 1) * (t - 1) * (t - 2) / 2,
            -(t + 1) * t * (t - 2) / 2,
            (t + 1) * t * (t - 1) / 6,
        ]
        kk = np.arange(1, K)
        for j, bj in enumerate(basis):
            np.add.at(W, kk - 1 + j, (kern * bj).sum(axis=1))
        W[0] = 0.0  # node 0 has g = 0
        return W[1:] * self.h ** (-2 * s)

    def symbol_max(self) -> float:
        theta = np.linspace(0, np.pi, 2049)
        k = np.arange(1, self.weights.size + 1)
        sym = (self.weights[None, :] * (2 - 2 * np.cos(np.outer(theta, k)))).sum(axis=1)
        return float(self.gamma * sym.max())

    def extend(self, w, limits, coeffs, p):
        """Pad grid values with the tail model out to the convolution reach."""
        m = self.pad
        zr = self.z_ext[-m:]
        right = limits[1] - coeffs[1] * zr**-p
        left = (limits[0] + coeffs[0] * zr**-p)[::-1]
        return np.concatenate([left, w, right])

    def tail_term(self, limits, coeffs, p):
        """Integral over y > K h of -(f(z+y) + f(z-y)) y^{-1-2s}, per node."""
        s = self.s
        zi = self.z[:, None]
        yp, ym = zi + self._yt, self._yt - zi
        fsum = (limits[1] - coeffs[1] * yp**-p) + (limits[0] + coeffs[0] * ym**-p)
        val = -(fsum @ self._wt)
        val -= (limits[0] + limits[1]) * TAIL_END ** (-2 * s) / (2 * s)
        val -= (coeffs[0] - coeffs[1]) * TAIL_END ** (-p - 2 * s) / (p + 2 * s)
        return val

    def apply(self, w, limits=(-1.0, 1.0), coeffs=(0.0, 0.0), p=None, tail=None):
        """Operator applied to node values w (length n+1)."""
        p = 2 * self.s if p is None else p
        ext = self.extend(np.asarray(w, float), limits, coeffs, p)
        buf = np.zeros(self.nfft)
        buf[: ext.size] = ext
        conv = np.fft.irfft(np.fft.rfft(buf) * self._kern_hat, self.nfft)
        m = self.pad
        nb = conv[m: m + self.n + 1]
        if tail is None:
            tail = self.tail_term(limits, coeffs, p)
        far = 2 * np.asarray(w) * self._Y ** (-2 * self.s) / (2 * self.s) + tail
        return self.gamma * (2 * self._wsum * w - nb + far)
