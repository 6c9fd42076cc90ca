import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from fracwill.coremath import (beta_fn, gamma_ds, gamma_fn, kernel_reduction_constant, radial_moment,
                               sphere_area)
from fracwill.errors import DomainError


@pytest.mark.parametrize("x", [0.1, 0.5, 1.25, 2.0, 3.7, 10.5, 40.0])
def test_gamma_matches_mpmath(x):
    assert gamma_fn(x) == pytest.approx(float(mpmath.gamma(x)), rel=1e-13)


def test_gamma_known_values():
    assert gamma_fn(1.25) == pytest.approx(0.906402477055477, rel=1e-14)
    assert gamma_fn(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-15)


@given(st.floats(0.05, 30.0))
@settings(max_examples=60, deadline=None)
def test_gamma_recurrence(x):
    assert gamma_fn(x + 1) == pytest.approx(x * gamma_fn(x), rel=1e-12)


@pytest.mark.parametrize("x", [0.0, -1.0, float("nan"), float("inf")])
def test_gamma_rejects_nonpositive(x):
    with pytest.raises(DomainError):
        gamma_fn(x)


@pytest.mark.parametrize("x,y", [(0.5, 0.5), (1.0, 2.0), (2.5, 0.3), (7.0, 11.0)])
def test_beta_matches_mpmath(x, y):
    assert beta_fn(x, y) == pytest.approx(float(mpmath.beta(x, y)), rel=1e-13)


def test_beta_rejects_bad_arguments():
    with pytest.raises(DomainError):
        beta_fn(-0.5, 1.0)


@pytest.mark.parametrize("a,b", [(0.0, 2.0), (0.5, 3.0), (1.0, 3.5), (2.0, 4.6), (-0.5, 1.2)])
def test_radial_moment_matches_quadrature(a, b):
    mpmath.mp.dps = 30
    val = mpmath.quad(lambda r: r**a * (r * r + 1) ** (-mpmath.mpf(b) / 2), [0, 1, mpmath.inf])
    assert radial_moment(a, b) == pytest.approx(2 * float(val), rel=1e-10)


def test_radial_moment_domain():
    with pytest.raises(DomainError):
        radial_moment(1.0, 2.0)


def test_gamma_ds_values():
    # s = 1/2 in one dimension gives 1/pi
    assert gamma_ds(1, 0.5) == pytest.approx(1 / math.pi, rel=1e-14)
    assert gamma_ds(1, 0.75) == pytest.approx(0.2992067103, rel=1e-9)
    with pytest.raises(DomainError):
        gamma_ds(1, 1.0)


def test_sphere_area():
    assert sphere_area(1) == 2.0
    assert sphere_area(2) == pytest.approx(2 * math.pi)
    assert sphere_area(3) == pytest.approx(4 * math.pi)


@pytest.mark.parametrize("d", [2, 3, 4])
@pytest.mark.parametrize("s", [0.6, 0.75, 0.9])
def test_kernel_reduction_closed_forms(d, s):
    g1, gd = gamma_ds(1, s), gamma_ds(d, s)
    assert kernel_reduction_constant(d, s, 0, 0) == pytest.approx(g1 / gd, rel=1e-8)
    assert kernel_reduction_constant(d, s, 2, 0) == pytest.approx((d - 1) * g1 / ((2 * s - 1) * gd), rel=1e-8)


@pytest.mark.parametrize("d,s,alpha,beta", [(2, 0.75, 0, 0), (2, 0.6, 1.5, 0.5), (3, 0.8, 2, 0), (3, 0.7, 0.5, 1)])
def test_kernel_reduction_brute_force(d, s, alpha, beta):
    q = (d + 2 * s + beta) / 2
    val, _ = integrate.quad(lambda r: r ** (alpha + d - 2) * (1 + r * r) ** -q, 0, np.inf, epsabs=0, epsrel=1e-12,
                            limit=400)
    assert kernel_reduction_constant(d, s, alpha, beta) == pytest.approx(sphere_area(d - 1) * val, rel=1e-9)


def test_kernel_reduction_integrability():
    with pytest.raises(DomainError):
        kernel_reduction_constant(2, 0.75, 3.0, 0.0)
    with pytest.raises(DomainError):
        kernel_reduction_constant(1, 0.75, 0.0, 0.0)
