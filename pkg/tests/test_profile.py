import math

import numpy as np
import pytest

from fracwill.errors import ConfigurationError, RangeError
from fracwill.fraclap import TailedFunction1D, flap_pointwise
from fracwill.profile import (cosine, decay_fit, get_potential, load_profile, profile_residual, quartic,
                              save_profile, solve_profile)


@pytest.mark.parametrize("make", [quartic, cosine])
def test_potentials_are_double_wells(make):
    W = make()
    W.check()
    u = np.linspace(-1.3, 1.3, 7)
    h = 1e-5
    assert np.allclose((W.W(u + h) - W.W(u - h)) / (2 * h), W.dW(u), atol=1e-8)
    assert np.allclose((W.dW(u + h) - W.dW(u - h)) / (2 * h), W.d2W(u), atol=1e-8)


def test_unknown_potential():
    with pytest.raises(ConfigurationError):
        get_potential("sextic")


def test_arctan_closed_form_residual():
    c = 2 / math.pi
    f = TailedFunction1D.from_callable(lambda z: c * np.arctan(z), 40.0, 4096, left_limit=-1.0, right_limit=1.0,
                                       tail_exponent=1.0, tail_coefficients=(c, c))
    from fracwill.profile import SampledProfile
    prof = SampledProfile(f, 0.5, 0.0)
    assert profile_residual(prof, cosine(), (-8, 8)) < 1e-3


def test_cosine_layer_is_arctan(profiles):
    prof = profiles(0.5, "cosine")
    z = np.linspace(-10, 10, 801)
    assert np.max(np.abs(prof(z) - 2 / math.pi * np.arctan(z))) < 1e-3


@pytest.mark.parametrize("s", [0.6, 0.75, 0.9])
def test_solved_profile_shape(profiles, s):
    prof = profiles(s)
    w = prof.values
    assert prof(0.0) == pytest.approx(0.0, abs=1e-12)
    assert np.max(np.abs(w + w[::-1])) < 1e-8
    assert np.all(np.diff(w) > 0)
    assert prof.residual_sup < 1e-3


def test_residual_quartic(profiles):
    assert profile_residual(profiles(0.75), quartic(), (-20, 20)) < 1e-3


def test_equation_transfer(profiles):
    prof = profiles(0.75)
    z = np.linspace(-15, 15, 50)
    assert np.max(np.abs(flap_pointwise(prof.func, z, 0.75) + quartic().dW(prof(z)))) < 2e-3


def test_bound_equals_potential_sup(profiles):
    from fracwill.fraclap import flap_bound_check
    prof = profiles(0.75)
    region = (-5, 5)
    sup_dw = np.max(np.abs(quartic().dW(prof(np.linspace(*region, 201)))))
    assert flap_bound_check(prof.func, region, 0.75) == pytest.approx(sup_dw, abs=2e-3)


def test_linearized_equation(profiles):
    s = 0.75
    prof = profiles(s)
    c = prof.tail_coefficient
    p = 1 + 2 * s
    # w' tends to 0 like 2 s c |z|^{-1-2s} on both sides
    dw = TailedFunction1D(prof.z, prof(prof.z, 1), 0.0, 0.0, p, (2 * s * c, -2 * s * c))
    z = np.linspace(-prof.L / 4, prof.L / 4, 81)
    res = flap_pointwise(dw, z, s) + quartic().d2W(prof(z)) * prof(z, 1)
    assert np.max(np.abs(res)) < 5e-3


@pytest.mark.parametrize("s", [0.6, 0.75, 0.9])
@pytest.mark.parametrize("k", [0, 1, 2])
def test_decay_slopes(profiles, s, k):
    assert decay_fit(profiles(s), k) == pytest.approx(-(k + 2 * s), abs=0.2)


def test_decay_examples(profiles):
    assert decay_fit(profiles(0.75), 1) == pytest.approx(-2.5, abs=0.15)
    assert decay_fit(profiles(0.5, "cosine"), 0) == pytest.approx(-1.0, abs=0.05)
    with pytest.raises(RangeError):
        decay_fit(profiles(0.75), 0, (5.0, 15.0))


def test_round_trip(tmp_path, profiles):
    prof = profiles(0.6)
    path = tmp_path / "w.txt"
    save_profile(prof, path)
    back = load_profile(path)
    assert np.array_equal(back.z, prof.z) and np.array_equal(back.values, prof.values)
    assert back.func.tail_coefficients == prof.func.tail_coefficients and back.s == prof.s


def test_warm_start_matches_cold_solve():
    warm = solve_profile(quartic(), 0.6, 20.0, 1024, 1e-6)
    cold = solve_profile(quartic(), 0.6, 20.0, 1024, 1e-6, warm_start=False)
    assert np.max(np.abs(warm.values - cold.values)) < 1e-4


def test_solver_validates_grid():
    with pytest.raises(ConfigurationError):
        solve_profile(quartic(), 0.75, 10.0, 4096)
