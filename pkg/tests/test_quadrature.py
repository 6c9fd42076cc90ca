import numpy as np
import pytest

from fracwill.quadrature import gauss_legendre, geometric_edges, graded_edges, panel_rule


def test_gauss_exact_for_polynomials():
    t, w = gauss_legendre(6)
    for k in range(12):
        assert np.dot(w, t**k) == pytest.approx(1 / (k + 1), rel=1e-14)


def test_panel_rule_integrates_exp():
    x, w = panel_rule(np.linspace(0, 3, 7), 8)
    assert np.dot(w, np.exp(x)) == pytest.approx(np.expm1(3.0), rel=1e-13)


def test_geometric_edges_cover_interval():
    e = geometric_edges(0.1, 50.0, 1.3, 2.0)
    assert e[0] == 0.1 and e[-1] == 50.0
    assert np.all(np.diff(e) > 0) and np.max(np.diff(e)) <= 2.0 + 1e-12


def test_graded_edges_start_at_zero():
    e = graded_edges(1.0, 5.0, smallest=1e-6)
    assert e[0] == 0.0 and e[1] == pytest.approx(1e-6) and e[-1] == 5.0
