import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, special

from mixhardy.errors import DomainError, QuadratureError, UnsupportedDimensionError
from mixhardy.fields import make_exponential, make_power_piece, make_rational_tail
from mixhardy.profiles import AngularProfile
from mixhardy.quadrature import (
    DEFAULT_SPEC,
    QuadratureSpec,
    adaptive_batch,
    cumulative_radial,
    integrate_interval,
    integrate_radial,
    integrate_sphere,
    radial_moment,
    radial_moments_to_inf,
    sphere_rule,
)


@pytest.mark.parametrize("func,a,b,exact", [
    (np.sin, 0.0, math.pi, 2.0),
    (np.exp, -1.0, 2.0, math.e**2 - math.exp(-1)),
    (lambda x: 1 / (1 + x**2), -5.0, 5.0, 2 * math.atan(5.0)),
    (lambda x: np.sqrt(np.abs(x)), 0.0, 1.0, 2.0 / 3.0),
])
def test_integrate_interval(func, a, b, exact):
    assert integrate_interval(func, a, b) == pytest.approx(exact, rel=1e-12)


def test_adaptive_batch_independent_intervals():
    a = np.array([0.0, 1.0, 2.0])
    b = np.array([1.0, 3.0, 2.5])
    vals, errs = adaptive_batch(lambda x, _o: x**3, a, b)
    np.testing.assert_allclose(vals, (b**4 - a**4) / 4, rtol=1e-13)
    assert np.all(errs >= 0)


def test_adaptive_batch_reports_failure():
    with pytest.raises(QuadratureError):
        adaptive_batch(lambda x, _o: np.sin(1.0 / np.maximum(x, 1e-300)), np.array([0.0]),
                       np.array([1.0]), rel_tol=1e-14, abs_tol=1e-300, max_subdivisions=20)


@pytest.mark.parametrize("n", [2, 3, 5])
def test_integrate_radial_exponential(n):
    # ∫ e^{-r} r^{n-1} dr = Γ(n); no exact tail, so the default relative tolerance applies
    assert integrate_radial(make_exponential(), n) == pytest.approx(math.gamma(n), rel=1e-10)


@pytest.mark.parametrize("b,n", [(2.5, 2), (3.5, 3), (2.01, 2)])
def test_integrate_radial_rational_tail(b, n):
    # ∫ (1+r)^{-b} r^{n-1} dr = B(n, b-n)
    exact = special.beta(n, b - n)
    assert integrate_radial(make_rational_tail(1.0, b), n) == pytest.approx(exact, rel=1e-10)


def test_integrate_radial_singular_origin():
    # r^{-1.9} on [0, 1] against r dr
    f = make_power_piece(1.0, -1.9, 0.0, 1.0)
    assert integrate_radial(f, 2) == pytest.approx(10.0, rel=1e-12)


def test_integrate_radial_divergence_detected():
    with pytest.raises(DomainError):
        integrate_radial(make_power_piece(1.0, -2.0, 0.0, 1.0), 2)
    with pytest.raises(DomainError):
        integrate_radial(make_rational_tail(1.0, 1.5), 2)


@given(c=st.floats(0.1, 5), alpha=st.floats(-1.5, 3), lo=st.floats(0.0, 2.0), width=st.floats(0.05, 4))
@settings(max_examples=40, deadline=None)
def test_power_piece_moment(c, alpha, lo, width):
    hi = lo + width
    f = make_power_piece(c, alpha, lo, hi)
    k = alpha + 2
    exact = c * (hi**k - lo**k) / k
    assert integrate_radial(f, 2) == pytest.approx(exact, rel=1e-10)


def test_cumulative_radial_matches_scipy():
    f = make_rational_tail(2.0, 3.0) + make_power_piece(1.0, 0.5, 0.3, 1.7)
    radii = np.array([0.1, 0.3, 1.0, 1.7, 5.0])
    got = cumulative_radial(f, 3, radii)
    for r, g in zip(radii, got):
        ref = integrate.quad(lambda s: float(f(s)) * s**2, 0, r, points=[0.3, 1.7], epsrel=1e-13,
                             limit=200)[0]
        assert g == pytest.approx(ref, rel=1e-11)
    assert cumulative_radial(f, 3, 0.0) == 0.0


def test_moments_to_inf_consistent():
    f = make_rational_tail(1.0, 2.5)
    radii = np.array([0.0, 0.5, 2.0, 40.0])
    tails = radial_moments_to_inf(f, 0.5, radii)
    total = radial_moment(f, 0.5)
    np.testing.assert_allclose(tails[0], total, rtol=1e-12)
    for r, t in zip(radii, tails):
        # ∫_r^∞ (1+s)^{-2.5} s^{0.5} ds by scipy
        ref = integrate.quad(lambda s: (1 + s) ** -2.5 * s**0.5, r, np.inf, epsrel=1e-12)[0]
        assert t == pytest.approx(ref, rel=1e-9)


def test_exact_tail_handles_slow_decay():
    # r^{-(1+1e-3)} on (1, inf): ∫ r^{-1-1e-3} dr = 1000, far beyond any truncation
    f = make_power_piece(1.0, -2.001, 1.0)
    assert integrate_radial(f, 2) == pytest.approx(1000.0, rel=1e-10)


@pytest.mark.parametrize("level", [0, 2, 4])
def test_sphere_rule_weights(level):
    for n, w_total in ((2, 2 * math.pi), (3, 4 * math.pi)):
        u, w = sphere_rule(n, level)
        assert w.sum() == pytest.approx(w_total, rel=1e-13)
        np.testing.assert_allclose(np.linalg.norm(u, axis=1), 1.0, atol=1e-14)


def test_sphere_rule_moments():
    u, w = sphere_rule(3, 2)
    assert np.dot(w, u[:, 2] ** 2) == pytest.approx(4 * math.pi / 3, rel=1e-13)
    assert np.dot(w, u[:, 0] ** 4) == pytest.approx(4 * math.pi / 5, rel=1e-13)
    with pytest.raises(UnsupportedDimensionError):
        sphere_rule(4, 0)


def test_integrate_sphere():
    a2 = AngularProfile(lambda phi: np.exp(np.cos(phi)))
    assert integrate_sphere(a2, 2) == pytest.approx(2 * math.pi * special.i0(1.0), rel=1e-12)
    a3 = AngularProfile(lambda theta, phi: np.cos(theta) ** 2)
    assert integrate_sphere(a3, 3) == pytest.approx(4 * math.pi / 3, rel=1e-12)
    assert integrate_sphere(AngularProfile.const(2.0), 6) == pytest.approx(
        2 * 2 * math.pi**3 / 2, rel=1e-13)


def test_integrate_sphere_kinks():
    a = AngularProfile(lambda phi: np.abs(np.sin(phi)), breakpoints=(0.0, math.pi))
    assert integrate_sphere(a, 2) == pytest.approx(4.0, rel=1e-12)


def test_spec_env_override(monkeypatch):
    monkeypatch.setenv("MIXHARDY_REL_TOL", "1e-8")
    monkeypatch.setenv("MIXHARDY_MAX_SUBDIVISIONS", "500")
    spec = QuadratureSpec.from_env()
    assert spec.rel_tol == 1e-8 and spec.max_subdivisions == 500
    assert QuadratureSpec.from_env(rel_tol=1e-9).rel_tol == 1e-9
    assert DEFAULT_SPEC.tighter(0.1).rel_tol == pytest.approx(1e-11)


@pytest.mark.parametrize("kwargs", [{"rel_tol": 0}, {"abs_tol": -1}, {"max_subdivisions": 0}])
def test_spec_validation(kwargs):
    with pytest.raises(DomainError):
        QuadratureSpec(**kwargs)


def test_sliver_cells_next_to_a_jump():
    # radii a few ulps-worth of log away from the breakpoint of χ_[0,25]
    from mixhardy.fields import make_chi_ball
    f = make_chi_ball(25.0)
    radii = 25.0 * (1 + np.array([-3e-13, -1e-14, 0.0, 1e-14, 3e-13, 1e-7]))
    got = cumulative_radial(f, 2, radii)
    np.testing.assert_allclose(got, np.minimum(radii, 25.0) ** 2 / 2, rtol=1e-12)



@pytest.mark.parametrize("t", [1.0, 15.0, 40.0])
def test_tail_accuracy_independent_of_scale(t):
    # dilation multiplies the scaled tail by t^{-9}, far below abs_tol
    f = (make_rational_tail(1.0, 2.5) + make_power_piece(1.0, -0.3, 0.0, 2.0)).abs_pow(3.75)
    g = f.dilate(t)
    assert g.tail_start == pytest.approx(2.0 / t)
    got = radial_moments_to_inf(g, 1, [g.tail_start])[0]
    ref = integrate.quad(lambda s: float(g(s)) * s, 2.0 / t, np.inf, epsrel=1e-13, limit=200)[0]
    assert got == pytest.approx(ref, rel=1e-10)
