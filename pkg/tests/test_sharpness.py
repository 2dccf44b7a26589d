import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mixhardy.errors import DomainError
from mixhardy.fields import make_chi_ball, make_f_eps
from mixhardy.norms import MixedExponents
from mixhardy.sharpness import (
    FractionalConfig,
    HardyConfig,
    ReportRow,
    dual_eps_rows,
    dual_fractional_row,
    eps_lower_bound,
    fractional_core_constant,
    fractional_row,
    hardy_eps_rows,
    holder_rows,
    random_bound_rows,
    ratio_experiment,
    rotation_oracle_rows,
    sharp_dual_constant,
    sharp_dual_fractional_constant,
    sharp_fractional_constant,
    sharp_hardy_constant,
    sharp_weak_constant,
    weak_rows,
)

from oracles import (
    dual_ratio_f_eps,
    eps_lower_bound_mp,
    fractional_core_mp,
    fractional_core_quad,
    hardy_ratio_f_eps,
    omega,
)

exps = st.floats(1.05, 8.0)


# -- closed forms ----------------------------------------------------------------


@pytest.mark.parametrize("n", [2, 3, 7])
def test_hardy_constant_equal_angular_exponents(n):
    assert sharp_hardy_constant(HardyConfig(n, 2, 3, 3)) == pytest.approx(2.0, rel=1e-15)
    assert sharp_dual_constant(HardyConfig(n, 2, 3, 3)) == pytest.approx(2.0, rel=1e-15)
    assert sharp_weak_constant(HardyConfig(n, 2, 5, 5)) == 1.0


def test_constant_examples():
    assert sharp_hardy_constant(HardyConfig(2, 2, 2, 4)) == pytest.approx(2 * (2 * math.pi) ** -0.25,
                                                                         rel=1e-14)
    # quoted example values are four-decimal truncations, hence abs=1e-4
    assert sharp_hardy_constant(HardyConfig(2, 2, 2, 4)) == pytest.approx(1.2632, abs=1e-4)
    assert sharp_hardy_constant(HardyConfig(3, 3, 4, 4)) == pytest.approx(1.5, rel=1e-15)
    assert sharp_dual_constant(HardyConfig(2, 3, 2, 4)) == pytest.approx(1.8948, abs=1e-4)
    assert sharp_weak_constant(HardyConfig(2, 2, 2, 4)) == pytest.approx(0.6316, abs=1e-4)
    assert sharp_weak_constant(HardyConfig(3, 2, 4, 2)) == pytest.approx((4 * math.pi) ** 0.25, rel=1e-14)
    assert sharp_weak_constant(HardyConfig(3, 2, 4, 2)) == pytest.approx(1.88279, abs=1e-5)


@given(n=st.integers(2, 10), p=exps, pb1=exps, pb2=exps)
def test_formula_coherence(n, p, pb1, pb2):
    c = HardyConfig(n, p, pb1, pb2)
    w = sharp_weak_constant(c)
    assert sharp_hardy_constant(c) * (p - 1) / p == pytest.approx(w, rel=1e-12)
    assert sharp_dual_constant(c) / p == pytest.approx(w, rel=1e-12)
    assert w == pytest.approx(omega(n) ** (1 / pb2 - 1 / pb1), rel=1e-12)


@pytest.mark.parametrize("bad", [(2, 1.0, 2, 2), (2, 2, math.inf, 2), (1, 2, 2, 2), (2, 2, 2, 0.9)])
def test_hardy_config_validation(bad):
    with pytest.raises(DomainError):
        HardyConfig(*bad)


def test_fractional_core_examples():
    assert fractional_core_constant(4 / 3, 4, 2, 1) == pytest.approx(2 / math.sqrt(math.pi), abs=1e-9)
    assert fractional_core_constant(4 / 3, 4, 3, 1.5) == pytest.approx(2 / math.sqrt(math.pi), abs=1e-9)
    with pytest.raises(DomainError):
        fractional_core_constant(1.5, 4, 2, 1)


@pytest.mark.parametrize("p,q,n,beta", [(4 / 3, 4, 2, 1), (1.5, 3, 3, 1), (4 / 3, 4, 3, 1.5),
                                        (2, 6, 3, 1), (1.25, 2, 4, 1.2)])
def test_fractional_core_oracles(p, q, n, beta):
    c = fractional_core_constant(p, q, n, beta)
    assert c == pytest.approx(fractional_core_mp(p, q, n, beta), rel=1e-12)
    assert c == pytest.approx(fractional_core_quad(p, q, n, beta), rel=1e-9)


def test_fractional_constant_examples():
    c = FractionalConfig(2, 1, 4 / 3, 4, 2, 2)
    assert sharp_fractional_constant(c) == pytest.approx(2 * math.sqrt(2), rel=1e-13)
    # p̄ = p, q̄ = q: the ω exponent vanishes by the scaling relation
    c = FractionalConfig(3, 1, 1.5, 3, 1.5, 3)
    assert sharp_fractional_constant(c) == pytest.approx(fractional_core_constant(1.5, 3, 3, 1), rel=1e-13)


@given(n=st.integers(2, 6), t=st.floats(0.05, 0.95), s=st.floats(0.05, 0.95))
@settings(max_examples=40)
def test_dual_fractional_constant_by_conjugation(n, t, s):
    # β = t n/p picks a valid triple; the adjoint constant equals the primal one at conjugates
    p = 1.0 + 3 * s
    beta = t * n / p
    q = 1.0 / (1.0 / p - beta / n)
    if q <= p * 1.0000001:
        return
    c = FractionalConfig(n, beta, p, q, 2.0, 3.0)
    primal = FractionalConfig(n, beta, q / (q - 1), p / (p - 1), 1.5, 2.0)
    assert sharp_dual_fractional_constant(c) == pytest.approx(sharp_fractional_constant(primal), rel=1e-12)


def test_fractional_config_validation():
    with pytest.raises(DomainError):
        FractionalConfig(2, 1, 4 / 3, 4.01, 2, 2)
    with pytest.raises(DomainError):
        FractionalConfig(2, 2.5, 4 / 3, 4, 2, 2)
    with pytest.raises(DomainError):
        FractionalConfig.from_p_beta(2, 1.5, 4 / 3, 2, 2)
    c = FractionalConfig.from_p_beta(2, 1, 4 / 3, 2, 2)
    assert c.q == pytest.approx(4.0, rel=1e-14)


def test_eps_lower_bound_examples():
    assert eps_lower_bound(0.1, 2, 2) == pytest.approx(2 * 0.1**0.1 * (1 - 0.1**0.9) / 0.9, rel=1e-14)
    assert eps_lower_bound(0.1, 2, 2) == pytest.approx(1.5429, abs=1e-4)
    assert eps_lower_bound(0.5, 3, 3) == pytest.approx(3 * 0.5**0.5 * (1 - 0.5**1.5) / 1.5, rel=1e-14)
    assert eps_lower_bound(0.5, 3, 3) == pytest.approx(0.9143, abs=1e-4)
    assert eps_lower_bound(1e-12, 2, 2) == pytest.approx(2.0, rel=1e-9)
    assert eps_lower_bound(1e-301, 2, 2) == pytest.approx(2.0, rel=1e-12)
    with pytest.raises(DomainError):
        eps_lower_bound(0.9, 1.5, 2)


@given(eps=st.floats(1e-6, 0.45), p=st.floats(1.2, 6), n=st.integers(2, 6))
@settings(max_examples=50)
def test_eps_lower_bound_high_precision(eps, p, n):
    if n - eps - n / p <= 1e-3:
        return
    lb = eps_lower_bound(eps, p, n)
    assert lb == pytest.approx(eps_lower_bound_mp(eps, p, n), rel=1e-12)
    assert lb <= p / (p - 1) * (1 + 1e-12)


# -- experiments ----------------------------------------------------------------


def test_report_row_gap():
    row = ReportRow(operator="H", n=2, p=2.0, numerical_ratio=1.9, closed_form_constant=2.0)
    assert row.relative_gap == pytest.approx(0.05)
    assert row.anchor == "hardy-strong"
    assert "config" not in row.as_dict()


@pytest.mark.parametrize("n,p", [(2, 2), (2, 1.5), (3, 3)])
def test_hardy_eps_rows_match_closed_form(n, p):
    cfg = HardyConfig(n, p, 2, 4)
    rows = hardy_eps_rows(cfg, [0.5, 0.1, 0.01])
    for r in rows:
        assert r.numerical_ratio == pytest.approx(hardy_ratio_f_eps(r.family_param, p, n, 2, 4), rel=1e-9)
        assert r.lower_bound - 1e-6 <= r.numerical_ratio <= r.closed_form_constant + 1e-6
    ratios = [r.numerical_ratio for r in rows]
    assert ratios == sorted(ratios)


def test_dual_eps_rows_match_closed_form():
    cfg = HardyConfig(3, 2.5, 3, 2)
    for r in dual_eps_rows(cfg, [0.3, 0.03]):
        assert r.numerical_ratio == pytest.approx(dual_ratio_f_eps(r.family_param, 2.5, 3, 3, 2), rel=1e-9)


def test_ratio_experiment_bracket_example():
    e = MixedExponents(2, 2, 2)
    row = ratio_experiment("H", make_f_eps(0.01, 2, 2), e, e)
    assert eps_lower_bound(0.01, 2, 2) <= row.numerical_ratio <= 2.0


def test_ratio_experiment_weak_example():
    row = ratio_experiment("H_weak", make_chi_ball(1.0), MixedExponents(2, 2, 2), MixedExponents(2, 4, 2))
    assert row.numerical_ratio == pytest.approx((2 * math.pi) ** -0.25, abs=1e-8)


def test_ratio_experiment_errors():
    e = MixedExponents(2, 2, 2)
    f = make_chi_ball(1.0)
    with pytest.raises(DomainError):
        ratio_experiment("H2", f, e, e)
    with pytest.raises(DomainError):
        ratio_experiment("H_beta", f, e, e)
    with pytest.raises(DomainError):
        ratio_experiment("H", f, e, MixedExponents(3, 2, 2))
    with pytest.raises(DomainError):
        ratio_experiment("H", f, e, MixedExponents(2, 2, 3))


@pytest.mark.parametrize("args", [(2, 1, 4 / 3, 4, 2, 2), (3, 1, 1.5, 3, 3, 3), (3, 1.5, 4 / 3, 4, 2, 5),
                                  (4, 0.8, 2.0, 10 / 3, 1.5, 6)])
def test_fractional_attainment(args):
    c = FractionalConfig(*args)
    assert abs(fractional_row(c).relative_gap) <= 1e-9
    assert abs(dual_fractional_row(c).relative_gap) <= 1e-9


def test_weak_rows_dilation_invariant():
    rows = weak_rows(HardyConfig(3, 1.5, 2, 3), [0.1, 1.0, 30.0])
    for r in rows:
        assert abs(r.relative_gap) <= 1e-9


@pytest.mark.parametrize("op", ["H", "H*"])
def test_random_bounds(op):
    rows = random_bound_rows(op, HardyConfig(3, 2.5, 2, 3), 8, seed=11)
    assert all(r.numerical_ratio <= r.closed_form_constant + 1e-6 for r in rows)
    again = random_bound_rows(op, HardyConfig(3, 2.5, 2, 3), 8, seed=11)
    assert [r.numerical_ratio for r in rows] == [r.numerical_ratio for r in again]


def test_rotation_rows():
    for r in rotation_oracle_rows(count=6):
        assert abs(r.numerical_ratio - r.closed_form_constant) <= 1e-9
    for r in holder_rows(6, seed=5):
        assert r.numerical_ratio <= 1 + 1e-12


def test_weak_rows_large_radius():
    rows = weak_rows(HardyConfig(2, 2.0, 2.0, 1.5), [0.1, 25.0])
    assert all(abs(r.relative_gap) <= 1e-9 for r in rows)
