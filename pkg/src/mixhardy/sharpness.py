"""Closed-form sharp constants and numerical operator-norm ratios."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError
from .fields import (
    SeparableField,
    make_chi_ball,
    make_exponential,
    make_f0_fractional,
    make_f_eps,
    make_g0_dual_fractional,
    random_piecewise_power,
    random_separable,
)
from .norms import MixedExponents, mixed_norm_radial, mixed_norm_separable, weak_mixed_norm_monotone
from .operators import OPERATORS, hardy_direct_oracle, hardy_radial, spherical_average
from .profiles import AngularProfile
from .quadrature import DEFAULT_SPEC
from .specfun import Dimension, beta_fn, sphere_measure

__all__ = [
    "HardyConfig",
    "FractionalConfig",
    "ReportRow",
    "ANCHORS",
    "sharp_hardy_constant",
    "sharp_dual_constant",
    "fractional_core_constant",
    "sharp_fractional_constant",
    "sharp_dual_fractional_constant",
    "sharp_weak_constant",
    "eps_lower_bound",
    "ratio_experiment",
    "hardy_eps_rows",
    "dual_eps_rows",
    "random_bound_rows",
    "fractional_row",
    "dual_fractional_row",
    "weak_rows",
    "rotation_fields",
    "probe_points",
    "rotation_oracle_rows",
    "holder_rows",
]

SCALING_TOL = 1e-12

ANCHORS = {
    "H": "hardy-strong",
    "H*": "hardy-dual",
    "H_beta": "fractional-hardy",
    "H*_beta": "fractional-dual",
    "H_weak": "hardy-weak",
}


def _open_exponent(name, v):
    v = float(v)
    if not (1.0 < v < math.inf):
        raise DomainError(f"{name} must lie in (1, inf), got {v}")
    return v


@dataclass(frozen=True)
class HardyConfig:
    n: int
    p: float
    p_bar_1: float
    p_bar_2: float

    def __post_init__(self):
        object.__setattr__(self, "n", Dimension(self.n))
        for name in ("p", "p_bar_1", "p_bar_2"):
            object.__setattr__(self, name, _open_exponent(name, getattr(self, name)))

    @property
    def omega_factor(self):
        return sphere_measure(self.n) ** (1.0 / self.p_bar_2 - 1.0 / self.p_bar_1)


@dataclass(frozen=True)
class FractionalConfig:
    """Exponents of the fractional operator; enforces ``1/p - 1/q = β/n``."""

    n: int
    beta: float
    p: float
    q: float
    p_bar: float
    q_bar: float

    def __post_init__(self):
        object.__setattr__(self, "n", Dimension(self.n))
        for name in ("p", "q", "p_bar", "q_bar"):
            object.__setattr__(self, name, _open_exponent(name, getattr(self, name)))
        if not (0.0 < self.beta < self.n):
            raise DomainError(f"beta must lie in (0, n), got {self.beta}")
        if not self.p < self.q:
            raise DomainError(f"need p < q, got p={self.p}, q={self.q}")
        _check_scaling(self.p, self.q, self.n, self.beta)

    @classmethod
    def from_p_beta(cls, n, beta, p, p_bar, q_bar):
        """Derive ``q`` from the scaling relation."""
        inv_q = 1.0 / p - beta / n
        if not inv_q > 0:
            raise DomainError(f"1/p - beta/n must be positive, got {inv_q}")
        return cls(n, beta, p, 1.0 / inv_q, p_bar, q_bar)


def _check_scaling(p, q, n, beta):
    gap = 1.0 / p - 1.0 / q - beta / n
    if abs(gap) > SCALING_TOL:
        raise DomainError(f"scaling relation 1/p - 1/q = beta/n violated by {gap:.3e}")


@dataclass
class ReportRow:
    operator: str
    n: int
    p: float
    numerical_ratio: float
    closed_form_constant: float
    q: Optional[float] = None
    pbar1: Optional[float] = None
    pbar2: Optional[float] = None
    beta: Optional[float] = None
    family_param: Optional[float] = None
    lower_bound: Optional[float] = None
    relative_gap: float = field(init=False)
    anchor: str = ""
    config: object = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        c = self.closed_form_constant
        self.relative_gap = (c - self.numerical_ratio) / c
        if not self.anchor:
            self.anchor = ANCHORS.get(self.operator, self.operator)

    def as_dict(self):
        d = asdict(self)
        d.pop("config")
        return d


# -- closed forms ----------------------------------------------------------------


def sharp_hardy_constant(c):
    """``p/(p-1) ω_n^{1/p̄₂ - 1/p̄₁}``."""
    return c.p / (c.p - 1.0) * c.omega_factor


def sharp_dual_constant(c):
    """``p ω_n^{1/p̄₂ - 1/p̄₁}``."""
    return c.p * c.omega_factor


def fractional_core_constant(p, q, n, beta):
    """Lebesgue-space norm of the fractional operator, a Beta-function expression."""
    n = Dimension(n)
    p, q, beta = float(p), float(q), float(beta)
    if not (0.0 < beta < n) or not (1.0 < p < q < math.inf):
        raise DomainError("need 0 < beta < n and 1 < p < q < inf")
    _check_scaling(p, q, n, beta)
    p_conj = p / (p - 1.0)
    q_conj = q / (q - 1.0)
    a = n / (q * beta)
    b = n / (q_conj * beta)
    return (p_conj / q) ** (1.0 / q) * (a * beta_fn(a, b)) ** (-beta / n)


def sharp_fractional_constant(c):
    """Mixed-norm constant: the Lebesgue constant times ``ω_n^{1/q̄ - 1/p̄ + β/n}``."""
    core = fractional_core_constant(c.p, c.q, c.n, c.beta)
    return core * sphere_measure(c.n) ** (1.0 / c.q_bar - 1.0 / c.p_bar + c.beta / c.n)


def sharp_dual_fractional_constant(c):
    """Norm of the adjoint fractional operator from ``(p, p̄)`` to ``(q, q̄)``.

    Obtained by duality from the fractional constant at the conjugate
    exponents ``(q', q̄') -> (p', p̄')``, which satisfy the same scaling relation.
    """
    pc, qc = c.q / (c.q - 1.0), c.p / (c.p - 1.0)
    pbc, qbc = c.q_bar / (c.q_bar - 1.0), c.p_bar / (c.p_bar - 1.0)
    core = fractional_core_constant(pc, qc, c.n, c.beta)
    return core * sphere_measure(c.n) ** (1.0 / qbc - 1.0 / pbc + c.beta / c.n)


def sharp_weak_constant(c):
    """Weak-type constant ``ω_n^{1/p̄₂ - 1/p̄₁}``."""
    return c.omega_factor


def eps_lower_bound(eps, p, n):
    """Lower bound for the Hardy ratio of the truncated power family (without the ω factor).

    ``n ε^ε (1 - ε^{n-ε-n/p}) / (n - ε - n/p)``, which tends to ``p/(p-1)`` as ``ε -> 0+``.
    """
    n = Dimension(n)
    eps, p = float(eps), float(p)
    if not (0.0 < eps < 1.0):
        raise DomainError(f"eps must lie in (0, 1), got {eps}")
    a = n - eps - n / p
    if not a > 0:
        raise DomainError(f"n - eps - n/p must be positive, got {a}")
    eps_pow = 1.0 if eps < 1e-300 else math.exp(eps * math.log(eps))
    return n * eps_pow * (-math.expm1(a * math.log(eps))) / a


# -- experiments -----------------------------------------------------------------


def _closed_form(operator, in_exps, out_exps, beta):
    n = in_exps.n
    if operator in ("H", "H*", "H_weak"):
        if in_exps.p != out_exps.p:
            raise DomainError("Hardy operators keep the radial exponent fixed")
        cfg = HardyConfig(n, in_exps.p, in_exps.p_bar, out_exps.p_bar)
        return cfg, {"H": sharp_hardy_constant, "H*": sharp_dual_constant,
                     "H_weak": sharp_weak_constant}[operator](cfg)
    cfg = FractionalConfig(n, beta, in_exps.p, out_exps.p, in_exps.p_bar, out_exps.p_bar)
    if operator == "H_beta":
        return cfg, sharp_fractional_constant(cfg)
    return cfg, sharp_dual_fractional_constant(cfg)


def ratio_experiment(operator, f, in_exps, out_exps, spec=DEFAULT_SPEC, beta=None,
                     family_param=None, lower_bound=None):
    """``‖T f‖ / ‖f‖`` against the matching closed-form constant.

    ``operator`` is one of ``"H"``, ``"H*"``, ``"H_beta"``, ``"H*_beta"`` or
    ``"H_weak"`` (Hardy operator measured in the weak output norm).
    """
    if operator not in ANCHORS:
        raise DomainError(f"unknown operator {operator!r}")
    if in_exps.n != out_exps.n:
        raise DomainError("input and output dimensions differ")
    if operator in ("H_beta", "H*_beta") and beta is None:
        raise DomainError("fractional operators need beta")
    cfg, constant = _closed_form(operator, in_exps, out_exps, beta)
    n = in_exps.n
    build = OPERATORS["H" if operator == "H_weak" else operator]
    Tf = build(f, n, beta, spec)
    denom = mixed_norm_radial(f, in_exps, spec)
    if operator == "H_weak":
        numer = weak_mixed_norm_monotone(Tf, out_exps, spec)
    else:
        numer = mixed_norm_radial(Tf, out_exps, spec)
    fractional = operator in ("H_beta", "H*_beta")
    return ReportRow(
        operator=operator,
        n=int(n),
        p=in_exps.p,
        q=out_exps.p if fractional else None,
        pbar1=in_exps.p_bar,
        pbar2=out_exps.p_bar,
        beta=beta,
        family_param=family_param,
        numerical_ratio=numer / denom,
        closed_form_constant=constant,
        lower_bound=lower_bound,
        config=cfg,
    )


def hardy_eps_rows(cfg, eps_list, spec=DEFAULT_SPEC):
    """Ratios of the Hardy operator on the truncated power family, with lower bounds."""
    rows = []
    for eps in eps_list:
        f = make_f_eps(eps, cfg.p, cfg.n)
        lb = eps_lower_bound(eps, cfg.p, cfg.n) * cfg.omega_factor
        rows.append(ratio_experiment(
            "H", f, MixedExponents(cfg.p, cfg.p_bar_1, cfg.n),
            MixedExponents(cfg.p, cfg.p_bar_2, cfg.n), spec, family_param=eps, lower_bound=lb))
    return rows


def dual_eps_rows(cfg, eps_list, spec=DEFAULT_SPEC):
    """Ratios of the dual operator on the truncated power family."""
    return [
        ratio_experiment("H*", make_f_eps(eps, cfg.p, cfg.n),
                         MixedExponents(cfg.p, cfg.p_bar_1, cfg.n),
                         MixedExponents(cfg.p, cfg.p_bar_2, cfg.n), spec, family_param=eps)
        for eps in eps_list
    ]


def random_bound_rows(operator, cfg, count, seed, spec=DEFAULT_SPEC):
    """Ratios on ``count`` seeded random piecewise-power profiles (``family_param`` = index)."""
    rng = np.random.default_rng(seed)
    rows = []
    for i in range(count):
        f = random_piecewise_power(rng, cfg.n, cfg.p)
        rows.append(ratio_experiment(
            operator, f, MixedExponents(cfg.p, cfg.p_bar_1, cfg.n),
            MixedExponents(cfg.p, cfg.p_bar_2, cfg.n), spec, family_param=float(i)))
    return rows


def fractional_row(cfg, spec=DEFAULT_SPEC):
    """Ratio of the fractional operator on its exact extremizer."""
    f0 = make_f0_fractional(cfg.q, cfg.beta, cfg.n)
    return ratio_experiment(
        "H_beta", f0, MixedExponents(cfg.p, cfg.p_bar, cfg.n),
        MixedExponents(cfg.q, cfg.q_bar, cfg.n), spec, beta=cfg.beta)


def dual_fractional_row(cfg, spec=DEFAULT_SPEC):
    """Ratio of the adjoint fractional operator ``(p, p̄) -> (q, q̄)`` on its exact extremizer."""
    g0 = make_g0_dual_fractional(cfg.p, cfg.beta, cfg.n)
    return ratio_experiment(
        "H*_beta", g0, MixedExponents(cfg.p, cfg.p_bar, cfg.n),
        MixedExponents(cfg.q, cfg.q_bar, cfg.n), spec, beta=cfg.beta)


def weak_rows(cfg, radii, spec=DEFAULT_SPEC):
    """Weak-type ratios of the Hardy operator on ball indicators ``χ_[0,r]``."""
    return [
        ratio_experiment("H_weak", make_chi_ball(r), MixedExponents(cfg.p, cfg.p_bar_1, cfg.n),
                         MixedExponents(cfg.p, cfg.p_bar_2, cfg.n), spec, family_param=r)
        for r in radii
    ]


# -- rotation reduction ------------------------------------------------------------


def rotation_fields():
    """The named non-radial test fields: two in the plane and one in space."""
    return [
        (2, "exp(-r)(1+cos phi)",
         SeparableField(make_exponential(), AngularProfile(lambda phi: 1.0 + np.cos(phi)))),
        (2, "chi[0,1](1+sin(phi)/2)",
         SeparableField(make_chi_ball(1.0), AngularProfile(lambda phi: 1.0 + 0.5 * np.sin(phi)))),
        (3, "exp(-r)(1+cos theta)",
         SeparableField(make_exponential(),
                        AngularProfile(lambda theta, phi: 1.0 + np.cos(theta)))),
    ]


def probe_points(n, count=20, lo=0.05, hi=8.0):
    """``count`` points with radii spread geometrically and directions turning with the index."""
    radii = np.geomspace(lo, hi, count)
    t = 2.0 * np.pi * np.arange(count) / count + 0.3
    if n == 2:
        u = np.stack([np.cos(t), np.sin(t)], axis=-1)
    else:
        theta = np.arccos(np.linspace(0.9, -0.9, count))
        u = np.stack([np.sin(theta) * np.cos(t), np.sin(theta) * np.sin(t), np.cos(theta)], axis=-1)
    return radii[:, None] * u


def rotation_oracle_rows(spec=DEFAULT_SPEC, count=20):
    """Compare ``H`` of the spherical average with the direct ball average of each field.

    One row per field: ``numerical_ratio`` and ``closed_form_constant`` carry the
    direct and reduced values at the probe point of largest discrepancy.
    """
    rows = []
    for n, label, F in rotation_fields():
        Hg = hardy_radial(spherical_average(F, n, spec), n, spec)
        pts = probe_points(n, count)
        reduced = np.asarray(Hg(np.linalg.norm(pts, axis=-1)), dtype=float)
        direct = np.array([hardy_direct_oracle(F, x, n, spec) for x in pts])
        i = int(np.argmax(np.abs(direct - reduced)))
        rows.append(ReportRow(
            operator="rotation", n=n, p=math.nan,
            numerical_ratio=float(direct[i]), closed_form_constant=float(reduced[i]),
            family_param=float(np.linalg.norm(pts[i])), anchor=f"rotation-reduction:{label}",
        ))
    return rows


def holder_rows(count, seed, spec=DEFAULT_SPEC, dims=(2, 3)):
    """``‖g‖ / ‖F‖`` for seeded random separable fields, where ``g`` is the spherical average.

    The ratio never exceeds 1; exponents ``p, p̄`` are drawn from ``[1.2, 4]``.
    """
    rng = np.random.default_rng(seed)
    rows = []
    for i in range(count):
        n = int(dims[i % len(dims)])
        p, p_bar = (float(v) for v in rng.uniform(1.2, 4.0, size=2))
        F = random_separable(rng, n, p)
        e = MixedExponents(p, p_bar, n)
        g = spherical_average(F, n, spec)
        rows.append(ReportRow(
            operator="average", n=n, p=p, pbar1=p_bar, pbar2=p_bar, family_param=float(i),
            numerical_ratio=mixed_norm_radial(g, e, spec) / mixed_norm_separable(F, e, spec),
            closed_form_constant=1.0, anchor="rotation-reduction:holder",
        ))
    return rows
