"""Mixed radial-angular norms and the weak mixed norm of monotone radial functions.

For ``1 < p, p̄ < inf`` the mixed norm of ``f`` is

    (∫_0^inf (∫_{S^{n-1}} |f(r, θ)|^p̄ dθ)^{p/p̄} r^{n-1} dr)^{1/p},

which factorises for radial and separable fields.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, UnsupportedDimensionError
from .fields import SeparableField
from .profiles import RadialProfile
from .quadrature import DEFAULT_SPEC, integrate_radial, integrate_sphere
from .specfun import Dimension, sphere_measure

__all__ = [
    "MixedExponents",
    "mixed_norm_radial",
    "mixed_norm_separable",
    "level_radius",
    "level_radii",
    "weak_mixed_norm_monotone",
]

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class MixedExponents:
    """Radial exponent ``p``, angular exponent ``p_bar`` and dimension ``n``."""

    p: float
    p_bar: float
    n: int

    def __post_init__(self):
        object.__setattr__(self, "n", Dimension(self.n))
        for name in ("p", "p_bar"):
            v = float(getattr(self, name))
            if not (1.0 < v < math.inf):
                raise DomainError(
                    f"{name} must lie in (1, inf); endpoint exponents are not supported, got {v}"
                )
            object.__setattr__(self, name, v)

    @property
    def p_conj(self):
        return self.p / (self.p - 1.0)

    @property
    def p_bar_conj(self):
        return self.p_bar / (self.p_bar - 1.0)


def _check_finite_norm(f, e):
    if e.p * f.decay_zero + e.n <= 0:
        raise DomainError(
            f"mixed norm diverges at the origin: p*decay_zero + n = {e.p * f.decay_zero + e.n:g}"
        )
    if not f.compact and e.p * f.decay_inf + e.n >= 0:
        raise DomainError(
            f"mixed norm diverges at infinity: p*decay_inf + n = {e.p * f.decay_inf + e.n:g}"
        )


def _magnitude(f):
    """A typical size of ``|f|``, so that absolute tolerances act on a unit-scale integrand."""
    anchors = list(f.breakpoints) or [1.0]
    r = np.geomspace(anchors[0] / 8.0, anchors[-1] * 8.0, 13)
    with np.errstate(all="ignore"):
        v = np.abs(np.asarray(f(r), dtype=float))
    v = v[np.isfinite(v) & (v > 0)]
    return float(np.max(v)) if v.size else 1.0


def _radial_lp(f, e, spec):
    s = _magnitude(f)
    inner = integrate_radial(f.scale(1.0 / s).abs_pow(e.p), e.n, spec)
    return s * max(inner, 0.0) ** (1.0 / e.p)


def mixed_norm_radial(f, e, spec=DEFAULT_SPEC):
    """Mixed norm of a radial function: ``ω_n^{1/p̄} (∫ |f|^p r^{n-1} dr)^{1/p}``."""
    _check_finite_norm(f, e)
    return sphere_measure(e.n) ** (1.0 / e.p_bar) * _radial_lp(f, e, spec)


def mixed_norm_separable(F, e, spec=DEFAULT_SPEC):
    """Mixed norm of ``R(r) A(θ)``: angular ``L^p̄`` norm of ``A`` times radial ``L^p`` norm of ``R``."""
    if F.angular.constant is None and e.n not in (2, 3):
        raise UnsupportedDimensionError(
            f"non-constant angular factors need n in {{2, 3}}, got {e.n}"
        )
    _check_finite_norm(F.radial, e)
    ang = integrate_sphere(F.angular.abs_pow(e.p_bar), e.n, spec) ** (1.0 / e.p_bar)
    return ang * _radial_lp(F.radial, e, spec)


# -- weak norm -----------------------------------------------------------------


def _probe_radii(g, decades=8, per_decade=6):
    anchors = list(g.breakpoints) or [1.0]
    lo = anchors[0] * 10.0**-decades
    hi = anchors[-1] * 10.0**decades
    k = int(per_decade * math.log10(hi / lo)) + 1
    grid = np.geomspace(lo, hi, k)
    extra = np.concatenate([[b * (1 - 1e-9), b, b * (1 + 1e-9)] for b in g.breakpoints]) \
        if g.breakpoints else np.zeros(0)
    return np.unique(np.concatenate([grid, extra]))


def level_radius(g, lam, probe=None, values=None):
    """``sup{r : g(r) > lam}`` for a nonincreasing ``g``."""
    if g.level_radius is not None:
        return float(g.level_radius(lam))
    if probe is None:
        probe = _probe_radii(g)
        values = g(probe)
    above = np.flatnonzero(values > lam)
    if above.size == 0:
        return 0.0
    i = above[-1]
    if i == probe.size - 1:
        # extend outwards geometrically until the level is crossed
        hi = probe[-1]
        while g(hi) > lam:
            hi *= 10.0
            if hi > 1e300:
                return math.inf
        lo = hi / 10.0
    else:
        lo, hi = probe[i], probe[i + 1]
    u_lo, u_hi = math.log(lo), math.log(hi)
    h = lambda u: float(g(math.exp(u))) - lam
    if h(u_hi) > 0:
        return hi
    # g may jump at the crossing: brentq converges to the sign change either way
    u = brentq(h, u_lo, u_hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    return math.exp(u)


def level_radii(g, lams, probe=None, values=None, log_tol=1e-13):
    """Vectorised :func:`level_radius`: bisection in ``log r`` for all levels at once."""
    lams = np.asarray(lams, dtype=float)
    if g.level_radius is not None:
        return np.array([float(g.level_radius(lam)) for lam in lams])
    if probe is None:
        probe = _probe_radii(g)
        values = g(probe)
    values = np.asarray(values, dtype=float)
    # values are nonincreasing: count of entries above each level locates the bracket
    k = np.array([np.count_nonzero(values > lam) for lam in lams])
    out = np.zeros_like(lams)
    edge = k == probe.size
    inner = (k > 0) & ~edge
    for j in np.flatnonzero(edge):
        out[j] = level_radius(g, lams[j], probe, values)
    if np.any(inner):
        lo = np.log(probe[k[inner] - 1])
        hi = np.log(probe[k[inner]])
        lam = lams[inner]
        while np.max(hi - lo) > log_tol:
            mid = 0.5 * (lo + hi)
            above = np.asarray(g(np.exp(mid)), dtype=float) > lam
            lo = np.where(above, mid, lo)
            hi = np.where(above, hi, mid)
        out[inner] = np.exp(0.5 * (lo + hi))
    return out


def _check_monotone(values):
    if np.any(values < 0) or not np.all(np.isfinite(values)):
        raise DomainError("weak norm needs a finite nonnegative profile")
    rise = np.diff(values)
    if np.any(rise > 1e-12 * np.maximum(values[:-1], 1e-300) + 1e-300):
        raise DomainError("weak norm is implemented for nonincreasing profiles only")


def weak_mixed_norm_monotone(g, e, spec=DEFAULT_SPEC, rel_tol=1e-10):
    """``sup_λ λ ‖χ_{g > λ}‖`` for a nonnegative nonincreasing radial ``g``.

    ``‖χ_{g > λ}‖ = ω_n^{1/p̄} (r_λ^n / n)^{1/p}`` with ``r_λ = sup{r : g(r) > λ}``.
    ``r_λ`` comes from ``g.level_radius`` when supplied and from root finding
    otherwise; the supremum over ``λ`` is bracketed on a log grid and refined by
    golden-section search in ``log λ``.
    """
    if not g.compact and g.decay_inf > -e.n / e.p:
        raise DomainError(
            f"weak norm is infinite: profile decays like r^{g.decay_inf:g}, slower than r^(-n/p)"
        )
    probe = _probe_radii(g)
    values = np.asarray(g(probe), dtype=float)
    _check_monotone(values)
    top = float(values[0])
    if top <= 0.0:
        return 0.0
    coef = sphere_measure(e.n) ** (1.0 / e.p_bar) / e.n ** (1.0 / e.p)

    def phi(log_lam):
        lam = math.exp(log_lam)
        r = level_radius(g, lam, probe, values)
        if math.isinf(r):
            raise DomainError("super-level set is unbounded; weak norm is infinite")
        return lam * coef * r ** (e.n / e.p)

    hi = math.log(top) + math.log1p(-1e-14)
    grid = np.linspace(hi - 30.0, hi, 61)
    radii = level_radii(g, np.exp(grid), probe, values)
    if np.any(np.isinf(radii)):
        raise DomainError("super-level set is unbounded; weak norm is infinite")
    vals = np.exp(grid) * coef * radii ** (e.n / e.p)
    i = int(np.argmax(vals))
    a = grid[max(i - 1, 0)]
    b = grid[min(i + 1, grid.size - 1)]
    best = vals[i]
    # golden section on [a, b]
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = phi(x1), phi(x2)
    while (b - a) > rel_tol:
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = phi(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = phi(x1)
    return float(max(best, f1, f2, phi(b)))
