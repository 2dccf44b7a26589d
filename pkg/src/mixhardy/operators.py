"""Hardy-type averaging operators acting on radial profiles.

All four operators reduce on radial functions to one-dimensional integrals:

* ``H f(r)      = n r^{-n} ∫_0^r f(s) s^{n-1} ds``
* ``H* f(r)     = n ∫_r^inf f(s) s^{-1} ds``
* ``H_β f(r)    = ω_n Ω_n^{β/n-1} r^{β-n} ∫_0^r f(s) s^{n-1} ds``
* ``H*_β f(r)   = ω_n Ω_n^{(β-n)/n} ∫_r^inf f(s) s^{β-1} ds``

Outputs are again :class:`RadialProfile` objects, evaluated lazily and
memoised per radius, with decay metadata and scaled tails derived from the
input so they can be fed to the norms without truncation.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UnsupportedDimensionError
from .fields import SeparableField
from .profiles import RadialProfile
from .quadrature import (
    DEFAULT_SPEC,
    adaptive_batch,
    integrate_sphere,
    radial_moment,
    radial_moments_from_zero,
    radial_moments_to_inf,
    sphere_rule,
    tail_core,
)
from .specfun import Dimension, ball_volume, sphere_measure

__all__ = [
    "FractionalOrder",
    "hardy_radial",
    "dual_hardy_radial",
    "fractional_hardy_radial",
    "dual_fractional_hardy_radial",
    "spherical_average",
    "hardy_direct_oracle",
    "OPERATORS",
]

# slack added to a decay exponent when the true behaviour carries a logarithm
_LOG_SLACK = 1e-6
# e^{-40} relative truncation of exponentially damped kernels
_DAMPING_CUTOFF = 40.0
_CACHE_LIMIT = 200_000


@dataclass(frozen=True)
class FractionalOrder:
    beta: float
    n: int

    def __post_init__(self):
        object.__setattr__(self, "n", Dimension(self.n))
        if not (0.0 < self.beta < self.n):
            raise DomainError(f"beta must lie in (0, n={self.n}), got {self.beta}")


def _memoized(compute, enabled=True):
    """Wrap ``compute(unique_radii) -> values`` as a vectorised, cached callable."""
    if not enabled:
        return lambda r: compute(np.asarray(r, dtype=float))
    cache = {}
    lock = threading.Lock()

    def func(r):
        arr = np.asarray(r, dtype=float)
        flat = arr.ravel()
        keys = flat.tolist()
        with lock:
            vals = np.fromiter((cache.get(k, math.nan) for k in keys), float, flat.size)
        miss = np.isnan(vals)
        if np.any(miss):
            uniq, inv = np.unique(flat[miss], return_inverse=True)
            fresh = np.asarray(compute(uniq), dtype=float)
            vals[miss] = fresh[inv]
            with lock:
                if len(cache) > _CACHE_LIMIT:
                    cache.clear()
                cache.update(zip(uniq.tolist(), fresh.tolist()))
        return vals.reshape(arr.shape)

    return func


def _weakened(f, slack):
    """``f`` with its decay exponent at infinity relaxed by ``slack``."""
    a = f.decay_inf + slack
    tail = None
    if f.tail is not None:
        tail = lambda L, g=f: g.scaled_tail(L) * np.exp(-slack * np.asarray(L, dtype=float))
    return RadialProfile(
        func=f.func,
        breakpoints=f.breakpoints,
        decay_zero=f.decay_zero,
        decay_inf=a,
        tail=tail,
        tail_limit=f.tail_limit if tail is not None else math.nan,
        name=f.name,
    )


def _inner_operator(f, n, coef, gamma, spec, name, cache):
    """``r -> coef r^gamma ∫_0^r f(s) s^{n-1} ds``."""
    n = Dimension(n)
    k0 = f.decay_zero + n
    if not k0 > 0:
        raise DomainError(f"{name}: f is not integrable at the origin (decay_zero={f.decay_zero})")
    kappa = f.decay_inf + n
    if not f.compact and abs(kappa) < 1e-12:
        f = _weakened(f, _LOG_SLACK)
        kappa = f.decay_inf + n
    m = n - 1

    def compute(r):
        out = np.zeros_like(r)
        pos = r > 0
        if np.any(pos):
            out[pos] = coef * r[pos] ** gamma * radial_moments_from_zero(f, m, r[pos], spec)
        if np.any(~pos):
            # limit r -> 0+; only meaningful when f is continuous at the origin
            out[~pos] = coef * float(f(0.0)) / n if gamma == -n else 0.0
        return out

    log_start = math.log(f.tail_start)
    if f.compact or kappa < 0:
        a_inf = float(gamma)
        total = radial_moment(f, m, 0.0, math.inf, spec)
        d = -kappa

        def tail(L):
            L = np.atleast_1d(np.asarray(L, dtype=float))
            rest = np.zeros_like(L)
            if not f.compact:
                far = L >= log_start
                if np.any(far):
                    with np.errstate(under="ignore"):
                        rest[far] = np.exp(-d * L[far]) / d * tail_core(f, m, L[far], spec)
                if np.any(~far):
                    rest[~far] = radial_moments_to_inf(f, m, np.exp(L[~far]), spec)
            return coef * (total - rest)

        exact = f.compact or f.tail_limit == math.inf or d * f.tail_limit > 45.0
        limit = math.inf if exact else f.tail_limit
    else:
        a_inf = f.decay_inf + n + gamma
        F_start = float(radial_moments_from_zero(f, m, [f.tail_start], spec)[0])
        width_cap = _DAMPING_CUTOFF / kappa

        def tail(L):
            # e^{-κL} F(e^L) = F(R1) e^{-κL} + ∫_0^{L-log R1} τ_f(L-w) e^{-κw} dw
            L = np.atleast_1d(np.asarray(L, dtype=float))
            out = np.zeros_like(L)
            far = L > log_start
            if np.any(far):
                Lf = L[far]
                width = np.minimum(Lf - log_start, width_cap)

                def g(w, owner):
                    return f.scaled_tail(Lf[owner][:, None] - w) * np.exp(-kappa * w)

                vals, _ = adaptive_batch(g, np.zeros_like(Lf), width, spec.rel_tol,
                                         spec.abs_tol, spec.max_subdivisions)
                with np.errstate(under="ignore"):
                    out[far] = F_start * np.exp(-kappa * Lf) + vals
            if np.any(~far):
                Ln = L[~far]
                out[~far] = np.exp(-kappa * Ln) * radial_moments_from_zero(f, m, np.exp(Ln), spec)
            return coef * out

        limit = f.tail_limit

    return RadialProfile(
        func=_memoized(compute, cache),
        breakpoints=f.breakpoints,
        decay_zero=f.decay_zero + n + gamma,
        decay_inf=a_inf,
        tail=tail,
        tail_limit=limit,
        name=f"{name}[{f.name}]",
    )


def _outer_operator(f, m, coef, spec, name, cache):
    """``r -> coef ∫_r^inf f(s) s^m ds``."""
    if f.compact:
        d = math.inf
    else:
        d = -(f.decay_inf + m + 1.0)
        if not d > 0:
            raise DomainError(f"{name}: tail integral diverges (decay_inf={f.decay_inf})")
    k0 = f.decay_zero + m + 1.0
    if k0 > 1e-12:
        a0 = 0.0
    elif k0 < -1e-12:
        a0 = k0
    else:
        a0 = -_LOG_SLACK

    def compute(r):
        if k0 <= 0 and np.any(r == 0):
            raise DomainError(f"{name} is unbounded at the origin for this input")
        return coef * radial_moments_to_inf(f, m, r, spec)

    tail = None
    log_start = math.log(f.tail_start)
    if not f.compact:
        def tail(L):
            L = np.atleast_1d(np.asarray(L, dtype=float))
            out = np.zeros_like(L)
            far = L >= log_start
            if np.any(far):
                out[far] = tail_core(f, m, L[far], spec) / d
            if np.any(~far):
                Ln = L[~far]
                out[~far] = np.exp(d * Ln) * radial_moments_to_inf(f, m, np.exp(Ln), spec)
            return coef * out

    return RadialProfile(
        func=_memoized(compute, cache),
        breakpoints=f.breakpoints,
        decay_zero=a0,
        decay_inf=-d,
        tail=tail,
        tail_limit=f.tail_limit if tail is not None else math.nan,
        name=f"{name}[{f.name}]",
    )


def hardy_radial(f, n, spec=DEFAULT_SPEC, cache=True):
    """Hardy average ``H f`` of a radial profile (mean of ``f`` over the ball of radius r)."""
    n = Dimension(n)
    return _inner_operator(f, n, float(n), -float(n), spec, "H", cache)


def dual_hardy_radial(f, n, spec=DEFAULT_SPEC, cache=True):
    """Adjoint Hardy operator ``H* f(r) = n ∫_r^inf f(s) ds / s``."""
    n = Dimension(n)
    return _outer_operator(f, -1.0, float(n), spec, "H*", cache)


def _fractional_coef(order):
    n, beta = order.n, order.beta
    return sphere_measure(n) * ball_volume(n) ** ((beta - n) / n)


def fractional_hardy_radial(f, order, spec=DEFAULT_SPEC, cache=True):
    """Fractional Hardy operator ``H_β f``."""
    return _inner_operator(f, order.n, _fractional_coef(order), order.beta - order.n, spec,
                           f"H_{order.beta:g}", cache)


def dual_fractional_hardy_radial(f, order, spec=DEFAULT_SPEC, cache=True):
    """Adjoint fractional operator ``H*_β f``."""
    return _outer_operator(f, order.beta - 1.0, _fractional_coef(order), spec,
                           f"H*_{order.beta:g}", cache)


def spherical_average(F, n, spec=DEFAULT_SPEC):
    """Radial profile ``r -> (1/ω_n) ∫_{S^{n-1}} F(rθ) dθ`` of a separable field."""
    n = Dimension(n)
    if F.angular.constant is None and n not in (2, 3):
        raise UnsupportedDimensionError(f"spherical average needs n in {{2, 3}}, got {n}")
    mean = integrate_sphere(F.angular, n, spec) / sphere_measure(n)
    return F.radial.scale(mean)


def hardy_direct_oracle(F, x, n, spec=DEFAULT_SPEC, max_level=8):
    """``H F(x)`` by full polar quadrature over the ball ``|y| < |x|``.

    Evaluates ``F`` at Cartesian points of a product rule on the sphere times
    an adaptive radial rule; no separability or radial reduction is used.
    The angular rule is refined until two successive levels agree.
    """
    n = Dimension(n)
    if n not in (2, 3):
        raise UnsupportedDimensionError(f"direct oracle supports n in {{2, 3}}, got {n}")
    x = np.asarray(x, dtype=float)
    if x.shape != (n,):
        raise DomainError(f"point must have shape ({n},), got {x.shape}")
    radius = float(np.linalg.norm(x))
    if radius == 0.0:
        raise DomainError("the operator is defined away from the origin")
    cuts = [0.0] + [b for b in F.radial.breakpoints if b < radius] + [radius]
    lo, hi = np.array(cuts[:-1]), np.array(cuts[1:])

    def ball_integral(level):
        u, w = sphere_rule(n, level)

        def g(s, _owner):
            pts = s[..., None, None] * u
            ang = F.at_point(pts) @ w
            return ang * s ** (n - 1)

        vals, _ = adaptive_batch(g, lo, hi, spec.rel_tol, spec.abs_tol, spec.max_subdivisions)
        return float(np.sum(vals))

    prev = ball_integral(1)
    for level in range(2, max_level + 1):
        cur = ball_integral(level)
        if abs(cur - prev) <= max(spec.abs_tol, 10 * spec.rel_tol * abs(cur)):
            return cur / (ball_volume(n) * radius**n)
        prev = cur
    return prev / (ball_volume(n) * radius**n)


OPERATORS = {
    "H": lambda f, n, beta, spec: hardy_radial(f, n, spec),
    "H*": lambda f, n, beta, spec: dual_hardy_radial(f, n, spec),
    "H_beta": lambda f, n, beta, spec: fractional_hardy_radial(f, FractionalOrder(beta, n), spec),
    "H*_beta": lambda f, n, beta, spec: dual_fractional_hardy_radial(
        f, FractionalOrder(beta, n), spec),
}
