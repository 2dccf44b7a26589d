"""Adaptive quadrature on (0, inf) against power weights, and on S^1, S^2.

The radial integrals are split into three kinds of cells:

* ``[0, c]``: substitution ``r = c t^{1/k}`` with ``k = a0 + m + 1`` which turns
  the algebraic endpoint behaviour ``r^{a0+m}`` into a bounded integrand;
* ``[a, b]`` with ``a > 0``: integration in ``u = log r``;
* ``[T, inf)``: substitution ``r = T s^{-1/d}`` with ``d = -(a_inf + m + 1)``.
  The integrand becomes the scaled tail of the profile, so a power-law tail
  maps to a bounded function on ``(0, 1]`` and no truncation radius is needed.

Every cell is integrated by an adaptive 21-point Gauss-Kronrod rule.  Many
independent integrals are processed together in one batch so that the
integrand is called on large arrays.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError, QuadratureError, UnsupportedDimensionError
from .profiles import AngularProfile, RadialProfile
from .specfun import Dimension, sphere_measure

__all__ = [
    "QuadratureSpec",
    "adaptive_batch",
    "integrate_interval",
    "radial_moment",
    "radial_moments_from_zero",
    "tail_core",
    "tail_moments",
    "radial_moments_to_inf",
    "integrate_radial",
    "cumulative_radial",
    "integrate_sphere",
    "sphere_rule",
]


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_subdivisions: int = 10_000
    tail_tol: float = 1e-12

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol", "tail_tol"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be >= 1")

    @classmethod
    def from_env(cls, prefix="MIXHARDY_", **overrides):
        """Defaults overridden by ``MIXHARDY_REL_TOL`` etc., then by keyword arguments."""
        kwargs = {}
        for name, conv in (("rel_tol", float), ("abs_tol", float),
                           ("max_subdivisions", int), ("tail_tol", float)):
            raw = os.environ.get(prefix + name.upper())
            if raw:
                kwargs[name] = conv(raw)
        kwargs.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**kwargs)

    def tighter(self, factor):
        return replace(self, rel_tol=self.rel_tol * factor, abs_tol=self.abs_tol * factor)


DEFAULT_SPEC = QuadratureSpec()

# Gauss-Kronrod 21/10 abscissae on [0, 1) and weights (QUADPACK qk21).
_XGK = np.array([
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0,
])
_WGK = np.array([
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
_WG = np.array([
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_WK21 = np.concatenate([_WGK[:-1], _WGK[::-1]])
# Gauss nodes sit at odd positions of _XGK (0.9739..., 0.8650..., ...).
_GAUSS_POS = np.array([1, 3, 5, 7, 9, 11, 13, 15, 17, 19])
_WG10 = np.concatenate([_WG, _WG[::-1]])
_EPS = np.finfo(float).eps


def _gk21(func, a, b, owner):
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x = center[:, None] + half[:, None] * _NODES[None, :]
    fx = np.asarray(func(x, owner), dtype=float)
    if fx.shape != x.shape:
        fx = np.broadcast_to(fx, x.shape)
    if not np.all(np.isfinite(fx)):
        raise QuadratureError("integrand returned non-finite values")
    resk = fx @ _WK21
    resg = fx[:, _GAUSS_POS] @ _WG10
    mean = 0.5 * resk
    resasc = np.abs(fx - mean[:, None]) @ _WK21
    resabs = np.abs(fx) @ _WK21
    err = np.abs(resk - resg)
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = np.where(resasc > 0, resasc * np.minimum(1.0, (200.0 * err / resasc) ** 1.5), err)
    floor = 50.0 * _EPS * resabs
    err = np.where(resabs > np.finfo(float).tiny / (50 * _EPS), np.maximum(scaled, floor), scaled)
    return resk * half, err * np.abs(half)


def adaptive_batch(func, a, b, rel_tol=1e-10, abs_tol=1e-14, max_subdivisions=10_000):
    """Integrate ``func`` over many intervals ``[a_i, b_i]`` at once.

    ``func(x, owner)`` receives a 2-D array of abscissae (one row per
    subinterval) and the index of the interval each row belongs to, and must
    return values of the same shape.  Each interval is refined until its own
    error estimate is below ``max(abs_tol, rel_tol * |integral|)``.

    Returns ``(values, errors)`` arrays.
    """
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    m = a.size
    if m == 0:
        return np.zeros(0), np.zeros(0)
    counts = np.ones(m, dtype=int)
    owner = np.arange(m)
    pa, pb = a.copy(), b.copy()
    pv, pe = _gk21(func, pa, pb, owner)
    done_v = np.zeros(m)
    done_e = np.zeros(m)
    while pa.size:
        tot_v = done_v + np.bincount(owner, pv, minlength=m)
        tot_e = done_e + np.bincount(owner, pe, minlength=m)
        tol = np.maximum(abs_tol, rel_tol * np.abs(tot_v))
        converged = tot_e <= tol
        # pieces whose interval is already converged are retired
        retire = converged[owner]
        # pieces too small to split are retired as well
        tiny = np.abs(pb - pa) <= 64 * _EPS * np.maximum(np.abs(pa), np.abs(pb))
        npieces = np.bincount(owner, minlength=m)[owner]
        split = (~retire) & (~tiny) & (pe * npieces > 0.5 * tol[owner])
        if not np.any(split):
            if np.all(converged):
                break
            stuck = np.flatnonzero(~converged)
            raise QuadratureError(
                f"no further refinement possible; error {tot_e[stuck[0]]:.3e} "
                f"exceeds tolerance {tol[stuck[0]]:.3e}"
            )
        keep = ~split
        np.add.at(done_v, owner[keep], pv[keep])
        np.add.at(done_e, owner[keep], pe[keep])
        sa, sb, so = pa[split], pb[split], owner[split]
        np.add.at(counts, so, 1)
        if np.any(counts > max_subdivisions):
            raise QuadratureError(f"exceeded {max_subdivisions} subdivisions")
        mid = 0.5 * (sa + sb)
        pa = np.concatenate([sa, mid])
        pb = np.concatenate([mid, sb])
        owner = np.concatenate([so, so])
        pv, pe = _gk21(func, pa, pb, owner)
    values = done_v + np.bincount(owner, pv, minlength=m) if pa.size else done_v
    errors = done_e + np.bincount(owner, pe, minlength=m) if pa.size else done_e
    return values, errors


def integrate_interval(func, a, b, spec=DEFAULT_SPEC):
    """Adaptive integral of a vectorised ``func(x)`` over one finite interval."""
    v, e = adaptive_batch(lambda x, _o: func(x), [a], [b], spec.rel_tol, spec.abs_tol,
                          spec.max_subdivisions)
    return float(v[0])


def _batch(func, a, b, spec):
    v, _ = adaptive_batch(func, a, b, spec.rel_tol, spec.abs_tol, spec.max_subdivisions)
    return v


# -- radial building blocks ------------------------------------------------------

_GL3_X = np.array([-math.sqrt(0.6), 0.0, math.sqrt(0.6)])
_GL3_W = np.array([5.0, 8.0, 5.0]) / 9.0


def _zero_exponent(f, m):
    k = f.decay_zero + m + 1.0
    if not k > 0:
        raise DomainError(
            f"integral of f(s) s^{m:g} diverges at the origin (decay_zero={f.decay_zero:g})"
        )
    return k


def _tail_exponent(f, m):
    d = -(f.decay_inf + m + 1.0)
    if not d > 0:
        raise DomainError(
            f"integral of f(s) s^{m:g} diverges at infinity (decay_inf={f.decay_inf:g})"
        )
    return d


def _zero_cells(f, m, c, spec):
    """``∫_0^{c_i} f(s) s^m ds`` for an array of upper limits ``c``."""
    c = np.atleast_1d(np.asarray(c, dtype=float))
    k = _zero_exponent(f, m)
    expo = (m + 1.0) / k - 1.0

    def g(t, owner):
        ci = c[owner][:, None]
        return f(ci * t ** (1.0 / k)) * t**expo

    return _batch(g, np.zeros_like(c), np.ones_like(c), spec) * c ** (m + 1.0) / k


def _log_cells(f, m, lo, hi, spec):
    """``∫_{lo_i}^{hi_i} f(s) s^m ds`` with ``0 < lo_i < hi_i < inf``, in log variable."""
    lo = np.atleast_1d(np.asarray(lo, dtype=float))
    hi = np.atleast_1d(np.asarray(hi, dtype=float))
    if lo.size == 0:
        return np.zeros(0)

    def g(u, _owner):
        return f(np.exp(u)) * np.exp((m + 1.0) * u)

    # Slivers (e.g. bisection points next to a breakpoint) hold no breakpoint,
    # but exp(log r) can round across a jump at their ends.  A 3-point
    # Gauss-Legendre rule in r keeps its nodes well inside and is exact to
    # far below tolerance at this width.
    with np.errstate(over="ignore"):
        sliver = hi / lo - 1.0 < 1e-6
    out = np.empty(lo.size)
    if np.any(sliver):
        a, b = lo[sliver], hi[sliver]
        half, mid = 0.5 * (b - a), 0.5 * (a + b)
        r = mid[:, None] + half[:, None] * _GL3_X
        out[sliver] = half * ((np.asarray(f(r), dtype=float) * r**m) @ _GL3_W)
    if not np.all(sliver):
        out[~sliver] = _batch(g, np.log(lo[~sliver]), np.log(hi[~sliver]), spec)
    return out


def tail_core(f, m, log_start, spec=DEFAULT_SPEC):
    """Scaled tail integral ``d e^{d L} ∫_{e^L}^inf f(s) s^m ds`` with ``d = -(a_inf + m + 1)``.

    Bounded as ``L -> inf`` (it tends to the limit of the scaled tail of ``f``)
    and computed without ever forming ``e^L``, so ``L`` may lie far outside
    the floating-point range.  ``L`` must be at or beyond the log of the last
    breakpoint.  Where the scaled tail of ``f`` is only trusted up to
    ``f.tail_limit`` the remainder is extrapolated with its last trusted
    value, and that remainder must stay below ``tail_tol`` of the result.
    """
    L0 = np.atleast_1d(np.asarray(log_start, dtype=float))
    if f.compact:
        return np.zeros_like(L0)
    d = _tail_exponent(f, m)
    limit = f.tail_limit
    core = np.zeros_like(L0)
    inside = L0 < limit
    if np.any(inside):
        Li = L0[inside]
        # s in (0, 1] covers radii e^{L - log(s)/d}; s < s_min lies past the limit
        with np.errstate(under="ignore"):
            s_min = np.exp(-d * (limit - Li)) if math.isfinite(limit) else np.zeros_like(Li)

        # integrate in moment units, e^{-dL}/d times the core, so abs_tol means
        # the same as on finite cells whatever the size of the scaled tail
        with np.errstate(under="ignore", over="ignore"):
            unit = np.clip(np.exp(-d * Li) / d, 1e-280, 1e280)

        def g(s, owner):
            return f.scaled_tail(Li[owner][:, None] - np.log(s) / d) * unit[owner][:, None]

        vals = _batch(g, s_min, np.ones_like(Li), spec) / unit
        if math.isfinite(limit):
            extra = float(f.scaled_tail(limit)) * s_min
            if np.any(np.abs(extra) * unit > spec.tail_tol * np.abs(vals + extra) * unit + spec.abs_tol):
                raise QuadratureError(
                    "power-law tail beyond the representable range exceeds tail_tol; "
                    "supply an exact scaled tail for this profile"
                )
            vals = vals + extra
        core[inside] = vals
    if np.any(~inside):
        core[~inside] = float(f.scaled_tail(limit))
    return core


def tail_moments(f, m, log_start, spec=DEFAULT_SPEC):
    """``∫_{e^L}^inf f(s) s^m ds`` for log-radii ``L`` beyond the last breakpoint."""
    L0 = np.atleast_1d(np.asarray(log_start, dtype=float))
    if f.compact:
        return np.zeros_like(L0)
    d = _tail_exponent(f, m)
    with np.errstate(under="ignore", over="ignore"):
        scale = np.exp(-d * L0) / d
    return scale * tail_core(f, m, L0, spec)


def radial_moment(f, m, lo=0.0, hi=math.inf, spec=DEFAULT_SPEC):
    """``∫_lo^hi f(s) s^m ds`` for ``0 <= lo <= hi <= inf``, split at breakpoints."""
    lo, hi = float(lo), float(hi)
    if not (0.0 <= lo <= hi):
        raise DomainError(f"need 0 <= lo <= hi, got lo={lo}, hi={hi}")
    if lo == hi:
        return 0.0
    if math.isinf(hi):
        if f.compact:
            hi = f.breakpoints[-1] if f.breakpoints else 0.0
            if hi <= lo:
                return 0.0
        else:
            T = max(f.tail_start, lo)
            tail = float(tail_moments(f, m, [math.log(T)], spec)[0])
            return tail + radial_moment(f, m, lo, T, spec)
    pts = [lo] + [b for b in f.breakpoints if lo < b < hi] + [hi]
    total = 0.0
    if lo == 0.0:
        total += float(_zero_cells(f, m, [pts[1]], spec)[0])
        pts = pts[1:]
    if len(pts) > 1:
        total += float(np.sum(_log_cells(f, m, pts[:-1], pts[1:], spec)))
    return total


def radial_moments_from_zero(f, m, radii, spec=DEFAULT_SPEC):
    """``∫_0^{r_i} f(s) s^m ds`` for every entry of ``radii`` (any order, ``r_i >= 0``).

    The integrals are accumulated over the sorted radii so every cell is
    integrated once.
    """
    r = np.asarray(radii, dtype=float)
    flat = r.ravel()
    if np.any(flat < 0) or not np.all(np.isfinite(flat)):
        raise DomainError("radii must be finite and non-negative")
    out = np.zeros_like(flat)
    pos = flat > 0
    if not np.any(pos):
        return out.reshape(r.shape)
    uniq = np.unique(flat[pos])
    grid = np.union1d(uniq, [b for b in f.breakpoints if b < uniq[-1]])
    first = _zero_cells(f, m, grid[:1], spec)
    rest = _log_cells(f, m, grid[:-1], grid[1:], spec)
    cum = np.concatenate([first, first[0] + np.cumsum(rest)])
    out[pos] = cum[np.searchsorted(grid, flat[pos])]
    return out.reshape(r.shape)


def radial_moments_to_inf(f, m, radii, spec=DEFAULT_SPEC):
    """``∫_{r_i}^inf f(s) s^m ds`` for every entry of ``radii`` (any order, ``r_i >= 0``)."""
    r = np.asarray(radii, dtype=float)
    flat = r.ravel()
    if np.any(flat < 0) or not np.all(np.isfinite(flat)):
        raise DomainError("radii must be finite and non-negative")
    uniq = np.unique(flat)
    top = max(uniq[-1], f.tail_start)
    grid = np.union1d(uniq, [b for b in f.breakpoints if b < top] + [top])
    above = 0.0 if f.compact else float(tail_moments(f, m, [math.log(top)], spec)[0])
    cells = np.zeros(grid.size - 1)
    start = 0
    if grid[0] == 0.0:
        cells[0] = _zero_cells(f, m, grid[1:2], spec)[0]
        start = 1
    if grid.size - 1 > start:
        cells[start:] = _log_cells(f, m, grid[start:-1], grid[start + 1:], spec)
    vals = above + np.concatenate([np.cumsum(cells[::-1])[::-1], [0.0]])
    out = vals[np.searchsorted(grid, flat)]
    return out.reshape(r.shape)


def integrate_radial(f, n, spec=DEFAULT_SPEC):
    """``∫_0^inf f(r) r^{n-1} dr``.

    Raises :class:`DomainError` when the decay metadata makes the integral
    divergent, :class:`QuadratureError` when the tolerance cannot be met.
    """
    n = Dimension(n)
    _zero_exponent(f, n - 1)
    if not f.compact:
        _tail_exponent(f, n - 1)
    return radial_moment(f, n - 1, 0.0, math.inf, spec)


def cumulative_radial(f, n, r, spec=DEFAULT_SPEC):
    """``F(r) = ∫_0^r f(s) s^{n-1} ds``; ``r`` may be a scalar or an array."""
    n = Dimension(n)
    out = radial_moments_from_zero(f, n - 1, r, spec)
    return float(out) if np.ndim(out) == 0 else out


# -- sphere ----------------------------------------------------------------------


def sphere_rule(n, level):
    """Product rule on S^{n-1}: unit vectors of shape ``(k, n)`` and weights.

    ``n = 2``: trapezoid with ``8 * 2**level`` points.  ``n = 3``:
    Gauss-Legendre in ``cos(theta)`` with ``4 * 2**level`` nodes times a
    trapezoid with twice as many azimuths.
    """
    if n == 2:
        k = 8 * 2**level
        phi = 2 * np.pi * np.arange(k) / k
        return np.stack([np.cos(phi), np.sin(phi)], axis=-1), np.full(k, 2 * np.pi / k)
    if n == 3:
        kt = 4 * 2**level
        x, w = np.polynomial.legendre.leggauss(kt)
        kp = 2 * kt
        phi = 2 * np.pi * np.arange(kp) / kp
        sin_t = np.sqrt(1.0 - x**2)
        u = np.stack([
            np.outer(sin_t, np.cos(phi)).ravel(),
            np.outer(sin_t, np.sin(phi)).ravel(),
            np.repeat(x, kp),
        ], axis=-1)
        return u, np.repeat(w, kp) * (2 * np.pi / kp)
    raise UnsupportedDimensionError(f"sphere quadrature needs n in {{2, 3}}, got {n}")


def _arc_integral(a, spec):
    cuts = sorted({0.0, 2 * np.pi, *[float(c) % (2 * np.pi) for c in a.breakpoints]})
    lo, hi = np.array(cuts[:-1]), np.array(cuts[1:])
    return float(np.sum(_batch(lambda x, _o: a(x), lo, hi, spec)))


def integrate_sphere(a, n, spec=DEFAULT_SPEC, max_level=14):
    """``∫_{S^{n-1}} a(θ) dθ`` against the (unnormalised) surface measure."""
    n = Dimension(n)
    if a.constant is not None:
        return a.constant * sphere_measure(n)
    if n not in (2, 3):
        raise UnsupportedDimensionError(f"angular integration needs n in {{2, 3}}, got {n}")
    if n == 2 and a.breakpoints:
        return _arc_integral(a, spec)
    prev = None
    for level in range(max_level + 1):
        u, w = sphere_rule(n, level)
        cur = float(np.dot(w, a.at_unit_vectors(u)))
        if prev is not None and abs(cur - prev) <= max(spec.abs_tol, spec.rel_tol * abs(cur)):
            return cur
        prev = cur
    raise QuadratureError(f"sphere quadrature did not converge for n={n}")
