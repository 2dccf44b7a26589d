"""Radial and angular profiles.

A :class:`RadialProfile` is a vectorised callable ``r -> f(r)`` together with
the metadata the integrators need: the radii where ``f`` is not smooth and
power-law exponents bounding ``|f|`` near the origin and near infinity.

Power-law tails are the hard part of every integral in this package.  A profile
may therefore carry a *scaled tail* ``L -> f(e^L) * e^{-decay_inf * L}``, a
bounded function of the log-radius that stays representable even where
``e^L`` overflows a double.  Profiles with slowly decaying tails (the
near-extremal families) supply it in closed form; for all others it is derived
from ``func`` and is only trusted up to ``tail_limit``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, UnsupportedDimensionError

__all__ = ["RadialProfile", "AngularProfile", "default_tail_limit"]

# exp(690) and exp(-690) are both comfortably inside double range
_LOG_RANGE = 690.0


def default_tail_limit(decay_inf):
    """Largest log-radius at which ``f(e^L) e^{-a L}`` can be formed directly."""
    if math.isinf(decay_inf):
        return math.inf
    return _LOG_RANGE / max(1.0, abs(decay_inf))


def _as_array(r):
    return np.asarray(r, dtype=float)


@dataclass(frozen=True, eq=False)
class RadialProfile:
    """A scalar function of the radius with integrability metadata.

    ``decay_zero = a0`` promises ``|f(r)| = O(r^a0)`` as ``r -> 0+`` and
    ``decay_inf = a_inf`` promises ``|f(r)| = O(r^a_inf)`` as ``r -> inf``.
    ``decay_inf = -inf`` marks a profile vanishing beyond its last breakpoint.
    """

    func: Callable[[np.ndarray], np.ndarray]
    breakpoints: tuple = ()
    decay_zero: float = 0.0
    decay_inf: float = -math.inf
    tail: Optional[Callable[[np.ndarray], np.ndarray]] = None
    tail_limit: float = math.nan
    level_radius: Optional[Callable[[float], float]] = None
    name: str = ""
    _extra: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        bps = tuple(float(b) for b in self.breakpoints)
        if any(not (0.0 < b < math.inf) for b in bps):
            raise DomainError(f"breakpoints must be finite and positive: {bps}")
        if any(b2 <= b1 for b1, b2 in zip(bps, bps[1:])):
            raise DomainError(f"breakpoints must be strictly increasing: {bps}")
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "decay_zero", float(self.decay_zero))
        object.__setattr__(self, "decay_inf", float(self.decay_inf))
        if math.isnan(self.tail_limit):
            limit = math.inf if self.tail is not None else default_tail_limit(self.decay_inf)
            object.__setattr__(self, "tail_limit", limit)

    def __call__(self, r):
        arr = _as_array(r)
        out = np.asarray(self.func(arr), dtype=float)
        if out.shape != arr.shape:
            out = np.broadcast_to(out, arr.shape).copy()
        return float(out) if out.ndim == 0 else out

    @property
    def compact(self):
        """True when the profile vanishes beyond its last breakpoint."""
        return self.decay_inf == -math.inf

    @property
    def tail_start(self):
        """Radius beyond which the profile is smooth (last breakpoint, or 1)."""
        return self.breakpoints[-1] if self.breakpoints else 1.0

    def scaled_tail(self, log_r):
        """``f(e^L) * e^{-decay_inf * L}`` evaluated at log-radii ``L``."""
        L = _as_array(log_r)
        if self.compact:
            return np.zeros_like(L)
        if self.tail is not None:
            return np.broadcast_to(np.asarray(self.tail(L), dtype=float), L.shape).copy()
        with np.errstate(over="ignore", under="ignore", invalid="ignore"):
            return np.asarray(self.func(np.exp(L)), dtype=float) * np.exp(-self.decay_inf * L)

    # -- algebra -----------------------------------------------------------

    def scale(self, c):
        """The profile ``c * f``."""
        c = float(c)
        tail = None if self.tail is None else (lambda L, t=self.tail: c * t(L))
        return RadialProfile(
            func=lambda r, f=self.func: c * f(r),
            breakpoints=self.breakpoints,
            decay_zero=self.decay_zero,
            decay_inf=self.decay_inf,
            tail=tail,
            tail_limit=self.tail_limit,
            name=f"{c}*{self.name}",
        )

    def __add__(self, other):
        if not isinstance(other, RadialProfile):
            return NotImplemented
        bps = tuple(sorted(set(self.breakpoints) | set(other.breakpoints)))
        a_inf = max(self.decay_inf, other.decay_inf)
        tail = None
        if not math.isinf(a_inf) and (self.tail is not None or self.compact) and (
            other.tail is not None or other.compact
        ):
            def tail(L, f=self, g=other, a=a_inf):
                L = _as_array(L)
                out = np.zeros_like(L)
                for h in (f, g):
                    if not h.compact:
                        with np.errstate(under="ignore"):
                            out = out + h.scaled_tail(L) * np.exp((h.decay_inf - a) * L)
                return out

        return RadialProfile(
            func=lambda r, f=self.func, g=other.func: f(r) + g(r),
            breakpoints=bps,
            decay_zero=min(self.decay_zero, other.decay_zero),
            decay_inf=a_inf,
            tail=tail,
            tail_limit=math.nan if tail is not None else min(self.tail_limit, other.tail_limit),
            name=f"({self.name}+{other.name})",
        )

    def abs_pow(self, p):
        """The profile ``|f|^p`` for ``p > 0``."""
        p = float(p)
        if not p > 0:
            raise DomainError(f"exponent must be positive, got {p}")
        tail = None if self.tail is None else (lambda L, t=self.tail: np.abs(t(L)) ** p)
        return RadialProfile(
            func=lambda r, f=self.func: np.abs(f(r)) ** p,
            breakpoints=self.breakpoints,
            decay_zero=p * self.decay_zero,
            decay_inf=p * self.decay_inf,
            tail=tail,
            tail_limit=self.tail_limit if tail is not None else math.nan,
            name=f"|{self.name}|^{p:g}",
        )

    def dilate(self, t):
        """The profile ``r -> f(t r)`` for ``t > 0``."""
        t = float(t)
        if not t > 0:
            raise DomainError(f"dilation factor must be positive, got {t}")
        a = self.decay_inf
        tail = None
        if self.tail is not None:
            shift, factor = math.log(t), (0.0 if math.isinf(a) else t**a)
            tail = lambda L, g=self.tail: factor * g(_as_array(L) + shift)
        return RadialProfile(
            func=lambda r, f=self.func: f(t * _as_array(r)),
            breakpoints=tuple(b / t for b in self.breakpoints),
            decay_zero=self.decay_zero,
            decay_inf=a,
            tail=tail,
            tail_limit=(self.tail_limit - math.log(t)) if tail is not None else math.nan,
            name=f"{self.name}({t:g}r)",
        )

    def truncate(self, radius):
        """The profile ``f * χ_[0, radius]``."""
        radius = float(radius)
        if not radius > 0:
            raise DomainError(f"truncation radius must be positive, got {radius}")
        bps = tuple(b for b in self.breakpoints if b < radius) + (radius,)
        return RadialProfile(
            func=lambda r, f=self.func: np.where(_as_array(r) <= radius, f(r), 0.0),
            breakpoints=bps,
            decay_zero=self.decay_zero,
            decay_inf=-math.inf,
            name=f"{self.name}·χ[0,{radius:g}]",
        )

    # -- invariant checks ----------------------------------------------------

    def check_decay(self, decades=6, growth=1e3):
        """Probe ``|f(r)| / r^a`` near 0 and infinity; raise if it visibly blows up.

        This is a sanity check of the metadata, not a proof.
        """
        lo = self.breakpoints[0] if self.breakpoints else 1.0
        hi = self.tail_start
        near0 = lo * np.logspace(-decades, -1, 4 * decades)
        ratios0 = np.abs(self(near0)) / near0**self.decay_zero
        _check_bounded(ratios0[::-1], growth, "decay_zero", self.decay_zero)
        if not self.compact:
            far = hi * np.logspace(1, decades, 4 * decades)
            with np.errstate(over="ignore", under="ignore", invalid="ignore"):
                ratios = np.abs(self(far)) / far**self.decay_inf
            ratios = ratios[np.isfinite(ratios)]
            _check_bounded(ratios, growth, "decay_inf", self.decay_inf)
        else:
            far = hi * np.array([1.5, 10.0, 1e3])
            if np.any(self(far) != 0.0):
                raise DomainError("profile marked compact is nonzero past its last breakpoint")
        return self


def _check_bounded(ratios, growth, label, value):
    if ratios.size == 0:
        return
    head = np.max(ratios[: max(1, ratios.size // 4)])
    if not np.all(np.isfinite(ratios)) or np.max(ratios) > growth * max(head, 1e-300) + 1e-300:
        raise DomainError(f"profile violates its {label}={value} bound on the probe grid")


@dataclass(frozen=True, eq=False)
class AngularProfile:
    """A bounded function on the unit sphere S^{n-1}.

    For ``n = 2`` ``func(phi)`` takes the polar angle of the circle; for
    ``n = 3`` ``func(theta, phi)`` takes the colatitude and the azimuth.
    ``constant`` marks an angle-independent profile, which is the only kind
    usable in dimensions ``n >= 4``.  ``breakpoints`` lists angles (``n = 2``)
    where ``func`` has kinks.
    """

    func: Optional[Callable[..., np.ndarray]] = None
    constant: Optional[float] = None
    breakpoints: tuple = ()
    name: str = ""

    def __post_init__(self):
        if self.func is None and self.constant is None:
            raise DomainError("angular profile needs a function or a constant")

    @classmethod
    def const(cls, value=1.0):
        return cls(constant=float(value), name=f"{float(value):g}")

    def __call__(self, *angles):
        if self.constant is not None:
            return np.full(np.broadcast(*[_as_array(a) for a in angles]).shape, self.constant)
        return np.asarray(self.func(*angles), dtype=float)

    def abs_pow(self, p):
        if self.constant is not None:
            return AngularProfile.const(abs(self.constant) ** p)
        return AngularProfile(
            func=lambda *a, g=self.func: np.abs(g(*a)) ** p,
            breakpoints=self.breakpoints,
            name=f"|{self.name}|^{p:g}",
        )

    def at_unit_vectors(self, u):
        """Evaluate on unit vectors ``u`` of shape ``(..., n)`` with ``n in {2, 3}``."""
        u = _as_array(u)
        if self.constant is not None:
            return np.full(u.shape[:-1], self.constant)
        n = u.shape[-1]
        if n == 2:
            return self(np.mod(np.arctan2(u[..., 1], u[..., 0]), 2 * np.pi))
        if n == 3:
            theta = np.arccos(np.clip(u[..., 2], -1.0, 1.0))
            phi = np.mod(np.arctan2(u[..., 1], u[..., 0]), 2 * np.pi)
            return self(theta, phi)
        raise UnsupportedDimensionError(f"non-constant angular profiles need n in {{2, 3}}, got {n}")
