"""Test functions and extremizing families, with exact decay metadata."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .profiles import AngularProfile, RadialProfile
from .specfun import Dimension, sphere_measure

__all__ = [
    "ExtremizerFamilyEps",
    "SeparableField",
    "make_f_eps",
    "f_eps_norm",
    "make_f0_fractional",
    "make_g0_dual_fractional",
    "make_chi_ball",
    "chi_ball_norm",
    "make_hardy_of_ball",
    "make_power_piece",
    "make_exponential",
    "make_rational_tail",
    "make_separable",
    "random_piecewise_power",
    "random_angular",
    "random_separable",
]


def _check_p(p):
    p = float(p)
    if not (1.0 < p < math.inf):
        raise DomainError(f"p must lie in (1, inf), got {p}")
    return p


@dataclass(frozen=True)
class ExtremizerFamilyEps:
    """Parameters of the truncated power family ``|x|^{-(n/p + eps)} χ_{|x|>1}``."""

    epsilon: float
    p: float
    n: int

    def __post_init__(self):
        if not (0.0 < self.epsilon < 1.0):
            raise DomainError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        _check_p(self.p)
        object.__setattr__(self, "n", Dimension(self.n))

    @property
    def exponent(self):
        return self.n / self.p + self.epsilon

    def profile(self):
        return make_f_eps(self.epsilon, self.p, self.n)


def make_f_eps(eps, p, n):
    """``f_eps(r) = r^{-(n/p + eps)}`` for ``r > 1`` and 0 on ``[0, 1]``.

    The same profile serves as the near-extremal family for the dual operator.
    """
    fam = ExtremizerFamilyEps(float(eps), _check_p(p), n)
    a = fam.exponent

    def func(r):
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore"):
            return np.where(r > 1.0, np.where(r > 1.0, r, 2.0) ** -a, 0.0)

    return RadialProfile(
        func=func,
        breakpoints=(1.0,),
        decay_zero=0.0,
        decay_inf=-a,
        tail=lambda L: np.ones_like(np.asarray(L, dtype=float)),
        name=f"f_eps(eps={fam.epsilon:g},p={fam.p:g},n={fam.n})",
    )


def f_eps_norm(eps, p, p_bar, n):
    """Closed-form mixed norm ``ω_n^{1/p̄} (p eps)^{-1/p}`` of :func:`make_f_eps`."""
    return sphere_measure(n) ** (1.0 / p_bar) / (p * eps) ** (1.0 / p)


def make_f0_fractional(q, beta, n):
    """``f0(r) = (1 + r^{qβ})^{-(1 + n/(qβ))}``, the exact extremizer of the fractional operator."""
    q, beta, n = float(q), float(beta), Dimension(n)
    if not q > 1.0:
        raise DomainError(f"q must exceed 1, got {q}")
    if not (0.0 < beta < n):
        raise DomainError(f"beta must lie in (0, n), got {beta}")
    k = q * beta
    e = 1.0 + n / k

    def func(r):
        return (1.0 + np.asarray(r, dtype=float) ** k) ** -e

    def tail(L):
        with np.errstate(under="ignore"):
            return (1.0 + np.exp(-k * np.asarray(L, dtype=float))) ** -e

    return RadialProfile(
        func=func,
        decay_zero=0.0,
        decay_inf=-(k + n),
        tail=tail,
        name=f"f0(q={q:g},beta={beta:g},n={n})",
    )


def make_g0_dual_fractional(p, beta, n):
    """Exact extremizer of the adjoint fractional operator on ``L^p``.

    With ``p' = p/(p-1)`` and ``k = p'β`` this is
    ``g0(r) = r^{β(p'-1)} (1 + r^k)^{-n(p'-1)/k}``, a multiple of
    ``(H_β f0)^{p'-1}`` where ``f0`` extremizes ``H_β`` from ``L^{p'}`` (conjugate side).
    """
    p, beta, n = float(p), float(beta), Dimension(n)
    if not p > 1.0:
        raise DomainError(f"p must exceed 1, got {p}")
    if not (0.0 < beta < n / p):
        raise DomainError(f"beta must lie in (0, n/p), got {beta}")
    pc = p / (p - 1.0)
    k = pc * beta
    a = beta * (pc - 1.0)
    b = n * (pc - 1.0) / k

    def func(r):
        r = np.asarray(r, dtype=float)
        return r**a * (1.0 + r**k) ** -b

    def tail(L):
        with np.errstate(under="ignore"):
            return (1.0 + np.exp(-k * np.asarray(L, dtype=float))) ** -b

    return RadialProfile(
        func=func,
        decay_zero=a,
        decay_inf=a - k * b,
        tail=tail,
        name=f"g0(p={p:g},beta={beta:g},n={n})",
    )


def make_chi_ball(r):
    """Indicator of ``[0, r]``; its super-level radius is known in closed form."""
    r = float(r)
    if not (0.0 < r < math.inf):
        raise DomainError(f"radius must be positive, got {r}")
    return RadialProfile(
        func=lambda s: np.where(np.asarray(s, dtype=float) <= r, 1.0, 0.0),
        breakpoints=(r,),
        decay_zero=0.0,
        decay_inf=-math.inf,
        level_radius=lambda lam: r if lam < 1.0 else 0.0,
        name=f"chi[0,{r:g}]",
    )


def chi_ball_norm(r, n, p, p_bar):
    """Closed-form mixed norm ``ω_n^{1/p̄} r^{n/p} / n^{1/p}`` of :func:`make_chi_ball`."""
    return sphere_measure(n) ** (1.0 / p_bar) * r ** (n / p) / n ** (1.0 / p)


def make_hardy_of_ball(r, n):
    """``min(1, (r/s)^n)``: the Hardy average of ``χ_[0,r]`` written in closed form."""
    r, n = float(r), Dimension(n)

    def func(s):
        s = np.asarray(s, dtype=float)
        with np.errstate(divide="ignore"):
            return np.where(s <= r, 1.0, (r / np.where(s > 0, s, 1.0)) ** n)

    return RadialProfile(
        func=func,
        breakpoints=(r,),
        decay_zero=0.0,
        decay_inf=-float(n),
        tail=lambda L: np.full(np.shape(L), r**n),
        level_radius=lambda lam: r * lam ** (-1.0 / n) if 0.0 < lam < 1.0 else 0.0,
        name=f"min(1,({r:g}/s)^{n})",
    )


def make_power_piece(c, alpha, lo=0.0, hi=math.inf):
    """``c r^alpha`` on ``[lo, hi]`` and zero elsewhere."""
    c, alpha, lo, hi = float(c), float(alpha), float(lo), float(hi)
    if not (0.0 <= lo < hi):
        raise DomainError(f"need 0 <= lo < hi, got {lo}, {hi}")

    def func(r):
        r = np.asarray(r, dtype=float)
        inside = (r >= lo) & (r <= hi)
        safe = np.where(inside & (r > 0), r, 1.0)
        return np.where(inside, c * safe**alpha, 0.0)

    bps = tuple(b for b in (lo, hi) if 0.0 < b < math.inf)
    compact = math.isfinite(hi)
    return RadialProfile(
        func=func,
        breakpoints=bps,
        decay_zero=alpha if lo == 0.0 else 0.0,
        decay_inf=-math.inf if compact else alpha,
        tail=None if compact else (lambda L: np.full(np.shape(L), c)),
        name=f"{c:g}r^{alpha:g}[{lo:g},{hi:g}]",
    )


def make_exponential(rate=1.0, c=1.0):
    """``c e^{-rate r}``."""
    rate, c = float(rate), float(c)
    if not rate > 0:
        raise DomainError("rate must be positive")
    return RadialProfile(
        func=lambda r: c * np.exp(-rate * np.asarray(r, dtype=float)),
        decay_zero=0.0,
        decay_inf=-60.0,
        name=f"{c:g}exp(-{rate:g}r)",
    )


def make_rational_tail(c, b):
    """``c (1 + r)^{-b}`` with ``b > 0``."""
    c, b = float(c), float(b)
    if not b > 0:
        raise DomainError("b must be positive")

    def tail(L):
        with np.errstate(under="ignore"):
            return c * (1.0 + np.exp(-np.asarray(L, dtype=float))) ** -b

    return RadialProfile(
        func=lambda r: c * (1.0 + np.asarray(r, dtype=float)) ** -b,
        decay_zero=0.0,
        decay_inf=-b,
        tail=tail,
        name=f"{c:g}(1+r)^-{b:g}",
    )


@dataclass(frozen=True, eq=False)
class SeparableField:
    """``F(r θ) = radial(r) * angular(θ)``."""

    radial: RadialProfile
    angular: AngularProfile

    def __call__(self, r, *angles):
        return np.asarray(self.radial(r)) * self.angular(*angles)

    def at_point(self, y):
        """Evaluate at Cartesian points ``y`` of shape ``(..., n)``."""
        y = np.asarray(y, dtype=float)
        r = np.linalg.norm(y, axis=-1)
        safe = np.where(r > 0, r, 1.0)[..., None]
        u = np.where(r[..., None] > 0, y / safe, np.eye(y.shape[-1])[0])
        return np.asarray(self.radial(r)) * self.angular.at_unit_vectors(u)


def make_separable(R, A):
    return SeparableField(R, A)


# -- seeded random families ------------------------------------------------------


def random_piecewise_power(rng, n, p, max_terms=3, tail_prob=0.5):
    """A nonnegative profile in the radial ``L^p(r^{n-1}dr)`` space.

    Sum of up to ``max_terms`` pieces ``c r^a χ_[r1,r2]``, plus with
    probability ``tail_prob`` a tail ``c (1+r)^{-b}`` with ``b > n/p``.
    """
    n = Dimension(n)
    crit = n / p
    k = int(rng.integers(1, max_terms + 1))
    prof = None
    for _ in range(k):
        c = float(rng.uniform(0.2, 3.0))
        r1 = 0.0 if rng.random() < 0.4 else float(rng.uniform(0.05, 2.0))
        r2 = r1 + float(rng.uniform(0.1, 3.0))
        lo_alpha = -crit + 0.15 if r1 == 0.0 else -3.0
        alpha = float(rng.uniform(lo_alpha, 2.0))
        piece = make_power_piece(c, alpha, r1, r2)
        prof = piece if prof is None else prof + piece
    if rng.random() < tail_prob:
        b = float(rng.uniform(crit + 0.15, crit + 2.5))
        prof = prof + make_rational_tail(float(rng.uniform(0.2, 3.0)), b)
    return prof


def random_angular(rng, n):
    """A smooth angular profile built from a few low-order harmonics."""
    n = Dimension(n)
    c = rng.uniform(-0.9, 0.9, size=3)
    if n == 2:
        return AngularProfile(
            func=lambda phi: 1.0 + c[0] * np.cos(phi) + c[1] * np.sin(2 * phi)
            + c[2] * np.cos(3 * phi),
            name="harmonic2",
        )
    if n == 3:
        return AngularProfile(
            func=lambda theta, phi: 1.0 + c[0] * np.cos(theta)
            + c[1] * np.sin(theta) * np.cos(phi) + c[2] * np.cos(theta) ** 2,
            name="harmonic3",
        )
    return AngularProfile.const(float(rng.uniform(0.5, 2.0)))


def random_separable(rng, n, p):
    return SeparableField(random_piecewise_power(rng, n, p), random_angular(rng, n))
