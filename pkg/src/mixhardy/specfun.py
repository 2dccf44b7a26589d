"""Gamma/Beta functions and the geometric constants of the unit sphere and ball."""

from __future__ import annotations

import math

from .errors import DomainError

__all__ = [
    "Dimension",
    "gamma_fn",
    "log_gamma_fn",
    "beta_fn",
    "sphere_measure",
    "ball_volume",
]


class Dimension(int):
    """Ambient dimension ``n >= 2``.

    Behaves like a plain ``int``; construction validates the range.

    >>> Dimension(3) + 1
    4
    """

    def __new__(cls, n):
        if isinstance(n, float) and not n.is_integer():
            raise DomainError(f"dimension must be an integer, got {n!r}")
        value = int(n)
        if value < 2:
            raise DomainError(f"dimension must be >= 2, got {value}")
        return super().__new__(cls, value)


def _check_positive(name, x):
    x = float(x)
    if not x > 0.0 or math.isinf(x):
        raise DomainError(f"{name} must be a finite positive real, got {x!r}")
    return x


def gamma_fn(x):
    """Gamma function for real ``x > 0``."""
    x = _check_positive("x", x)
    return math.gamma(x)


def log_gamma_fn(x):
    """Natural log of the Gamma function for real ``x > 0``."""
    x = _check_positive("x", x)
    return math.lgamma(x)


def beta_fn(z1, z2):
    """Beta function ``B(z1, z2) = Γ(z1)Γ(z2)/Γ(z1+z2)`` for positive reals.

    Evaluated through log-Gamma so large arguments do not overflow.
    """
    a = _check_positive("z1", z1)
    b = _check_positive("z2", z2)
    return math.exp(math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b))


def sphere_measure(n):
    """Surface measure of the unit sphere in R^n, ``2 π^{n/2} / Γ(n/2)``."""
    n = Dimension(n)
    return 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)


def ball_volume(n):
    """Volume of the unit ball in R^n, ``π^{n/2} / Γ(1 + n/2)``."""
    n = Dimension(n)
    return math.pi ** (n / 2.0) / math.gamma(1.0 + n / 2.0)
