"""Independent closed forms and brute-force references used by the tests.

Nothing here imports the package's quadrature; values come from scipy, mpmath
or hand-derived formulas.
"""

import math

import mpmath
import numpy as np
from scipy import integrate, special


def omega(n):
    return 2 * math.pi ** (n / 2) / special.gamma(n / 2)


def omega_recursive(n):
    # ω_2 = 2π, ω_3 = 4π, ω_{n+2} = 2π ω_n / n
    w = {2: 2 * math.pi, 3: 4 * math.pi}
    for k in range(4, n + 1):
        w[k] = 2 * math.pi * w[k - 2] / (k - 2)
    return w[n]


def ball_volume(n):
    return math.pi ** (n / 2) / special.gamma(1 + n / 2)


def omega_factor(n, pb_in, pb_out):
    return omega(n) ** (1 / pb_out - 1 / pb_in)


def hardy_ratio_f_eps(eps, p, n, pb1, pb2):
    """‖H f_ε‖/‖f_ε‖ for the truncated power family.

    With ``a = n - n/p - ε`` the substitution ``t = r^{-a}`` turns
    ``∫ |H f_ε|^p r^{n-1} dr`` into ``(n/a)^p B(pε/a, p+1)/a``, and
    ``‖f_ε‖_p^p = 1/(pε)``.
    """
    a = n - n / p - eps
    radial = (n / a) * (p * eps * special.beta(p * eps / a, p + 1) / a) ** (1 / p)
    return radial * omega_factor(n, pb1, pb2)


def dual_ratio_f_eps(eps, p, n, pb1, pb2):
    """‖H* f_ε‖/‖f_ε‖: ``H* f_ε = (n/α) max(r,1)^{-α}`` gives ``p (1 + pε/n)^{-1/p'}``."""
    x = p * eps / n
    return p * (1 + x) ** (-(p - 1) / p) * omega_factor(n, pb1, pb2)


def fractional_core_mp(p, q, n, beta, dps=40):
    """High-precision Beta formula for the fractional constant."""
    with mpmath.workdps(dps):
        p, q, n, beta = (mpmath.mpf(v) for v in (p, q, n, beta))
        pc, qc = p / (p - 1), q / (q - 1)
        a, b = n / (q * beta), n / (qc * beta)
        return float((pc / q) ** (1 / q) * (a * mpmath.beta(a, b)) ** (-beta / n))


def fractional_core_quad(p, q, n, beta):
    """Lebesgue-space ratio ‖H_β f0‖_q/‖f0‖_p by scipy quad with the closed-form primitive.

    ``∫_0^r f0 s^{n-1} ds = r^n (1 + r^k)^{-n/k} / n`` for ``f0 = (1+r^k)^{-(1+n/k)}``, ``k = qβ``.
    """
    k = q * beta
    w, vol = omega(n), ball_volume(n)
    f0 = lambda r: (1 + r**k) ** (-(1 + n / k))
    Hf = lambda r: w * vol ** (beta / n - 1) * r ** (beta - n) * r**n * (1 + r**k) ** (-n / k) / n

    def lp(g, e):
        val = sum(integrate.quad(lambda r: abs(g(r)) ** e * r ** (n - 1), a, b, limit=200,
                                 epsabs=0, epsrel=1e-13)[0]
                  for a, b in ((0, 1), (1, np.inf)))
        return (w * val) ** (1 / e)

    return lp(Hf, q) / lp(f0, p)


def eps_lower_bound_mp(eps, p, n, dps=50):
    with mpmath.workdps(dps):
        eps, p, n = mpmath.mpf(eps), mpmath.mpf(p), mpmath.mpf(n)
        a = n - eps - n / p
        return float(n * eps**eps * (1 - eps**a) / a)


def weak_norm_r_param(g, n, p, pb, radii):
    """``sup_r g(r) ω^{1/p̄} (r^n/n)^{1/p}`` over ``radii`` for a continuous nonincreasing ``g``."""
    radii = np.asarray(radii, dtype=float)
    vals = np.asarray(g(radii), dtype=float) * omega(n) ** (1 / pb) * (radii**n / n) ** (1 / p)
    return float(np.max(vals))


def hardy_quad(f, r, n, breakpoints=()):
    """``H f(r) = n r^{-n} ∫_0^r f s^{n-1} ds`` by scipy quad."""
    pts = [b for b in breakpoints if 0 < b < r]
    val = integrate.quad(lambda s: f(s) * s ** (n - 1), 0, r, points=pts or None,
                         epsabs=0, epsrel=1e-13, limit=200)[0]
    return n * val / r**n


def dual_hardy_quad(f, r, n, breakpoints=()):
    """``H* f(r) = n ∫_r^inf f(s)/s ds`` by scipy quad."""
    cuts = sorted({r, *[b for b in breakpoints if b > r]})
    total = 0.0
    for a, b in zip(cuts, cuts[1:] + [np.inf]):
        total += integrate.quad(lambda s: f(s) / s, a, b, epsabs=0, epsrel=1e-13, limit=200)[0]
    return n * total
