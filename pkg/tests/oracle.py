"""Reference values that do not share code with the package.

sin_p is the inverse of ``zeta(v) = int_0^v (1 - (s/m)^p)^(-1/p) ds``. The
substitution ``u = (s/m)^p`` turns that into an incomplete Beta function,
``zeta(v) = (m/p) B(1/p, 1 - 1/p) I((v/m)^p; 1/p, 1 - 1/p)``, which scipy
evaluates to near machine precision; the inverse comes from brentq.
"""

import numpy as np
from scipy.optimize import brentq
from scipy.special import beta, betainc


def m_of(p):
    return (p - 1.0) ** (1.0 / p)


def zeta(p, v):
    m = m_of(p)
    a = 1.0 / p
    u = min((v / m) ** p, 1.0)
    return m / p * beta(a, 1.0 - a) * betainc(a, 1.0 - a, u)


def sin_p_half(p, xs):
    """sin_p on ``[0, pi_p/2]`` by inverting ``zeta``."""
    m = m_of(p)
    top = zeta(p, m)
    out = []
    for x in np.atleast_1d(xs):
        if x <= 0.0:
            out.append(0.0)
        elif x >= top:
            out.append(m)
        else:
            out.append(brentq(lambda v: zeta(p, v) - x, 0.0, m, xtol=1e-16, rtol=1e-15))
    return np.array(out)


def sin_p_line(p, xs):
    """sin_p on the real line via oddness, reflection and periodicity,
    reduced independently of the package."""
    half = zeta(p, m_of(p))
    period = 4.0 * half
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    r = np.mod(xs, period)
    sign = np.where(r > 2.0 * half, -1.0, 1.0)
    r = np.where(r > 2.0 * half, r - 2.0 * half, r)
    r = np.where(r > half, 2.0 * half - r, r)
    return sign * sin_p_half(p, r)


def cos_p_half(p, xs):
    s = sin_p_half(p, xs)
    return np.maximum(1.0 - (s / m_of(p)) ** p, 0.0) ** (1.0 / p)
