"""sin_p and cos_p on the whole real line from a half-period table.

The table is extended as an odd, ``2 pi_p``-periodic function that is
symmetric about ``pi_p/2``. Between nodes it is interpolated by cubic
Hermite pieces that use the table's node derivatives.

Plain Hermite interpolation in ``x`` loses accuracy at both ends of the half
period: near 0 ``sin_p(x) = x S(x^p)`` and near ``L = pi_p/2``
``sin_p = m_p - (L - x)^q D((L - x)^q)``, with ``q`` the conjugate exponent
and ``S``, ``D`` smooth. The left half of the table is therefore
interpolated as ``S`` in the variable ``x^p`` and the right half as ``D`` in
``(L - x)^q``. Both pieces still reproduce the node values and node
derivatives.
"""

from __future__ import annotations

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from .core import PContext
from .errors import DomainError
from .methods import SinPTable

__all__ = ["PTrig", "reduce_argument", "sin_p", "cos_p"]


def _left_slope(p):
    """``S'(0)`` for ``sin_p(x) = x S(x^p)``, from the series of ``zeta``."""
    return -1.0 / (p * (p + 1.0) * (p - 1.0))


def _right_coefficients(p, q, m):
    """``D(0)`` and ``D'(0)`` for ``m_p - sin_p = tau D(tau)``, ``tau = (L-x)^q``."""
    d0 = q ** (-q) * (p / m) ** (1.0 / (p - 1.0))
    d1 = -q * (p - 1.0) / (2.0 * p * m * (q + 1.0)) * d0**2
    return d0, d1


class PTrig:
    """Evaluator for sin_p and cos_p built from a :class:`SinPTable`.

    The constructor rejects tables that are not monotone on the half period:
    values must be non-decreasing and derivatives non-negative.
    """

    def __init__(self, table: SinPTable):
        x = table.nodes
        s = table.values
        d = table.derivs
        if np.any(np.diff(s) < 0.0):
            raise DomainError("table values are not non-decreasing on [0, pi_p/2]")
        if np.any(d < 0.0):
            raise DomainError("table derivatives must be non-negative on [0, pi_p/2]")
        self.table = table
        self.ctx = table.ctx
        p, q, m = self.ctx.p, self.ctx.p_conj, self.ctx.m_p
        n = x.size
        mid = (n - 1) // 2
        self._mid = x[mid]
        self._half = x[-1]

        xl, sl, dl = x[: mid + 1], s[: mid + 1], d[: mid + 1]
        g = np.empty_like(xl)
        gp = np.empty_like(xl)
        g[0] = dl[0]
        g[1:] = sl[1:] / xl[1:]
        gp[0] = _left_slope(p)
        gp[1:] = (dl[1:] * xl[1:] - sl[1:]) / (p * xl[1:] ** (p + 1.0))
        self._left = CubicHermiteSpline(xl**p, g, gp)

        t = self._half - x[mid:]
        tau = t**q
        w = m - s[mid:]
        D = np.empty_like(t)
        Dp = np.empty_like(t)
        D[-1], Dp[-1] = _right_coefficients(p, q, m)
        D[:-1] = w[:-1] / tau[:-1]
        Dp[:-1] = (d[mid:-1] / (q * t[:-1] ** (q - 1.0)) - D[:-1]) / tau[:-1]
        # spline abscissae must increase, so run from tau = 0 outwards
        self._right = CubicHermiteSpline(tau[::-1], D[::-1], Dp[::-1])

    def _gap(self, y):
        """``m_p - sin_p(y)`` for ``y`` in ``[0, pi_p/2]``, without cancellation
        next to the maximum."""
        p, q, m = self.ctx.p, self.ctx.p_conj, self.ctx.m_p
        y = np.asarray(y, dtype=float)
        out = np.empty_like(y)
        left = y <= self._mid
        yl = y[left]
        out[left] = m - yl * self._left(yl**p)
        tau = np.maximum(self._half - y[~left], 0.0) ** q
        out[~left] = tau * self._right(tau)
        return np.clip(out, 0.0, m)

    def half_period_sin(self, y):
        """Interpolated sin_p on ``[0, pi_p/2]``, clipped to ``[0, m_p]``."""
        return self.ctx.m_p - self._gap(y)

    def half_period_cos(self, y):
        """``(1 - (sin_p/m_p)^p)^(1/p)`` on ``[0, pi_p/2]``."""
        p, m = self.ctx.p, self.ctx.m_p
        # the gap equals m_p at y = 0, where log1p(-1) = -inf gives rad = 1
        with np.errstate(divide="ignore"):
            rad = -np.expm1(p * np.log1p(-self._gap(y) / m))
        return np.maximum(rad, 0.0) ** (1.0 / p)


def reduce_argument(ctx: PContext, x):
    """Map ``x`` to ``y`` in ``[0, pi_p/2]`` with
    ``sin_p(x) = sign * sin_p(y)`` and ``sin_p'(x) = deriv_sign * sin_p'(y)``.

    Uses periodicity ``2 pi_p``, oddness, and the reflection
    ``sin_p(pi_p - x) = sin_p(x)``. Works elementwise on arrays.
    """
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise DomainError("arguments must be finite")
    period = 2.0 * ctx.pi_p
    # np.round is symmetric, so reducing -x gives exactly -r
    r = x - period * np.round(x / period)
    sign = np.where(r < 0.0, -1.0, 1.0)
    r = np.abs(r)
    reflect = r > ctx.half_period
    y = np.where(reflect, ctx.pi_p - r, r)
    y = np.clip(y, 0.0, ctx.half_period)
    deriv_sign = np.where(reflect, -1.0, 1.0)
    if y.ndim == 0:
        return float(y), float(sign), float(deriv_sign)
    return y, sign, deriv_sign


def sin_p(trig: PTrig, x):
    """sin_p at arbitrary real arguments (scalar or array)."""
    y, sign, _ = reduce_argument(trig.ctx, x)
    out = sign * trig.half_period_sin(y)
    return float(out) if np.ndim(out) == 0 else out


def cos_p(trig: PTrig, x):
    """cos_p, the derivative of sin_p, from the Pythagorean identity."""
    y, _, deriv_sign = reduce_argument(trig.ctx, x)
    out = deriv_sign * trig.half_period_cos(y)
    return float(out) if np.ndim(out) == 0 else out
