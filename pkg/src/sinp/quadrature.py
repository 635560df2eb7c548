"""Grid quadrature: composite Simpson (full range, cumulative, tail), a
product-integration variant for endpoint power singularities, and a
double-exponential rule for integrands singular at an endpoint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_legendre

from .core import GridFunction
from .errors import QuadratureError, ShapeError

__all__ = [
    "CumulativeIntegral",
    "simpson",
    "cumulative",
    "tail",
    "product_cumulative",
    "product_tail",
    "integrate_singular",
]

_GAUSS_POINTS = 24


@dataclass(frozen=True)
class CumulativeIntegral:
    """Running integrals of ``source`` from its first node to every node."""

    source: GridFunction
    partials: np.ndarray

    @property
    def total(self) -> float:
        return float(self.partials[-1])


def _check(gf: GridFunction):
    n = gf.values.size
    if n < 3 or n % 2 == 0:
        raise ShapeError(f"Simpson rules need an odd node count >= 3, got {n}")
    return gf.values, gf.h


def simpson(values: GridFunction) -> float:
    f, h = _check(values)
    return float(h / 3.0 * (f[0] + f[-1] + 4.0 * f[1:-1:2].sum() + 2.0 * f[2:-1:2].sum()))


def _second_half_stencils(n):
    """Start node of the 4-point stencil used for each pair's second half.

    The cubic through four consecutive nodes integrates the half-interval
    with a fifth-order local error, which keeps odd nodes fourth order
    overall. Interior pairs use the centred stencil, the last pair the
    one-sided stencil ending at the last node.
    """
    starts = np.arange(0, n - 1, 2)
    starts[-1] = max(starts[-1] - 1, 0)
    return starts


# cubic through nodes 0..3 integrated over [1, 2] and over [2, 3], in units of h
_CENTRED = np.array([-1.0, 13.0, 13.0, -1.0]) / 24.0
_ONE_SIDED = np.array([1.0, -5.0, 19.0, 9.0]) / 24.0


def cumulative(values: GridFunction) -> CumulativeIntegral:
    """Composite Simpson running integral, fourth order at every node.

    Even nodes accumulate whole pairs of intervals. An odd node takes the
    pair value up to the following even node and removes the Newton-Cotes
    integral over the pair's second half (cubic stencil when four nodes are
    available, three-point otherwise).
    """
    f, h = _check(values)
    f0, f1, f2 = f[0:-2:2], f[1:-1:2], f[2::2]
    pair = h / 3.0 * (f0 + 4.0 * f1 + f2)
    n = f.size
    if n == 3:
        second_half = h / 12.0 * (-f0 + 8.0 * f1 + 5.0 * f2)
    else:
        starts = _second_half_stencils(n)
        second_half = h * (f[starts[:-1, None] + np.arange(4)] @ _CENTRED)
        second_half = np.append(second_half, h * (f[starts[-1]:starts[-1] + 4] @ _ONE_SIDED))
    out = np.empty_like(f)
    out[0] = 0.0
    out[2::2] = np.cumsum(pair)
    out[1::2] = out[2::2] - second_half
    return CumulativeIntegral(values, out)


def tail(values: GridFunction) -> CumulativeIntegral:
    """Integrals from every node to the last one, ``simpson - cumulative``."""
    c = cumulative(values).partials
    out = simpson(values) - c
    out[-1] = 0.0
    return CumulativeIntegral(values, out)


# --------------------------------------------------------------------------
# product integration
# --------------------------------------------------------------------------

def _mapped_weights(nodes, k, exponent, power):
    """Weights on ``nodes`` that integrate ``t^exponent * P(t^power)`` over
    the half-interval ``[k, k+1]``, where ``P`` interpolates at ``nodes`` and
    ``t`` is measured in grid spacings from the singular end.

    The interpolant is built on the centred, scaled variable so the
    Vandermonde system stays well conditioned away from the end.
    """
    t = np.asarray(nodes, dtype=float)
    y = t**power
    centre, scale = y.mean(), np.ptp(y)
    m = y.size
    coef = np.linalg.inv(np.vander((y - centre) / scale, increasing=True))
    if k == 0 and (exponent != 0.0 or power != 1.0):
        # exact moments of t^exponent ((t^power - centre)/scale)^j over [0, 1]
        mom = np.array([
            sum(math.comb(j, r) * (-centre) ** (j - r) / (exponent + r * power + 1.0)
                for r in range(j + 1)) / scale**j
            for j in range(m)
        ])
    else:
        tg, wg = roots_legendre(_GAUSS_POINTS)
        s = k + 0.5 * (tg + 1.0)
        w = 0.5 * wg * s**exponent
        mom = (((s**power - centre) / scale)[:, None] ** np.arange(m)[None, :]).T @ w
    return mom @ coef


@lru_cache(maxsize=256)
def _product_weights(n, split, left, right, left_map, right_map):
    """Per-pair weights of the split product rule on a unit-spacing grid.

    Returns ``(pair_w, half_idx, half_w, on_left)``. ``pair_w[j]`` acts on
    nodes ``2j..2j+2`` and integrates pair ``j``; ``half_w[j]`` acts on
    ``half_idx[j]`` and integrates the pair's second half with a cubic
    stencil kept inside the pair's region (quadratic when the region has a
    single pair). ``on_left[j]`` tells which side of ``split`` the pair is.
    """
    npairs = (n - 1) // 2
    pair_w = np.zeros((npairs, 3))
    half_idx = np.zeros((npairs, 4), dtype=int)
    half_w = np.zeros((npairs, 4))
    on_left = np.zeros(npairs, dtype=bool)

    def weights(idx, k, left_side):
        # distances in spacings from the region's singular end
        if left_side:
            return _mapped_weights(idx, k, left, left_map)
        return _mapped_weights(n - 1 - np.asarray(idx), n - 2 - k, right, right_map)

    for j in range(npairs):
        a = 2 * j
        left_side = a + 2 <= split
        lo, hi = (0, split) if left_side else (split, n - 1)
        idx = np.arange(a, a + 3)
        pair_w[j] = weights(idx, a, left_side) + weights(idx, a + 1, left_side)
        if hi - lo >= 4:
            start = a - 1 if a - 1 >= lo else a
            start = min(start, hi - 3)
            half_idx[j] = start + np.arange(4)
            half_w[j] = weights(half_idx[j], a + 1, left_side)
        else:
            half_idx[j] = (a, a + 1, a + 2, a + 2)
            half_w[j, :3] = weights(idx, a + 1, left_side)
        on_left[j] = left_side
    for arr in (pair_w, half_idx, half_w, on_left):
        arr.setflags(write=False)
    return pair_w, half_idx, half_w, on_left


def _middle_node(n):
    return 2 * ((n - 1) // 4)


def product_cumulative(values: GridFunction, right_values=None, *, split: int | None = None,
                       left: float = 0.0, right: float = 0.0, left_map: float = 1.0,
                       right_map: float = 1.0) -> CumulativeIntegral:
    """Running integrals of a product integrand split at node ``split``.

    On ``[a, x_split]`` the integrand is ``(x - a)^left G_L(x)``, on
    ``[x_split, b]`` it is ``(b - x)^right G_R(x)``; ``G_L`` is given by
    ``values`` and ``G_R`` by ``right_values`` (default: the same values).
    Each factor is interpolated by polynomials on pairs of intervals in the
    variable ``(x - a)^left_map`` (left part) or ``(b - x)^right_map``
    (right part), and the products with the weight are integrated exactly.
    Endpoint behaviour carried by the weight or by the mapped variable costs
    no accuracy.

    ``split`` must be an even node index; the default is the even node
    nearest the middle. With zero exponents and unit maps this is a
    fourth-order Simpson-type running integral.
    """
    g, h = _check(values)
    gr = g if right_values is None else np.asarray(right_values, dtype=float)
    if gr.shape != g.shape:
        raise ShapeError("right_values must match the grid")
    n = g.size
    split = _middle_node(n) if split is None else int(split)
    if split < 0 or split > n - 1 or split % 2:
        raise ShapeError(f"split must be an even node index in [0, {n - 1}], got {split}")
    if left <= -1.0 or right <= -1.0:
        raise ValueError("weight exponents must exceed -1")
    if not (left_map > 0.0 and right_map > 0.0):
        raise ValueError("interpolation maps must be positive powers")
    pair_w, half_idx, half_w, on_left = _product_weights(
        n, split, float(left), float(right), float(left_map), float(right_map))
    pidx = 2 * np.arange(pair_w.shape[0])[:, None] + np.arange(3)
    side = on_left[:, None]
    trip = np.where(side, g[pidx], gr[pidx])
    quad4 = np.where(side, g[half_idx], gr[half_idx])
    scale = np.where(on_left, h ** (1.0 + left), h ** (1.0 + right))
    out = np.empty_like(g)
    out[0] = 0.0
    out[2::2] = np.cumsum(scale * (pair_w * trip).sum(axis=1))
    out[1::2] = out[2::2] - scale * (half_w * quad4).sum(axis=1)
    return CumulativeIntegral(values, out)


def product_tail(values: GridFunction, right_values=None, **kwargs) -> CumulativeIntegral:
    """Integrals from every node to the last one under the same split rule."""
    c = product_cumulative(values, right_values, **kwargs).partials
    out = c[-1] - c
    out[-1] = 0.0
    return CumulativeIntegral(values, out)


# --------------------------------------------------------------------------
# double-exponential rule
# --------------------------------------------------------------------------

_T_MAX = 6.0
_MAX_LEVELS = 12


def _de_nodes(t, lo, hi):
    """Abscissae, distance to ``hi`` and weights of the tanh-sinh map."""
    d = 0.5 * (hi - lo)
    u = 0.5 * math.pi * np.sinh(t)
    e = np.exp(-2.0 * np.abs(u))
    # 1 - tanh|u| and 1 + tanh|u| without cancellation
    small = 2.0 * e / (1.0 + e)
    gap_hi = np.where(u >= 0.0, d * small, 2.0 * d - d * small)
    x = np.where(u >= 0.0, hi - gap_hi, lo + d * small)
    w = d * 0.5 * math.pi * np.cosh(t) * 4.0 * e / (1.0 + e) ** 2
    return x, gap_hi, w


def integrate_singular(f, lo: float, hi: float, tol: float, *, with_gap: bool = False,
                       max_levels: int = _MAX_LEVELS) -> float:
    """Tanh-sinh quadrature of ``f`` over ``[lo, hi]``.

    Nodes cluster double-exponentially at both ends, so integrable algebraic
    singularities there are handled without tuning. The step is halved until
    two successive levels agree to ``tol``.

    With ``with_gap=True`` the integrand is called as ``f(x, hi - x)`` where
    the second argument is computed without cancellation; use it when the
    singular factor depends on the distance to ``hi``, since nodes can sit
    far closer to ``hi`` than one ulp.
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol!r}")
    if hi == lo:
        return 0.0

    def level_sum(t):
        x, gap, w = _de_nodes(t, lo, hi)
        keep = (w > 0.0) & (gap > 0.0)
        if not with_gap:
            # abscissae that round onto an endpoint cannot be evaluated
            keep &= (x > lo) & (x < hi)
        if not np.any(keep):
            return 0.0
        x, gap, w = x[keep], gap[keep], w[keep]
        vals = f(x, gap) if with_gap else f(x)
        return float(np.dot(w, np.broadcast_to(vals, w.shape)))

    step = 1.0
    jmax = int(_T_MAX / step)
    total = step * level_sum(step * np.arange(-jmax, jmax + 1))
    prev = total
    for _ in range(1, max_levels):
        step *= 0.5
        jmax = int(_T_MAX / step)
        odd = np.arange(-jmax + (1 - jmax % 2), jmax + 1, 2)
        total = 0.5 * prev + step * level_sum(step * odd)
        if abs(total - prev) < tol:
            return total
        prev, last = total, prev
    raise QuadratureError(
        f"double-exponential rule did not reach tol={tol!r} in {max_levels} levels "
        f"(last two levels {last!r}, {total!r})",
        last_values=(last, total),
    )
