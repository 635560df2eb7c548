"""Exponent-dependent constants, the power map psi_p and the grid data model."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ShapeError

DEFAULT_NODES = 101


@dataclass(frozen=True)
class PContext:
    """A validated exponent ``p > 1`` together with its derived constants.

    Attributes
    ----------
    p : float
        The exponent.
    p_conj : float
        Conjugate exponent ``p / (p - 1)``.
    pi_p : float
        Period constant; ``sin_p`` vanishes at 0 and ``pi_p``.
    m_p : float
        Maximum of ``sin_p``, ``(p - 1) ** (1 / p)``.
    """

    p: float
    p_conj: float
    pi_p: float
    m_p: float

    @property
    def half_period(self) -> float:
        return 0.5 * self.pi_p


def make_context(p: float) -> PContext:
    p = float(p)
    if not math.isfinite(p) or p <= 1.0:
        raise DomainError(f"exponent must satisfy p > 1 (finite), got p={p!r}")
    m_p = (p - 1.0) ** (1.0 / p)
    pi_p = 2.0 * m_p * (math.pi / p) / math.sin(math.pi / p)
    return PContext(p=p, p_conj=p / (p - 1.0), pi_p=pi_p, m_p=m_p)


def psi(p: float, t):
    """Odd power map ``t |t|^(p-2)``; works on scalars and arrays."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    nz = t != 0.0
    # t = 0 is returned directly: |t|**(p-2) blows up there when p < 2
    out[nz] = np.sign(t[nz]) * np.abs(t[nz]) ** (p - 1.0)
    return out[()] if out.ndim == 0 else out


def psi_inv(p: float, t):
    """Inverse of :func:`psi`, which is the power map of the conjugate exponent."""
    return psi(p / (p - 1.0), t)


def pi_p_quadrature(ctx: PContext, tol: float = 1e-10) -> float:
    """``pi_p`` from its defining integral, as a check on the closed form.

    The integrand ``(1 - s^p)^(-1/p)`` is singular at ``s = 1``; it is
    evaluated through the distance ``g = 1 - s`` so no accuracy is lost next
    to the singularity.
    """
    from .quadrature import integrate_singular

    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol!r}")
    p = ctx.p

    def integrand(s, gap):
        # 1 - (1 - g)^p without cancellation; g = 1 at s = 0 gives log1p(-1)
        with np.errstate(divide="ignore"):
            rad = -np.expm1(p * np.log1p(-gap))
        return rad ** (-1.0 / p)

    # the integral is multiplied by 2 m_p afterwards, so tighten accordingly
    inner = integrate_singular(integrand, 0.0, 1.0, tol / (2.0 * ctx.m_p), with_gap=True)
    return 2.0 * ctx.m_p * inner


def lambda_1(ctx: PContext, a: float, b: float) -> float:
    """First Dirichlet eigenvalue of the 1-D p-Laplacian on ``(a, b)``."""
    if not b > a:
        raise DomainError(f"interval must satisfy b > a, got a={a!r}, b={b!r}")
    return (ctx.pi_p / (b - a)) ** ctx.p


def phi_1_closed_form(ctx: PContext, x):
    """First inverse-power iterate started from the constant 1,
    ``((L)^q - (L - x)^q) / q`` with ``L = pi_p/2`` and ``q`` the conjugate
    exponent."""
    x = np.asarray(x, dtype=float)
    half = ctx.half_period
    # one ulp of slack so grid nodes computed as h*i are accepted at the end
    if np.any(x < 0.0) or np.any(x > half * (1.0 + 4 * np.finfo(float).eps)):
        raise DomainError(f"x must lie in [0, pi_p/2] = [0, {half!r}]")
    r = np.clip(half - x, 0.0, None)
    q = ctx.p_conj
    out = (half**q - r**q) / q
    return out[()] if out.ndim == 0 else out


@dataclass(frozen=True)
class GridFunction:
    """Node values of a function on a uniform grid with an even interval count.

    Usually the grid spans ``[0, pi_p/2]`` for the context ``ctx``; the
    quadrature routines also accept grids on other intervals, in which case
    ``ctx`` is ``None``.

    ``slope0`` optionally carries the exact derivative at the left end. The
    inverse power step knows it for free and the next step needs it when the
    function vanishes there.
    """

    nodes: np.ndarray
    values: np.ndarray
    ctx: PContext | None = None
    slope0: float | None = field(default=None, compare=False)

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        values = np.asarray(self.values, dtype=float)
        n = nodes.size
        if nodes.ndim != 1 or values.shape != nodes.shape:
            raise ShapeError("nodes and values must be 1-D arrays of equal length")
        if n < 3 or n % 2 == 0:
            raise ShapeError(f"grid needs an odd node count >= 3, got {n}")
        if not np.all(np.isfinite(values)):
            raise ShapeError("grid values must be finite")
        h = (nodes[-1] - nodes[0]) / (n - 1)
        if not h > 0 or np.max(np.abs(np.diff(nodes) - h)) > 1e-12 * max(1.0, abs(nodes[-1])):
            raise ShapeError("grid nodes must be uniformly spaced and increasing")
        if self.ctx is not None:
            if nodes[0] != 0.0 or abs(nodes[-1] - self.ctx.half_period) > 1e-14 * self.ctx.pi_p:
                raise ShapeError("grid for a PContext must span [0, pi_p/2]")
        nodes.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "values", values)

    @property
    def h(self) -> float:
        return (self.nodes[-1] - self.nodes[0]) / (self.nodes.size - 1)

    @property
    def n(self) -> int:
        return self.nodes.size

    def with_values(self, values, slope0: float | None = None) -> GridFunction:
        return GridFunction(self.nodes, values, self.ctx, slope0)

    @classmethod
    def sample(cls, f, lo: float, hi: float, n: int) -> GridFunction:
        x = grid_nodes(lo, hi, n)
        return cls(x, f(x))


def grid_nodes(lo: float, hi: float, n: int) -> np.ndarray:
    if n < 3 or n % 2 == 0:
        raise ShapeError(f"grid needs an odd node count >= 3, got {n}")
    x = lo + (hi - lo) * np.arange(n) / (n - 1)
    x[-1] = hi
    return x


def make_grid(ctx: PContext, n_nodes: int = DEFAULT_NODES, values=None) -> GridFunction:
    """Grid on ``[0, pi_p/2]``; values default to zero."""
    x = grid_nodes(0.0, ctx.half_period, n_nodes)
    if values is None:
        values = np.zeros_like(x)
    elif np.isscalar(values):
        values = np.full_like(x, float(values))
    return GridFunction(x, values, ctx)
