"""Three ways to tabulate sin_p on the half period ``[0, pi_p/2]``.

* ``inverse-power``: the nonlinear inverse power iteration. Each step
  solves the mixed Dirichlet/Neumann p-Laplacian problem with the previous
  iterate as source, written as two nested integrals, and normalises.
* ``ode``: classical RK4 on the first-order equation
  ``u' = (1 - |u|^p/(p-1))^(1/p)``.
* ``zeta-inverse``: inverts the integral ``zeta(z)`` (the function
  ``arcsin_p``) node by node with a safeguarded Newton iteration.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .core import DEFAULT_NODES, GridFunction, PContext, make_grid
from .errors import DomainError, NonConvergenceError, QuadratureError, RootError, ShapeError
from .quadrature import integrate_singular, product_cumulative, product_tail, tail

METHODS = ("inverse-power", "ode", "zeta-inverse")
DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 50


@dataclass(frozen=True)
class IterationTrace:
    """One step of the inverse power iteration.

    ``sup_norm_phi`` is the sup norm of the unnormalised iterate produced at
    this step, ``gamma`` the ratio of the previous iterate's sup norm to it,
    and ``sup_diff`` the largest nodewise change of the normalised iterate.
    """

    step: int
    sup_norm_phi: float
    gamma: float
    sup_diff: float


@dataclass(frozen=True)
class SinPTable:
    """Half-period table of sin_p with node derivatives."""

    ctx: PContext
    grid: GridFunction
    derivs: np.ndarray
    method: str
    iterations_or_steps: int
    trace: tuple[IterationTrace, ...] | None = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        derivs = np.asarray(self.derivs, dtype=float)
        if derivs.shape != self.grid.values.shape:
            raise ShapeError("derivs must match the grid")
        derivs.setflags(write=False)
        object.__setattr__(self, "derivs", derivs)

    @property
    def nodes(self) -> np.ndarray:
        return self.grid.nodes

    @property
    def values(self) -> np.ndarray:
        return self.grid.values

    @property
    def endpoint_error(self) -> float:
        return abs(float(self.values[-1]) - self.ctx.m_p)

    def pythagorean_residual(self) -> np.ndarray:
        """``|sin_p'|^p + |sin_p|^p/(p-1) - 1`` at every node."""
        p = self.ctx.p
        return np.abs(self.derivs) ** p + np.abs(self.values) ** p / (p - 1.0) - 1.0


def _cos_from_sin(ctx: PContext, s):
    """Non-negative derivative on the half period from the Pythagorean identity."""
    # (s/m_p)^p rather than s^p/(p-1): it is exactly 1 at s = m_p
    rad = 1.0 - (np.abs(s) / ctx.m_p) ** ctx.p
    return np.maximum(rad, 0.0) ** (1.0 / ctx.p)


def _check_nodes(n_nodes):
    if n_nodes < 3 or n_nodes % 2 == 0:
        raise ShapeError(f"n_nodes must be odd and >= 3, got {n_nodes}")


# --------------------------------------------------------------------------
# inverse power iteration
# --------------------------------------------------------------------------

def _maps(ctx: PContext):
    """Interpolation variables for the two halves of the grid.

    Near 0 the iterates behave like ``x S(x^p)`` and near ``L = pi_p/2``
    like ``m - (L - x)^q R((L - x)^q)`` with ``q`` the conjugate exponent,
    ``S`` and ``R`` smooth. Interpolating in ``x^p`` (left) or ``(L - x)^q``
    (right) absorbs those non-integer powers whenever they are below 2.
    """
    left = ctx.p if ctx.p < 2.0 else 1.0
    right = ctx.p_conj if ctx.p > 2.0 else 1.0
    return left, right


def _slope_at_zero(phi: GridFunction, power: float):
    """Extrapolate ``phi(x)/x`` to 0 from the first three interior nodes,
    quadratically in ``x^power``."""
    x = phi.nodes[1:4]
    q = phi.values[1:4] / x
    e = np.array([0.0, power, 2.0 * power])
    coef = np.linalg.solve((x[:, None] / x[0]) ** e[None, :], q)
    return float(coef[0])


def inverse_power_step(ctx: PContext, phi: GridFunction) -> GridFunction:
    """One inverse power step: ``x -> int_0^x psi_p'( int_t^{L} psi_p(phi) ) dt``.

    Both nested integrals use the split product rule of
    :func:`~sinp.quadrature.product_cumulative`. On the left half the inner
    integrand is written ``x^(p-1) (phi/x)^(p-1)`` when ``phi(0) = 0``; on
    the right half the outer integrand is ``(L - x)^(q-1) F^(q-1)`` with
    ``T = (L - x) F`` the inner integral and ``q`` the conjugate exponent.
    The power factors go into the quadrature weight and only smooth factors
    are interpolated.

    The returned grid function has ``slope0`` set to its exact derivative
    at 0, which the next step uses.
    """
    f = phi.values
    if np.any(f < 0.0):
        raise DomainError("inverse power step needs a non-negative iterate")
    if not np.max(f) > 0.0:
        raise DomainError("inverse power step got an identically zero iterate (sup norm 0)")
    p = ctx.p
    a = p - 1.0
    b = ctx.p_conj - 1.0
    x = phi.nodes
    L = x[-1]
    left_map, right_map = _maps(ctx)
    src = f**a

    if f[0] > 0.0:
        # smooth start (the constant initial guess): T is smooth, and the
        # outer integrand is (L - x)^b F^b on the whole range
        t = tail(phi.with_values(src)).partials
        split = 0
    else:
        slope = phi.slope0 if phi.slope0 is not None else _slope_at_zero(phi, left_map)
        ratio = np.empty_like(f)
        ratio[0] = slope
        ratio[1:] = f[1:] / x[1:]
        t = product_tail(phi.with_values(ratio**a), src, left=a,
                         left_map=left_map, right_map=right_map).partials
        split = None
    t = np.maximum(t, 0.0)

    # T(x) = (L - x) F(x) with F smooth and F(L) = source value at L
    F = np.empty_like(t)
    F[:-1] = t[:-1] / (L - x[:-1])
    F[-1] = src[-1]
    out = product_cumulative(phi.with_values(t**b), F**b, split=split, right=b,
                             left_map=left_map, right_map=right_map).partials
    return phi.with_values(out, slope0=float(t[0] ** b))


def inverse_power_iterates(ctx: PContext, n_nodes: int = DEFAULT_NODES, count: int = 10):
    """Unnormalised iterates ``phi_0 = 1, phi_1, ..., phi_count``."""
    _check_nodes(n_nodes)
    phi = make_grid(ctx, n_nodes, 1.0)
    out = [phi]
    for _ in range(count):
        phi = inverse_power_step(ctx, phi)
        out.append(phi)
    return out


def run_inverse_power(ctx: PContext, n_nodes: int = DEFAULT_NODES, tol: float = DEFAULT_TOL,
                      max_iter: int = DEFAULT_MAX_ITER) -> SinPTable:
    """Iterate from ``phi_0 = 1`` until successive normalised iterates agree
    to ``tol`` in the sup norm, then scale by ``m_p``.

    Every iterate is renormalised to sup norm 1 before the next step; the
    step is positively homogeneous so this only removes the drift of the
    magnitudes. The true sup norms are still reported in the trace.
    """
    _check_nodes(n_nodes)
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol!r}")
    if max_iter < 1:
        raise DomainError(f"max_iter must be >= 1, got {max_iter!r}")
    u = make_grid(ctx, n_nodes, 1.0)
    norm = 1.0
    trace = []
    for step in range(1, max_iter + 1):
        phi = inverse_power_step(ctx, u)
        scale = float(np.max(phi.values))
        new = phi.with_values(phi.values / scale, slope0=phi.slope0 / scale)
        diff = float(np.max(np.abs(new.values - u.values)))
        norm *= scale
        trace.append(IterationTrace(step, norm, 1.0 / scale, diff))
        u = new
        if diff < tol:
            values = ctx.m_p * u.values
            return SinPTable(ctx, u.with_values(values), _cos_from_sin(ctx, values),
                             "inverse-power", step, tuple(trace))
    raise NonConvergenceError(
        f"inverse power iteration did not reach tol={tol!r} in {max_iter} steps "
        f"(last change {trace[-1].sup_diff:.3e})",
        trace,
    )


# --------------------------------------------------------------------------
# RK4 on the first-order equation
# --------------------------------------------------------------------------

def run_ode(ctx: PContext, n_nodes: int = DEFAULT_NODES) -> SinPTable:
    """Classical fourth-order Runge-Kutta, one step per grid interval.

    The radicand is clamped at 0 because rounding can carry ``u`` slightly
    past ``m_p`` where the exact slope vanishes. Node values are stored as
    computed, so overshoot at the top stays visible in the table.
    """
    _check_nodes(n_nodes)
    p = ctx.p
    inv_p = 1.0 / p
    c = 1.0 / (p - 1.0)

    def rhs(u):
        r = 1.0 - c * abs(u) ** p
        return r**inv_p if r > 0.0 else 0.0

    grid = make_grid(ctx, n_nodes)
    h = grid.h
    u = 0.0
    vals = [u]
    for _ in range(n_nodes - 1):
        k1 = rhs(u)
        k2 = rhs(u + 0.5 * h * k1)
        k3 = rhs(u + 0.5 * h * k2)
        k4 = rhs(u + h * k3)
        u += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        vals.append(u)
    values = np.array(vals)
    derivs = np.array([rhs(v) for v in vals])
    return SinPTable(ctx, grid.with_values(values), derivs, "ode", n_nodes - 1)


# --------------------------------------------------------------------------
# inverse of the zeta integral
# --------------------------------------------------------------------------

def _zeta_integrand(ctx: PContext, z: float):
    p, m = ctx.p, ctx.m_p
    head = m - z

    def f(s, gap):
        # 1 - (s/m)^p with s = z - gap, written through the distance to m
        d = np.minimum(head + gap, m)
        with np.errstate(divide="ignore"):
            rad = -np.expm1(p * np.log1p(-d / m))
        return rad ** (-1.0 / p)

    return f


def arcsin_p(ctx: PContext, z: float, tol: float = 1e-10) -> float:
    """``zeta(z) = int_0^z (1 - s^p/(p-1))^(-1/p) ds``, the inverse of sin_p
    on the half period."""
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol!r}")
    if not 0.0 <= z <= ctx.m_p:
        raise DomainError(f"arcsin_p needs 0 <= z <= m_p = {ctx.m_p!r}, got {z!r}")
    if z == 0.0:
        return 0.0
    return integrate_singular(_zeta_integrand(ctx, z), 0.0, z, tol, with_gap=True)


def _invert_zeta(ctx, x, lo, guess, tol, qtol, max_iter, node):
    """Safeguarded Newton for ``zeta(v) = x`` on ``[lo, m_p]``."""
    p, m = ctx.p, ctx.m_p
    hi = m
    v = min(max(guess, lo), hi)
    for _ in range(max_iter):
        r = arcsin_p(ctx, v, qtol) - x
        if abs(r) <= tol:
            return v
        if r < 0.0:
            lo = v
        else:
            hi = v
        # zeta'(v) = (1 - (v/m)^p)^(-1/p); its reciprocal vanishes at v = m
        dinv = max(1.0 - (v / m) ** p, 0.0) ** (1.0 / p)
        cand = v - r * dinv
        if dinv > 0.0 and lo < cand < hi:
            v = cand
        else:
            v = 0.5 * (lo + hi)
        if hi - lo <= 4.0 * np.finfo(float).eps * m:
            return v
    raise RootError(f"zeta inversion did not converge at node {node} (x={x!r})", node=node)


def run_zeta_inverse(ctx: PContext, n_nodes: int = DEFAULT_NODES, tol: float = 1e-10,
                     max_iter: int = 100) -> SinPTable:
    """Solve ``zeta(v) = x_i`` at every node to residual ``tol``."""
    _check_nodes(n_nodes)
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol!r}")
    grid = make_grid(ctx, n_nodes)
    qtol = 0.1 * tol
    top = arcsin_p(ctx, ctx.m_p, qtol)
    values = np.zeros(n_nodes)
    prev = 0.0
    for i in range(1, n_nodes):
        x = grid.nodes[i]
        if x >= top - tol:
            values[i] = ctx.m_p
            prev = ctx.m_p
            continue
        # Euler predictor from the previous node
        guess = prev + grid.h * float(_cos_from_sin(ctx, prev))
        prev = _invert_zeta(ctx, x, prev, guess, tol, qtol, max_iter, i)
        values[i] = prev
    return SinPTable(ctx, grid.with_values(values), _cos_from_sin(ctx, values),
                     "zeta-inverse", n_nodes - 1)


# --------------------------------------------------------------------------
# comparison
# --------------------------------------------------------------------------

@dataclass
class MethodReport:
    """Side-by-side outcome of the three methods on one grid."""

    ctx: PContext
    n_nodes: int
    tol: float
    tables: dict = field(default_factory=dict)
    failures: dict = field(default_factory=dict)
    seconds: dict = field(default_factory=dict)

    @property
    def discrepancies(self) -> dict:
        """Max nodewise difference for every pair of successful methods."""
        out = {}
        for a, b in combinations([m for m in METHODS if m in self.tables], 2):
            out[(a, b)] = float(np.max(np.abs(self.tables[a].values - self.tables[b].values)))
        return out

    @property
    def residuals(self) -> dict:
        return {m: float(np.max(np.abs(t.pythagorean_residual()))) for m, t in self.tables.items()}

    @property
    def endpoint_errors(self) -> dict:
        return {m: t.endpoint_error for m, t in self.tables.items()}

    @property
    def counts(self) -> dict:
        return {m: t.iterations_or_steps for m, t in self.tables.items()}

    @property
    def relative_times(self) -> dict:
        if not self.seconds:
            return {}
        fastest = min(self.seconds.values())
        return {m: s / fastest for m, s in self.seconds.items()}

    def to_dict(self) -> dict:
        return {
            "p": self.ctx.p,
            "n_nodes": self.n_nodes,
            "tol": self.tol,
            "endpoint": {m: float(t.values[-1]) for m, t in self.tables.items()},
            "endpoint_error": self.endpoint_errors,
            "count": self.counts,
            "max_pythagorean_residual": self.residuals,
            "discrepancy": {f"{a}|{b}": v for (a, b), v in self.discrepancies.items()},
            "relative_time": self.relative_times,
            "failures": dict(self.failures),
        }


def run_method(ctx: PContext, method: str, n_nodes: int = DEFAULT_NODES, tol: float = DEFAULT_TOL,
               max_iter: int = DEFAULT_MAX_ITER) -> SinPTable:
    if method == "inverse-power":
        return run_inverse_power(ctx, n_nodes, tol, max_iter)
    if method == "ode":
        return run_ode(ctx, n_nodes)
    if method == "zeta-inverse":
        return run_zeta_inverse(ctx, n_nodes, tol)
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")


def compare_methods(ctx: PContext, n_nodes: int = DEFAULT_NODES, tol: float = DEFAULT_TOL,
                    max_iter: int = DEFAULT_MAX_ITER) -> MethodReport:
    """Run all three methods on the same grid. A failing method is recorded
    in ``failures`` and does not stop the others."""
    _check_nodes(n_nodes)
    report = MethodReport(ctx, n_nodes, tol)
    for method in METHODS:
        start = time.perf_counter()
        try:
            table = run_method(ctx, method, n_nodes, tol, max_iter)
        except (NonConvergenceError, QuadratureError, RootError) as exc:
            report.failures[method] = f"{type(exc).__name__}: {exc}"
            continue
        report.seconds[method] = time.perf_counter() - start
        report.tables[method] = table
    return report
