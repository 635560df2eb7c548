"""Invariant suite for the inverse power iteration and the finished tables.

Each check returns a :class:`CheckResult` with the measured value and the
threshold it was held to, so a report can show how close a pass was.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DEFAULT_NODES, PContext, pi_p_quadrature
from .errors import QuadratureError
from .methods import (DEFAULT_MAX_ITER, DEFAULT_TOL, MethodReport, compare_methods,
                      inverse_power_iterates)

__all__ = ["CheckResult", "iterate_checks", "table_checks", "run_checks"]

ITERATE_COUNT = 10
ITERATION_BAND = (4, 15)
ENDPOINT_TOL = 5e-6
CROSS_METHOD_TOL = 1e-5
RESIDUAL_TOL = {"inverse-power": 1e-6, "zeta-inverse": 1e-6, "ode": 1e-3}
GAMMA_TOL = 1e-6
PI_P_TOL = 1e-8
CLASSICAL_TOL = 1e-5


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    value: float
    threshold: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status} {self.name}: {self.value:.3e} (limit {self.threshold:.1e})"
        return f"{text} {self.detail}" if self.detail else text


def _result(name, value, threshold, detail=""):
    value = float(value)
    return CheckResult(name, bool(value <= threshold), value, threshold, detail)


def _limit_basis(p):
    """Powers used to extrapolate the iterate quotient to ``x = 0``; the
    iterates mix integer powers with ``x^p`` there."""
    if abs(p - 2.0) < 0.05:
        return np.array([0.0, 1.0, 2.0, 3.0])
    return np.array([0.0, 1.0, p, 2.0])


def iterate_checks(ctx: PContext, n_nodes: int = DEFAULT_NODES,
                   count: int = ITERATE_COUNT) -> list[CheckResult]:
    """Properties of the unnormalised iterates ``phi_0 = 1, ..., phi_count``.

    * ``iterate_bound``: ``phi_{n+1} <= ||phi_1|| phi_n`` nodewise.
    * ``ratio_min_at_end``: ``phi_n / phi_{n+1}`` is smallest at ``pi_p/2``.
    * ``ratio_sup_nonincreasing``: the sup of that quotient does not grow.
    * ``ratio_sup_limit``: the quotient extrapolated to 0 equals
      ``psi_p'(int psi_p(phi_{n-1}) / int psi_p(phi_n))``.
    * ``normalized_decrease``: ``phi_n / ||phi_n||`` decreases in ``n`` at
      every node.

    Node 0 is excluded from the quotients, where they are 0/0.
    """
    it = inverse_power_iterates(ctx, n_nodes, count)
    vals = [g.values for g in it]
    out = []

    norm1 = float(np.max(vals[1]))
    excess = max(float(np.max(vals[k + 1] - norm1 * vals[k])) for k in range(count))
    out.append(_result("iterate_bound", excess, 1e-10, "max of phi_{n+1} - ||phi_1|| phi_n"))

    ratios = [vals[k][1:] / vals[k + 1][1:] for k in range(count)]
    gap = max(float((r[-1] - r.min()) / r[-1]) for r in ratios)
    out.append(_result("ratio_min_at_end", gap, 1e-12, "relative excess of the end value over the min"))

    sups = np.array([r.max() for r in ratios])
    growth = float(np.max(np.diff(sups))) if sups.size > 1 else 0.0
    out.append(_result("ratio_sup_nonincreasing", max(growth, 0.0), 1e-10, "largest step-to-step increase"))

    # phi_{n+1}'(0) = psi_p'(int psi_p(phi_n)) is carried exactly as slope0
    basis = _limit_basis(ctx.p)
    k0 = basis.size
    worst = 0.0
    for k in range(1, count):
        x = it[k].nodes[1:1 + k0]
        q = vals[k][1:1 + k0] / vals[k + 1][1:1 + k0]
        coef = np.linalg.solve((x[:, None] / x[0]) ** basis[None, :], q)
        formula = it[k].slope0 / it[k + 1].slope0
        worst = max(worst, abs(coef[0] - formula) / formula)
    out.append(_result("ratio_sup_limit", worst, 1e-3, "relative gap, extrapolated quotient vs integral formula"))

    normed = [v / np.max(v) for v in vals]
    rise = max(float(np.max(normed[k + 1] - normed[k])) for k in range(count))
    out.append(_result("normalized_decrease", max(rise, 0.0), 1e-12, "largest nodewise increase of u_n"))
    return out


def table_checks(report: MethodReport) -> list[CheckResult]:
    """Checks on the finished tables of a :class:`MethodReport`."""
    ctx = report.ctx
    out = []
    for method, why in report.failures.items():
        out.append(CheckResult(f"{method}_ran", False, float("nan"), 0.0, why))

    for method, table in report.tables.items():
        limit = RESIDUAL_TOL[method]
        res = float(np.max(np.abs(table.pythagorean_residual())))
        out.append(_result(f"pythagorean_{method}", res, limit))
        drop = float(np.max(-np.diff(table.values), initial=0.0))
        ends = max(abs(table.values[0]), abs(table.derivs[0] - 1.0))
        out.append(_result(f"monotone_{method}", max(drop, 0.0), 0.0, "largest decrease between nodes"))
        out.append(_result(f"start_{method}", ends, 1e-12, "sin_p(0) = 0 and sin_p'(0) = 1"))

    ip = report.tables.get("inverse-power")
    if ip is not None:
        out.append(_result("endpoint_inverse-power", ip.endpoint_error, ENDPOINT_TOL,
                           f"sin_p(pi_p/2) = {ip.values[-1]:.6f}, m_p = {ctx.m_p:.6f}"))
        n_it = ip.iterations_or_steps
        lo, hi = ITERATION_BAND
        out.append(CheckResult("iterations_inverse-power", lo <= n_it <= hi, float(n_it), float(hi),
                               f"band [{lo}, {hi}]"))
        gammas = [t.gamma for t in ip.trace]
        last = abs(gammas[-1] - 1.0)
        out.append(CheckResult("gamma_limit", last < GAMMA_TOL, last, GAMMA_TOL, "final |gamma - 1|"))
        if len(gammas) >= 3:
            first = abs(gammas[0] - 1.0)
            out.append(CheckResult("gamma_approach", last < first, last, first,
                                   "final |gamma - 1| below the first step's"))
        zi = report.tables.get("zeta-inverse")
        if zi is not None:
            diff = float(np.max(np.abs(ip.values - zi.values)))
            out.append(_result("cross_method", diff, CROSS_METHOD_TOL, "max |inverse-power - zeta-inverse|"))
        if ctx.p == 2.0:
            diff = float(np.max(np.abs(ip.values - np.sin(ip.nodes))))
            out.append(_result("classical_sine", diff, CLASSICAL_TOL, "max |table - sin|"))
    return out


def run_checks(ctx: PContext, n_nodes: int = DEFAULT_NODES, tol: float = DEFAULT_TOL,
               max_iter: int = DEFAULT_MAX_ITER, report: MethodReport | None = None):
    """Full suite for one exponent. Returns ``(report, results)``."""
    if report is None:
        report = compare_methods(ctx, n_nodes, tol, max_iter)
    results = iterate_checks(ctx, n_nodes)
    results += table_checks(report)
    try:
        gap = abs(pi_p_quadrature(ctx, 1e-10) - ctx.pi_p)
        results.append(_result("pi_p_quadrature", gap, PI_P_TOL, "vs closed form"))
    except QuadratureError as exc:
        results.append(CheckResult("pi_p_quadrature", False, float("nan"), PI_P_TOL, str(exc)))
    return report, results
