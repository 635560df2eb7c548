"""
Three ways to compute sin_p
===========================

Inverse power iteration, a fourth-order Runge-Kutta integration of the
first-order ODE, and direct inversion of the arcsin_p integral. The ODE has
a square-root type singularity at the top of the half period, so its
endpoint error is much larger than the other two.
"""

from sinp import compare_methods, make_context

for p in [1.5, 2.0, 3.0]:
    report = compare_methods(make_context(p), n_nodes=101, tol=1e-8)
    print(f"p = {p}")
    for method, table in report.tables.items():
        print(f"  {method:<14} end={table.values[-1]:.8f}  endpoint error={report.endpoint_errors[method]:.1e}"
              f"  residual={report.residuals[method]:.1e}  seconds={report.seconds[method]:.4f}")
    for pair, gap in report.discrepancies.items():
        print(f"  max |{pair[0]} - {pair[1]}| = {gap:.1e}")
