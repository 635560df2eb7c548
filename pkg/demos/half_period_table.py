"""
Half-period tables of sin_p
===========================

Builds sin_p on [0, pi_p/2] by inverse power iteration for a handful of
exponents and compares the value at the end of the half period with
m_p = (p - 1)^(1/p).
"""

import numpy as np

from sinp import make_context, run_inverse_power

# the first eigenfunction of the one-dimensional p-Laplacian is found by
# iterating phi -> int_0^x psi_q(int_theta^L psi_p(phi)) from phi = 1
for p in [1.1, 1.5, 2.0, 2.5, 3.0, 3.5]:
    ctx = make_context(p)
    table = run_inverse_power(ctx, n_nodes=101, tol=1e-8)
    gamma = table.trace[-1].gamma
    print(f"p={p:<4} pi_p={ctx.pi_p:.8f}  sin_p(pi_p/2)={table.values[-1]:.8f}  "
          f"m_p={ctx.m_p:.8f}  iterations={table.iterations_or_steps}  |gamma-1|={abs(gamma - 1):.1e}")

# at p = 2 the table is the ordinary sine
table = run_inverse_power(make_context(2.0))
print("p=2 max |table - sin|:", np.max(np.abs(table.values - np.sin(table.nodes))))
