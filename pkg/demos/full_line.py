"""
sin_p and cos_p on the real line
================================

Extends a half-period table to an odd, 2 pi_p periodic function and checks
the identity |cos_p|^p + |sin_p|^p / (p - 1) = 1 at random arguments. The
last block prints a coarse sampling that can be fed to any plotting tool.
"""

import numpy as np

from sinp import PTrig, cos_p, make_context, run_inverse_power, sin_p

p = 3.0
ctx = make_context(p)
trig = PTrig(run_inverse_power(ctx))

x = np.random.default_rng(0).uniform(-3 * ctx.pi_p, 3 * ctx.pi_p, 1000)
s, c = sin_p(trig, x), cos_p(trig, x)
print("max identity residual:", np.max(np.abs(np.abs(c) ** p + np.abs(s) ** p / (p - 1) - 1)))
print("max oddness defect:   ", np.max(np.abs(sin_p(trig, -x) + s)))
print("max period defect:    ", np.max(np.abs(sin_p(trig, x + 2 * ctx.pi_p) - s)))

print("\n       x      sin_p      cos_p")
for xi in np.linspace(0, 2 * ctx.pi_p, 17):
    print(f"{xi:8.4f} {sin_p(trig, xi):10.6f} {cos_p(trig, xi):10.6f}")
