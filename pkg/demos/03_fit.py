"""Fitting parameters to transfer-function samples with the LP solver.

Run with ``python3 demos/03_fit.py``.
"""

import numpy as np

from pseudopass import brute_force_oracle, build_constraints, check_feasible, fit_max_margin
from pseudopass.laplace import HalfPlaneGrid, TransferSample

# samples on the unit circle: (F, G) = (0, 0) is feasible but with no slack
circle = [TransferSample(1 + 0.25 * k, np.exp(1j * k * np.pi / 4)) for k in range(8)]
cs = build_constraints(circle, 0, "scattering")
print("margin at (0, 0):", check_feasible(cs, [0.0, 0.0]))
fit = fit_max_margin(cs, box=([-2, -2], [2, 2]))
print("max-margin fit:", fit.x, "margin", fit.margin)

# cross-check on a coarse grid
orc = brute_force_oracle(circle, "scattering", (-2, 2, -2, 2, 0.05))
print("oracle best cell:", orc.best())

# W(s) = s is a passive admittance; pushing c as high as possible
grid = HalfPlaneGrid((0.1, 10.0), (-5.0, 5.0), 5, 5)
ident = [TransferSample(s, s) for s in grid.points()]
cs = build_constraints(ident, 0, "admittance")
fit = fit_max_margin(cs, objective="max-c0", box=([-1, -1], [1, 1]))
print("W(s) = s, max-c0:", fit.x)
