"""Falsifying energy inequalities for a few kernels.

Run with ``python3 demos/01_time_domain.py``.
"""

import numpy as np

from pseudopass import AdmittanceParams, default_corpus, dirac, exp_poly, falsify
from pseudopass.testfn import bump_corpus, evaluate
from pseudopass.timedomain import admittance_profile, horizon_grid

# the derivative of delta: the energy up to t is exactly |phi(t)|^2 / 2
dp = dirac(1, 0, 1)
phi = bump_corpus()[0]
hs = horizon_grid(phi)
res = admittance_profile(dp, phi, hs, AdmittanceParams.zero())
exact = np.array([0.5 * abs(evaluate(phi, t)) ** 2 for t in hs])
print("delta' residual vs |phi|^2/2, max gap:", np.abs(res - exact).max())

# -delta fails plain passivity but sits exactly on the boundary for (c, d) = (-1, 0)
corpus = default_corpus()
md = dirac(-1.0)
for p in (AdmittanceParams.zero(), AdmittanceParams((-1.0,), (0.0,))):
    v = falsify(md, p, corpus)
    print(f"-delta with c={p.c}, d={p.d}: {v.status}, min residual {v.min_residual:.3g}")
    if v.witness:
        print("   witness:", v.witness.function, "at t =", v.witness.horizon)

# a causal exponential tail is passive
v = falsify(exp_poly([1.0], -1.0), AdmittanceParams.zero(), corpus)
print("e^-t H(t):", v.status, f"({v.evaluated} evaluations)")
