"""Moving between admittance and scattering descriptions.

Run with ``python3 demos/04_cayley.py``.
"""

import numpy as np

from pseudopass import (AdmittanceParams, cayley, classify_admittance, classify_scattering, contains,
                        convert_samples, params_adm_to_scat)
from pseudopass.laplace import TransferSample

p = AdmittanceParams((-0.5,), (0.25,))
q = params_adm_to_scat(p)
print("admittance", p.c, p.d, "-> scattering", q.F, q.G)

# membership is preserved by the map w -> (1 - w) / (1 + w)
rng = np.random.default_rng(0)
ra, rs = classify_admittance(-0.5, 0.25), classify_scattering(q.F[0], q.G[0])
w = rng.normal(size=5) + 1j * rng.normal(size=5)
for wi in w:
    print(f"w = {wi:.3f}: {contains(ra, wi)} / {contains(rs, cayley(wi))}")

print("involution error:", max(abs(cayley(cayley(wi)) - wi) for wi in w))

# the pole w = -1 is dropped and reported
samples = [TransferSample(1.0, -1.0), TransferSample(2.0, 0.5j)]
rep = convert_samples(samples)
print(rep.to_dict())
