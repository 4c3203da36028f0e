"""Admissible regions for both parameter families, plus the 3 x 3 panel grid.

Run with ``python3 demos/02_regions.py [out.svg]``.
"""

import sys

from pseudopass import classify_admittance, classify_scattering, contains
from pseudopass.svg import panel_grid_svg

for cd in [(-1, -1), (0, -1), (0, 0), (-2, 1 / 8), (0, 1), (1 / 2, 1 / 2), (1, 1)]:
    r = classify_admittance(*cd)
    print(f"admittance {cd}: {r.describe()}")

for fg in [(-3, 1), (-2, 2), (-1, 0), (-1, 2), (0, 0), (1, 0), (2, 1)]:
    r = classify_scattering(*fg)
    print(f"scattering {fg}: {r.describe()}")

# membership: s = 1 is in the disk for (F, G) = (0, 0), s = 2 is not
disk = classify_scattering(0, 0)
print("1 in unit disk:", contains(disk, 1.0), " 2 in unit disk:", contains(disk, 2.0))

out = sys.argv[1] if len(sys.argv) > 1 else "regions.svg"
with open(out, "w", encoding="utf-8") as fh:
    fh.write(panel_grid_svg())
print("wrote", out)
