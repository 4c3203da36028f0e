"""Admissible transfer-value regions for the N = 0 inequalities.

Admittance: ``A(c, d) = {sigma : Re sigma >= c + d |sigma|^2}``.
Scattering: ``B(F, G) = {sigma : (1 - F) - (1 + F)|sigma|^2 >= 2 G Re sigma}``.

Every boundary is included; the inequalities are non-strict throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .params import AdmittanceParams, ScatteringParams

ZERO_TOL = 1e-12

FULL = "full-plane"
HALF = "half-plane"
DISK = "disk"
COMPLEMENT = "disk-complement"
POINT = "point"
EMPTY = "empty"


@dataclass(frozen=True)
class RegionClass:
    """Shape of an admissible region with its boundary parameters.

    A half-plane is ``{x >= bound}`` when ``orientation`` is ``+1`` and
    ``{x <= bound}`` when it is ``-1``.
    """

    shape: str
    center: complex | None = None
    radius: float | None = None
    bound: float | None = None
    orientation: int = 0
    case: str = ""
    family: str = ""

    def describe(self):
        if self.shape in (DISK, COMPLEMENT):
            text = f"{self.shape} center {_num(self.center.real)} radius {_num(self.radius)}"
        elif self.shape == POINT:
            text = f"point {_num(self.center.real)}"
        elif self.shape == HALF:
            text = f"half-plane Re {'≥' if self.orientation > 0 else '≤'} {_num(self.bound)}"
        else:
            text = self.shape
        return f"{text} (case {self.case})" if self.case else text


def _num(x):
    return format(float(x), ".17g")


def _is_zero(x, exact):
    return x == 0 if exact else abs(x) <= ZERO_TOL


def classify_admittance(c, d, exact=False):
    """Shape of ``A(c, d)``; ``exact=True`` disables the discriminant tolerance."""
    c, d = float(c), float(d)
    disc = 1.0 - 4.0 * c * d
    if d == 0:
        return RegionClass(HALF, bound=c, orientation=1, case="iii", family="admittance")
    center = complex(1.0 / (2.0 * d), 0.0)
    if d < 0:
        if disc <= 0 or _is_zero(disc, exact):
            return RegionClass(FULL, case="i", family="admittance")
        return RegionClass(COMPLEMENT, center, math.sqrt(disc) / (2.0 * abs(d)), case="ii",
                           family="admittance")
    if _is_zero(disc, exact):
        return RegionClass(POINT, center, 0.0, case="v", family="admittance")
    if disc > 0:
        return RegionClass(DISK, center, math.sqrt(disc) / (2.0 * d), case="iv", family="admittance")
    return RegionClass(EMPTY, case="vi", family="admittance")


def classify_scattering(F, G, exact=False):
    """Shape of ``B(F, G)``.

    Completing the square gives circles centred at ``-G/(1+F)``. For ``F = -1`` and ``G != 0`` the half-plane is recorded as
    ``{G x <= 2}``, i.e. ``x <= 2/G`` for ``G > 0`` and ``x >= 2/G`` for ``G < 0``.
    """
    F, G = float(F), float(G)
    disc = 1.0 - F * F + G * G
    if F == -1.0:
        if G == 0:
            return RegionClass(FULL, case="iii", family="scattering")
        return RegionClass(HALF, bound=2.0 / G, orientation=-1 if G > 0 else 1, case="iv",
                           family="scattering")
    center = complex(-G / (1.0 + F) + 0.0, 0.0)
    if F < -1.0:
        if disc <= 0 or _is_zero(disc, exact):
            return RegionClass(FULL, case="i", family="scattering")
        return RegionClass(COMPLEMENT, center, math.sqrt(disc) / abs(1.0 + F), case="ii",
                           family="scattering")
    if _is_zero(disc, exact):
        return RegionClass(POINT, center, 0.0, case="vi", family="scattering")
    if disc > 0:
        return RegionClass(DISK, center, math.sqrt(disc) / (1.0 + F), case="v", family="scattering")
    return RegionClass(EMPTY, case="vii", family="scattering")


def contains(r, sigma, tol=ZERO_TOL):
    """Membership with the boundary included; ``tol`` relaxes the defining inequality."""
    sigma = complex(sigma)
    if r.shape == FULL:
        return True
    if r.shape == EMPTY:
        return False
    if r.shape == HALF:
        return r.orientation * (sigma.real - r.bound) >= -tol
    dist2 = abs(sigma - r.center) ** 2
    rad2 = r.radius ** 2
    if r.shape in (DISK, POINT):
        return rad2 - dist2 >= -tol
    return dist2 - rad2 >= -tol


def effective_params(p, s):
    """Collapse ``sum_j |s|^{2j} x_j`` for each parameter vector into scalars."""
    weights = np.abs(complex(s)) ** (2 * np.arange(p.N + 1))
    if isinstance(p, AdmittanceParams):
        return float(weights @ np.array(p.c)), float(weights @ np.array(p.d))
    return float(weights @ np.array(p.F)), float(weights @ np.array(p.G))


def region_of_params(p, s):
    """Region that ``W(s)`` must lie in at the fixed point ``s``.

    At fixed ``s`` both inequalities reduce to their N = 0 form with the
    weighted sums as effective scalars (the Kronecker term only enters at
    ``j = 0``, where its weight is 1).
    """
    if not isinstance(p, (AdmittanceParams, ScatteringParams)):
        raise TypeError("p must be AdmittanceParams or ScatteringParams")
    a, b = effective_params(p, s)
    if isinstance(p, AdmittanceParams):
        return classify_admittance(a, b)
    return classify_scattering(a, b)


def boundary_points(r, viewport=(-3.0, 3.0, -3.0, 3.0), n=256):
    """Sample the boundary of ``r`` inside ``viewport = (xmin, xmax, ymin, ymax)``.

    Circles give ``n`` points around the full circle (closed: last equals
    first); half-planes give the two end points of the boundary line clipped
    to the viewport; a point region gives its single point; full and empty
    regions have no boundary.
    """
    if r.shape in (DISK, COMPLEMENT):
        theta = np.linspace(0.0, 2.0 * np.pi, n + 1)
        return r.center + r.radius * np.exp(1j * theta)
    if r.shape == HALF:
        xmin, xmax, ymin, ymax = viewport
        if not xmin <= r.bound <= xmax:
            return np.zeros(0, dtype=complex)
        return np.array([complex(r.bound, ymin), complex(r.bound, ymax)])
    if r.shape == POINT:
        return np.array([r.center])
    return np.zeros(0, dtype=complex)
