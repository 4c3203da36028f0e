import math

import numpy as np
import pytest

from pseudopass import geometry as geo
from pseudopass.geometry import (
    boundary_points,
    classify_admittance,
    classify_scattering,
    contains,
    effective_params,
    region_of_params,
)
from pseudopass.params import AdmittanceParams, ScatteringParams

RNG_SEED = 20240611
N_TRIPLES = 10_000
# Points this close to a boundary are skipped: both sides of the equivalence
# are then decided by rounding, not by the classifier.
BOUNDARY_SLACK = 1e-9


@pytest.mark.parametrize("c,d,shape,case", [
    (-1, -1, geo.FULL, "i"),
    (0, -1, geo.COMPLEMENT, "ii"),
    (2, -1, geo.COMPLEMENT, "ii"),
    (-1 / 8, -1 / 10, geo.COMPLEMENT, "ii"),
    (0, 0, geo.HALF, "iii"),
    (-2, 1 / 8, geo.DISK, "iv"),
    (0, 1 / 3, geo.DISK, "iv"),
    (0, 1, geo.DISK, "iv"),
    (1 / 2, 1 / 2, geo.POINT, "v"),
    (1, 1, geo.EMPTY, "vi"),
])
def test_admittance_cases(c, d, shape, case):
    r = classify_admittance(c, d)
    assert (r.shape, r.case) == (shape, case)


def test_admittance_parameters():
    r = classify_admittance(0, -1)
    assert r.center == -0.5 and r.radius == pytest.approx(0.5)
    r = classify_admittance(0, 1)
    assert r.center == 0.5 and r.radius == pytest.approx(0.5)
    r = classify_admittance(0, 0)
    assert r.bound == 0 and r.orientation == 1
    assert r.describe() == "half-plane Re ≥ 0 (case iii)"
    assert classify_admittance(-1, -1).describe() == "full-plane (case i)"
    r = classify_admittance(0.5, 0.5)
    assert r.center == 1.0 and r.radius == 0


def test_closed_right_half_plane():
    r = classify_admittance(0, 0)
    for sigma in (0, 1j, -5j, 3 + 2j):
        assert contains(r, sigma)
    assert not contains(r, -1e-6)


@pytest.mark.parametrize("F,G,shape,case", [
    (-3, 1, geo.FULL, "i"),
    (-2, 2, geo.COMPLEMENT, "ii"),
    (-1, 0, geo.FULL, "iii"),
    (-1, 2, geo.HALF, "iv"),
    (0, 0, geo.DISK, "v"),
    (1, 0, geo.POINT, "vi"),
    (2, 1, geo.EMPTY, "vii"),
])
def test_scattering_cases(F, G, shape, case):
    r = classify_scattering(F, G)
    assert (r.shape, r.case) == (shape, case)


def test_scattering_parameters():
    r = classify_scattering(0, 0)
    assert r.center == 0 and r.radius == 1
    assert r.describe() == "disk center 0 radius 1 (case v)"
    r = classify_scattering(0, 1)
    assert r.center == -1 and r.radius == pytest.approx(math.sqrt(2))
    for z in boundary_points(r, n=16):
        assert abs(1 - abs(z) ** 2 - 2 * z.real) < 1e-12
    # F = -1 keeps the half-plane in the stored form {G x <= 2}
    r = classify_scattering(-1, 2)
    assert r.bound == 1 and r.orientation == -1
    assert contains(r, 1 + 5j) and contains(r, -4) and not contains(r, 1.01)
    r = classify_scattering(-1, -2)
    assert r.bound == -1 and r.orientation == 1
    r = classify_scattering(-2, 2)
    assert r.center == 2 and r.radius == pytest.approx(1.0)


def test_discriminant_tolerance():
    d = 0.5
    c = 0.5 + 1e-14
    assert classify_admittance(c, d).shape == geo.POINT
    assert classify_admittance(c, d, exact=True).shape == geo.EMPTY
    F = math.sqrt(1 + 0.09) - 1e-14
    assert classify_scattering(F, 0.3).shape == geo.POINT
    assert classify_scattering(F, 0.3, exact=True).shape == geo.DISK


def test_contains_examples():
    disk = classify_scattering(0, 0)
    assert contains(disk, 0) and contains(disk, 1) and contains(disk, 1j)
    assert not contains(disk, 1.001)
    empty = classify_admittance(1, 1)
    assert not any(contains(empty, z) for z in (0, 1, 0.5, 100j))
    assert contains(classify_admittance(-1, -1), 1e6 - 3e5j)


def _random_triples(rng, n, kind):
    a = rng.uniform(-3, 3, n)
    b = rng.uniform(-3, 3, n)
    # exercise the degenerate branches too
    special = rng.random(n)
    if kind == "adm":
        b[special < 0.05] = 0.0
    else:
        b[special < 0.05] = 0.0
    sigma = rng.uniform(-4, 4, n) + 1j * rng.uniform(-4, 4, n)
    return a, b, sigma


def test_admittance_membership_equivalence():
    rng = np.random.default_rng(RNG_SEED)
    checked = 0
    for c, d, s in zip(*_random_triples(rng, N_TRIPLES, "adm")):
        direct = s.real - c - d * abs(s) ** 2
        if abs(direct) < BOUNDARY_SLACK:
            continue
        assert contains(classify_admittance(c, d), s, tol=1e-12) == (direct >= 0)
        checked += 1
    assert checked > 0.99 * N_TRIPLES


def test_scattering_membership_equivalence():
    rng = np.random.default_rng(RNG_SEED + 1)
    checked = 0
    for F, G, s in zip(*_random_triples(rng, N_TRIPLES, "scat")):
        direct = (1 - F) - (1 + F) * abs(s) ** 2 - 2 * G * s.real
        if abs(direct) < BOUNDARY_SLACK:
            continue
        assert contains(classify_scattering(F, G), s, tol=1e-12) == (direct >= 0)
        checked += 1
    assert checked > 0.99 * N_TRIPLES


def test_cayley_transport_of_regions():
    rng = np.random.default_rng(RNG_SEED + 2)
    for c, d, s in zip(*_random_triples(rng, N_TRIPLES, "adm")):
        if abs(1 + s) < 1e-6:
            continue
        z = (1 - s) / (1 + s)
        lhs = s.real - c - d * abs(s) ** 2
        if abs(lhs) < BOUNDARY_SLACK:
            continue
        a = contains(classify_admittance(c, d), s, tol=1e-12)
        b = contains(classify_scattering(c + d, c - d), z, tol=1e-12)
        assert a == b


def test_region_of_params_examples():
    for s in (0.5, 2 + 3j):
        assert region_of_params(AdmittanceParams((0.3,), (-0.2,)), s) == classify_admittance(0.3, -0.2)
        assert region_of_params(ScatteringParams((0.3,), (-0.2,)), s) == classify_scattering(0.3, -0.2)
    s = 2 * np.exp(0.3j)
    r = region_of_params(AdmittanceParams((0, 1), (0, 0)), s)
    assert r.shape == geo.HALF and r.bound == pytest.approx(4.0)
    r = region_of_params(AdmittanceParams((0, 0), (0, 1)), np.exp(1.1j))
    assert r.shape == geo.DISK and r.center == pytest.approx(0.5) and r.radius == pytest.approx(0.5)
    assert effective_params(ScatteringParams((1, 2), (3, 4)), 1j) == (3.0, 7.0)
    with pytest.raises(TypeError):
        region_of_params((0, 0), 1.0)


def test_boundary_points():
    circ = boundary_points(classify_admittance(0, 1), n=64)
    assert circ.size == 65 and circ[0] == pytest.approx(circ[-1])
    assert np.allclose(np.abs(circ - 0.5), 0.5)
    line = boundary_points(classify_admittance(1.5, 0))
    assert np.allclose(line, [1.5 - 3j, 1.5 + 3j])
    assert boundary_points(classify_admittance(5, 0)).size == 0
    assert boundary_points(classify_admittance(-1, -1)).size == 0
    assert boundary_points(classify_admittance(0.5, 0.5)).tolist() == [1.0]
