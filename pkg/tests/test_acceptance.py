"""Acceptance criteria, one test per criterion.

Each test records a single ``PASS``/``FAIL`` line; the lines are printed in
the pytest terminal summary (see ``conftest.py``) and when this file is run
directly with ``python3 tests/test_acceptance.py``.
"""

import json
import math
import os
import subprocess
import sys
import tempfile
import time

import numpy as np

from pseudopass import geometry as geo
from pseudopass.certify import brute_force_oracle, build_constraints, check_feasible, fit_max_margin
from pseudopass.convert import cayley
from pseudopass.kernel import dirac, exp_poly, make_kernel, tilde_transform
from pseudopass.laplace import (DEFAULT_GRID, HalfPlaneGrid, TransferSample, laplace_eval, laplace_quadrature, sweep,
                               write_samples)
from pseudopass.params import AdmittanceParams, ScatteringParams
from pseudopass.testfn import bump_corpus, default_corpus, evaluate
from pseudopass.timedomain import (
    admittance_profile,
    admittance_residual,
    energy_profile,
    falsify,
    horizon_grid,
    weak_passivity_residual,
)

RESULTS = {}

DP = dirac(1, 0, 1)
D0 = dirac(1.0)
MD = dirac(-1.0)
DELAY = dirac(1.0, 1.0)
EXP = exp_poly([1.0], -1.0)
TEXP = exp_poly([0.0, 1.0], -1.0)
REGRESSION = {"delta'": DP, "delta": D0, "-delta": MD, "delay": DELAY, "e^-t H": EXP, "t e^-t H": TEXP}


def record(n, ok, detail):
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[n] = line
    print(line)
    assert ok, line


def _cold():
    for fn in (energy_profile, horizon_grid):
        if hasattr(fn, "cache_clear"):
            fn.cache_clear()


def test_criterion_01_derivative_identity():
    _cold()
    t0 = time.perf_counter()
    worst = 0.0
    count = 0
    for phi in bump_corpus():
        hs = horizon_grid(phi)
        res = admittance_profile(DP, phi, hs, AdmittanceParams.zero())
        ref = np.array([0.5 * abs(evaluate(phi, t)) ** 2 for t in hs])
        worst = max(worst, float(np.abs(res - ref).max()))
        count += len(hs)
    dt = time.perf_counter() - t0
    record(1, count == 24 * 17 and worst < 1e-8 and dt < 10,
           f"{count} (phi, t) pairs, max |residual - |phi(t)|^2/2| = {worst:.2e} (< 1e-8), {dt:.2f} s (< 10 s)")


def test_criterion_02_negative_identity_boundary():
    _cold()
    t0 = time.perf_counter()
    corpus = default_corpus()
    on = falsify(MD, AdmittanceParams((-1.0,), (0.0,)), corpus)
    off = falsify(MD, AdmittanceParams.zero(), corpus)
    dt = time.perf_counter() - t0
    ok = (not on.falsified and abs(on.min_residual) < 1e-7 and off.falsified and dt < 10)
    record(2, ok, f"(c,d)=(-1,0): {on.status}, min {on.min_residual:.2e}; "
                  f"(0,0): {off.status}, min {off.min_residual:.3f}; {dt:.2f} s (< 10 s)")


ADMITTANCE_CASES = [((-1, -1), "i"), ((0, -1), "ii"), ((2, -1), "ii"), ((-1 / 8, -1 / 10), "ii"), ((0, 0), "iii"),
           ((-2, 1 / 8), "iv"), ((0, 1 / 3), "iv"), ((0, 1), "iv"), ((1, 1), "vi"), ((1 / 2, 1 / 2), "v")]


def test_criterion_03_admittance_taxonomy():
    wrong = [(cd, case, geo.classify_admittance(*cd).case) for cd, case in ADMITTANCE_CASES
             if geo.classify_admittance(*cd).case != case]
    record(3, not wrong, f"{len(ADMITTANCE_CASES) - len(wrong)}/{len(ADMITTANCE_CASES)} case labels match" +
           (f"; mismatches {wrong}" if wrong else ""))


SCATTERING_SET = [((-3, 1), geo.FULL, "i"), ((-2, 2), geo.COMPLEMENT, "ii"), ((-1, 0), geo.FULL, "iii"),
                  ((-1, 2), geo.HALF, "iv"), ((0, 0), geo.DISK, "v"), ((1, 0), geo.POINT, "vi"),
                  ((2, 1), geo.EMPTY, "vii")]


def _membership_mismatches(seed, family, n=10_000, slack=1e-9):
    rng = np.random.default_rng(seed)
    a, b = rng.uniform(-3, 3, n), rng.uniform(-3, 3, n)
    b[rng.random(n) < 0.05] = 0.0
    sigma = rng.uniform(-4, 4, n) + 1j * rng.uniform(-4, 4, n)
    bad = checked = 0
    for x1, x2, s in zip(a, b, sigma):
        if family == "admittance":
            direct = s.real - x1 - x2 * abs(s) ** 2
            r = geo.classify_admittance(x1, x2)
        else:
            direct = (1 - x1) - (1 + x1) * abs(s) ** 2 - 2 * x2 * s.real
            r = geo.classify_scattering(x1, x2)
        if abs(direct) < slack:
            continue
        checked += 1
        bad += geo.contains(r, s, tol=1e-12) != (direct >= 0)
    return bad, checked


def test_criterion_04_scattering_taxonomy():
    wrong = []
    for fg, shape, case in SCATTERING_SET:
        r = geo.classify_scattering(*fg)
        if (r.shape, r.case) != (shape, case):
            wrong.append(fg)
    disk = geo.classify_scattering(0, 0)
    half = geo.classify_scattering(-1, 2)
    specifics = (disk.center == 0 and disk.radius == 1 and half.bound == 1 and half.orientation == -1)
    bad_a, n_a = _membership_mismatches(1, "admittance")
    bad_s, n_s = _membership_mismatches(2, "scattering")
    ok = not wrong and specifics and bad_a == 0 and bad_s == 0
    record(4, ok, f"7/7 cases {'ok' if not wrong else wrong}; (0,0) unit disk, (-1,2) x <= 1: {specifics}; "
                  f"membership mismatches adm {bad_a}/{n_a}, scat {bad_s}/{n_s}")


def test_criterion_05_cayley_equivalence():
    rng = np.random.default_rng(3)
    n = 10_000
    c, d = rng.uniform(-3, 3, n), rng.uniform(-3, 3, n)
    w = rng.uniform(-4, 4, n) + 1j * rng.uniform(-4, 4, n)
    bad = checked = 0
    worst_inv = 0.0
    for ci, di, wi in zip(c, d, w):
        if abs(1 + wi) < 1e-6:
            continue
        z = cayley(wi)
        worst_inv = max(worst_inv, abs(cayley(z) - wi) / max(1.0, abs(wi)))
        F, G = ci + di, ci - di
        lhs = wi.real >= ci + di * abs(wi) ** 2
        rhs_val = (1 - F) - (1 + F) * abs(z) ** 2 - 2 * G * z.real
        if abs(wi.real - ci - di * abs(wi) ** 2) < 1e-10:
            continue
        checked += 1
        bad += lhs != (rhs_val >= -1e-10)
    record(5, bad == 0 and worst_inv <= 1e-12,
           f"transport mismatches {bad}/{checked}; max involution error {worst_inv:.1e} (<= 1e-12)")


PARAM_SETS = [AdmittanceParams((0.0,), (0.0,)), AdmittanceParams((-1.0,), (0.0,)), AdmittanceParams((0.5,), (0.0,)),
              AdmittanceParams((0.0,), (0.5,)), AdmittanceParams((-0.5,), (-0.5,)),
              ScatteringParams((0.0,), (0.0,)), ScatteringParams((-1.0,), (1.0,)), ScatteringParams((1.0,), (-1.0,))]


def test_criterion_06_frequency_time_consistency():
    corpus = default_corpus()
    violations = []
    n_neg = 0
    for name, k in REGRESSION.items():
        for p in PARAM_SETS:
            sw = sweep(k, DEFAULT_GRID, p).min_residual
            v = falsify(k, p, corpus)
            if sw < -1e-6:
                n_neg += 1
                if not v.falsified:
                    violations.append((name, p.as_vector()))
    boundary = []
    for k, p in [(DP, AdmittanceParams.zero()), (MD, AdmittanceParams((-1.0,), (0.0,)))]:
        sw = sweep(k, DEFAULT_GRID, p).min_residual
        v = falsify(k, p, corpus)
        if sw < -1e-6 or v.falsified:
            boundary.append(k)
    total = len(REGRESSION) * len(PARAM_SETS)
    record(6, not violations and not boundary,
           f"{n_neg}/{total} (kernel, params) pairs with sweep min < -1e-6, all falsified in time domain"
           f"{'' if not violations else f'; unmatched {violations}'}; boundary kernels consistent: {not boundary}")


def test_criterion_07_laplace_oracle():
    t0 = time.perf_counter()
    worst = 0.0
    pts = DEFAULT_GRID.points()
    for k in REGRESSION.values():
        for s in pts:
            ref = laplace_quadrature(k, s)
            worst = max(worst, abs(laplace_eval(k, s) - ref) / max(abs(ref), 1e-300))
    dt = time.perf_counter() - t0
    record(7, worst <= 1e-8 and dt < 30,
           f"{len(REGRESSION)} kernels x {pts.size} grid points, max relative error {worst:.1e} (<= 1e-8), "
           f"{dt:.1f} s (< 30 s)")


def _agree(samples, kind, grid):
    cs = build_constraints(samples, 0, kind)
    fit = fit_max_margin(cs, box=([grid[0], grid[2]], [grid[1], grid[3]]))
    orc = brute_force_oracle(samples, kind, grid)
    tol = grid[4] * float(np.abs(cs.A).sum(axis=1).max())
    ok = orc.cell_margin(*fit.x) >= -tol and abs(fit.margin - orc.best()[2]) <= tol
    return ok, cs, fit, orc


def test_criterion_08_lp_certification():
    t0 = time.perf_counter()
    circle = [TransferSample(1 + 0.25 * k, np.exp(1j * k * np.pi / 4)) for k in range(8)]
    ok1, cs1, _, orc1 = _agree(circle, "scattering", (-2, 2, -2, 2, 1e-3))
    tight = abs(check_feasible(cs1, [0.0, 0.0])) < 1e-12 and orc1.cell_margin(0, 0) > -1e-12

    neg = [TransferSample(complex(0.5 + k, k - 1.0), -1.0) for k in range(4)]
    ok2, cs2, _, orc2 = _agree(neg, "admittance", (-2, 0, -1, 1, 1e-3))
    C, D = np.meshgrid(orc2.x1, orc2.x2, indexing="ij")
    clear = np.abs(C + D + 1) > 1e-9
    half = np.array_equal(orc2.feasible[clear], (C + D <= -1)[clear])
    edge = fit_max_margin(cs2, objective="max-c0")
    on_line = abs(edge.x[0] + edge.x[1] + 1) < 1e-12 and edge.margin == 0

    grid = HalfPlaneGrid((0.1, 10.0), (-5.0, 5.0), 5, 5)
    ident = [TransferSample(s, s) for s in grid.points()]
    ok3, cs3, fit3, _ = _agree(ident, "admittance", (-1, 1, -1, 1, 1e-3))
    pos = check_feasible(cs3, [0.0, 0.0]) > 0 and fit3.margin > 0
    dt = time.perf_counter() - t0
    ok = ok1 and tight and ok2 and half and on_line and ok3 and pos and dt < 60
    record(8, ok, f"unit circle: LP=oracle {ok1}, (0,0) tight {tight}; W=-1: LP=oracle {ok2}, "
                  f"feasible set c+d<=-1 {half}, max-c0 on boundary {on_line}; W=s: LP=oracle {ok3}, "
                  f"(0,0) margin>0 {pos}; {dt:.1f} s (< 60 s)")


def test_criterion_09_tilde_reduction():
    bumps = bump_corpus()
    zero_res = max(abs(weak_passivity_residual(tilde_transform(MD, [-1.0]), phi)) for phi in bumps)
    cases = [(MD, [-1.0]), (make_kernel([(1.0, 1.0, 0), (0.5, 0.0, 1)]), [0.5, -0.2]), (EXP, [0.5])]
    worst = 0.0
    for k, c in cases:
        p = AdmittanceParams(tuple(c), (0.0,) * len(c))
        kt = tilde_transform(k, c)
        for phi in bumps:
            lhs = admittance_residual(k, phi, math.inf, p)
            rhs = weak_passivity_residual(kt, phi)
            worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs)))
    record(9, zero_res <= 1e-9 and worst <= 1e-9,
           f"weak residual of reduced -delta max {zero_res:.1e} (<= 1e-9) over {len(bumps)} functions; "
           f"identity over 3 kernels x {len(bumps)} functions max error {worst:.1e} (<= 1e-9)")


def _cli(argv, cwd):
    out = subprocess.run([sys.executable, "-m", "pseudopass"] + argv, cwd=cwd, capture_output=True)
    return out.returncode, out.stdout


def test_criterion_10_determinism():
    with tempfile.TemporaryDirectory() as tmp:
        for name, k in [("dp", DP), ("md", MD), ("exp", EXP)]:
            with open(os.path.join(tmp, f"{name}.json"), "w") as fh:
                json.dump(k.to_dict(), fh)
        with open(os.path.join(tmp, "pm.json"), "w") as fh:
            fh.write('{"kind": "admittance", "N": 0, "c": [-1], "d": [0]}')
        write_samples(os.path.join(tmp, "circle.csv"),
                      [TransferSample(1 + 0.25 * k, np.exp(1j * k * np.pi / 4)) for k in range(8)])
        runs = [
            ["verify", "dp.json"],
            ["verify", "md.json", "--params", "pm.json"],
            ["verify", "exp.json"],
            ["sweep", "md.json", "--params", "pm.json", "--csv", "sweep.csv"],
            ["classify", "--adm", "0", "1", "--svg", "region.svg"],
            ["classify", "--scat", "-1", "2"],
            ["plot", "--svg", "figure.svg"],
            ["fit", "circle.csv", "--scat", "--oracle"],
            ["convert", "circle.csv", "--csv", "conv.csv"],
        ]
        files = ["sweep.csv", "region.svg", "figure.svg", "conv.csv"]
        snapshots = []
        for _ in range(2):
            outs = [_cli(argv, tmp) for argv in runs]
            blobs = {f: open(os.path.join(tmp, f), "rb").read() for f in files}
            snapshots.append((outs, blobs))
        codes = [c for c, _ in snapshots[0][0]]
        same = snapshots[0] == snapshots[1]
    record(10, same and all(c == 0 for c in codes),
           f"{len(runs)} CLI runs twice: reports and {len(files)} output files byte-identical {same}, "
           f"exit codes {sorted(set(codes))}")


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
