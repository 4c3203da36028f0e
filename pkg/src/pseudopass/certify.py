"""Fit pseudo-passivity parameters to sampled transfer values.

Each sample ``(s_k, w_k)`` turns the range inequality into one linear
constraint ``a_k . x <= b_k`` on ``x = (c_0..c_N, d_0..d_N)`` (or
``(F_0..F_N, G_0..G_N)``). The feasible set is a polyhedron; fitting is a
small dense linear program solved by a two-phase tableau simplex with
Bland's rule, so results are reproducible bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .params import params_from_vector

DEFAULT_BOX = (-1e3, 1e3)
FEAS_TOL = 1e-9
_PIVOT_TOL = 1e-12


@dataclass(frozen=True)
class ConstraintSet:
    A: np.ndarray
    b: np.ndarray
    N: int
    kind: str

    @property
    def dim(self):
        return 2 * (self.N + 1)

    def __len__(self):
        return self.A.shape[0]


def build_constraints(samples, N, kind):
    """One row per sample.

    Admittance: ``sum_j |s|^{2j} c_j + |w|^2 sum_j |s|^{2j} d_j <= Re w``.
    Scattering: ``sum_j |s|^{2j} (1 + |w|^2) F_j + 2 Re w sum_j |s|^{2j} G_j <= 1 - |w|^2``.
    """
    if kind not in ("admittance", "scattering"):
        raise ValidationError(f"unknown kind {kind!r}")
    if N < 0:
        raise ValidationError("N must be non-negative")
    rows, rhs = [], []
    for smp in samples:
        s, w = complex(smp.s), complex(smp.w)
        if not s.real > 0:
            raise ValidationError(f"sample at s = {s} is not in the open right half-plane")
        weights = abs(s) ** (2 * np.arange(N + 1))
        aw = abs(w) ** 2
        if kind == "admittance":
            rows.append(np.concatenate([weights, aw * weights]))
            rhs.append(w.real)
        else:
            rows.append(np.concatenate([(1.0 + aw) * weights, 2.0 * w.real * weights]))
            rhs.append(1.0 - aw)
    A = np.array(rows, dtype=float).reshape(len(rows), 2 * (N + 1))
    return ConstraintSet(A, np.array(rhs, dtype=float), N, kind)


def row_residuals(cs, x):
    return cs.b - cs.A @ np.asarray(x, dtype=float)


def check_feasible(cs, x):
    """``min_k (b_k - a_k . x)``; ``+inf`` for an empty constraint set."""
    x = np.asarray(x, dtype=float)
    if x.shape != (cs.dim,):
        raise ValidationError(f"parameter vector must have length {cs.dim}")
    if len(cs) == 0:
        return math.inf
    return float(row_residuals(cs, x).min())


# -- dense two-phase simplex -------------------------------------------------

def _pivot(T, basis, row, col):
    T[row] /= T[row, col]
    for i in range(T.shape[0]):
        if i != row and T[i, col] != 0:
            T[i] -= T[i, col] * T[row]
    basis[row] = col


def _run(T, basis, cost, allowed):
    """Maximize ``cost . z`` over the tableau with Bland's rule. Returns status."""
    m = T.shape[0]
    while True:
        reduced = cost[:-1] - cost[basis] @ T[:, :-1]
        col = next((j for j in range(T.shape[1] - 1) if allowed[j] and reduced[j] > _PIVOT_TOL), None)
        if col is None:
            return "optimal"
        best, row = None, None
        for i in range(m):
            if T[i, col] > _PIVOT_TOL:
                ratio = T[i, -1] / T[i, col]
                if best is None or ratio < best - _PIVOT_TOL or (
                        abs(ratio - best) <= _PIVOT_TOL and basis[i] < basis[row]):
                    best, row = ratio, i
        if row is None:
            return "unbounded"
        _pivot(T, basis, row, col)


def simplex(c, A, b):
    """Maximize ``c . x`` subject to ``A x <= b``, ``x >= 0``.

    Returns ``(status, x, value)`` with status ``optimal``, ``infeasible``
    or ``unbounded``.
    """
    A = np.asarray(A, dtype=float).reshape(-1, len(c))
    b = np.asarray(b, dtype=float)
    m, n = A.shape
    neg = b < 0
    n_art = int(neg.sum())
    width = n + m + n_art
    T = np.zeros((m, width + 1))
    basis = np.zeros(m, dtype=int)
    art = n + m
    for i in range(m):
        sign = -1.0 if neg[i] else 1.0
        T[i, :n] = sign * A[i]
        T[i, n + i] = sign
        T[i, -1] = sign * b[i]
        if neg[i]:
            T[i, art] = 1.0
            basis[i] = art
            art += 1
        else:
            basis[i] = n + i
    allowed = np.ones(width, dtype=bool)
    if n_art:
        cost1 = np.zeros(width + 1)
        cost1[n + m : width] = -1.0
        _run(T, basis, cost1, allowed)
        if cost1[basis] @ T[:, -1] < -1e-9 * max(1.0, np.abs(b).max()):
            return "infeasible", None, None
        keep = []
        for i in range(m):
            if basis[i] >= n + m:
                col = next((j for j in range(n + m) if abs(T[i, j]) > _PIVOT_TOL), None)
                if col is None:
                    continue  # redundant row
                _pivot(T, basis, i, col)
            keep.append(i)
        T, basis = T[keep], basis[keep]
        allowed[n + m :] = False
    cost = np.zeros(width + 1)
    cost[:n] = c
    status = _run(T, basis, cost, allowed)
    if status != "optimal":
        return status, None, None
    z = np.zeros(width)
    z[basis] = T[:, -1]
    x = z[:n]
    return "optimal", x, float(np.dot(c, x))


def _box_lp(objective, A, b, lo, hi):
    """Maximize ``objective . x`` subject to ``A x <= b`` and ``lo <= x <= hi``."""
    lo, hi = np.asarray(lo, dtype=float), np.asarray(hi, dtype=float)
    n = lo.size
    rows = [A, np.eye(n)]
    rhs = [b - A @ lo, hi - lo]
    status, y, _ = simplex(objective, np.vstack(rows), np.concatenate(rhs))
    if status != "optimal":
        return status, None
    return status, lo + y


# -- fitting -----------------------------------------------------------------

OBJECTIVES = ("max-margin", "max-c0", "max-d0")


@dataclass
class FitResult:
    params: object
    margin: float
    status: str
    objective: str
    box_active: tuple = ()
    active_constraints: tuple = ()
    degenerate: bool = False
    x: np.ndarray | None = field(default=None, repr=False)

    def to_dict(self):
        return {
            "status": self.status,
            "objective": self.objective,
            "params": None if self.params is None else self.params.to_dict(),
            "margin": self.margin,
            "box_active": list(self.box_active),
            "active_constraints": list(self.active_constraints),
            "degenerate": self.degenerate,
        }


def _box_arrays(box, dim):
    box = DEFAULT_BOX if box is None else box
    lo = np.asarray(box[0], dtype=float) * np.ones(dim)
    hi = np.asarray(box[1], dtype=float) * np.ones(dim)
    if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi)) and np.all(lo <= hi)):
        raise ValidationError("box bounds must be finite with lo <= hi")
    return lo, hi


def _lexmin(A, b, lo, hi):
    """Lexicographically smallest point of ``{A x <= b, lo <= x <= hi}``."""
    lo, hi = lo.copy(), hi.copy()
    x = None
    for i in range(lo.size):
        obj = np.zeros(lo.size)
        obj[i] = -1.0
        status, x = _box_lp(obj, A, b, lo, hi)
        if status != "optimal":
            return None
        lo[i] = hi[i] = x[i]
    return x


def fit_max_margin(cs, box=None, objective="max-margin", extra=None):
    """Solve the fitting LP over a finite box.

    ``max-margin`` maximizes ``min_k (b_k - a_k . x)``; ``max-c0`` maximizes
    the first coordinate with the second block fixed at zero (the tightest
    half-plane for admittance data); ``max-d0`` maximizes the first
    coordinate of the second block. The two latter require every sample
    constraint to hold. Ties go to the lexicographically smallest ``x``.
    ``extra = (A_extra, b_extra)`` adds user constraints on ``x``.
    """
    if objective not in OBJECTIVES:
        raise ValidationError(f"unknown objective {objective!r}")
    dim = cs.dim
    lo, hi = _box_arrays(box, dim)
    A, b = cs.A, cs.b
    if extra is not None:
        EA = np.asarray(extra[0], dtype=float).reshape(-1, dim)
        Eb = np.asarray(extra[1], dtype=float).reshape(-1)
    else:
        EA, Eb = np.zeros((0, dim)), np.zeros(0)
    scale = float(max(np.abs(lo).max(), np.abs(hi).max()))
    half = cs.N + 1

    if objective == "max-margin":
        if len(cs) == 0:
            x = _lexmin(EA, Eb, lo, hi)
            if x is None:
                return FitResult(None, math.nan, "infeasible", objective)
            return _finish(cs, x, lo, hi, objective, margin=scale, degenerate=True)
        # variables (x, t) with t in [-M, inf) via the box; t is capped by the rows
        base = b - A @ lo
        M = max(0.0, -float(base.min())) + 1.0
        T_hi = float(np.abs(b).max() + np.abs(A).sum(axis=1).max() * scale) + M + 1.0
        AA = np.vstack([np.hstack([A, np.ones((len(cs), 1))]), np.hstack([EA, np.zeros((len(EA), 1))])])
        bb = np.concatenate([b, Eb])
        lo_t, hi_t = np.append(lo, -M), np.append(hi, T_hi)
        obj = np.zeros(dim + 1)
        obj[-1] = 1.0
        status, z = _box_lp(obj, AA, bb, lo_t, hi_t)
        if status != "optimal":
            return FitResult(None, math.nan, status, objective)
        lo_t[-1] = z[-1]
        x = _lexmin(AA, bb, lo_t, hi_t)
        x = z[:-1] if x is None else x[:-1]
        return _finish(cs, x, lo, hi, objective)

    AA = np.vstack([A, EA])
    bb = np.concatenate([b, Eb])
    lo2, hi2 = lo.copy(), hi.copy()
    obj = np.zeros(dim)
    if objective == "max-c0":
        lo2[half:] = hi2[half:] = 0.0
        obj[0] = 1.0
    else:
        obj[half] = 1.0
    status, z = _box_lp(obj, AA, bb, lo2, hi2)
    if status != "optimal":
        return FitResult(None, math.nan, status, objective)
    k = 0 if objective == "max-c0" else half
    lo2[k] = hi2[k] = z[k]
    x = _lexmin(AA, bb, lo2, hi2)
    return _finish(cs, z if x is None else x, lo, hi, objective)


def _finish(cs, x, lo, hi, objective, margin=None, degenerate=False):
    x = np.asarray(x, dtype=float)
    span = np.maximum(1.0, np.abs(hi - lo))
    active_box = tuple(int(i) for i in range(x.size)
                       if abs(x[i] - lo[i]) <= 1e-9 * span[i] or abs(x[i] - hi[i]) <= 1e-9 * span[i])
    if len(cs):
        res = row_residuals(cs, x)
        m = float(res.min())
        active = tuple(int(i) for i in np.flatnonzero(res <= m + FEAS_TOL))
    else:
        m, active = margin, ()
    status = "optimal"
    return FitResult(params_from_vector(cs.kind, x), m, status, objective, active_box, active,
                     degenerate or len(cs) == 0, x)


# -- brute-force oracle ------------------------------------------------------

@dataclass
class OracleResult:
    x1: np.ndarray
    x2: np.ndarray
    margin: np.ndarray  # shape (len(x1), len(x2))

    @property
    def feasible(self):
        return self.margin >= 0

    def best(self):
        i, j = np.unravel_index(int(np.argmax(self.margin)), self.margin.shape)
        return float(self.x1[i]), float(self.x2[j]), float(self.margin[i, j])

    def cell_margin(self, x1, x2):
        i = int(np.argmin(np.abs(self.x1 - x1)))
        j = int(np.argmin(np.abs(self.x2 - x2)))
        return float(self.margin[i, j])


def brute_force_oracle(samples, kind, grid, chunk=256):
    """Exhaustive scan of the N = 0 parameter plane.

    ``grid = (x1_lo, x1_hi, x2_lo, x2_hi, step)``. Every grid node gets the
    margin ``min_k (b_k - a_k . x)``; nodes with margin >= 0 are feasible.
    With no samples every node is feasible (margin ``+inf``).
    """
    cs = build_constraints(samples, 0, kind)
    x1_lo, x1_hi, x2_lo, x2_hi, step = grid
    x1 = x1_lo + step * np.arange(int(round((x1_hi - x1_lo) / step)) + 1)
    x2 = x2_lo + step * np.arange(int(round((x2_hi - x2_lo) / step)) + 1)
    margin = np.full((x1.size, x2.size), np.inf)
    for k in range(len(cs)):
        a1, a2 = cs.A[k]
        bk = cs.b[k]
        for i0 in range(0, x1.size, chunk):
            block = bk - a1 * x1[i0 : i0 + chunk, None] - a2 * x2[None, :]
            np.minimum(margin[i0 : i0 + chunk], block, out=margin[i0 : i0 + chunk])
    return OracleResult(x1, x2, margin)
