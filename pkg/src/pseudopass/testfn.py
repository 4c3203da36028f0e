"""Smooth test functions with exact derivatives, and the quadrature engine.

Derivatives are computed by truncated Taylor-series arithmetic (the series of
``exp``, reciprocal and products are formed by their classical recurrences),
so every order is exact up to rounding. No finite differencing is involved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import NumericError, UnsupportedError, ValidationError

MAX_N = 4
MAX_DIRAC_ORDER = 16
MAX_DERIV_ORDER = 2 * MAX_N + MAX_DIRAC_ORDER

# Below this value of the bump argument the factor exp(-1/h) underflows.
_FLAT_CUTOFF = 1.0 / 600.0


# -- truncated power series on arrays of shape (K+1, n) ----------------------

def _smul(a, b):
    K = a.shape[0]
    out = np.zeros(a.shape, dtype=np.result_type(a, b))
    for k in range(K):
        out[k] = np.einsum("i...,i...->...", a[: k + 1], b[k::-1])
    return out


def _srecip(a):
    K = a.shape[0]
    out = np.zeros_like(a)
    out[0] = 1.0 / a[0]
    for k in range(1, K):
        out[k] = -np.einsum("i...,i...->...", a[1 : k + 1], out[k - 1 :: -1]) * out[0]
    return out


def _sexp(a):
    K = a.shape[0]
    out = np.zeros_like(a)
    out[0] = np.exp(a[0])
    for k in range(1, K):
        i = np.arange(1, k + 1).reshape((-1,) + (1,) * (a.ndim - 1))
        out[k] = np.einsum("i...,i...->...", i * a[1 : k + 1], out[k - 1 :: -1]) / k
    return out


def _variable(x0, slope, K):
    """Series of the affine map x0 + slope*eps."""
    x0 = np.asarray(x0, dtype=float)
    out = np.zeros((K + 1,) + x0.shape)
    out[0] = x0
    if K >= 1:
        out[1] = slope
    return out


def _to_derivatives(series):
    K = series.shape[0] - 1
    fact = np.array([math.factorial(k) for k in range(K + 1)], dtype=float)
    return series * fact.reshape((-1,) + (1,) * (series.ndim - 1))


def _check_order(order, max_order):
    if order < 0 or order > max_order:
        raise ValidationError(f"derivative order {order} outside [0, {max_order}]")


# -- test functions ----------------------------------------------------------

@dataclass(frozen=True)
class BumpPoly:
    """``p(u) * exp(-1/(1-u^2))`` with ``u`` mapping ``[left, right]`` onto ``[-1, 1]``.

    ``poly`` holds the coefficients of ``p`` in ascending powers of ``u``.
    """

    poly: tuple
    left: float
    right: float
    name: str = ""

    def __post_init__(self):
        if not self.poly:
            raise ValidationError("BumpPoly needs at least one coefficient")
        if not all(np.isfinite(complex(c)) for c in self.poly):
            raise ValidationError("non-finite polynomial coefficient")
        if not self.right > self.left:
            raise ValidationError("BumpPoly requires left < right")
        object.__setattr__(self, "poly", tuple(complex(c) for c in self.poly))

    @property
    def kind(self):
        return "BumpPoly"

    @property
    def compact(self):
        return True

    def support(self):
        return (self.left, self.right)

    def breakpoints(self):
        return (self.left, self.right)

    def shifted(self, delta):
        return BumpPoly(self.poly, self.left + delta, self.right + delta, self.name)

    def derivatives(self, xs, order, max_order=MAX_DERIV_ORDER):
        """Rows ``k = 0..order`` of ``phi^(k)`` at the points ``xs``."""
        _check_order(order, max_order)
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        half = 0.5 * (self.right - self.left)
        mid = 0.5 * (self.right + self.left)
        u0 = (xs - mid) / half
        live = (1.0 - u0 * u0) > _FLAT_CUTOFF
        out = np.zeros((order + 1, xs.size), dtype=complex)
        if not live.any():
            return out
        u = _variable(u0[live], 1.0 / half, order)
        h = -_smul(u, u)
        h[0] += 1.0
        bump = _sexp(-_srecip(h))
        p = np.zeros_like(u, dtype=complex)
        for c in reversed(self.poly):
            p = _smul(p, u)
            p[0] += c
        out[:, live] = _to_derivatives(_smul(p, bump))
        return out


@dataclass(frozen=True)
class ExpWindow:
    """Exactly ``exp(s*x)`` on ``(-inf, flat_end]``, zero on ``[cut_end, inf)``.

    The transition uses the smoothstep built from ``exp(-1/v)`` glue.
    """

    s: complex
    flat_end: float
    cut_end: float
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "s", complex(self.s))
        if not self.s.real > 0:
            raise ValidationError("ExpWindow exponent must have Re[s] > 0")
        if not self.cut_end > self.flat_end:
            raise ValidationError("ExpWindow requires flat_end < cut_end")

    @property
    def kind(self):
        return "ExpWindow"

    @property
    def compact(self):
        return False

    def support(self):
        return (-math.inf, self.cut_end)

    def breakpoints(self):
        return (self.flat_end, self.cut_end)

    def tail_start(self, abs_tol):
        """Point left of which ``|phi|^2`` (and its weighted derivatives) is below ``abs_tol``."""
        return self.flat_end - (math.log(1.0 / abs_tol) + 8.0) / (2.0 * self.s.real)

    def shifted(self, delta):
        return ExpWindow(self.s, self.flat_end + delta, self.cut_end + delta, self.name)

    def derivatives(self, xs, order, max_order=MAX_DERIV_ORDER):
        _check_order(order, max_order)
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        K = order
        s = self.s
        k = np.arange(K + 1).reshape(-1, 1)
        out = (s ** k) * np.exp(s * xs)[None, :]
        width = self.cut_end - self.flat_end
        v0 = (xs - self.flat_end) / width
        out[:, v0 >= 1.0 - _FLAT_CUTOFF] = 0.0
        mid = (v0 > _FLAT_CUTOFF) & (v0 < 1.0 - _FLAT_CUTOFF)
        if mid.any():
            v = _variable(v0[mid], 1.0 / width, K)
            w = -v
            w[0] += 1.0
            f_left = _sexp(-_srecip(v))
            f_right = _sexp(-_srecip(w))
            keep = _smul(f_right, _srecip(f_left + f_right))
            ks = np.array([s ** j / math.factorial(j) for j in range(K + 1)]).reshape(-1, 1)
            expo = ks * np.exp(s * xs[mid])[None, :]
            out[:, mid] = _to_derivatives(_smul(expo, keep))
        return out


def evaluate(phi, xi, order=0, max_order=MAX_DERIV_ORDER):
    """Exact ``phi^(order)(xi)`` for a scalar point."""
    return complex(phi.derivatives([xi], order, max_order)[order, 0])


# -- quadrature --------------------------------------------------------------

@dataclass(frozen=True)
class QuadratureSpec:
    panels: int = 64
    nodes_per_panel: int = 16
    abs_tol: float = 1e-10

    def __post_init__(self):
        if self.panels < 1 or self.nodes_per_panel < 1 or not self.abs_tol > 0:
            raise ValidationError("QuadratureSpec needs positive panels, nodes and abs_tol")

    def refined(self, factor=2):
        return QuadratureSpec(self.panels * factor, self.nodes_per_panel, self.abs_tol)


DEFAULT_QUADRATURE = QuadratureSpec()
MAX_REFINEMENTS = 12


@lru_cache(maxsize=None)
def _legendre(n):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def composite_rule(breaks, panels, nodes):
    """Gauss-Legendre nodes over consecutive segments of ``breaks``.

    ``panels`` is the total panel budget, spread over the segments in
    proportion to their length; every segment gets at least
    ``panels / (2 * segments)`` so short segments next to long ones are
    not starved. Returns
    ``(x, w, seg)`` where ``seg[i]`` is the segment index of node ``i``.
    """
    breaks = np.asarray(breaks, dtype=float)
    lengths = np.diff(breaks)
    total = lengths.sum()
    gx, gw = _legendre(nodes)
    floor = max(1, panels // (2 * max(1, int(np.count_nonzero(lengths > 0)))))
    xs, ws, seg = [], [], []
    for i, (a, length) in enumerate(zip(breaks[:-1], lengths)):
        if length <= 0:
            continue
        m = max(floor, int(math.ceil(panels * length / total)))
        edges = a + length * np.arange(m + 1) / m
        half = 0.5 * np.diff(edges)
        mids = 0.5 * (edges[1:] + edges[:-1])
        xs.append((mids[:, None] + half[:, None] * gx[None, :]).ravel())
        ws.append((half[:, None] * gw[None, :]).ravel())
        seg.append(np.full(m * nodes, i))
    if not xs:
        return np.zeros(0), np.zeros(0), np.zeros(0, dtype=int)
    return np.concatenate(xs), np.concatenate(ws), np.concatenate(seg)


def integrate(f, lo, hi, q=DEFAULT_QUADRATURE, breaks=()):
    """Panel Gauss-Legendre integral of a vectorized ``f`` over ``[lo, hi]``.

    The panel count doubles until two successive estimates differ by less
    than ``q.abs_tol * max(1, |estimate|)``; after ``MAX_REFINEMENTS`` doublings a
    :class:`NumericError` carrying the last estimate is raised.
    """
    if hi < lo:
        raise ValidationError("integrate requires lo <= hi")
    if hi == lo:
        return 0j
    pts = sorted({lo, hi, *(b for b in breaks if lo < b < hi)})

    def estimate(panels):
        x, w, _ = composite_rule(pts, panels, q.nodes_per_panel)
        return complex(np.dot(w, np.asarray(f(x), dtype=complex)))

    panels = q.panels
    prev = estimate(panels)
    for _ in range(MAX_REFINEMENTS):
        panels *= 2
        cur = estimate(panels)
        if abs(cur - prev) < q.abs_tol * max(1.0, abs(cur)):
            return cur
        prev = cur
    raise NumericError(f"quadrature on [{lo}, {hi}] did not converge", prev)


def autocorrelate(phi, t, q=DEFAULT_QUADRATURE, order=0):
    """``int conj(phi(tau)) * phi^(order)(tau - t) dtau`` for compactly supported ``phi``."""
    if not phi.compact:
        raise UnsupportedError("autocorrelation needs a compactly supported test function")
    left, right = phi.support()
    lo, hi = max(left, left + t), min(right, right + t)
    if hi <= lo:
        return 0j

    def integrand(x):
        return np.conj(phi.derivatives(x, 0)[0]) * phi.derivatives(x - t, order)[order]

    return integrate(integrand, lo, hi, q)


def sq_norm(phi, q=DEFAULT_QUADRATURE, order=0):
    """``int |phi^(order)|^2`` over the whole line (tail-truncated for ExpWindow)."""
    lo, hi = phi.support()
    if not phi.compact:
        lo = phi.tail_start(q.abs_tol)
    return integrate(lambda x: np.abs(phi.derivatives(x, order)[order]) ** 2,
                     lo, hi, q, phi.breakpoints()).real


# -- the default corpus ------------------------------------------------------

_CORPUS_POLYS = (
    (1.0,),
    (0.3, 1.0),
    (1.0, 0.0, -2.0),
    (0.5, -1.0, 0.0, 1.0),
    (1.0, 1j),
    (1j, 0.5, 0.5j),
)
_CORPUS_HALF_WIDTHS = (0.25, 0.5, 1.0, 2.0)
_CORPUS_RATES = (0.5, 1.0, 2.0, 0.5 + 1j, 1 + 1j, 1 - 1j, 1 + 3j, 2 + 2j)


def bump_corpus():
    """The 24 compactly supported members of the default corpus."""
    out = []
    for wi, half in enumerate(_CORPUS_HALF_WIDTHS):
        for pi, poly in enumerate(_CORPUS_POLYS):
            centre = 0.25 * ((pi + wi) % 3) - 0.25
            out.append(BumpPoly(poly, centre - half, centre + half, name=f"bump-w{wi}-p{pi}"))
    return out


def exp_corpus():
    """The 8 exponential probes, ``exp(s x)`` up to 0 then cut off by 1."""
    return [ExpWindow(s, 0.0, 1.0, name=f"exp-{i}") for i, s in enumerate(_CORPUS_RATES)]


def default_corpus():
    return bump_corpus() + exp_corpus()
