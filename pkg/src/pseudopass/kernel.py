"""Defining distributions as finite term lists.

A :class:`Kernel` is a finite sum of shifted Dirac derivatives
``coeff * delta_loc^(order)`` plus exponential-polynomial tails
``p(t) * exp(rate * t) * H(t - start)``. The class is closed under
convolution and differentiation and every member has a closed-form Laplace
transform, which is all the rest of the package needs.
"""

from __future__ import annotations

import hashlib
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from math import comb, factorial

import numpy as np

from .errors import NumericError, ValidationError
from .testfn import DEFAULT_QUADRATURE, MAX_DIRAC_ORDER

# Relative size below which an exp-poly tail is treated as vanished.
_TAIL_EPS = 1e-17
# Points per vectorized block in the tail quadrature.
_CHUNK = 1 << 18


def _finite(z):
    return math.isfinite(z.real) and math.isfinite(z.imag)


@dataclass(frozen=True)
class DiracTerm:
    coeff: complex
    location: float = 0.0
    order: int = 0

    def __post_init__(self):
        object.__setattr__(self, "coeff", complex(self.coeff))
        object.__setattr__(self, "location", float(self.location))
        if not _finite(self.coeff) or not math.isfinite(self.location):
            raise ValidationError("Dirac term must have finite coefficient and location")
        if int(self.order) != self.order or self.order < 0:
            raise ValidationError("Dirac order must be a non-negative integer")
        object.__setattr__(self, "order", int(self.order))


@dataclass(frozen=True)
class ExpPolyTerm:
    """``t -> p(t) exp(rate t)`` for ``t >= start``; ``poly`` ascending in ``t``."""

    poly: tuple
    rate: complex = 0j
    start: float = 0.0

    def __post_init__(self):
        poly = tuple(complex(c) for c in self.poly)
        if not poly:
            raise ValidationError("exp-poly term needs at least one coefficient")
        if not all(_finite(c) for c in poly):
            raise ValidationError("non-finite exp-poly coefficient")
        object.__setattr__(self, "poly", poly)
        object.__setattr__(self, "rate", complex(self.rate))
        object.__setattr__(self, "start", float(self.start))
        if not _finite(self.rate) or not math.isfinite(self.start):
            raise ValidationError("exp-poly rate and start must be finite")

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        val = np.polynomial.polynomial.polyval(t, self.poly) * np.exp(self.rate * t)
        return np.where(t >= self.start, val, 0.0)

    def tail_end(self, rel=_TAIL_EPS):
        """A time beyond which the term is below ``rel`` times its size near ``start``.

        Only meaningful for decaying terms (``Re[rate] < 0``).
        """
        decay = -self.rate.real
        if decay <= 0:
            return math.inf
        deg = len(self.poly) - 1
        scale = max(abs(c) for c in self.poly) or 1.0
        # |p(t)| <= scale * (deg+1) * max(1,|t|)^deg; pick T with that times e^{-decay (T-start)} small
        span = (math.log(1.0 / rel) + math.log(deg + 1)) / decay
        T = self.start + span
        for _ in range(60):
            bound = scale * (deg + 1) * max(1.0, abs(T)) ** deg * math.exp(self.rate.real * T)
            ref = scale * math.exp(self.rate.real * self.start) * max(1.0, abs(self.start)) ** deg
            if bound <= rel * ref:
                return T
            T += 1.0 / decay
        return T


@dataclass(frozen=True)
class Kernel:
    diracs: tuple = ()
    regular: tuple = ()
    max_order: int = field(default=MAX_DIRAC_ORDER, compare=False)

    @property
    def is_zero(self):
        return not self.diracs and not self.regular

    @property
    def is_tempered(self):
        """False when some tail grows exponentially (no slow growth)."""
        return all(r.rate.real <= 0 for r in self.regular)

    @property
    def max_dirac_order(self):
        return max((d.order for d in self.diracs), default=0)

    def __neg__(self):
        return self.scale(-1.0)

    def __add__(self, other):
        return make_kernel(self.diracs + other.diracs, self.regular + other.regular,
                           max(self.max_order, other.max_order))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, alpha):
        alpha = complex(alpha)
        return make_kernel(
            [DiracTerm(alpha * d.coeff, d.location, d.order) for d in self.diracs],
            [ExpPolyTerm(tuple(alpha * c for c in r.poly), r.rate, r.start) for r in self.regular],
            self.max_order,
        )

    def to_dict(self):
        return {
            "dirac": [{"coeff": [d.coeff.real, d.coeff.imag], "loc": d.location, "order": d.order}
                      for d in self.diracs],
            "regular": [{"poly": [[c.real, c.imag] for c in r.poly],
                         "rate": [r.rate.real, r.rate.imag], "start": r.start}
                        for r in self.regular],
        }

    def digest(self):
        text = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()[:16]


def make_kernel(diracs=(), regs=(), max_order=MAX_DIRAC_ORDER):
    """Normalize term lists into a :class:`Kernel`.

    Dirac terms with identical ``(location, order)`` are merged and exact
    zeros dropped; regular terms with identical ``(rate, start)`` have their
    polynomials added. Terms are sorted so equal kernels compare equal.
    """
    merged = {}
    for d in diracs:
        if not isinstance(d, DiracTerm):
            d = DiracTerm(*d)
        if d.order > max_order:
            raise ValidationError(f"Dirac order {d.order} exceeds maximum {max_order}")
        key = (d.location, d.order)
        merged[key] = merged.get(key, 0j) + d.coeff
    dterms = tuple(DiracTerm(c, loc, m) for (loc, m), c in sorted(merged.items()) if c != 0)

    polys = {}
    for r in regs:
        if not isinstance(r, ExpPolyTerm):
            r = ExpPolyTerm(*r)
        key = (r.rate.real, r.rate.imag, r.start)
        acc = polys.get(key, ())
        n = max(len(acc), len(r.poly))
        polys[key] = tuple((acc[i] if i < len(acc) else 0j) + (r.poly[i] if i < len(r.poly) else 0j)
                           for i in range(n))
    rterms = []
    for (re_, im_, start), poly in sorted(polys.items()):
        poly = list(poly)
        while len(poly) > 1 and poly[-1] == 0:
            poly.pop()
        if all(c == 0 for c in poly):
            continue
        rterms.append(ExpPolyTerm(tuple(poly), complex(re_, im_), start))
    return Kernel(dterms, tuple(rterms), max_order)


def dirac(coeff=1.0, location=0.0, order=0):
    """Shorthand for a kernel holding one Dirac term."""
    return make_kernel([DiracTerm(coeff, location, order)])


def exp_poly(poly, rate=0.0, start=0.0):
    """Shorthand for a kernel holding one exponential-polynomial tail."""
    return make_kernel([], [ExpPolyTerm(tuple(poly), rate, start)])


ZERO = Kernel()


# -- kernel algebra ----------------------------------------------------------

def differentiate(k, times=1):
    """Distributional derivative; each tail sheds a Dirac at its start."""
    for _ in range(times):
        diracs = [DiracTerm(d.coeff, d.location, d.order + 1) for d in k.diracs]
        regs = []
        for r in k.regular:
            jump = complex(np.polynomial.polynomial.polyval(r.start, r.poly) * np.exp(r.rate * r.start))
            if jump != 0:
                diracs.append(DiracTerm(jump, r.start, 0))
            dp = np.polynomial.polynomial.polyder(np.array(r.poly)) if len(r.poly) > 1 else np.zeros(1)
            new = r.rate * np.array(r.poly, dtype=complex)
            new[: len(dp)] += dp
            regs.append(ExpPolyTerm(tuple(new), r.rate, r.start))
        k = make_kernel(diracs, regs, max(k.max_order, k.max_dirac_order + 1))
    return k


def _shift_poly(poly, rate, shift):
    """Coefficients of ``q`` with ``q(t) e^{rate t} = p(t - shift) e^{rate (t - shift)}``."""
    out = np.zeros(len(poly), dtype=complex)
    for n, c in enumerate(poly):
        for k in range(n + 1):
            out[k] += c * comb(n, k) * (-shift) ** (n - k)
    return out * np.exp(-rate * shift)


def _dirac_times_regular(d, r):
    poly = _shift_poly(r.poly, r.rate, d.location)
    shifted = make_kernel([], [ExpPolyTerm(tuple(d.coeff * poly), r.rate, r.start + d.location)])
    return differentiate(shifted, d.order) if d.order else shifted


def _antiderivative_exp(n, nu):
    """Coefficients of ``R_n`` with ``d/dt [e^{nu t} R_n(t)] = t^n e^{nu t}``."""
    out = np.zeros(n + 1, dtype=complex)
    for k in range(n + 1):
        out[k] = (-1) ** (n - k) * factorial(n) / factorial(k) / nu ** (n - k + 1)
    return out


def _substitute_shift(B, a):
    """Given ``B[i, j]`` (coefficient of ``t^i tau^j``) return ``B(t, t - a)`` as a poly in ``t``."""
    deg = B.shape[0] + B.shape[1]
    out = np.zeros(deg, dtype=complex)
    for i in range(B.shape[0]):
        for j in range(B.shape[1]):
            c = B[i, j]
            if c == 0:
                continue
            for k in range(j + 1):
                out[i + k] += c * comb(j, k) * (-a) ** (j - k)
    return out


def _substitute_const(B, a):
    """``B(t, a)`` as a poly in ``t``."""
    powers = a ** np.arange(B.shape[1])
    return B @ powers


def _regular_times_regular(r1, r2):
    p1, p2 = np.array(r1.poly), np.array(r2.poly)
    n1, n2 = len(p1), len(p2)
    # P(t, tau) = p1(tau) p2(t - tau), indexed [t power, tau power]
    P = np.zeros((n2, n1 + n2 - 1), dtype=complex)
    for n, c2 in enumerate(p2):
        for k in range(n + 1):
            coef = c2 * comb(n, k) * (-1) ** k
            P[n - k, k : k + n1] += coef * p1
    nu = r1.rate - r2.rate
    a1, a2 = r1.start, r2.start
    start = a1 + a2
    if nu == 0:
        A = np.zeros((P.shape[0], P.shape[1] + 1), dtype=complex)
        A[:, 1:] = P / np.arange(1, P.shape[1] + 1)
        poly = _substitute_shift(A, a2)
        low = _substitute_const(A, a1)
        poly[: len(low)] -= low
        return make_kernel([], [ExpPolyTerm(tuple(poly), r2.rate, start)])
    B = np.zeros_like(P)
    for j in range(P.shape[1]):
        R = _antiderivative_exp(j, nu)
        B[:, : j + 1] += np.outer(P[:, j], R)
    upper = _substitute_shift(B, a2) * np.exp(-nu * a2)
    lower = -_substitute_const(B, a1) * np.exp(nu * a1)
    return make_kernel([], [ExpPolyTerm(tuple(upper), r1.rate, start),
                            ExpPolyTerm(tuple(lower), r2.rate, start)])


def convolve(k1, k2):
    """Closed-form convolution of two kernels.

    Every kernel in this class is right-sided, so the convolution always
    exists. Dirac with Dirac adds locations and orders; Dirac with a tail
    shifts and differentiates the tail; two tails are integrated exactly.
    """
    max_order = max(k1.max_order, k2.max_order, k1.max_dirac_order + k2.max_dirac_order)
    out = make_kernel(
        [DiracTerm(a.coeff * b.coeff, a.location + b.location, a.order + b.order)
         for a in k1.diracs for b in k2.diracs],
        [], max_order,
    )
    for d in k1.diracs:
        for r in k2.regular:
            out = out + _dirac_times_regular(d, r)
    for d in k2.diracs:
        for r in k1.regular:
            out = out + _dirac_times_regular(d, r)
    for r1 in k1.regular:
        for r2 in k2.regular:
            out = out + _regular_times_regular(r1, r2)
    return out


def tilde_transform(k, c):
    """``k - sum_j (-1)^j c_j delta_0^(2j)``."""
    terms = [DiracTerm(-((-1) ** j) * cj, 0.0, 2 * j) for j, cj in enumerate(c) if cj != 0]
    return k + make_kernel(terms, [], max(k.max_order, 2 * (len(c) - 1)))


def support_lower_bound(k):
    """Left end of the support; ``+inf`` for the zero kernel."""
    locs = [d.location for d in k.diracs] + [r.start for r in k.regular]
    return min(locs, default=math.inf)


def support_upper_bound(k, rel=_TAIL_EPS):
    """Right end of the effective support (tails cut where they fall below ``rel``)."""
    ends = [d.location for d in k.diracs] + [r.tail_end(rel) for r in k.regular]
    return max(ends, default=-math.inf)


def is_causal(k):
    return support_lower_bound(k) >= 0


def is_real_kernel(k):
    """True when every Dirac coefficient is real and tails pair up under conjugation."""
    if any(d.coeff.imag != 0 for d in k.diracs):
        return False
    pool = Counter()
    for r in k.regular:
        pool[(r.poly, r.rate, r.start)] += 1
    for (poly, rate, start), count in list(pool.items()):
        conj = (tuple(c.conjugate() for c in poly), rate.conjugate(), start)
        if conj == (poly, rate, start):
            continue
        if pool[conj] != count:
            return False
    return True


# -- action on test functions ------------------------------------------------

def _regular_response(term, phi, xs, order, panels, nodes):
    """``int term(tau) phi^(j)(xi - tau) dtau`` for ``j = 0..order`` at every ``xi``.

    Fixed-rule quadrature; returns shape ``(order + 1, len(xs))``.
    For an exponential window, the part of the integral where the window is
    the bare exponential is done in closed form.
    """
    xs = np.asarray(xs, dtype=float)
    left, right = phi.support()
    out = np.zeros((order + 1, xs.size), dtype=complex)
    lo = np.maximum(term.start, xs - right)
    if phi.compact:
        hi = xs - left
    else:
        hi = np.maximum(term.start, xs - phi.flat_end)
        out += _exp_tail(term, phi, xs, hi, order)
    live = hi > lo
    if not live.any():
        return out
    gx, gw = np.polynomial.legendre.leggauss(nodes)
    m = np.arange(panels)
    frac = ((m[:, None] + 0.5 * (gx[None, :] + 1.0)) / panels).ravel()
    wts = (np.repeat(np.ones(panels), nodes) * np.tile(gw, panels)) * 0.5 / panels
    idx = np.flatnonzero(live)
    step = max(1, _CHUNK // frac.size)
    for c0 in range(0, idx.size, step):
        sel = idx[c0 : c0 + step]
        width = hi[sel] - lo[sel]
        taus = lo[sel][:, None] + width[:, None] * frac[None, :]
        vals = term(taus.ravel()).reshape(taus.shape)
        D = phi.derivatives((xs[sel][:, None] - taus).ravel(), order).reshape((order + 1,) + taus.shape)
        out[:, sel] += np.einsum("jnk,nk,k->jn", D, vals, wts) * width[None, :]
    return out


def _exp_tail(term, phi, xs, lower, order):
    """Closed form of ``int_{lower}^inf term(tau) s^j e^{s(xi - tau)} dtau``."""
    s = phi.s
    mu = s - term.rate
    if mu.real <= 0:
        raise NumericError("exponential probe does not dominate the kernel tail; integral diverges")
    base = laplace_tail(term.poly, mu, lower)
    j = np.arange(order + 1)[:, None]
    return (s ** j) * (np.exp(s * xs) * base)[None, :]


def laplace_tail(poly, mu, a):
    """``int_a^inf p(t) e^{-mu t} dt`` for ``Re[mu] > 0``; ``a`` may be an array."""
    a = np.asarray(a, dtype=float)
    total = np.zeros(a.shape, dtype=complex)
    for n, pn in enumerate(poly):
        if pn == 0:
            continue
        inner = np.zeros(a.shape, dtype=complex)
        for k in range(n + 1):
            inner += factorial(n) / factorial(k) * a ** k / mu ** (n - k + 1)
        total += pn * inner
    return np.exp(-mu * a) * total


def response(k, phi, xs, order=0, panels=64, nodes=16):
    """Rows ``j = 0..order`` of ``psi^(j) = (k * phi)^(j)`` at ``xs`` (fixed quadrature rule)."""
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    out = np.zeros((order + 1, xs.size), dtype=complex)
    for d in k.diracs:
        D = phi.derivatives(xs - d.location, d.order + order)
        out += d.coeff * D[d.order : d.order + order + 1]
    for r in k.regular:
        out += _regular_response(r, phi, xs, order, panels, nodes)
    return out


def apply(k, phi, xi, q=DEFAULT_QUADRATURE, order=0):
    """``psi^(order)(xi)`` where ``psi = k * phi``.

    Dirac parts are exact; tail integrals are refined until two successive
    panel counts agree to ``q.abs_tol``.
    """
    xs = np.atleast_1d(np.asarray(xi, dtype=float))
    if not k.regular:
        val = response(k, phi, xs, order)[order]
    else:
        panels = max(1, q.panels // 4)
        prev = response(k, phi, xs, order, panels, q.nodes_per_panel)[order]
        for _ in range(12):
            panels *= 2
            val = response(k, phi, xs, order, panels, q.nodes_per_panel)[order]
            if np.max(np.abs(val - prev)) < q.abs_tol:
                break
            prev = val
        else:
            raise NumericError("kernel action did not converge", val)
    return complex(val[0]) if np.ndim(xi) == 0 else val


# -- kernel spec files -------------------------------------------------------

def _cplx(v):
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise ValidationError(f"complex value must be [re, im], got {v!r}")
        return complex(float(v[0]), float(v[1]))
    return complex(float(v))


def kernel_from_dict(data, max_order=MAX_DIRAC_ORDER):
    """Build a kernel from the ``{"dirac": [...], "regular": [...]}`` spec layout."""
    if not isinstance(data, dict):
        raise ValidationError("kernel spec must be a JSON object")
    unknown = set(data) - {"dirac", "regular"}
    if unknown:
        raise ValidationError(f"unknown kernel spec fields: {sorted(unknown)}")
    try:
        diracs = [DiracTerm(_cplx(d["coeff"]), float(d.get("loc", 0.0)), int(d.get("order", 0)))
                  for d in data.get("dirac", [])]
        regs = [ExpPolyTerm(tuple(_cplx(c) for c in r["poly"]), _cplx(r.get("rate", 0.0)),
                            float(r.get("start", 0.0)))
                for r in data.get("regular", [])]
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed kernel spec: {exc}") from exc
    return make_kernel(diracs, regs, max_order)


def load_kernel(path, max_order=MAX_DIRAC_ORDER):
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: {exc}") from exc
    return kernel_from_dict(data, max_order)
