"""Time-domain energy inequalities, falsification over a test-function corpus,
and the causality probe.

All residuals are "left side minus right side" of the respective inequality,
so a negative value is a violation.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import NumericError, UnsupportedError
from .kernel import apply, response, support_lower_bound, support_upper_bound
from .params import AdmittanceParams, ScatteringParams
from .testfn import (
    DEFAULT_QUADRATURE,
    MAX_REFINEMENTS,
    autocorrelate,
    composite_rule,
    integrate,
    sq_norm,
)

DEFAULT_TOL = 1e-7
N_HORIZONS = 17


@dataclass(frozen=True)
class Witness:
    function: str
    horizon: float
    residual: float
    normalized: float


@dataclass(frozen=True)
class Verdict:
    """Outcome of a falsification run; ``witness`` locates the minimum residual."""

    status: str
    min_residual: float
    witness: Witness | None
    evaluated: int
    tol: float
    failures: tuple = field(default=())

    @property
    def falsified(self):
        return self.status == "falsified"


# -- energy profiles ---------------------------------------------------------

def _effective_range(phi, abs_tol):
    left, right = phi.support()
    if not phi.compact:
        left = phi.tail_start(abs_tol)
    return left, right


def _infinite_horizon(k, phi, abs_tol):
    """A finite horizon past which no integrand of the residual is non-zero."""
    _, right = _effective_range(phi, abs_tol)
    up = support_upper_bound(k)
    return right + max(0.0, up if math.isfinite(up) else 0.0) + 1.0


def _energy_sums(k, phi, lo, breaks, cuts, order, panels, inner, nodes):
    x, w, seg = composite_rule(breaks, panels, nodes)
    D = phi.derivatives(x, order)
    P = response(k, phi, x, order, inner, nodes)
    dens = np.stack([np.conj(D) * P, np.abs(D) ** 2, np.abs(P) ** 2])  # (3, order+1, n)
    nseg = len(breaks) - 1
    per_seg = np.zeros((3, order + 1, nseg), dtype=complex)
    np.add.at(per_seg, (slice(None), slice(None), seg), dens * w)
    cum = np.concatenate([np.zeros((3, order + 1, 1)), np.cumsum(per_seg, axis=2)], axis=2)
    return cum[:, :, cuts]


@lru_cache(maxsize=4096)
def energy_profile(k, phi, horizons, order, q=DEFAULT_QUADRATURE):
    """Cumulative energies up to each horizon.

    Returns an array of shape ``(3, order + 1, len(horizons))`` holding
    ``int_{-inf}^t conj(phi^(j)) psi^(j)``, ``int |phi^(j)|^2`` and
    ``int |psi^(j)|^2``. ``math.inf`` is accepted as a horizon. Panel
    counts double until successive results agree to
    ``q.abs_tol * max(1, |largest entry|)``.
    """
    left, right = _effective_range(phi, q.abs_tol)
    klow = support_lower_bound(k)
    lo = left + min(0.0, klow) if math.isfinite(klow) else left
    hz = np.array([(_infinite_horizon(k, phi, q.abs_tol) if math.isinf(t) and t > 0 else t)
                   for t in horizons], dtype=float)
    hi = max(lo, float(hz.max()))
    feats = {lo, hi}
    shifts = [0.0] + [d.location for d in k.diracs] + [r.start for r in k.regular]
    for b in phi.breakpoints():
        for sh in shifts:
            feats.add(b + sh)
    feats.update(np.clip(hz, lo, hi).tolist())
    breaks = np.array(sorted(f for f in feats if lo <= f <= hi))
    cuts = np.searchsorted(breaks, np.clip(hz, lo, hi))
    if breaks.size < 2:
        return np.zeros((3, order + 1, len(horizons)), dtype=complex)

    panels, inner = q.panels, max(4, q.panels // 4)
    prev = _energy_sums(k, phi, lo, breaks, cuts, order, panels, inner, q.nodes_per_panel)
    for _ in range(MAX_REFINEMENTS):
        panels *= 2
        inner *= 2
        cur = _energy_sums(k, phi, lo, breaks, cuts, order, panels, inner, q.nodes_per_panel)
        scale = max(1.0, float(np.max(np.abs(cur))))
        if np.max(np.abs(cur - prev)) < q.abs_tol * scale:
            return cur
        prev = cur
    raise NumericError("energy profile did not converge", prev)


def _profile(k, phi, horizons, order, q):
    return energy_profile(k, phi, tuple(float(t) for t in horizons), order, q)


def _admittance_from_profile(E, p):
    cross, ephi, epsi = E
    out = cross[0].real.copy()
    for j in range(p.N + 1):
        out -= p.c[j] * ephi[j].real + p.d[j] * epsi[j].real
    return out


def _scattering_from_profile(E, p):
    cross, ephi, epsi = E
    out = np.zeros(E.shape[2])
    for j in range(p.N + 1):
        kron = 1.0 if j == 0 else 0.0
        out += (kron - p.F[j]) * ephi[j].real - (kron + p.F[j]) * epsi[j].real
        out -= 2.0 * p.G[j] * cross[j].real
    return out


def admittance_profile(k, phi, horizons, p, q=DEFAULT_QUADRATURE):
    """Admittance residuals at several horizons sharing one quadrature pass."""
    return _admittance_from_profile(_profile(k, phi, horizons, p.N, q), p)


def scattering_profile(k, zeta, horizons, p, q=DEFAULT_QUADRATURE):
    return _scattering_from_profile(_profile(k, zeta, horizons, p.N, q), p)


def admittance_residual(k, phi, t, p, q=DEFAULT_QUADRATURE):
    """``Re int_{-inf}^t conj(phi) psi - sum_j int_{-inf}^t (c_j |phi^(j)|^2 + d_j |psi^(j)|^2)``."""
    return float(admittance_profile(k, phi, (t,), p, q)[0])


def scattering_residual(k, zeta, t, p, q=DEFAULT_QUADRATURE):
    """Left minus right side of the scattering inequality up to horizon ``t``.

    ``sum_j int ((kron_j - F_j)|zeta^(j)|^2 - (kron_j + F_j)|eta^(j)|^2)
    - 2 sum_j G_j Re int conj(zeta^(j)) eta^(j)`` with ``eta = k * zeta``.
    """
    return float(scattering_profile(k, zeta, (t,), p, q)[0])


def weak_passivity_residual(k, phi, q=DEFAULT_QUADRATURE):
    """``Re int conj(phi) psi`` over the whole line; ``phi`` compactly supported."""
    if not phi.compact:
        raise UnsupportedError("weak passivity is evaluated on compactly supported functions")
    return float(_profile(k, phi, (phi.support()[1],), 0, q)[0, 0, 0].real)


# -- non-negative definiteness ----------------------------------------------

def _autocorr_many(phi, ts, panels, nodes):
    """Fixed-rule ``A(t) = int conj(phi(tau)) phi(tau - t) dtau`` at many ``t``."""
    left, right = phi.support()
    ts = np.asarray(ts, dtype=float)
    lo = np.maximum(left, left + ts)
    hi = np.minimum(right, right + ts)
    out = np.zeros(ts.size, dtype=complex)
    live = hi > lo
    gx, gw = np.polynomial.legendre.leggauss(nodes)
    frac = ((np.arange(panels)[:, None] + 0.5 * (gx[None, :] + 1.0)) / panels).ravel()
    wts = np.tile(gw, panels) * 0.5 / panels
    L, H, T = lo[live], hi[live], ts[live]
    taus = L[:, None] + (H - L)[:, None] * frac[None, :]
    f = phi.derivatives(taus.ravel(), 0)[0].reshape(taus.shape)
    g = phi.derivatives((taus - T[:, None]).ravel(), 0)[0].reshape(taus.shape)
    out[live] = (np.conj(f) * g) @ wts * (H - L)
    return out


def nonneg_definite_pairing(k, phi, q=DEFAULT_QUADRATURE):
    """``<k, A>`` with ``A`` the autocorrelation of ``phi`` (complex)."""
    if not phi.compact:
        raise UnsupportedError("autocorrelation needs a compactly supported test function")
    total = 0j
    for d in k.diracs:
        # <delta_loc^(m), A> = (-1)^m A^(m)(loc) = int conj(phi(tau)) phi^(m)(tau - loc) dtau
        total += d.coeff * autocorrelate(phi, d.location, q, order=d.order)
    width = phi.support()[1] - phi.support()[0]
    for r in k.regular:
        lo, hi = max(r.start, -width), width
        if hi <= lo:
            continue
        inner = max(4, q.panels // 4)
        total += integrate(lambda t, r=r: r(t) * _autocorr_many(phi, t, inner, q.nodes_per_panel),
                           lo, hi, q, breaks=(0.0,))
    return total


def nonneg_definite_residual(k, phi, q=DEFAULT_QUADRATURE):
    """Real part of the autocorrelation pairing; negative means not non-negative definite."""
    return float(nonneg_definite_pairing(k, phi, q).real)


# -- falsification -----------------------------------------------------------

def horizon_grid(phi, n=N_HORIZONS, abs_tol=DEFAULT_QUADRATURE.abs_tol):
    """``n`` horizons spanning one unit past either end of ``phi``'s support.

    For an exponential window the left end is taken 3 units before the flat end.
    """
    left, right = phi.support()
    if not phi.compact:
        left = phi.flat_end - 3.0
    return tuple(np.linspace(left - 1.0, right + 1.0, n).tolist())


def _max_workers():
    try:
        return max(1, int(os.environ.get("PSEUDOPASS_MAX_THREADS", "1")))
    except ValueError:
        return 1


def _evaluate_one(k, p, phi, horizons, q):
    hs = horizon_grid(phi, abs_tol=q.abs_tol) if horizons is None else tuple(horizons)
    if p.kind == "admittance":
        res = admittance_profile(k, phi, hs, p, q)
    else:
        res = scattering_profile(k, phi, hs, p, q)
    norm = sq_norm(phi, q)
    i = int(np.argmin(res))
    return Witness(phi.name or repr(phi), hs[i], float(res[i]), float(res[i] / norm))


def falsify(k, p, corpus, horizons=None, tol=DEFAULT_TOL, q=DEFAULT_QUADRATURE):
    """Search ``corpus x horizons`` for a violation of the inequality selected by ``p``.

    Residuals are normalized by ``||phi||^2``; a normalized residual below
    ``-tol`` falsifies. The returned witness is the global minimizer (first
    one in corpus order on ties), so the result does not depend on the
    thread count set through ``PSEUDOPASS_MAX_THREADS``.
    """
    if not isinstance(p, (AdmittanceParams, ScatteringParams)):
        raise TypeError("p must be AdmittanceParams or ScatteringParams")
    corpus = list(corpus)

    def job(phi):
        try:
            return _evaluate_one(k, p, phi, horizons, q)
        except (NumericError, ArithmeticError) as exc:
            return exc

    workers = min(_max_workers(), max(1, len(corpus)))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(job, corpus))
    else:
        results = [job(phi) for phi in corpus]

    best, failures = None, []
    for phi, res in zip(corpus, results):
        if isinstance(res, Exception):
            failures.append((phi.name or repr(phi), str(res)))
        elif best is None or res.normalized < best.normalized:
            best = res
    if best is None:
        return Verdict("not-falsified", math.nan, None, 0, tol, tuple(failures))
    status = "falsified" if best.normalized < -tol else "not-falsified"
    return Verdict(status, best.normalized, best, len(results) - len(failures), tol, tuple(failures))


# -- causality ---------------------------------------------------------------

@dataclass(frozen=True)
class CausalityReport:
    causal: bool
    max_abs: float
    witness: tuple | None  # (function name, xi, psi(xi))


def causality_check(k, t0, corpus, tol=1e-10, q=DEFAULT_QUADRATURE, n_grid=64):
    """Probe whether inputs vanishing before ``t0`` give outputs vanishing before ``t0``.

    Each compactly supported corpus member is shifted to start exactly at
    ``t0``; the response is sampled on ``n_grid`` points left of ``t0``.
    Exponential windows are skipped since they never vanish on a left ray.
    """
    klow = support_lower_bound(k)
    reach = max(0.0, -klow) if math.isfinite(klow) else 0.0
    worst, witness = 0.0, None
    for phi in corpus:
        if not phi.compact:
            continue
        left, right = phi.support()
        phi0 = phi.shifted(t0 - left)
        span = (right - left) + reach + 1.0
        grid = np.linspace(t0 - span, t0, n_grid + 1)[:-1]
        vals = np.atleast_1d(apply(k, phi0, grid, q))
        i = int(np.argmax(np.abs(vals)))
        if abs(vals[i]) > worst:
            worst = float(abs(vals[i]))
            witness = (phi.name or repr(phi), float(grid[i]), complex(vals[i]))
    causal = worst < tol
    return CausalityReport(causal, worst, None if causal else witness)
