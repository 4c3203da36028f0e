"""Closed-form Laplace transforms of kernels and the frequency-domain range checks."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ValidationError
from .kernel import laplace_tail
from .params import AdmittanceParams, ScatteringParams
from .testfn import QuadratureSpec, integrate


@dataclass(frozen=True)
class TransferSample:
    s: complex
    w: complex

    def __post_init__(self):
        object.__setattr__(self, "s", complex(self.s))
        object.__setattr__(self, "w", complex(self.w))
        if not self.s.real > 0:
            raise ValidationError(f"sample point {self.s} is not in the open right half-plane")
        if not (math.isfinite(self.w.real) and math.isfinite(self.w.imag)):
            raise ValidationError(f"non-finite transfer value at s = {self.s}")


@dataclass(frozen=True)
class HalfPlaneGrid:
    """Rectangular grid in the right half-plane.

    Default: ``Re[s]`` log-spaced over ``[1e-2, 1e2]`` (25 points) and
    ``Im[s]`` linear over ``[-100, 100]`` (41 points).
    """

    re_range: tuple = (1e-2, 1e2)
    im_range: tuple = (-100.0, 100.0)
    n_re: int = 25
    n_im: int = 41
    spacing: str = "log-in-Re"

    def __post_init__(self):
        if not self.re_range[0] > 0 or self.re_range[1] < self.re_range[0]:
            raise ValidationError("grid real range must satisfy 0 < min <= max")
        if self.n_re < 1 or self.n_im < 1:
            raise ValidationError("grid sizes must be positive")
        if self.spacing not in ("linear", "log-in-Re"):
            raise ValidationError(f"unknown spacing {self.spacing!r}")

    def points(self):
        """Grid points, real part varying slowest."""
        lo, hi = self.re_range
        if self.spacing == "log-in-Re":
            re = np.geomspace(lo, hi, self.n_re)
        else:
            re = np.linspace(lo, hi, self.n_re)
        im = np.linspace(self.im_range[0], self.im_range[1], self.n_im)
        return (re[:, None] + 1j * im[None, :]).ravel()

    @classmethod
    def from_string(cls, text):
        """Parse ``re0,re1,nre,im0,im1,nim``."""
        try:
            a, b, n, c, d, m = text.split(",")
            return cls((float(a), float(b)), (float(c), float(d)), int(n), int(m))
        except ValueError as exc:
            raise ValidationError(f"bad grid spec {text!r}; expected re0,re1,nre,im0,im1,nim") from exc


DEFAULT_GRID = HalfPlaneGrid()


def convergence_abscissa(k):
    """``max Re[rate]`` over the tails; ``-inf`` for purely Dirac kernels."""
    return max((r.rate.real for r in k.regular), default=-math.inf)


def laplace_eval(k, s):
    """``L(k)(s)``: Dirac terms give ``coeff s^m e^{-s loc}``, tails are integrated exactly."""
    s = complex(s)
    total = 0j
    for d in k.diracs:
        total += d.coeff * s ** d.order * np.exp(-s * d.location)
    for r in k.regular:
        mu = s - r.rate
        if mu.real <= 0:
            raise DomainError(f"Laplace integral diverges at s = {s} (tail rate {r.rate})")
        total += complex(laplace_tail(r.poly, mu, r.start))
    return complex(total)


def laplace_quadrature(k, s, q=QuadratureSpec(abs_tol=1e-13)):
    """Laplace transform by direct numerical integration of the tails.

    Independent check on :func:`laplace_eval`: Dirac terms are exact, each
    tail is integrated up to where ``|p(t)| e^{(Re rate - Re s) t}`` has
    dropped below ``q.abs_tol`` relative to its size at the start.
    """
    s = complex(s)
    total = 0j
    for d in k.diracs:
        total += d.coeff * s ** d.order * np.exp(-s * d.location)
    for r in k.regular:
        decay = s.real - r.rate.real
        if decay <= 0:
            raise DomainError(f"Laplace integral diverges at s = {s}")
        deg = len(r.poly) - 1
        hi = r.start + (math.log(1.0 / q.abs_tol) + 2.0) / decay
        for _ in range(200):
            env = max(1.0, abs(hi)) ** deg * math.exp(-decay * (hi - r.start))
            if env * (hi - r.start) < q.abs_tol:
                break
            hi += 1.0 / decay
        total += integrate(lambda t, r=r: r(t) * np.exp(-s * t), r.start, hi, q)
    return complex(total)


def admittance_range_residual(w, s, p):
    """``Re[w] - sum_j |s|^{2j} (c_j + |w|^2 d_j)``."""
    w, s = complex(w), complex(s)
    ab = abs(s) ** 2
    aw = abs(w) ** 2
    total = w.real
    for j in range(p.N + 1):
        total -= ab ** j * (p.c[j] + aw * p.d[j])
    return total


def scattering_range_residual(w, s, p):
    """``sum_j |s|^{2j} ((kron_j - F_j) - (kron_j + F_j)|w|^2) - 2 sum_j G_j |s|^{2j} Re[w]``."""
    w, s = complex(w), complex(s)
    ab = abs(s) ** 2
    aw = abs(w) ** 2
    total = 0.0
    for j in range(p.N + 1):
        kron = 1.0 if j == 0 else 0.0
        total += ab ** j * ((kron - p.F[j]) - (kron + p.F[j]) * aw - 2.0 * p.G[j] * w.real)
    return total


def range_residual(w, s, p):
    if isinstance(p, AdmittanceParams):
        return admittance_range_residual(w, s, p)
    if isinstance(p, ScatteringParams):
        return scattering_range_residual(w, s, p)
    raise TypeError("p must be AdmittanceParams or ScatteringParams")


@dataclass
class SweepResult:
    s: np.ndarray
    w: np.ndarray
    residual: np.ndarray
    skipped: list = field(default_factory=list)
    tempered: bool = True

    @property
    def argmin(self):
        return int(np.argmin(self.residual)) if self.residual.size else None

    @property
    def min_residual(self):
        return float(self.residual.min()) if self.residual.size else math.nan

    @property
    def argmin_s(self):
        i = self.argmin
        return None if i is None else complex(self.s[i])

    def samples(self):
        return [TransferSample(s, w) for s, w in zip(self.s, self.w)]


def sweep(k, grid=DEFAULT_GRID, p=None):
    """Transfer values and range residuals at every grid point.

    Points where the transform diverges are listed in ``skipped``. The
    minimum is over the grid only; nothing is claimed between grid points.
    """
    if p is None:
        p = AdmittanceParams.zero()
    ss, ws, rs, skipped = [], [], [], []
    for s in grid.points():
        try:
            w = laplace_eval(k, s)
        except DomainError:
            skipped.append(complex(s))
            continue
        ss.append(s)
        ws.append(w)
        rs.append(range_residual(w, s, p))
    return SweepResult(np.array(ss, dtype=complex), np.array(ws, dtype=complex),
                       np.array(rs, dtype=float), skipped, k.is_tempered)


# -- TransferSample CSV ------------------------------------------------------

CSV_HEADER = ("s_re", "s_im", "w_re", "w_im")


def _fmt(x):
    return format(float(x), ".17g")


def write_samples(path_or_file, samples, extra=None):
    """Write samples as ``s_re,s_im,w_re,w_im`` (plus optional named columns).

    ``extra`` is a mapping of column name to a sequence aligned with
    ``samples``.
    """
    extra = extra or {}
    own = isinstance(path_or_file, str)
    fh = open(path_or_file, "w", newline="") if own else path_or_file
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(list(CSV_HEADER) + list(extra))
        for i, smp in enumerate(samples):
            row = [_fmt(smp.s.real), _fmt(smp.s.imag), _fmt(smp.w.real), _fmt(smp.w.imag)]
            row += [_fmt(col[i]) for col in extra.values()]
            writer.writerow(row)
    finally:
        if own:
            fh.close()


def read_samples(path):
    """Read a TransferSample CSV; extra columns are ignored."""
    out = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration as exc:
            raise ValidationError(f"{path}: empty sample file") from exc
        if tuple(h.strip() for h in header[:4]) != CSV_HEADER:
            raise ValidationError(f"{path}: header must start with {','.join(CSV_HEADER)}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                sr, si, wr, wi = (float(v) for v in row[:4])
            except ValueError as exc:
                raise ValidationError(f"{path}:{lineno}: {exc}") from exc
            out.append(TransferSample(complex(sr, si), complex(wr, wi)))
    return out
