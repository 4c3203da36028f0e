"""Admittance <-> scattering conversion.

Parameters map linearly (``F = c + d``, ``G = c - d``); transfer values map
through ``w -> (1 - w) / (1 + w)``, which is its own inverse. Conversion at
the kernel level would need a convolution inverse of ``delta_0 + Y``, which
generally leaves the closed-form class, so only samples are converted. A
sample with ``1 + w`` near zero is where that inverse breaks down; such
samples are dropped and reported.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import PoleError, ValidationError
from .laplace import TransferSample
from .params import AdmittanceParams, ScatteringParams

POLE_TOL = 1e-9
DIRECTIONS = ("adm->scat", "scat->adm")


def params_adm_to_scat(p):
    return ScatteringParams(tuple(c + d for c, d in zip(p.c, p.d)),
                            tuple(c - d for c, d in zip(p.c, p.d)))


def params_scat_to_adm(p):
    return AdmittanceParams(tuple((F + G) / 2 for F, G in zip(p.F, p.G)),
                            tuple((F - G) / 2 for F, G in zip(p.F, p.G)))


def convert_params(p):
    if isinstance(p, AdmittanceParams):
        return params_adm_to_scat(p)
    if isinstance(p, ScatteringParams):
        return params_scat_to_adm(p)
    raise TypeError("p must be AdmittanceParams or ScatteringParams")


def cayley(w, tol=POLE_TOL):
    """``(1 - w) / (1 + w)``; raises :class:`PoleError` when ``|1 + w| < tol``."""
    w = complex(w)
    den = 1.0 + w
    if abs(den) < tol:
        raise PoleError(f"|1 + w| = {abs(den):.3g} below pole tolerance {tol:g} at w = {w}")
    return (1.0 - w) / den


@dataclass
class ConversionReport:
    direction: str
    samples: list = field(default_factory=list)
    pole_warnings: list = field(default_factory=list)

    def to_dict(self):
        return {
            "direction": self.direction,
            "n_converted": len(self.samples),
            "pole_warnings": [[s.real, s.imag] for s in self.pole_warnings],
        }


def convert_samples(samples, direction="adm->scat", tol=POLE_TOL):
    """Cayley-map every sample; samples at the pole are excluded and listed."""
    if direction not in DIRECTIONS:
        raise ValidationError(f"direction must be one of {DIRECTIONS}")
    report = ConversionReport(direction)
    for smp in samples:
        try:
            report.samples.append(TransferSample(smp.s, cayley(smp.w, tol)))
        except PoleError:
            report.pole_warnings.append(complex(smp.s))
    return report
