"""Parameter vectors of the two pseudo-passivity inequalities."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .errors import ValidationError


def _vector(name, values, n):
    vals = tuple(float(v) for v in values)
    if len(vals) != n:
        raise ValidationError(f"{name} must have length N+1 = {n}, got {len(vals)}")
    if not all(math.isfinite(v) for v in vals):
        raise ValidationError(f"{name} has non-finite entries")
    return vals


@dataclass(frozen=True)
class AdmittanceParams:
    """Weights ``c_j`` on ``|phi^(j)|^2`` and ``d_j`` on ``|psi^(j)|^2``, ``j = 0..N``."""

    c: tuple
    d: tuple

    kind = "admittance"

    def __post_init__(self):
        c = tuple(float(v) for v in self.c)
        object.__setattr__(self, "c", _vector("c", c, len(c)))
        object.__setattr__(self, "d", _vector("d", self.d, len(c)))
        if not c:
            raise ValidationError("parameter vectors must be non-empty")

    @property
    def N(self):
        return len(self.c) - 1

    @classmethod
    def zero(cls, N=0):
        return cls((0.0,) * (N + 1), (0.0,) * (N + 1))

    def as_vector(self):
        return self.c + self.d

    def to_dict(self):
        return {"kind": self.kind, "N": self.N, "c": list(self.c), "d": list(self.d)}


@dataclass(frozen=True)
class ScatteringParams:
    """Weights ``F_j`` and ``G_j`` of the scattering inequality, ``j = 0..N``."""

    F: tuple
    G: tuple

    kind = "scattering"

    def __post_init__(self):
        F = tuple(float(v) for v in self.F)
        object.__setattr__(self, "F", _vector("F", F, len(F)))
        object.__setattr__(self, "G", _vector("G", self.G, len(F)))
        if not F:
            raise ValidationError("parameter vectors must be non-empty")

    @property
    def N(self):
        return len(self.F) - 1

    @classmethod
    def zero(cls, N=0):
        return cls((0.0,) * (N + 1), (0.0,) * (N + 1))

    def as_vector(self):
        return self.F + self.G

    def to_dict(self):
        return {"kind": self.kind, "N": self.N, "F": list(self.F), "G": list(self.G)}


def params_from_vector(kind, x):
    x = tuple(float(v) for v in x)
    if len(x) % 2:
        raise ValidationError("parameter vector must have even length 2(N+1)")
    half = len(x) // 2
    if kind == "admittance":
        return AdmittanceParams(x[:half], x[half:])
    if kind == "scattering":
        return ScatteringParams(x[:half], x[half:])
    raise ValidationError(f"unknown parameter kind {kind!r}")


def params_from_dict(data):
    """Read ``{"kind": ..., "c": [...], "d": [...]}`` or the ``F``/``G`` variant."""
    if not isinstance(data, dict):
        raise ValidationError("params must be a JSON object")
    kind = data.get("kind")
    if kind is None:
        kind = "scattering" if "F" in data else "admittance"
    try:
        if kind == "admittance":
            p = AdmittanceParams(data["c"], data["d"])
        elif kind == "scattering":
            p = ScatteringParams(data["F"], data["G"])
        else:
            raise ValidationError(f"unknown parameter kind {kind!r}")
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed params: {exc}") from exc
    if "N" in data and int(data["N"]) != p.N:
        raise ValidationError(f"declared N={data['N']} does not match vector length {p.N + 1}")
    return p


def load_params(path):
    with open(path) as fh:
        try:
            return params_from_dict(json.load(fh))
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: {exc}") from exc
