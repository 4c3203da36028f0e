"""Pseudo-passivity checks for convolution operators.

Kernels are finite sums of shifted Dirac derivatives and exponential-polynomial
tails. The package evaluates the time-domain energy inequalities over a corpus
of smooth test functions, the matching range inequalities of the Laplace
transform, classifies the admissible regions, fits parameters to sampled
transfer values and converts between admittance and scattering form.
"""

__version__ = "0.1.0"

from .errors import DomainError, NumericError, PoleError, UnsupportedError, ValidationError
from .kernel import (
    ZERO,
    DiracTerm,
    ExpPolyTerm,
    Kernel,
    apply,
    convolve,
    dirac,
    exp_poly,
    is_real_kernel,
    load_kernel,
    make_kernel,
    support_lower_bound,
    tilde_transform,
)
from .params import AdmittanceParams, ScatteringParams, load_params
from .testfn import BumpPoly, ExpWindow, QuadratureSpec, default_corpus, evaluate, integrate
from .timedomain import (
    admittance_residual,
    causality_check,
    falsify,
    nonneg_definite_residual,
    scattering_residual,
    weak_passivity_residual,
)
from .laplace import HalfPlaneGrid, TransferSample, laplace_eval, sweep
from .geometry import classify_admittance, classify_scattering, contains, region_of_params
from .certify import brute_force_oracle, build_constraints, check_feasible, fit_max_margin
from .convert import cayley, convert_samples, params_adm_to_scat, params_scat_to_adm
