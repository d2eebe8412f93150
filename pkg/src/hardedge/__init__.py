"""hardedge: smallest-eigenvalue gap probabilities of the Jacobi unitary
ensemble, computed by four independent routes (exact finite-n linear
algebra, Painleve VI integration, Nystrom discretization of the Bessel
kernel, asymptotic series) that cross-validate each other.
"""

__version__ = "0.1.0"

from .precision import GUARD_BITS, PrecisionCtx, PrecisionError
from .finite_n import EnsembleParams, default_bits, log_prob_smallest
from .fredholm import log_fredholm_det
from .painleve import IntegratorOpts, integrate_w
from .mc import RngSpec, sample_spectrum, survival_estimate

__all__ = [
    "PrecisionCtx",
    "PrecisionError",
    "GUARD_BITS",
    "EnsembleParams",
    "default_bits",
    "log_prob_smallest",
    "log_fredholm_det",
    "IntegratorOpts",
    "integrate_w",
    "RngSpec",
    "sample_spectrum",
    "survival_estimate",
    "__version__",
]
