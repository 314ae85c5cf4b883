"""Asymptotic block entanglement entropy of the XY spin chain.

Closed forms, series and iso-entropy curves over the whole ``(h, gamma)``
phase diagram, the staggered-field mapping, and a finite-block free-fermion
oracle to check them against.
"""

from .entropy import (
    LN2,
    EntropyValue,
    Method,
    asymptotic_near_h2_above,
    asymptotic_near_h2_below,
    asymptotic_near_XX,
    entropy_closed_form,
    entropy_from_kappa,
    entropy_series,
)
from .errors import (
    CriticalPointError,
    DomainError,
    NearCriticalError,
    NumericalFailure,
    XYEntError,
)
from .finite_oracle import block_entropy_finite
from .iso_curves import IsoCurve, curve_through_point, kappa_of_point, modulus_of_kappa, sample_curve
from .phase_diagram import (
    ModelPoint,
    Region,
    classify,
    elliptic_parameter,
    staggered_elliptic_parameter,
    staggered_to_uniform,
)
from .special_functions import EllipticData, agm, complete_elliptic_K, tau0_of

__version__ = "0.1.0"
