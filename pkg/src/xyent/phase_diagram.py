"""Phase diagram of the XY chain in a uniform or staggered transverse field.

The uniform-field chain is

    H = -sum_n (1+gamma) sx_n sx_{n+1} + (1-gamma) sy_n sy_{n+1} + h sz_n

with single-particle spectrum ``sqrt((cos q - h/2)^2 + gamma^2 sin^2 q)``.
Everything depends only on ``(|h|, |gamma|)``.

The staggered-field chain with parameters ``(h', gamma')`` is mapped onto
the uniform one by ``gamma = 1/gamma'``, ``h = h'/gamma'`` (and an energy
rescaling ``J`` that does not affect the ground state). All staggered
quantities go through that map.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import CriticalPointError, DomainError
from .special_functions import EllipticData

__all__ = [
    "ModelPoint",
    "Region",
    "CRITICAL_REGIONS",
    "CASE_ONE",
    "FACTORIZATION_TOL",
    "classify",
    "elliptic_parameter",
    "region_and_modulus",
    "dispersion",
    "product_state_angle",
    "staggered_to_uniform",
    "uniform_to_staggered",
    "as_uniform",
    "staggered_elliptic_parameter",
    "staggered_modulus_direct",
    "staggered_dispersion",
]

FACTORIZATION_TOL = 1e-12


class Region(str, Enum):
    CASE2 = "Case2"
    CASE1A = "Case1a"
    CASE1B = "Case1b"
    FACTORIZATION_BOUNDARY = "FactorizationBoundary"
    CRITICAL_H2 = "CriticalH2"
    CRITICAL_XX = "CriticalXX"
    ESSENTIAL_CRITICAL_POINT = "EssentialCriticalPoint"
    ISOTROPIC_FREE = "IsotropicFree"

    def __str__(self) -> str:
        return self.value

    @property
    def is_critical(self) -> bool:
        return self in CRITICAL_REGIONS


CRITICAL_REGIONS = frozenset(
    {Region.CRITICAL_H2, Region.CRITICAL_XX, Region.ESSENTIAL_CRITICAL_POINT}
)
CASE_ONE = frozenset({Region.CASE1A, Region.CASE1B, Region.FACTORIZATION_BOUNDARY})


@dataclass(frozen=True)
class ModelPoint:
    """A point of the phase diagram.

    ``staggered=True`` marks ``(h, gamma)`` as staggered-field coordinates
    ``(h', gamma')``.
    """

    h: float
    gamma: float
    staggered: bool = False

    def __post_init__(self):
        object.__setattr__(self, "h", float(self.h))
        object.__setattr__(self, "gamma", float(self.gamma))

    def canonical(self) -> "ModelPoint":
        """Fold into the first quadrant."""
        return ModelPoint(abs(self.h), abs(self.gamma), self.staggered)


def _check_finite(p: ModelPoint) -> None:
    if not (math.isfinite(p.h) and math.isfinite(p.gamma)):
        raise DomainError(f"non-finite coordinates ({p.h}, {p.gamma})")


def staggered_to_uniform(p: ModelPoint) -> tuple[ModelPoint, float]:
    """Map staggered coordinates ``(h', gamma')`` to the uniform chain.

    Returns the uniform point ``(h'/gamma', 1/gamma')`` and the energy
    scale ``J = 1/gamma'``.
    """
    if not p.staggered:
        raise DomainError("staggered_to_uniform expects a staggered point")
    _check_finite(p)
    hs, gs = abs(p.h), abs(p.gamma)
    if gs == 0.0:
        raise DomainError("gamma' = 0: the staggered mapping is singular")
    gamma = 1.0 / gs
    return ModelPoint(hs / gs, gamma), gamma


def uniform_to_staggered(p: ModelPoint) -> tuple[ModelPoint, float]:
    """Forward map ``gamma' = 1/gamma``, ``h' = h/gamma``, ``J = gamma``."""
    if p.staggered:
        raise DomainError("uniform_to_staggered expects a uniform point")
    _check_finite(p)
    h, g = abs(p.h), abs(p.gamma)
    if g == 0.0:
        raise DomainError("gamma = 0 has no staggered image")
    return ModelPoint(h / g, 1.0 / g, staggered=True), g


def as_uniform(p: ModelPoint) -> ModelPoint:
    """Canonical uniform-field point equivalent to `p`."""
    if p.staggered:
        return staggered_to_uniform(p)[0]
    _check_finite(p)
    return p.canonical()


def _classify_uniform(h: float, g: float, tol: float) -> Region:
    if g == 0.0:
        if h == 2.0:
            return Region.ESSENTIAL_CRITICAL_POINT
        return Region.CRITICAL_XX if h < 2.0 else Region.ISOTROPIC_FREE
    if h == 2.0:
        return Region.CRITICAL_H2
    if h > 2.0:
        return Region.CASE2
    # (h/2)^2 + gamma^2 - 1, factored for accuracy near h = 2
    excess = g * g - (1.0 - 0.5 * h) * (1.0 + 0.5 * h)
    if abs(excess) <= tol:
        return Region.FACTORIZATION_BOUNDARY
    return Region.CASE1A if excess > 0.0 else Region.CASE1B


def classify(p: ModelPoint, tol: float = FACTORIZATION_TOL) -> Region:
    """Region of the phase diagram containing `p`.

    Staggered points are classified through their uniform image. The
    factorization circle ``(h/2)^2 + gamma^2 = 1`` is matched with absolute
    tolerance `tol`; the critical lines ``gamma = 0`` and ``h = 2`` are
    matched exactly.
    """
    q = as_uniform(p)
    return _classify_uniform(q.h, q.gamma, tol)


def _modulus(h: float, g: float, region: Region) -> EllipticData:
    if region in CRITICAL_REGIONS:
        raise CriticalPointError(
            f"critical point ({h}, {g}) [{region}]: k = 1 or undefined"
        )
    if region in (Region.FACTORIZATION_BOUNDARY, Region.ISOTROPIC_FREE):
        return EllipticData(k=0.0, k_prime=1.0, tau0=math.inf)
    below = (1.0 - 0.5 * h) * (1.0 + 0.5 * h)  # 1 - (h/2)^2
    if region is Region.CASE2:
        root = math.sqrt(-below + g * g)
        k = g / root
        kp = math.sqrt(-below) / root
    elif region is Region.CASE1A:
        k = math.sqrt(g * g - below) / g
        kp = math.sqrt(below) / g
    else:
        k = math.sqrt((below - g * g) / below)
        kp = g / math.sqrt(below)
    if kp == 0.0:
        raise CriticalPointError(f"({h}, {g}) is numerically on a critical line")
    return EllipticData.from_modulus(k, kp)


def region_and_modulus(
    p: ModelPoint, tol: float = FACTORIZATION_TOL
) -> tuple[Region, EllipticData]:
    """Classify `p` and compute its elliptic data in one pass."""
    q = as_uniform(p)
    region = _classify_uniform(q.h, q.gamma, tol)
    return region, _modulus(q.h, q.gamma, region)


def elliptic_parameter(p: ModelPoint, tol: float = FACTORIZATION_TOL) -> EllipticData:
    """Elliptic modulus ``k``, ``k'`` and ``tau0`` at `p`.

    ``k'`` is formed directly from ``(h, gamma)`` rather than as
    ``sqrt(1 - k^2)``, which keeps full relative accuracy near the
    critical lines.

    Raises
    ------
    CriticalPointError
        On ``h = 2``, on ``gamma = 0, h < 2`` and at ``(2, 0)``.
    """
    return region_and_modulus(p, tol)[1]


def dispersion(p: ModelPoint, q):
    """Single-particle energy ``sqrt((cos q - h/2)^2 + gamma^2 sin^2 q)``."""
    if p.staggered:
        raise DomainError("use staggered_dispersion for staggered points")
    _check_finite(p)
    q = np.asarray(q, dtype=float)
    out = np.hypot(np.cos(q) - 0.5 * p.h, p.gamma * np.sin(q))
    return float(out) if out.ndim == 0 else out


def staggered_dispersion(p: ModelPoint, q):
    """Staggered-field spectrum ``sqrt((gamma' cos q - h'/2)^2 + sin^2 q)``."""
    _check_finite(p)
    q = np.asarray(q, dtype=float)
    out = np.hypot(p.gamma * np.cos(q) - 0.5 * p.h, np.sin(q))
    return float(out) if out.ndim == 0 else out


def product_state_angle(gamma: float) -> float:
    """Angle of the factorized ground states on the circle.

    Returns ``theta`` in ``[0, pi/4]`` with
    ``cos^2(2 theta) = (1 - gamma)/(1 + gamma)``.
    """
    gamma = float(gamma)
    if not (0.0 <= gamma <= 1.0):
        raise DomainError(f"product_state_angle needs 0 <= gamma <= 1, got {gamma}")
    return 0.5 * math.acos(math.sqrt((1.0 - gamma) / (1.0 + gamma)))


def staggered_elliptic_parameter(
    p: ModelPoint, tol: float = FACTORIZATION_TOL
) -> EllipticData:
    """Elliptic data of a staggered point, via its uniform image."""
    if not p.staggered:
        raise DomainError("staggered_elliptic_parameter expects a staggered point")
    return elliptic_parameter(staggered_to_uniform(p)[0], tol)


def staggered_modulus_direct(p: ModelPoint, tol: float = FACTORIZATION_TOL) -> float:
    """Modulus ``k`` from closed forms written in staggered coordinates.

    Case 2 (``h' > 2 gamma'``):   ``k = 1/sqrt((h'/2)^2 - gamma'^2 + 1)``
    Case 1a:                      ``k = sqrt((h'/2)^2 - gamma'^2 + 1)``
    Case 1b:                      ``k = sqrt(gamma'^2 - (h'/2)^2 - 1) / sqrt(gamma'^2 - (h'/2)^2)``

    Note the squared ``(h'/2)^2``; these are what composing the uniform
    moduli with the staggered map gives. Kept as an independent check on
    :func:`staggered_elliptic_parameter`.
    """
    region = classify(p, tol)
    if region in CRITICAL_REGIONS:
        raise CriticalPointError(f"staggered point maps to a critical region [{region}]")
    if region in (Region.FACTORIZATION_BOUNDARY, Region.ISOTROPIC_FREE):
        return 0.0
    hs, gs = abs(p.h), abs(p.gamma)
    x = (0.5 * hs) ** 2 - gs * gs + 1.0
    if region is Region.CASE2:
        return 1.0 / math.sqrt(x)
    if region is Region.CASE1A:
        return math.sqrt(x)
    return math.sqrt(-x) / math.sqrt(gs * gs - (0.5 * hs) ** 2)
