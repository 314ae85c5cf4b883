"""Curves of constant entropy.

The entropy depends on ``(h, gamma)`` only through ``k``, so its level sets
are the curves of constant ``k``. With ``kappa > 0`` they are

    Case 2  (h > 2):        (h/2)^2 - (gamma/kappa)^2 = 1     hyperbolas
    Case 1a (kappa > 1):    (h/2)^2 + (gamma/kappa)^2 = 1     ellipses
    Case 1b (kappa < 1):    (h/2)^2 + (gamma/kappa)^2 = 1     ellipses

and ``kappa = 1`` is the factorization circle. Every curve ends at the
essential critical point ``(2, 0)``, which is never emitted by the samplers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .entropy import LN2, EntropyValue, entropy_from_kappa, parse_branch
from .errors import CriticalPointError, DomainError
from .phase_diagram import CRITICAL_REGIONS, ModelPoint, Region, as_uniform, classify
from .special_functions import EllipticData

__all__ = [
    "IsoCurve",
    "BRANCHES",
    "kappa_of_point",
    "modulus_of_kappa",
    "sample_curve",
    "approach_essential_point",
    "curve_through_point",
    "kappa_for_entropy",
]

DEFAULT_H_MAX = 6.0
# relative distance of the last sample from the open endpoint (2, 0)
ENDPOINT_GAP = 1e-6

BRANCHES = (
    Region.CASE2,
    Region.CASE1A,
    Region.CASE1B,
    Region.FACTORIZATION_BOUNDARY,
)


@dataclass(frozen=True)
class IsoCurve:
    """Iso-entropy curve: family parameter `kappa` and `branch`.

    ``branch`` is ``Case2`` (hyperbola), ``Case1a`` (ellipse, ``kappa > 1``),
    ``Case1b`` (ellipse, ``kappa < 1``) or ``FactorizationBoundary``
    (the unit circle, ``kappa = 1``).
    """

    kappa: float
    branch: Region
    h_max: float = DEFAULT_H_MAX

    def __post_init__(self):
        branch = parse_branch(self.branch)
        object.__setattr__(self, "branch", branch)
        object.__setattr__(self, "kappa", float(self.kappa))
        if branch not in BRANCHES:
            raise DomainError(f"{branch} is not an iso-curve branch")
        k = self.kappa
        ok = {
            Region.CASE2: k > 0.0,
            Region.CASE1A: k > 1.0,
            Region.CASE1B: 0.0 < k < 1.0,
            Region.FACTORIZATION_BOUNDARY: k == 1.0,
        }[branch]
        if not (ok and math.isfinite(k)):
            raise DomainError(f"kappa = {k} is inconsistent with branch {branch}")
        if branch is Region.CASE2 and not self.h_max > 2.0:
            raise DomainError("h_max must exceed 2 for a hyperbola")

    @property
    def is_hyperbola(self) -> bool:
        return self.branch is Region.CASE2

    def gamma_at(self, h):
        """``gamma`` on the curve as a function of ``h``."""
        h = np.asarray(h, dtype=float)
        if self.is_hyperbola:
            d = (0.5 * h - 1.0) * (0.5 * h + 1.0)
        else:
            d = (1.0 - 0.5 * h) * (1.0 + 0.5 * h)
        return self.kappa * np.sqrt(d)

    def residual(self, h, gamma):
        """Left side minus right side of the curve equation."""
        sign = -1.0 if self.is_hyperbola else 1.0
        return (0.5 * np.asarray(h)) ** 2 + sign * (np.asarray(gamma) / self.kappa) ** 2 - 1.0

    def modulus(self) -> EllipticData:
        return modulus_of_kappa(self.kappa, self.branch)

    def entropy(self) -> EntropyValue:
        return entropy_from_kappa(self.kappa, self.branch)

    def sample(self, n: int) -> list[ModelPoint]:
        return sample_curve(self, n)


def kappa_of_point(p: ModelPoint) -> float:
    """Parameter of the iso-entropy curve through `p`."""
    region = classify(p)
    q = as_uniform(p)
    h, g = q.h, q.gamma
    if region in CRITICAL_REGIONS:
        raise CriticalPointError(
            "no iso-curve through a critical point except as limit"
        )
    if region is Region.FACTORIZATION_BOUNDARY:
        return 1.0
    if region is Region.ISOTROPIC_FREE:
        return 0.0
    if region is Region.CASE2:
        return g / math.sqrt((0.5 * h - 1.0) * (0.5 * h + 1.0))
    return g / math.sqrt((1.0 - 0.5 * h) * (1.0 + 0.5 * h))


def modulus_of_kappa(kappa: float, branch) -> EllipticData:
    """Elliptic data shared by every point on the curve ``(kappa, branch)``."""
    c = IsoCurve(kappa, parse_branch(branch))
    kappa = c.kappa
    if c.branch is Region.FACTORIZATION_BOUNDARY:
        return EllipticData(0.0, 1.0, math.inf)
    if c.branch is Region.CASE2:
        r = math.sqrt(1.0 + kappa * kappa)
        return EllipticData.from_modulus(kappa / r, 1.0 / r)
    if c.branch is Region.CASE1A:
        return EllipticData.from_modulus(
            math.sqrt((kappa - 1.0) * (kappa + 1.0)) / kappa, 1.0 / kappa
        )
    return EllipticData.from_modulus(math.sqrt((1.0 - kappa) * (1.0 + kappa)), kappa)


def _h_grid(c: IsoCurve, n: int) -> np.ndarray:
    # ordered so that the last sample is the one next to (2, 0)
    if c.is_hyperbola:
        span = c.h_max - 2.0
        h = c.h_max - span * np.arange(n) / (n - 1)
        h[-1] = 2.0 + span * ENDPOINT_GAP
    else:
        h = 2.0 * np.arange(n) / (n - 1)
        h[-1] = 2.0 - 2.0 * ENDPOINT_GAP
    return h


def sample_curve(c: IsoCurve, n: int) -> list[ModelPoint]:
    """`n` points on the curve, parameterized by ``h``.

    Ellipses run over ``h`` in ``[0, 2)`` in increasing order and hyperbolas
    over ``(2, h_max]`` in decreasing order, so in both cases the final
    point is the one nearest the excluded endpoint ``(2, 0)``.
    ``gamma`` is computed from the emitted ``h`` itself, which keeps ``k``
    constant along the curve to rounding level.
    """
    if n < 2:
        raise DomainError("sample_curve needs n >= 2")
    h = _h_grid(c, n)
    g = c.gamma_at(h)
    return [ModelPoint(float(a), float(b)) for a, b in zip(h, g)]


def approach_essential_point(c: IsoCurve, depth: int = 12) -> list[ModelPoint]:
    """Points on the curve at ``|h - 2| = 2 * 10^-j``, ``j = 1..depth``.

    Used for limit studies of the essential critical point, which is
    itself never returned.
    """
    if depth < 1:
        raise DomainError("depth must be >= 1")
    sign = 1.0 if c.is_hyperbola else -1.0
    h = 2.0 + sign * 2.0 * 10.0 ** -np.arange(1, depth + 1, dtype=float)
    g = c.gamma_at(h)
    return [ModelPoint(float(a), float(b)) for a, b in zip(h, g)]


def curve_through_point(p: ModelPoint, h_max: float | None = None) -> IsoCurve:
    """The iso-entropy curve on which `p` lies."""
    region = classify(p)
    if region in CRITICAL_REGIONS or region is Region.ISOTROPIC_FREE:
        raise CriticalPointError(f"no iso-curve through {region} points")
    kappa = kappa_of_point(p)
    if h_max is None:
        h_max = max(DEFAULT_H_MAX, as_uniform(p).h)
    return IsoCurve(kappa, region, h_max)


def kappa_for_entropy(entropy: float, branch, bracket: tuple[float, float] | None = None) -> float:
    """Invert ``kappa -> S`` on one branch by root bracketing.

    Case 2 covers ``S > 0``, the Case-1 branches ``S > ln 2``.
    """
    branch = parse_branch(branch)
    entropy = float(entropy)
    if branch is Region.FACTORIZATION_BOUNDARY:
        if entropy != LN2:
            raise DomainError("the circle carries only S = ln 2")
        return 1.0
    floor = 0.0 if branch is Region.CASE2 else LN2
    if not entropy > floor:
        raise DomainError(f"S = {entropy} is not attained on {branch}")

    def f(kappa):
        return entropy_from_kappa(kappa, branch).value - entropy

    if bracket is None:
        bracket = _bracket(f, branch)
    return brentq(f, *bracket, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)


def _bracket(f, branch: Region) -> tuple[float, float]:
    # S increases with kappa on Case2 and Case1a, decreases on Case1b
    if branch is Region.CASE1B:
        lo, hi = 0.5, 0.5
        while f(hi) > 0.0:
            hi = 0.5 * (1.0 + hi)
            if hi >= 1.0:
                raise DomainError("entropy too close to ln 2 to invert")
        while f(lo) < 0.0:
            lo *= 1e-3
            if lo < 1e-150:
                raise DomainError("entropy too large to invert")
        return lo, hi
    if branch is Region.CASE1A:
        lo, hi = 2.0, 2.0
        while f(lo) > 0.0:
            lo = 1.0 + 0.5 * (lo - 1.0)
            if lo <= 1.0:
                raise DomainError("entropy too close to ln 2 to invert")
    else:
        lo, hi = 1.0, 1.0
        while f(lo) > 0.0:
            lo *= 1e-3
            if lo < 1e-150:
                raise DomainError("entropy too small to invert")
    while f(hi) < 0.0:
        hi *= 1e3
        if hi > 1e150:
            raise DomainError("entropy too large to invert")
    return lo, hi
