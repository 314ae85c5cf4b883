"""Complete elliptic integral of the first kind and related helpers.

``I(k)`` is evaluated through the arithmetic-geometric mean,

    I(k) = pi / (2 * agm(1, k')),    k' = sqrt(1 - k^2),

which converges quadratically and needs no special handling of the
integrable endpoint singularity. Quadrature is kept for the tests only.

All parameters here are *moduli* ``k`` (not the parameter ``m = k^2`` used
by scipy and Abramowitz & Stegun).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericalFailure

__all__ = [
    "agm",
    "complete_elliptic_K",
    "tau0_of",
    "binary_entropy",
    "complement",
    "EllipticData",
]

AGM_RTOL = 1e-16
AGM_MAX_ITER = 64


def agm(a: float, b: float, max_iter: int = AGM_MAX_ITER) -> float:
    """Arithmetic-geometric mean of two positive numbers.

    Iterates ``a, b <- (a + b)/2, sqrt(a b)`` until ``|a - b| <= 1e-16 a``
    or the two iterates are adjacent doubles.

    Raises
    ------
    DomainError
        If either argument is not a positive finite number.
    NumericalFailure
        If the iteration has not terminated after `max_iter` steps.
    """
    a = float(a)
    b = float(b)
    if not (math.isfinite(a) and math.isfinite(b)) or a <= 0.0 or b <= 0.0:
        raise DomainError(f"agm requires positive finite arguments, got ({a}, {b})")
    for _ in range(max_iter):
        diff = abs(a - b)
        if diff <= AGM_RTOL * a or diff <= math.ulp(a):
            return 0.5 * (a + b)
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    raise NumericalFailure(f"agm did not converge in {max_iter} iterations")


def complement(k: float) -> float:
    """Complementary modulus ``sqrt(1 - k^2)``, factored to limit cancellation."""
    return math.sqrt((1.0 - k) * (1.0 + k))


def _check_modulus(k: float) -> float:
    k = float(k)
    if not math.isfinite(k) or k < 0.0 or k > 1.0:
        raise DomainError(f"elliptic modulus must lie in [0, 1], got {k}")
    return k


def complete_elliptic_K(k: float, k_prime: float | None = None) -> float:
    """Complete elliptic integral of the first kind ``I(k)``.

    Parameters
    ----------
    k : float
        Modulus in ``[0, 1]``.
    k_prime : float, optional
        Complementary modulus. Pass it when it is known analytically;
        recomputing it from ``k`` loses relative accuracy as ``k -> 1``.
        When given it takes precedence, so ``k`` may round to 1.0 while
        ``k_prime`` is still positive.

    Returns
    -------
    float
        ``I(k)``. At ``k = 1`` the integral diverges and ``math.inf`` is
        returned, so callers have to branch on criticality explicitly.
    """
    k = _check_modulus(k)
    if k_prime is None:
        k_prime = complement(k)
    if k_prime == 0.0:
        return math.inf
    return math.pi / (2.0 * agm(1.0, k_prime))


def tau0_of(k: float, k_prime: float | None = None) -> float:
    """Ratio ``I(k') / I(k)``.

    Degenerate ends return limits: ``inf`` at ``k = 0`` and ``0`` at ``k = 1``.
    """
    k = _check_modulus(k)
    if k_prime is None:
        k_prime = complement(k)
    if k == 0.0:
        return math.inf
    if k_prime == 0.0:
        return 0.0
    # I(k') / I(k) = agm(1, k') / agm(1, k)
    return agm(1.0, k_prime) / agm(1.0, k)


def binary_entropy(x):
    """Binary entropy ``-x ln x - (1-x) ln(1-x)`` in nats, with ``0 ln 0 = 0``.

    Accepts a scalar or an array; scalars give back a float.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise DomainError("binary_entropy requires probabilities in [0, 1]")
    y = 1.0 - arr
    with np.errstate(divide="ignore", invalid="ignore"):
        a = np.where(arr > 0.0, -arr * np.log(np.where(arr > 0.0, arr, 1.0)), 0.0)
        b = np.where(y > 0.0, -y * np.log(np.where(y > 0.0, y, 1.0)), 0.0)
    out = a + b
    if out.ndim == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class EllipticData:
    """Modulus ``k``, its complement ``k'`` and ``tau0 = I(k')/I(k)``."""

    k: float
    k_prime: float
    tau0: float

    @classmethod
    def from_modulus(cls, k: float, k_prime: float | None = None) -> "EllipticData":
        """Build from ``k`` (and optionally an exactly known ``k'``)."""
        k = _check_modulus(k)
        if k_prime is None:
            k_prime = complement(k)
        if k_prime == 0.0:
            raise DomainError("k = 1 is critical; no EllipticData")
        return cls(k=k, k_prime=float(k_prime), tau0=tau0_of(k, k_prime))

    @property
    def K(self) -> float:
        """``I(k)``."""
        return complete_elliptic_K(self.k, self.k_prime)

    @property
    def K_prime(self) -> float:
        """``I(k')``."""
        return complete_elliptic_K(self.k_prime, self.k)
