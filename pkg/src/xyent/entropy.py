"""Limiting block entropy of the XY chain.

Three exact routes, all in nats:

* the convergent series over the zeros ``lambda_m = tanh((m + (1-sigma)/2) pi tau0)``,
* the summed closed forms in ``(k, k')``,
* the same closed forms rewritten in the iso-curve parameter ``kappa``.

Plus the leading logarithmic expansions near the critical lines.
Critical points never raise from :func:`entropy_closed_form`; they come back
as marker values (``divergent`` on the critical lines, ``undefined`` at the
essential critical point ``(2, 0)``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .errors import CriticalPointError, DomainError, NearCriticalError
from .phase_diagram import (
    CASE_ONE,
    CRITICAL_REGIONS,
    ModelPoint,
    Region,
    as_uniform,
    classify,
    region_and_modulus,
)
from .special_functions import complete_elliptic_K

__all__ = [
    "Method",
    "EntropyValue",
    "LambdaSequence",
    "LN2",
    "lambda_zero",
    "sigma_for",
    "series_terms",
    "series_tail_bound",
    "entropy_series",
    "entropy_closed_form",
    "closed_form_from_modulus",
    "entropy_from_kappa",
    "asymptotic_near_XX",
    "asymptotic_near_h2_below",
    "asymptotic_near_h2_above",
    "parse_branch",
]

LN2 = math.log(2.0)
SERIES_TOL = 1e-12
NEAR_CRITICAL_K = 1.0 - 1e-6
MAX_SERIES_TERMS = 10**6


class Method(str, Enum):
    CLOSED_FORM = "ClosedForm"
    SERIES = "Series"
    KAPPA = "Kappa"
    ASYMPTOTIC = "Asymptotic"
    ORACLE = "Oracle"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class EntropyValue:
    """Entropy in nats, or a divergence / undefined marker."""

    value: float | None
    method: Method
    divergent: bool = False
    undefined: bool = False
    err_estimate: float | None = None

    @classmethod
    def finite(cls, value: float, method: Method, err_estimate: float | None = None):
        return cls(float(value), method, err_estimate=err_estimate)

    @classmethod
    def marker(cls, region: Region, method: Method) -> "EntropyValue":
        """Marker for a critical region."""
        if region is Region.ESSENTIAL_CRITICAL_POINT:
            return cls(None, method, undefined=True)
        if region in CRITICAL_REGIONS:
            return cls(None, method, divergent=True)
        raise DomainError(f"{region} is not critical")

    @property
    def is_finite(self) -> bool:
        return self.value is not None

    def __float__(self) -> float:
        if self.divergent:
            return math.inf
        if self.undefined:
            return math.nan
        return self.value

    def in_bits(self) -> "EntropyValue":
        if not self.is_finite:
            return self
        err = None if self.err_estimate is None else self.err_estimate / LN2
        return replace(self, value=self.value / LN2, err_estimate=err)


def parse_branch(branch) -> Region:
    """Accept a :class:`Region` or its string name (``"Boundary"`` allowed)."""
    if isinstance(branch, Region):
        return branch
    if branch in ("Boundary", "boundary"):
        return Region.FACTORIZATION_BOUNDARY
    try:
        return Region(branch)
    except ValueError:
        raise DomainError(f"unknown branch {branch!r}") from None


def sigma_for(region: Region) -> int:
    """``sigma = 1`` on the Case-1 side (including the circle), else 0."""
    if region in CRITICAL_REGIONS:
        raise CriticalPointError(f"no lambda sequence at a critical point [{region}]")
    return 1 if region in CASE_ONE else 0


def lambda_zero(m: int, tau0: float, sigma: int) -> float:
    """``tanh((m + (1 - sigma)/2) pi tau0)``."""
    if sigma not in (0, 1):
        raise DomainError(f"sigma must be 0 or 1, got {sigma}")
    if not tau0 > 0:
        raise DomainError(f"tau0 must be positive, got {tau0}")
    shifted = m + 0.5 * (1 - sigma)
    if shifted == 0:
        return 0.0
    return math.tanh(shifted * math.pi * tau0)


@dataclass(frozen=True)
class LambdaSequence:
    """The zeros ``lambda_m`` for a given ``sigma`` and ``tau0``, indexed by m."""

    sigma: int
    tau0: float

    def __post_init__(self):
        if self.sigma not in (0, 1):
            raise DomainError(f"sigma must be 0 or 1, got {self.sigma}")
        if not self.tau0 > 0:
            raise DomainError(f"tau0 must be positive, got {self.tau0}")

    def __getitem__(self, m: int) -> float:
        return lambda_zero(m, self.tau0, self.sigma)

    def shifted(self, M: int) -> np.ndarray:
        """Shifted indices ``m + (1-sigma)/2`` with ``|.| <= M + (1-sigma)/2``."""
        s = 0.5 * (1 - self.sigma)
        m = np.arange(-M - (1 - self.sigma), M + 1)
        return m + s

    def values(self, M: int) -> np.ndarray:
        return np.tanh(self.shifted(M) * math.pi * self.tau0)


def series_terms(x):
    """Series terms ``(1 + tanh x) ln(2 / (1 + tanh x))``, evaluated stably.

    For ``x < 0`` the factor ``1 + tanh x`` underflows towards 0 while the
    logarithm grows like ``2|x|``; both are formed from ``exp(-2|x|)``.
    """
    x = np.asarray(x, dtype=float)
    a = np.abs(x)
    e = np.exp(-2.0 * a)
    one_plus = np.where(x >= 0, 2.0 / (1.0 + e), 2.0 * e / (1.0 + e))
    log_part = np.where(x >= 0, np.log1p(e), 2.0 * a + np.log1p(e))
    return one_plus * log_part


def series_tail_bound(M: int, tau0: float, sigma: int) -> float:
    """Upper bound on the terms dropped when ``|shifted index| <= M + s``.

    Each term is bounded by ``2 (2|x| + 1) exp(-2|x|)``; summing that over
    the arithmetic progression of omitted ``|x|`` on both sides gives a
    closed form.
    """
    d = math.pi * tau0
    y0 = (M + 1 + 0.5 * (1 - sigma)) * d
    q = math.exp(-2.0 * d)
    one_minus_q = -math.expm1(-2.0 * d)
    return 4.0 * math.exp(-2.0 * y0) * (
        (2.0 * y0 + 1.0) / one_minus_q + 2.0 * d * q / one_minus_q**2
    )


def _truncation(tau0: float, sigma: int, tol: float) -> int:
    if series_tail_bound(0, tau0, sigma) < tol:
        return 0
    hi = 1
    while series_tail_bound(hi, tau0, sigma) >= tol:
        hi *= 2
        if hi > MAX_SERIES_TERMS:
            raise NearCriticalError("near-critical: use asymptotic expansion")
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if series_tail_bound(mid, tau0, sigma) < tol:
            hi = mid
        else:
            lo = mid
    return hi


def entropy_series(p: ModelPoint, tol: float = SERIES_TOL) -> EntropyValue:
    """Entropy as the symmetric sum over the zeros ``lambda_m``.

    The truncation is the smallest one whose analytic tail bound is below
    `tol`; the bound is returned as ``err_estimate``.

    Raises
    ------
    CriticalPointError
        At critical points.
    NearCriticalError
        If ``k > 1 - 1e-6``.
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    region, ed = region_and_modulus(p)
    sigma = sigma_for(region)
    if ed.k == 0.0:
        return EntropyValue.finite(LN2 if sigma else 0.0, Method.SERIES, 0.0)
    if ed.k > NEAR_CRITICAL_K:
        raise NearCriticalError("near-critical: use asymptotic expansion")
    M = _truncation(ed.tau0, sigma, tol)
    seq = LambdaSequence(sigma, ed.tau0)
    terms = series_terms(seq.shifted(M) * math.pi * ed.tau0)
    return EntropyValue.finite(
        math.fsum(terms), Method.SERIES, series_tail_bound(M, ed.tau0, sigma)
    )


def closed_form_from_modulus(
    k: float, branch, k_prime: float | None = None
) -> float:
    """Summed closed form at modulus `k` on the given branch.

    Case 2:       ``(1/6) [ln(4/(k k')) + (k^2 - k'^2) 2 I(k) I(k')/pi]``
    Case 1a, 1b:  ``(1/6) [ln(k^2/(16 k')) + (2 - k^2) 2 I(k) I(k')/pi] + ln 2``
    """
    branch = parse_branch(branch)
    if branch not in (Region.CASE2, Region.CASE1A, Region.CASE1B):
        if branch is Region.FACTORIZATION_BOUNDARY:
            return LN2
        if branch is Region.ISOTROPIC_FREE:
            return 0.0
        raise CriticalPointError(f"no finite entropy on {branch}")
    if k_prime is None:
        k_prime = math.sqrt((1.0 - k) * (1.0 + k))
    if k == 0.0:
        return 0.0 if branch is Region.CASE2 else LN2
    if not (0.0 < k <= 1.0) or not k_prime > 0.0:
        raise DomainError(f"closed form needs 0 <= k < 1, got k={k}, k'={k_prime}")
    product = 2.0 * complete_elliptic_K(k, k_prime) * complete_elliptic_K(k_prime, k) / math.pi
    if branch is Region.CASE2:
        # the two terms cancel as k -> 0; keep rounding from going negative
        return max(
            0.0,
            (
                math.log(4.0) - math.log(k) - math.log(k_prime)
                + (k - k_prime) * (k + k_prime) * product
            ) / 6.0,
        )
    return (
        2.0 * math.log(k) - math.log(16.0) - math.log(k_prime) + (2.0 - k * k) * product
    ) / 6.0 + LN2


def entropy_closed_form(p: ModelPoint) -> EntropyValue:
    """Closed-form limiting entropy at any point of the phase diagram.

    The circle gives exactly ``ln 2`` and ``gamma = 0, h > 2`` exactly 0;
    critical points give markers.
    """
    region = classify(p)
    if region in CRITICAL_REGIONS:
        return EntropyValue.marker(region, Method.CLOSED_FORM)
    _, ed = region_and_modulus(p)
    return EntropyValue.finite(
        closed_form_from_modulus(ed.k, region, ed.k_prime), Method.CLOSED_FORM
    )


def _check_kappa(kappa: float, branch: Region) -> float:
    kappa = float(kappa)
    if not math.isfinite(kappa) or kappa < 0.0:
        raise DomainError(f"kappa must be a finite non-negative number, got {kappa}")
    ok = {
        Region.CASE2: kappa >= 0.0,
        Region.CASE1A: kappa > 1.0,
        Region.CASE1B: 0.0 < kappa < 1.0,
        Region.FACTORIZATION_BOUNDARY: kappa == 1.0,
    }.get(branch)
    if ok is None:
        raise DomainError(f"no iso-entropy branch {branch}")
    if not ok:
        raise DomainError(f"kappa = {kappa} is inconsistent with branch {branch}")
    return kappa


def entropy_from_kappa(kappa: float, branch) -> EntropyValue:
    """Entropy on the iso-entropy curve labelled by `kappa`.

    Case 2 accepts ``kappa = 0`` (the line ``gamma = 0, h > 2``) and returns 0.
    The boundary branch needs ``kappa = 1`` and returns ``ln 2``.
    """
    branch = parse_branch(branch)
    kappa = _check_kappa(kappa, branch)
    K = complete_elliptic_K
    if branch is Region.FACTORIZATION_BOUNDARY:
        return EntropyValue.finite(LN2, Method.KAPPA)
    if branch is Region.CASE2:
        if kappa == 0.0:
            return EntropyValue.finite(0.0, Method.KAPPA)
        r = math.sqrt(kappa * kappa + 1.0)
        s = (
            math.log(4.0 * (kappa * kappa + 1.0) / kappa)
            + 2.0 / math.pi * (kappa - 1.0) * (kappa + 1.0) / (kappa * kappa + 1.0)
            * K(kappa / r, 1.0 / r) * K(1.0 / r, kappa / r)
        ) / 6.0
    elif branch is Region.CASE1A:
        km1 = (kappa - 1.0) * (kappa + 1.0)
        s = (
            math.log(km1 / (16.0 * kappa))
            + 2.0 / math.pi * (kappa * kappa + 1.0) / (kappa * kappa)
            * K(math.sqrt(km1) / kappa, 1.0 / kappa) * K(1.0 / kappa, math.sqrt(km1) / kappa)
        ) / 6.0 + LN2
    else:
        om = (1.0 - kappa) * (1.0 + kappa)
        s = (
            math.log(om / (16.0 * kappa))
            + 2.0 / math.pi * (kappa * kappa + 1.0)
            * K(math.sqrt(om), kappa) * K(kappa, math.sqrt(om))
        ) / 6.0 + LN2
    return EntropyValue.finite(s, Method.KAPPA)


def _uniform_hg(p: ModelPoint) -> tuple[float, float]:
    q = as_uniform(p)
    return q.h, q.gamma


def asymptotic_near_XX(p: ModelPoint) -> EntropyValue:
    """``-(1/3) ln(gamma/2) + (1/6) ln(1 - (h/2)^2)``; meant for small gamma, h < 2."""
    h, g = _uniform_hg(p)
    if h >= 2.0:
        raise DomainError("asymptotic_near_XX requires h < 2")
    if g == 0.0:
        raise CriticalPointError("gamma = 0 is the critical line itself")
    below = (1.0 - 0.5 * h) * (1.0 + 0.5 * h)
    return EntropyValue.finite(
        -math.log(0.5 * g) / 3.0 + math.log(below) / 6.0, Method.ASYMPTOTIC
    )


def asymptotic_near_h2_below(p: ModelPoint) -> EntropyValue:
    """``-(1/6) ln(1 - (h/2)^2) + (1/3) ln(gamma/2)``; meant for h -> 2 from below."""
    h, g = _uniform_hg(p)
    if h >= 2.0:
        raise DomainError("asymptotic_near_h2_below requires h < 2")
    if g == 0.0:
        raise CriticalPointError("gamma = 0, h < 2 is critical")
    below = (1.0 - 0.5 * h) * (1.0 + 0.5 * h)
    return EntropyValue.finite(
        -math.log(below) / 6.0 + math.log(0.5 * g) / 3.0, Method.ASYMPTOTIC
    )


def asymptotic_near_h2_above(p: ModelPoint) -> EntropyValue:
    """``-(1/6) ln((h/2)^2 - 1) + (1/3) ln(4 gamma)``; meant for h -> 2 from above."""
    h, g = _uniform_hg(p)
    if h <= 2.0:
        raise DomainError("asymptotic_near_h2_above requires h > 2")
    if g == 0.0:
        raise DomainError("gamma = 0 with h > 2 has zero entropy, no expansion")
    above = (0.5 * h - 1.0) * (0.5 * h + 1.0)
    return EntropyValue.finite(
        -math.log(above) / 6.0 + math.log(4.0 * g) / 3.0, Method.ASYMPTOTIC
    )
