"""Exact entropy of a finite block from the free-fermion correlation matrix.

After the Jordan-Wigner transformation the ground state is Gaussian, and the
reduced state of ``L`` consecutive sites is fixed by the ``L x L`` Toeplitz
matrix ``T[j, l] = g_{j-l}`` built from the Fourier coefficients of the
unimodular symbol

    g(theta) = (cos theta - h/2 - i gamma sin theta) / eps(theta).

With ``nu_1..nu_L`` the singular values of ``T``,

    S_L = sum_m H((1 + nu_m) / 2),   H(x) = -x ln x - (1-x) ln(1-x).

A global phase or a transposition of the symbol changes neither the singular
values nor ``S_L``, so the sign conventions below are immaterial; they are
chosen so that the Ising point ``(h, gamma) = (0, 1)`` has ``g_1 = 1``.

This route shares no code with the closed forms and series in
:mod:`xyent.entropy` beyond the phase classification, and serves as their
independent check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .entropy import EntropyValue, Method
from .errors import CriticalPointError, DomainError, NumericalFailure
from .phase_diagram import CRITICAL_REGIONS, ModelPoint, as_uniform, classify, dispersion
from .special_functions import binary_entropy

__all__ = [
    "SymbolCoefficients",
    "BlockSpectrum",
    "default_quadrature_points",
    "symbol_fourier_coefficients",
    "build_toeplitz",
    "singular_values",
    "clamp_spectrum",
    "block_spectrum",
    "block_entropy_finite",
    "block_entropy_value",
]

MAX_BLOCK = 512
IMAG_DISCARD = 1e-12
IMAG_FAIL = 1e-10
SVD_TOL = 1e-13
SVD_MAX_SWEEPS = 100
CLAMP_TOL = 1e-9


@dataclass(frozen=True)
class SymbolCoefficients:
    """Fourier coefficients ``g_n`` for ``|n| <= L - 1``.

    ``coefficients[n + L - 1]`` holds ``g_n``.
    """

    coefficients: np.ndarray
    L: int
    point: ModelPoint
    quadrature_points: int
    max_imag: float = 0.0

    def __getitem__(self, n: int) -> float:
        if abs(n) > self.L - 1:
            raise IndexError(f"g_{n} outside computed range |n| <= {self.L - 1}")
        return float(self.coefficients[n + self.L - 1])


@dataclass(frozen=True)
class BlockSpectrum:
    """Singular values of the block Toeplitz matrix, clamped to ``[0, 1]``."""

    values: np.ndarray

    def entropy(self) -> float:
        return math.fsum(binary_entropy(0.5 * (1.0 + self.values)))


def default_quadrature_points(L: int) -> int:
    """``max(8L, 256)`` rounded up to a power of two."""
    n = max(8 * L, 256)
    return 1 << (n - 1).bit_length()


def _check_block(L) -> int:
    if int(L) != L or L < 1:
        raise DomainError(f"block size must be a positive integer, got {L}")
    L = int(L)
    if L > MAX_BLOCK:
        raise DomainError(f"block size {L} exceeds the supported maximum {MAX_BLOCK}")
    return L


def symbol_fourier_coefficients(
    p: ModelPoint,
    L: int,
    N: int | None = None,
    allow_critical: bool = False,
) -> SymbolCoefficients:
    """Fourier coefficients of the symbol by the trapezoidal rule.

    ``g_n = (1/2pi) int e^{i n theta} g(theta) d theta`` on `N` equispaced
    nodes offset by half a step (``theta_j = 2 pi (j + 1/2) / N``), which is
    exponentially accurate for the smooth symbol of a gapped point.

    Parameters
    ----------
    p : ModelPoint
        Uniform or staggered point; staggered points use their uniform image.
    L : int
        Block size; coefficients for ``|n| <= L - 1`` are returned.
    N : int, optional
        Number of nodes, a power of two with ``N >= 8 L``.
    allow_critical : bool
        Compute anyway at a critical point (the symbol is then
        discontinuous and the rule is only algebraically accurate). Nodes
        where the dispersion vanishes contribute zero.

    Raises
    ------
    CriticalPointError
        At critical points unless `allow_critical`.
    NumericalFailure
        If an imaginary part above 1e-10 survives.
    """
    L = _check_block(L)
    q = as_uniform(p)
    if classify(q) in CRITICAL_REGIONS and not allow_critical:
        raise CriticalPointError("symbol discontinuous; oracle unsupported at criticality")
    if N is None:
        N = default_quadrature_points(L)
    N = int(N)
    if N < 8 * L or N & (N - 1):
        raise DomainError(f"N must be a power of two with N >= 8L, got N={N}, L={L}")

    theta = 2.0 * np.pi * (np.arange(N) + 0.5) / N
    eps = dispersion(q, theta)
    num = np.cos(theta) - 0.5 * q.h - 1j * q.gamma * np.sin(theta)
    sym = np.divide(num, eps, out=np.zeros(N, dtype=complex), where=eps > 0.0)

    n = np.arange(-(L - 1), L)
    g = np.exp(1j * np.pi * n / N) * np.fft.ifft(sym)[n % N]
    max_imag = float(np.max(np.abs(g.imag)))
    if max_imag > IMAG_FAIL:
        raise NumericalFailure(f"symbol coefficients have imaginary residue {max_imag:.3g}")
    return SymbolCoefficients(g.real.copy(), L, q, N, max_imag)


def build_toeplitz(sc: SymbolCoefficients, L: int | None = None) -> np.ndarray:
    """``L x L`` matrix with ``T[j, l] = g_{j - l}``."""
    if L is None:
        L = sc.L
    if L < 1 or L > sc.L:
        raise DomainError(f"coefficients cover L <= {sc.L}, requested L = {L}")
    j = np.arange(L)
    return sc.coefficients[(j[:, None] - j[None, :]) + sc.L - 1]


@lru_cache(maxsize=64)
def _round_robin(n: int) -> tuple[np.ndarray, np.ndarray]:
    # circle-method tournament: n - 1 rounds of n/2 disjoint pairs
    players = np.arange(n)
    P, Q = [], []
    for _ in range(n - 1):
        P.append(players[: n // 2].copy())
        Q.append(players[::-1][: n // 2].copy())
        players = np.concatenate(([players[0]], np.roll(players[1:], 1)))
    return np.array(P), np.array(Q)


def singular_values(
    m, tol: float = SVD_TOL, max_sweeps: int = SVD_MAX_SWEEPS
) -> np.ndarray:
    """Singular values by one-sided Jacobi rotations, largest first.

    Columns are orthogonalized pairwise; each round rotates ``n/2`` disjoint
    column pairs at once. Iteration stops after a sweep in which every pair
    satisfies ``|a_p . a_q| <= tol * |a_p| |a_q|``; the singular values are
    then the column norms.

    Raises
    ------
    NumericalFailure
        If not converged after `max_sweeps` sweeps.
    """
    a = np.array(m, dtype=float, copy=True)
    if a.ndim != 2 or a.size == 0:
        raise DomainError("singular_values expects a non-empty 2-D matrix")
    if not np.all(np.isfinite(a)):
        raise DomainError("matrix has non-finite entries")
    ncol = a.shape[1]
    if ncol % 2:
        a = np.hstack([a, np.zeros((a.shape[0], 1))])
    n = a.shape[1]
    if n >= 2:
        P, Q = _round_robin(n)
        for _ in range(max_sweeps):
            off = 0.0
            for p, q in zip(P, Q):
                ap, aq = a[:, p], a[:, q]
                alpha = np.einsum("ij,ij->j", ap, ap)
                beta = np.einsum("ij,ij->j", aq, aq)
                gamma = np.einsum("ij,ij->j", ap, aq)
                scale = np.sqrt(alpha * beta)
                active = (np.abs(gamma) > tol * scale) & (scale > 0.0)
                if not active.any():
                    continue
                ratio = np.abs(gamma[active]) / scale[active]
                off = max(off, float(ratio.max()))
                g = np.where(active, gamma, 1.0)
                zeta = (beta - alpha) / (2.0 * g)
                t = np.copysign(1.0, zeta) / (np.abs(zeta) + np.hypot(1.0, zeta))
                c = np.where(active, 1.0 / np.hypot(1.0, t), 1.0)
                s = np.where(active, c * t, 0.0)
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
            if off == 0.0:
                break
        else:
            raise NumericalFailure(f"Jacobi SVD not converged in {max_sweeps} sweeps")
    sv = np.sqrt(np.einsum("ij,ij->j", a, a))[:ncol]
    return np.sort(sv)[::-1]


def clamp_spectrum(nu, tol: float = CLAMP_TOL) -> np.ndarray:
    """Clip singular values into ``[0, 1]`` after checking they exceed 1 by at most `tol`."""
    nu = np.asarray(nu, dtype=float)
    if np.any(nu > 1.0 + tol):
        raise NumericalFailure(f"singular value {nu.max():.17g} exceeds 1 beyond {tol}")
    return np.clip(nu, 0.0, 1.0)


def block_spectrum(p: ModelPoint, L: int, N: int | None = None) -> BlockSpectrum:
    sc = symbol_fourier_coefficients(p, L, N)
    return BlockSpectrum(clamp_spectrum(singular_values(build_toeplitz(sc))))


def block_entropy_finite(p: ModelPoint, L: int, N: int | None = None) -> float:
    """Entanglement entropy (nats) of ``L`` consecutive spins at a gapped point."""
    return block_spectrum(p, L, N).entropy()


def block_entropy_value(p: ModelPoint, L: int, N: int | None = None) -> EntropyValue:
    """:func:`block_entropy_finite` wrapped as an :class:`EntropyValue`."""
    return EntropyValue.finite(block_entropy_finite(p, L, N), Method.ORACLE)
