"""Discrepancy-principle choice of the Tikhonov parameter.

The parameter ``alpha`` solves

    alpha^3 <(A_l A_l^* + alpha I)^{-3} R y, R y>_w = (E h_l + C delta)^2,

where ``R`` projects onto range(A_l). In the SVD basis of the Hessenberg
matrix the left-hand side reduces to ``sum_i c_i^2 (alpha / (s_i^2 + alpha))^3``
over the ``q`` nonzero singular values, so each evaluation is O(q).

The constants follow the usual experimental choice ``E = 3 ||x_n||`` and
``C = 1``. The convergence theory behind the equation asks for ``C > 1``
and ``E > 3 ||x_n||`` strictly; :func:`default_constant_E` offers a tiny
upward nudge for callers who want the strict version.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    ConvergenceError,
    DegenerateProblemError,
    DimensionError,
    InfeasibleError,
    InvalidInputError,
)
from .lowrank import LowRankApproximation
from .numerics import Weight, weighted_norm

__all__ = [
    "DiscrepancyConfig",
    "DiscrepancySpectrum",
    "build_spectrum",
    "lhs",
    "lhs_log_derivative",
    "feasibility_check",
    "solve_alpha",
    "default_constant_E",
    "noise_bound",
]


@dataclass(frozen=True)
class DiscrepancyConfig:
    """Right-hand side data ``(E h + C delta)`` and root-finder settings.

    ``alpha_max=None`` means ``1e3 * sigma_1^2`` of the spectrum at hand.
    """

    E: float
    C: float
    delta: float
    h_ell: float
    alpha_tol: float = 1e-10
    alpha_max: Optional[float] = None

    def __post_init__(self):
        for name in ("E", "C", "delta", "h_ell"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value >= 0):
                raise InvalidInputError(f"{name} must be finite and nonnegative, got {value}")
        if not self.alpha_tol > 0:
            raise InvalidInputError("alpha_tol must be positive")
        if self.alpha_max is not None and not self.alpha_max > 0:
            raise InvalidInputError("alpha_max must be positive")

    @property
    def rhs(self) -> float:
        return self.E * self.h_ell + self.C * self.delta


@dataclass(frozen=True)
class DiscrepancySpectrum:
    sigma_sq: np.ndarray
    coeffs: np.ndarray
    ry_norm_sq: float

    def __post_init__(self):
        if self.sigma_sq.shape != self.coeffs.shape or self.sigma_sq.ndim != 1:
            raise DimensionError("sigma_sq and coeffs must be 1-d arrays of equal length")

    @classmethod
    def from_arrays(cls, sigma_sq, coeffs) -> "DiscrepancySpectrum":
        sigma_sq = np.asarray(sigma_sq, dtype=float)
        coeffs = np.asarray(coeffs, dtype=float)
        if sigma_sq.size == 0 or np.any(sigma_sq <= 0):
            raise InvalidInputError("squared singular values must be positive")
        return cls(sigma_sq=sigma_sq, coeffs=coeffs, ry_norm_sq=float(coeffs @ coeffs))


def build_spectrum(L: LowRankApproximation, y_delta) -> DiscrepancySpectrum:
    """Squared singular values of H and the coordinates of ``R y`` in the
    matching left singular vectors, restricted to the numerical rank."""
    if L.rank_q == 0:
        raise DegenerateProblemError("Hessenberg matrix is zero; the low-rank operator has empty range")
    y = np.asarray(y_delta, dtype=float)
    if y.shape != (L.n,):
        raise DimensionError(f"right-hand side has shape {y.shape}, expected ({L.n},)")
    q = L.rank_q
    coeffs = L.range_basis.T @ L.dec.coefficients(y)
    sigma_sq = L.svd.singular_values[:q] ** 2
    return DiscrepancySpectrum(sigma_sq=sigma_sq, coeffs=coeffs, ry_norm_sq=float(coeffs @ coeffs))


def lhs(spec: DiscrepancySpectrum, alpha: float) -> float:
    if alpha < 0:
        raise InvalidInputError("alpha must be nonnegative")
    if alpha == 0:
        return 0.0
    r = alpha / (spec.sigma_sq + alpha)
    return float(np.sum(spec.coeffs**2 * r**3))


def lhs_log_derivative(spec: DiscrepancySpectrum, alpha: float) -> float:
    """``alpha * d lhs / d alpha``, the slope in ``log(alpha)``."""
    r = alpha / (spec.sigma_sq + alpha)
    return float(3.0 * np.sum(spec.coeffs**2 * r**3 * (1.0 - r)))


def feasibility_check(spec: DiscrepancySpectrum, cfg: DiscrepancyConfig) -> bool:
    rhs = cfg.rhs
    return bool(0.0 <= rhs <= np.sqrt(spec.ry_norm_sq))


def solve_alpha(spec: DiscrepancySpectrum, cfg: DiscrepancyConfig, max_iter: int = 200) -> float:
    """Unique positive root of ``lhs(alpha) = (E h + C delta)^2``.

    The left-hand side increases strictly from 0 to ``||R y||^2``. A bracket
    is grown geometrically from ``sigma_q^2`` and then narrowed by Newton
    steps in ``log(alpha)``, falling back to bisection whenever a step
    leaves the bracket. Returns once
    ``|lhs(alpha) - rhs^2| <= cfg.alpha_tol * rhs^2``.
    """
    rhs = cfg.rhs
    target = rhs * rhs
    if rhs == 0.0:
        raise DegenerateProblemError("discrepancy target is zero, so alpha = 0 (no regularization)")
    if target >= spec.ry_norm_sq:
        raise InfeasibleError(
            f"target {rhs:.6g} is not below the projected data norm {np.sqrt(spec.ry_norm_sq):.6g}"
        )
    alpha_max = cfg.alpha_max if cfg.alpha_max is not None else 1e3 * spec.sigma_sq[0]
    tol = cfg.alpha_tol * target

    def f(a):
        return lhs(spec, a) - target

    start = float(spec.sigma_sq[-1])
    lo = hi = start
    f_start = f(start)
    if abs(f_start) <= tol:
        return start
    if f_start < 0:
        while f(hi) < 0:
            lo = hi
            hi *= 10.0
            if hi > alpha_max:
                raise ConvergenceError(
                    f"no sign change of the discrepancy function below alpha_max={alpha_max:.3g}",
                    best_estimate=lo,
                )
    else:
        # lhs -> 0 as alpha -> 0 and target > 0, so this terminates.
        while f(lo) > 0:
            hi = lo
            lo /= 10.0

    alpha = np.sqrt(lo * hi)
    best, best_err = alpha, np.inf
    for it in range(max_iter):
        value = f(alpha)
        if abs(value) < best_err:
            best, best_err = alpha, abs(value)
        if abs(value) <= tol:
            return float(alpha)
        if value < 0:
            lo = alpha
        else:
            hi = alpha
        slope = lhs_log_derivative(spec, alpha)
        log_alpha = np.log(alpha)
        step = log_alpha - value / slope if slope > 0 else np.nan
        if not (np.log(lo) < step < np.log(hi)):
            step = 0.5 * (np.log(lo) + np.log(hi))
        alpha = float(np.exp(step))
        if hi <= lo * (1.0 + 4 * np.finfo(float).eps):
            break
    raise ConvergenceError(
        f"discrepancy root not resolved to relative tolerance {cfg.alpha_tol}", best_estimate=float(best)
    )


def default_constant_E(x_exact, weight=Weight.EUCLIDEAN, strict: bool = True) -> float:
    """``3 ||x_n||``; with ``strict`` the value is raised by a factor 1 + 1e-6
    so that it exceeds ``3 ||x_n||`` as the theory demands."""
    E = 3.0 * weighted_norm(x_exact, weight)
    return E * (1.0 + 1e-6) if strict else E


def noise_bound(nu: float, y_exact, weight=Weight.EUCLIDEAN) -> float:
    """Noise bound ``delta = nu ||y_n||``."""
    return float(nu) * weighted_norm(y_exact, weight)
