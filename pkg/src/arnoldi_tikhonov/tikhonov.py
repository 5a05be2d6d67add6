"""Tikhonov minimizers for the low-rank operator and, for comparison, for
the full matrix."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.sparse.linalg import LinearOperator, cg

from .arnoldi import check_operator
from .errors import ConvergenceError, DimensionError, InvalidInputError
from .lowrank import LowRankApproximation, apply_lowrank
from .numerics import Weight, weighted_norm

__all__ = [
    "Variant",
    "RegularizedSolution",
    "solve_reduced",
    "solve_full",
    "relative_error",
    "DIRECT_SOLVE_MAX_N",
]

DIRECT_SOLVE_MAX_N = 512


class Variant(str, enum.Enum):
    REDUCED = "reduced"
    FULL = "full"


@dataclass(frozen=True)
class RegularizedSolution:
    x: np.ndarray
    alpha: float
    variant: Variant
    residual_norm: float
    solution_norm: float


def _check_alpha(alpha):
    if not alpha > 0 or not np.isfinite(alpha):
        raise InvalidInputError(f"regularization parameter must be positive and finite, got {alpha}")


def solve_reduced(L: LowRankApproximation, y_delta, alpha: float) -> RegularizedSolution:
    """Minimize ``||A_l x - y||_w^2 + alpha ||x||_w^2`` over R^n.

    Write ``x = V_l z + x_perp``. Then ``A_l x = V_{l+1} H z`` and
    ``||x||_w^2 = ||z||^2 + ||x_perp||_w^2``, so the minimizer has
    ``x_perp = 0`` and ``z`` solves the small problem
    ``min ||H z - c||^2 + alpha ||z||^2`` with ``c = V_{l+1}^T_w y``.
    That problem is solved with the SVD of H:
    ``z = W diag(s / (s^2 + alpha)) U^T c``.
    """
    _check_alpha(alpha)
    y = np.asarray(y_delta, dtype=float)
    if y.shape != (L.n,):
        raise DimensionError(f"right-hand side has shape {y.shape}, expected ({L.n},)")
    dec, svd = L.dec, L.svd
    s = svd.singular_values
    c = dec.coefficients(y)
    z = svd.W @ (s / (s * s + alpha) * (svd.U[:, : s.size].T @ c))
    x = dec.V_ell @ z
    residual = weighted_norm(apply_lowrank(L, x) - y, dec.weight)
    return RegularizedSolution(
        x=x,
        alpha=float(alpha),
        variant=Variant.REDUCED,
        residual_norm=residual,
        solution_norm=weighted_norm(x, dec.weight),
    )


def solve_full(
    A,
    y_delta,
    alpha: float,
    weight=Weight.EUCLIDEAN,
    tol: float = 1e-10,
    direct_max_n: int = DIRECT_SOLVE_MAX_N,
) -> RegularizedSolution:
    """Minimize ``||A x - y||_w^2 + alpha ||x||_w^2`` with the full matrix.

    The uniform weight cancels, leaving ``(A^T A + alpha I) x = A^T y``.
    Systems with ``n <= direct_max_n`` are solved by Cholesky; larger ones
    by conjugate gradients to relative residual ``tol``, at most ``10 n``
    iterations.
    """
    _check_alpha(alpha)
    if tol <= 0:
        raise InvalidInputError("tol must be positive")
    A = check_operator(A)
    n = A.shape[0]
    y = np.asarray(y_delta, dtype=float)
    if y.shape != (n,):
        raise DimensionError(f"right-hand side has shape {y.shape}, expected ({n},)")
    rhs = A.T @ y
    if n <= direct_max_n:
        G = A.T @ A
        G[np.diag_indices(n)] += alpha
        x = scipy.linalg.solve(G, rhs, assume_a="pos")
    else:
        op = LinearOperator((n, n), matvec=lambda v: A.T @ (A @ v) + alpha * v, dtype=float)
        maxiter = 10 * n
        x, info = cg(op, rhs, rtol=tol, atol=0.0, maxiter=maxiter)
        if info != 0:
            raise ConvergenceError(
                f"conjugate gradients did not reach rtol={tol} in {maxiter} iterations",
                best_estimate=x,
                iterations=maxiter,
            )
    return RegularizedSolution(
        x=x,
        alpha=float(alpha),
        variant=Variant.FULL,
        residual_norm=weighted_norm(A @ x - y, weight),
        solution_norm=weighted_norm(x, weight),
    )


def relative_error(x, x_ref) -> float:
    """``||x - x_ref||_2 / ||x_ref||_2`` in the plain Euclidean norm."""
    x = np.asarray(x, dtype=float)
    x_ref = np.asarray(x_ref, dtype=float)
    if x.shape != x_ref.shape:
        raise DimensionError(f"shapes {x.shape} and {x_ref.shape} differ")
    ref = np.linalg.norm(x_ref)
    if ref == 0.0:
        raise InvalidInputError("reference vector is zero")
    return float(np.linalg.norm(x - x_ref) / ref)
