"""Arnoldi reduction ``A V_l = V_{l+1} H`` with full reorthogonalization."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import BreakdownError, DimensionError, InvalidInputError
from .numerics import Weight, as_weight, weight_factor

__all__ = ["ArnoldiDecomposition", "arnoldi", "is_symmetric", "check_operator"]


@dataclass(frozen=True)
class ArnoldiDecomposition:
    """Krylov basis ``V`` and Hessenberg projection ``H`` of a matrix.

    Without breakdown ``V`` is n-by-(l+1) and ``H`` is (l+1)-by-l. If the
    process broke down at step j the Krylov space is invariant, ``V`` is
    n-by-j and ``H`` is the square j-by-j block, so ``A V = V H``.
    The columns of ``V`` are orthonormal in the ``weight`` inner product.
    """

    V: np.ndarray
    H: np.ndarray
    weight: Weight
    breakdown: Optional[int] = None

    @property
    def n(self) -> int:
        return self.V.shape[0]

    @property
    def ell(self) -> int:
        return self.H.shape[1]

    @property
    def V_ell(self) -> np.ndarray:
        return self.V[:, : self.ell]

    @property
    def w(self) -> float:
        return weight_factor(self.weight, self.n)

    def coefficients(self, x, columns: Optional[int] = None) -> np.ndarray:
        """Weighted inner products of ``x`` with the leading basis vectors."""
        V = self.V if columns is None else self.V[:, :columns]
        return self.w * (V.T @ x)


def check_operator(A) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise DimensionError(f"expected a nonempty square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InvalidInputError("matrix has non-finite entries")
    return A


def arnoldi(
    A,
    y_delta,
    ell: int,
    weight=Weight.EUCLIDEAN,
    breakdown_tol: float = 1e-12,
    allow_breakdown: bool = False,
) -> ArnoldiDecomposition:
    """Run ``ell`` steps of the Arnoldi process started from ``y_delta``.

    Every new direction is orthogonalized twice (classical Gram-Schmidt
    with one reorthogonalization pass), which keeps the basis orthonormal
    to working precision.

    Breakdown at step j is declared when the orthogonalized residual has
    weighted norm at most ``breakdown_tol * ||A v_j||``. A breakdown at the
    last requested step is returned silently. An earlier one raises
    :class:`BreakdownError` unless ``allow_breakdown`` is set, in which case
    the truncated decomposition is returned.
    """
    A = check_operator(A)
    n = A.shape[0]
    y = np.asarray(y_delta, dtype=float)
    if y.shape != (n,):
        raise DimensionError(f"right-hand side has shape {y.shape}, expected ({n},)")
    if not 1 <= ell <= n:
        raise InvalidInputError(f"number of steps must satisfy 1 <= ell <= n={n}, got {ell}")
    if breakdown_tol < 0:
        raise InvalidInputError("breakdown_tol must be nonnegative")
    weight = as_weight(weight)
    w = weight_factor(weight, n)

    ynorm = np.sqrt(w) * np.linalg.norm(y)
    if ynorm == 0.0:
        raise InvalidInputError("Arnoldi start vector is zero")

    # Rows of Vt are the basis vectors; contiguous rows keep the
    # Gram-Schmidt products cheap.
    Vt = np.zeros((ell + 1, n))
    H = np.zeros((ell + 1, ell))
    Vt[0] = y / ynorm
    for j in range(ell):
        r = A @ Vt[j]
        anorm = np.sqrt(w) * np.linalg.norm(r)
        basis = Vt[: j + 1]
        h = w * (basis @ r)
        r -= basis.T @ h
        correction = w * (basis @ r)
        r -= basis.T @ correction
        H[: j + 1, j] = h + correction
        beta = np.sqrt(w) * np.linalg.norm(r)
        if beta <= breakdown_tol * anorm:
            steps = j + 1
            if steps < ell and not allow_breakdown:
                raise BreakdownError(f"Arnoldi process broke down at step {steps} of {ell}", step=steps)
            return ArnoldiDecomposition(
                V=np.ascontiguousarray(Vt[:steps].T),
                H=H[:steps, :steps].copy(),
                weight=weight,
                breakdown=steps,
            )
        H[j + 1, j] = beta
        Vt[j + 1] = r / beta
    return ArnoldiDecomposition(V=np.ascontiguousarray(Vt.T), H=H, weight=weight)


def is_symmetric(A, tol: float = 1e-12) -> bool:
    """True iff ``max|a_ij - a_ji| <= tol * max|a_ij|``."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        return False
    scale = np.max(np.abs(A)) if A.size else 0.0
    return bool(np.max(np.abs(A - A.T), initial=0.0) <= tol * scale)
