"""Low-rank approximation ``A_l = V_{l+1} H V_l^T`` built from an Arnoldi
decomposition, its distance to ``A`` and the projector onto its range."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .arnoldi import ArnoldiDecomposition, check_operator
from .errors import DimensionError, InvalidInputError
from .numerics import (
    DEFAULT_POWER_SEED,
    SmallSvd,
    frobenius_norm,
    small_svd,
    spectral_norm_estimate,
)

__all__ = [
    "GapMethod",
    "LowRankApproximation",
    "ApproximationGap",
    "lowrank_approximation",
    "apply_lowrank",
    "apply_lowrank_adjoint",
    "projector_apply",
    "dense_lowrank",
    "approximation_gap",
]


class GapMethod(str, enum.Enum):
    SPECTRAL = "spectral"
    FROBENIUS = "frobenius"


@dataclass(frozen=True)
class LowRankApproximation:
    dec: ArnoldiDecomposition
    svd: SmallSvd
    rank_q: int
    rank_tol: float

    @property
    def n(self) -> int:
        return self.dec.n

    @property
    def ell(self) -> int:
        return self.dec.ell

    @property
    def range_basis(self) -> np.ndarray:
        """Columns of U spanning range(H); there are ``rank_q`` of them."""
        return self.svd.U[:, : self.rank_q]


@dataclass(frozen=True)
class ApproximationGap:
    value: float
    method: GapMethod


def lowrank_approximation(dec: ArnoldiDecomposition, rank_tol: float = 1e-12) -> LowRankApproximation:
    """Wrap ``dec`` with the SVD of its Hessenberg matrix.

    The numerical rank ``q`` counts singular values above
    ``rank_tol * sigma_1``.
    """
    if rank_tol < 0:
        raise InvalidInputError("rank_tol must be nonnegative")
    svd = small_svd(dec.H)
    s = svd.singular_values
    q = 0 if s[0] == 0.0 else int(np.count_nonzero(s > rank_tol * s[0]))
    return LowRankApproximation(dec=dec, svd=svd, rank_q=q, rank_tol=rank_tol)


def _check_length(L: LowRankApproximation, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (L.n,):
        raise DimensionError(f"vector has shape {x.shape}, expected ({L.n},)")
    return x


def apply_lowrank(L: LowRankApproximation, x) -> np.ndarray:
    x = _check_length(L, x)
    dec = L.dec
    return dec.V @ (dec.H @ dec.coefficients(x, dec.ell))


def apply_lowrank_adjoint(L: LowRankApproximation, y) -> np.ndarray:
    # The inner-product weight is uniform, so the adjoint is the transpose.
    y = _check_length(L, y)
    dec = L.dec
    return dec.V_ell @ (dec.H.T @ dec.coefficients(y))


def dense_lowrank(L: LowRankApproximation) -> np.ndarray:
    """Materialize A_l as an n-by-n array. Only meant for small n."""
    dec = L.dec
    return dec.V @ dec.H @ (dec.w * dec.V_ell.T)


def projector_apply(L: LowRankApproximation, v) -> np.ndarray:
    """Orthogonal projection of ``v`` onto range(A_l).

    Computed as ``V U I_q U^T V^T_w v``, i.e. through the leading ``q``
    left singular vectors of H.
    """
    v = _check_length(L, v)
    Uq = L.range_basis
    return L.dec.V @ (Uq @ (Uq.T @ L.dec.coefficients(v)))


def approximation_gap(
    A,
    L: LowRankApproximation,
    method=GapMethod.SPECTRAL,
    tol: float = 1e-6,
    max_iter: int = 5000,
    seed: int = DEFAULT_POWER_SEED,
) -> ApproximationGap:
    """Norm of ``A - A_l`` by power iteration or by the Frobenius bound.

    Uses ``A_l = A V_l V_l^T_w``, so ``A - A_l = A (I - P)`` with ``P`` the
    projector onto the first l Krylov vectors; the spectral estimate then
    needs one product with ``A`` and one with ``A.T`` per iteration.
    """
    A = check_operator(A)
    if A.shape[0] != L.n:
        raise DimensionError(f"operator has size {A.shape[0]}, approximation has size {L.n}")
    method = GapMethod(method)
    dec = L.dec
    Vl = dec.V_ell

    def complement(x):
        return x - Vl @ dec.coefficients(x, dec.ell)

    if method is GapMethod.FROBENIUS:
        return ApproximationGap(frobenius_norm(A - dense_lowrank(L)), method)
    value = spectral_norm_estimate(
        lambda x: A @ complement(x),
        lambda y: complement(A.T @ y),
        L.n,
        tol=tol,
        max_iter=max_iter,
        seed=seed,
        # rounding level of ||A (I - P)||, so the gap for l = n terminates
        atol=np.sqrt(L.n) * np.finfo(float).eps * np.linalg.norm(A),
    )
    return ApproximationGap(value, method)
