"""Dense linear-algebra helpers: weighted inner products, small SVDs and
matrix-norm estimates."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConvergenceError, DimensionError, InvalidInputError

__all__ = [
    "Weight",
    "as_weight",
    "weight_factor",
    "weighted_dot",
    "weighted_norm",
    "SmallSvd",
    "small_svd",
    "spectral_norm_estimate",
    "frobenius_norm",
    "DEFAULT_POWER_SEED",
]

DEFAULT_POWER_SEED = 0x5EED


class Weight(str, enum.Enum):
    """Uniform weight of the inner product on R^n.

    ``EUCLIDEAN`` is the plain dot product, ``ONE_OVER_N`` scales it by 1/n.
    """

    EUCLIDEAN = "euclidean"
    ONE_OVER_N = "one_over_n"


def as_weight(weight) -> Weight:
    if isinstance(weight, Weight):
        return weight
    try:
        return Weight(str(weight).replace("-", "_"))
    except ValueError:
        raise InvalidInputError(f"unknown inner-product weight {weight!r}") from None


def weight_factor(weight, n: int) -> float:
    """Scalar ``w`` with <u, v>_w = w * u.v for vectors of length ``n``."""
    return 1.0 if as_weight(weight) is Weight.EUCLIDEAN else 1.0 / n


def weighted_dot(u, v, weight=Weight.EUCLIDEAN) -> float:
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.ndim != 1 or u.shape != v.shape:
        raise DimensionError(f"vectors of shapes {u.shape} and {v.shape} are incompatible")
    if u.size == 0:
        raise DimensionError("inner product of empty vectors")
    return weight_factor(weight, u.size) * float(u @ v)


def weighted_norm(u, weight=Weight.EUCLIDEAN) -> float:
    u = np.asarray(u, dtype=float)
    return float(np.sqrt(weight_factor(weight, u.size))) * float(np.linalg.norm(u))


@dataclass(frozen=True)
class SmallSvd:
    """Full SVD ``H = U @ Sigma @ W.T`` of an m-by-k matrix with m >= k.

    ``S`` has length m. Its trailing m - k entries are zero, so ``S`` is
    the diagonal of the m-by-m matrix ``Sigma @ Sigma.T`` padded with
    zeros, which is what the discrepancy evaluation needs.
    """

    U: np.ndarray
    S: np.ndarray
    W: np.ndarray

    @property
    def singular_values(self) -> np.ndarray:
        """The k genuine singular values (no zero padding)."""
        return self.S[: self.W.shape[0]]

    def sigma(self) -> np.ndarray:
        m, k = self.U.shape[0], self.W.shape[0]
        out = np.zeros((m, k))
        out[np.arange(k), np.arange(k)] = self.singular_values
        return out


def small_svd(H) -> SmallSvd:
    """SVD of a small (m, k) matrix, m >= k, singular values nonincreasing."""
    H = np.asarray(H, dtype=float)
    if H.ndim != 2 or H.shape[1] < 1 or H.shape[0] < H.shape[1]:
        raise DimensionError(f"expected an (m, k) matrix with m >= k >= 1, got shape {H.shape}")
    if not np.all(np.isfinite(H)):
        raise InvalidInputError("matrix has non-finite entries")
    m, k = H.shape
    U, s, Wt = np.linalg.svd(H, full_matrices=True)
    S = np.zeros(m)
    S[:k] = s
    return SmallSvd(U=U, S=S, W=Wt.T)


def spectral_norm_estimate(
    matvec: Callable[[np.ndarray], np.ndarray],
    rmatvec: Callable[[np.ndarray], np.ndarray],
    n: int,
    tol: float = 1e-6,
    max_iter: int = 5000,
    seed: int = DEFAULT_POWER_SEED,
    atol: float = 0.0,
) -> float:
    """Largest singular value of B by power iteration on B^T B.

    Parameters
    ----------
    matvec, rmatvec : callable
        Actions ``x -> B x`` and ``y -> B.T y``.
    n : int
        Number of columns of B.
    tol : float
        Stop once the Rayleigh quotient ``||B x||^2`` changes by less than
        ``tol`` relative to its current value.
    max_iter : int
        Iteration cap. On exhaustion a :class:`ConvergenceError` carrying
        the best estimate is raised.
    seed : int
        Seed for the random starting vector.
    atol : float
        Absolute floor on ``||B x||``. Once the Rayleigh quotient changes by
        less than ``atol**2`` the iteration stops; this handles operators that
        are zero up to rounding, where the relative test never settles.

    Returns
    -------
    float
        The largest value ``||B x||`` seen over the unit iterates, which
        never exceeds the true norm.
    """
    if tol <= 0:
        raise InvalidInputError("tol must be positive")
    if max_iter < 1:
        raise InvalidInputError("max_iter must be at least 1")
    rng = np.random.Generator(np.random.PCG64(seed))
    x = rng.standard_normal(n)
    x /= np.linalg.norm(x)

    best = 0.0
    previous = None
    for it in range(1, max_iter + 1):
        y = np.asarray(matvec(x), dtype=float)
        rayleigh = float(y @ y)
        best = max(best, np.sqrt(rayleigh))
        if previous is not None and abs(rayleigh - previous) <= max(tol * rayleigh, atol * atol):
            return best
        previous = rayleigh
        z = np.asarray(rmatvec(y), dtype=float)
        znorm = np.linalg.norm(z)
        if znorm == 0.0:
            # x lies in the null space of B^T B; only possible for B = 0 here
            # unless the start vector was unlucky.
            return best
        x = z / znorm
    raise ConvergenceError(
        f"power iteration did not converge in {max_iter} iterations", best_estimate=best, iterations=max_iter
    )


def frobenius_norm(B) -> float:
    B = np.asarray(B, dtype=float)
    if not np.all(np.isfinite(B)):
        raise InvalidInputError("matrix has non-finite entries")
    return float(np.linalg.norm(B))
