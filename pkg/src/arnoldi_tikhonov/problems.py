"""Discretized Fredholm equations of the first kind and the noise model.

Three test problems are provided:

* ``phillips_nystrom`` -- Phillips' equation on [-6, 6], Nystrom method
  with the closed composite trapezoidal rule (nonsymmetric matrix).
* ``phillips_galerkin`` -- the same equation, Galerkin method with
  orthonormal box functions (symmetric Toeplitz matrix).
* ``baart_galerkin`` -- Baart's equation, kernel ``exp(s cos t)`` on
  [0, pi/2] x [0, pi], Galerkin with orthonormal box functions.

In every case ``y_exact = A @ x_exact``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.special

from .errors import InvalidInputError

__all__ = [
    "ProblemKind",
    "TestProblem",
    "NoisyData",
    "phillips_solution",
    "phillips_rhs",
    "baart_rhs",
    "phillips_nystrom",
    "phillips_galerkin",
    "baart_galerkin",
    "make_problem",
    "gaussian_vector",
    "add_noise",
    "GAUSS_ORDER",
]

GAUSS_ORDER = 20


class ProblemKind(str, enum.Enum):
    PHILLIPS_NYSTROM = "phillips_nystrom"
    PHILLIPS_GALERKIN = "phillips_galerkin"
    BAART_GALERKIN = "baart_galerkin"


@dataclass(frozen=True)
class TestProblem:
    """A discretized test problem.

    ``t`` holds the abscissae attached to the entries of ``x_exact`` (nodes
    for Nystrom, cell midpoints for Galerkin) and ``h`` the mesh width.
    """

    __test__ = False  # not a pytest class

    A: np.ndarray
    x_exact: np.ndarray
    y_exact: np.ndarray
    t: np.ndarray
    h: float
    kind: ProblemKind

    @property
    def n(self) -> int:
        return self.A.shape[0]


@dataclass(frozen=True)
class NoisyData:
    y_delta: np.ndarray
    nu: float
    delta: float
    seed: int


def phillips_solution(u):
    """``1 + cos(pi u / 3)`` on |u| < 3 and zero elsewhere; also the kernel
    ``kappa(s, t) = phillips_solution(s - t)``."""
    u = np.asarray(u, dtype=float)
    return np.where(np.abs(u) < 3.0, 1.0 + np.cos(np.pi * u / 3.0), 0.0)


def phillips_rhs(s):
    """Closed-form right-hand side of Phillips' equation."""
    s = np.asarray(s, dtype=float)
    a = np.abs(s)
    return (6.0 - a) * (1.0 + 0.5 * np.cos(np.pi * s / 3.0)) + 9.0 / (2.0 * np.pi) * np.sin(np.pi * a / 3.0)


def baart_rhs(s):
    """``2 sinh(s) / s`` with its limit 2 at s = 0."""
    s = np.asarray(s, dtype=float)
    safe = np.where(s == 0.0, 1.0, s)
    return np.where(s == 0.0, 2.0, 2.0 * np.sinh(safe) / safe)


def phillips_nystrom(n: int) -> TestProblem:
    if n < 3:
        raise InvalidInputError(f"phillips_nystrom needs n >= 3, got {n}")
    t = np.linspace(-6.0, 6.0, n)
    h = 12.0 / (n - 1)
    weights = np.full(n, h)
    weights[[0, -1]] = h / 2
    A = phillips_solution(t[:, None] - t[None, :]) * weights[None, :]
    x = phillips_solution(t)
    return TestProblem(A=A, x_exact=x, y_exact=A @ x, t=t, h=h, kind=ProblemKind.PHILLIPS_NYSTROM)


def _gauss(a, b, order=GAUSS_ORDER):
    nodes, weights = np.polynomial.legendre.leggauss(order)
    half = 0.5 * (b - a)
    return a + half * (nodes + 1.0), half * weights


def phillips_galerkin(n: int) -> TestProblem:
    """Galerkin discretization with n orthonormal box functions.

    Entry (i, j) is ``(1/h) * integral over cell_i x cell_j of kappa(s - t)``.
    Because the cells are uniform it depends only on ``k = i - j`` and
    equals ``(1/h) * int_{-h}^{h} (h - |u|) kappa(k h + u) du``. The kernel's
    kinks at +-3 fall on multiples of h when 4 divides n, so Gauss-Legendre
    on [-h, 0] and [0, h] is exact to rounding.
    """
    if n < 4 or n % 4:
        raise InvalidInputError(f"phillips_galerkin needs n divisible by 4, got {n}")
    h = 12.0 / n
    k = np.arange(n)
    row = np.zeros(n)
    for a, b in ((-h, 0.0), (0.0, h)):
        u, wq = _gauss(a, b)
        row += (phillips_solution(k[:, None] * h + u[None, :]) * ((h - np.abs(u)) * wq)[None, :]).sum(axis=1)
    row /= h
    # kappa is even in s - t, so the Toeplitz matrix is symmetric.
    A = scipy.linalg.toeplitz(row)

    edges = -6.0 + h * np.arange(n + 1)
    clipped = np.clip(edges, -3.0, 3.0)
    antiderivative = clipped + 3.0 / np.pi * np.sin(np.pi * clipped / 3.0)
    x = np.diff(antiderivative) / np.sqrt(h)
    mid = 0.5 * (edges[:-1] + edges[1:])
    return TestProblem(A=A, x_exact=x, y_exact=A @ x, t=mid, h=h, kind=ProblemKind.PHILLIPS_GALERKIN)


def baart_galerkin(n: int) -> TestProblem:
    """Galerkin discretization of Baart's equation with box functions.

    The s-integral of ``exp(s cos t)`` over a cell has a closed form; the
    t-integral uses Gauss-Legendre of order 20 per cell.
    """
    if n < 2:
        raise InvalidInputError(f"baart_galerkin needs n >= 2, got {n}")
    hs = np.pi / (2 * n)
    ht = np.pi / n
    s_left = hs * np.arange(n)
    t_edges = ht * np.arange(n + 1)
    nodes, weights = np.polynomial.legendre.leggauss(GAUSS_ORDER)

    A = np.zeros((n, n))
    for node, weight in zip(nodes, weights):
        t = t_edges[:-1] + 0.5 * ht * (node + 1.0)
        c = np.cos(t)
        # int_{s_i}^{s_i + hs} exp(s c) ds = exp(s_i c) * hs * exprel(hs c)
        A += (0.5 * ht * weight) * np.exp(np.outer(s_left, c)) * (hs * scipy.special.exprel(hs * c))[None, :]
    A /= np.sqrt(hs * ht)

    x = (np.cos(t_edges[:-1]) - np.cos(t_edges[1:])) / np.sqrt(ht)
    mid = 0.5 * (t_edges[:-1] + t_edges[1:])
    return TestProblem(A=A, x_exact=x, y_exact=A @ x, t=mid, h=ht, kind=ProblemKind.BAART_GALERKIN)


_GENERATORS = {
    ProblemKind.PHILLIPS_NYSTROM: phillips_nystrom,
    ProblemKind.PHILLIPS_GALERKIN: phillips_galerkin,
    ProblemKind.BAART_GALERKIN: baart_galerkin,
}


def make_problem(kind, n: int) -> TestProblem:
    try:
        if not isinstance(kind, ProblemKind):
            kind = ProblemKind(str(kind).replace("-", "_"))
    except ValueError:
        raise InvalidInputError(f"unknown problem kind {kind!r}") from None
    return _GENERATORS[kind](int(n))


def gaussian_vector(n: int, seed: int) -> np.ndarray:
    """Standard normal samples by the Box-Muller transform.

    Uniforms come from PCG64 seeded with ``seed``; only its raw double
    stream is used, so the samples are reproducible across platforms and
    NumPy releases.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    m = (n + 1) // 2
    u1 = 1.0 - rng.random(m)  # in (0, 1]
    u2 = rng.random(m)
    radius = np.sqrt(-2.0 * np.log(u1))
    angle = 2.0 * np.pi * u2
    return np.concatenate([radius * np.cos(angle), radius * np.sin(angle)])[:n]


def add_noise(problem: TestProblem, nu: float, seed: int) -> NoisyData:
    """Add Gaussian noise with ``||e||_2 = nu ||y_exact||_2``."""
    if not (np.isfinite(nu) and nu >= 0):
        raise InvalidInputError(f"noise level must be finite and nonnegative, got {nu}")
    y = problem.y_exact
    ynorm = np.linalg.norm(y)
    if nu == 0:
        return NoisyData(y_delta=y.copy(), nu=0.0, delta=0.0, seed=seed)
    e = gaussian_vector(y.size, seed)
    e *= nu * ynorm / np.linalg.norm(e)
    return NoisyData(y_delta=y + e, nu=float(nu), delta=float(nu * ynorm), seed=seed)
