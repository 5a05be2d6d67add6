import numpy as np
import pytest
from scipy import integrate

from arnoldi_tikhonov.errors import InvalidInputError
from arnoldi_tikhonov.problems import (
    ProblemKind,
    add_noise,
    baart_galerkin,
    baart_rhs,
    gaussian_vector,
    make_problem,
    phillips_galerkin,
    phillips_nystrom,
    phillips_rhs,
    phillips_solution,
)


def trapezoid_errors(ns):
    return np.array([np.max(np.abs(p.y_exact - phillips_rhs(p.t))) for p in map(phillips_nystrom, ns)])


def test_phillips_solution_values():
    np.testing.assert_allclose(phillips_solution([0.0, 1.5, 3.0, 4.0, -3.0]), [2.0, 1.0, 0.0, 0.0, 0.0], atol=1e-15)


def test_phillips_rhs_matches_quadrature():
    for s in (-4.5, 0.0, 1.0, 5.9):
        ref, _ = integrate.quad(lambda t: phillips_solution(s - t) * phillips_solution(t), -6, 6, points=[-3, 3, s - 3, s + 3], epsabs=1e-13)
        assert phillips_rhs(s) == pytest.approx(ref, abs=1e-11)
    assert phillips_rhs(0.0) == pytest.approx(9.0, abs=1e-14)


def test_nystrom_structure(nystrom_100):
    p = nystrom_100
    np.testing.assert_allclose(p.x_exact, phillips_solution(p.t))
    assert p.t[0] == -6.0 and p.t[-1] == 6.0
    np.testing.assert_allclose(p.y_exact, p.A @ p.x_exact)
    with pytest.raises(InvalidInputError):
        phillips_nystrom(2)


def test_nystrom_rhs_centre_within_h_squared():
    p = phillips_nystrom(1001)
    mid = p.n // 2
    assert abs(p.y_exact[mid] - 9.0) <= 10 * p.h**2


@pytest.mark.parametrize("ns", [[129, 257, 513, 1025], [131, 263, 523, 1031]])
def test_trapezoid_order_at_nodes(ns):
    # The integrand t -> kappa(s - t) x(t) is C^1 and vanishes with its
    # derivative at +-6, so the h^2 Euler-Maclaurin term telescopes away and
    # the error at the nodes is O(h^4).
    ns = np.array(ns)
    slope = np.polyfit(np.log(12.0 / (ns - 1)), np.log(trapezoid_errors(ns)), 1)[0]
    assert 3.8 <= slope <= 4.2


def _galerkin_entry_oracle(kernel, s_edges, t_edges, i, j, scale):
    val, _ = integrate.dblquad(
        lambda t, s: kernel(s, t), s_edges[i], s_edges[i + 1], t_edges[j], t_edges[j + 1], epsabs=1e-15, epsrel=1e-13
    )
    return val / scale


def test_phillips_galerkin_against_dblquad():
    n = 16
    p = phillips_galerkin(n)
    edges = -6.0 + p.h * np.arange(n + 1)
    kernel = lambda s, t: phillips_solution(s - t)
    for i, j in [(0, 0), (3, 5), (7, 7), (0, 3), (10, 4), (15, 0), (8, 12)]:
        ref = _galerkin_entry_oracle(kernel, edges, edges, i, j, p.h)
        assert p.A[i, j] == pytest.approx(ref, abs=1e-13)
    # x is the scaled box average
    ref, _ = integrate.quad(phillips_solution, edges[5], edges[6])
    assert p.x_exact[5] == pytest.approx(ref / np.sqrt(p.h), abs=1e-14)


def test_phillips_galerkin_symmetric_toeplitz(galerkin_200):
    A = galerkin_200.A
    np.testing.assert_array_equal(A, A.T)
    np.testing.assert_array_equal(A[1:, 1:], A[:-1, :-1])
    for bad in (6, 10, 0):
        with pytest.raises(InvalidInputError):
            phillips_galerkin(bad)


def test_baart_galerkin_against_dblquad():
    n = 8
    p = baart_galerkin(n)
    hs, ht = np.pi / (2 * n), np.pi / n
    s_edges, t_edges = hs * np.arange(n + 1), ht * np.arange(n + 1)
    kernel = lambda s, t: np.exp(s * np.cos(t))
    for i, j in [(0, 0), (2, 5), (7, 7), (7, 0)]:
        ref = _galerkin_entry_oracle(kernel, s_edges, t_edges, i, j, np.sqrt(hs * ht))
        assert p.A[i, j] == pytest.approx(ref, rel=1e-13)
    ref, _ = integrate.quad(np.sin, t_edges[3], t_edges[4])
    assert p.x_exact[3] == pytest.approx(ref / np.sqrt(ht), rel=1e-14)


def test_baart_rhs():
    assert baart_rhs(0.0) == 2.0
    for s in (0.3, 1.2):
        ref, _ = integrate.quad(lambda t: np.exp(s * np.cos(t)) * np.sin(t), 0, np.pi)
        assert baart_rhs(s) == pytest.approx(ref, rel=1e-13)


def test_baart_spectrum():
    s = np.linalg.svd(baart_galerkin(200).A, compute_uv=False)
    assert s[0] == pytest.approx(3.23, rel=5e-3)
    assert s[9] / s[0] <= 1e-10


def test_make_problem_aliases():
    assert make_problem("phillips-nystrom", 10).kind is ProblemKind.PHILLIPS_NYSTROM
    assert make_problem(ProblemKind.BAART_GALERKIN, 4).kind is ProblemKind.BAART_GALERKIN
    with pytest.raises(InvalidInputError):
        make_problem("shaw", 10)


def test_gaussian_vector_deterministic_and_standard():
    a = gaussian_vector(10001, 7)
    np.testing.assert_array_equal(a, gaussian_vector(10001, 7))
    assert a.size == 10001
    assert not np.array_equal(a, gaussian_vector(10001, 8))
    assert abs(a.mean()) < 0.05 and abs(a.std() - 1) < 0.05


@pytest.mark.parametrize("nu", [1e-2, 1e-3, 0.5])
def test_noise_norm_exact(nystrom_100, nu):
    d = add_noise(nystrom_100, nu, 3)
    ynorm = np.linalg.norm(nystrom_100.y_exact)
    assert abs(np.linalg.norm(d.y_delta - nystrom_100.y_exact) - nu * ynorm) <= 1e-14 * ynorm
    assert d.delta == pytest.approx(nu * ynorm, rel=1e-15)


def test_zero_noise(nystrom_100):
    d = add_noise(nystrom_100, 0.0, 0)
    np.testing.assert_array_equal(d.y_delta, nystrom_100.y_exact)
    assert d.delta == 0.0
    with pytest.raises(InvalidInputError):
        add_noise(nystrom_100, -1e-3, 0)
