import numpy as np
import pytest

from mahbf.lib.exceptions import (
    ContractViolation,
    RankDeficiencyError,
    SingularSystemError,
)
from mahbf.numerics import (
    RngHandle,
    as_cmatrix,
    frob_norm_diff,
    gram_schmidt_orthogonalize,
    matmul,
    right_pseudo_inverse,
    solve_hermitian,
)


def test_as_cmatrix_rejects_bad_input():
    with pytest.raises(ContractViolation):
        as_cmatrix(np.zeros(3))
    with pytest.raises(ContractViolation):
        as_cmatrix([[1.0, np.nan]])


def test_matmul_checks_shapes():
    np.testing.assert_allclose(matmul(np.eye(2), [[1], [2]]), [[1], [2]])
    with pytest.raises(ContractViolation):
        matmul(np.eye(2), np.eye(3))


def _hpd(n: int, seed: int = 0) -> np.ndarray:
    a = RngHandle(seed).complex_normal((n, n))
    return a @ a.conj().T + n * np.eye(n)


def test_solve_hermitian_matches_direct_solve():
    a = _hpd(5)
    b = RngHandle(1).complex_normal((5, 2))
    x = solve_hermitian(a, b)
    np.testing.assert_allclose(a @ x, b, atol=1e-10)


def test_solve_hermitian_falls_back_for_indefinite_matrix():
    a = np.diag([2.0, -1.0, 3.0]).astype(complex)
    b = np.ones((3, 1), dtype=complex)
    x = solve_hermitian(a, b)
    np.testing.assert_allclose(a @ x, b, atol=1e-12)


def test_solve_hermitian_rejects_ill_conditioned():
    a = np.diag([1.0, 1e-14])
    with pytest.raises(SingularSystemError):
        solve_hermitian(a, np.ones((2, 1)))


def test_solve_hermitian_rejects_non_finite():
    with pytest.raises(SingularSystemError):
        solve_hermitian([[np.inf, 0.0], [0.0, 1.0]], np.ones((2, 1)))


def test_solve_hermitian_rejects_shape_mismatch():
    with pytest.raises(ContractViolation):
        solve_hermitian(np.eye(2), np.ones((3, 1)))


def _conditioned(condition: float, seed: int = 0) -> np.ndarray:
    rng = RngHandle(seed)
    u, _ = np.linalg.qr(rng.complex_normal((2, 2)))
    v, _ = np.linalg.qr(rng.complex_normal((4, 2)))
    return u @ np.diag([1.0, 1.0 / condition]) @ v.conj().T


def test_right_pseudo_inverse_matches_pinv():
    g = RngHandle(1).complex_normal((3, 5))
    x = right_pseudo_inverse(g)
    np.testing.assert_allclose(g @ x, np.eye(3), atol=1e-12)
    np.testing.assert_allclose(x, np.linalg.pinv(g), atol=1e-12)


def test_right_pseudo_inverse_is_accurate_when_the_gram_matrix_is_not():
    # cond(G G^H) = 1e14 would exceed the limit; cond(G) = 1e7 does not
    g = _conditioned(1e7)
    x = right_pseudo_inverse(g)
    np.testing.assert_allclose(g @ x, np.eye(2), atol=1e-6)
    pinv = np.linalg.pinv(g)
    assert np.linalg.norm(x - pinv) / np.linalg.norm(pinv) < 1e-6


def test_right_pseudo_inverse_rejects_ill_conditioned():
    with pytest.raises(SingularSystemError):
        right_pseudo_inverse(_conditioned(1e14))


def test_right_pseudo_inverse_rejects_non_finite():
    with pytest.raises(SingularSystemError):
        right_pseudo_inverse([[np.inf, 0.0, 0.0], [0.0, 1.0, 0.0]])


def test_right_pseudo_inverse_rejects_tall_matrix():
    with pytest.raises(ContractViolation):
        right_pseudo_inverse(np.ones((3, 2)))


def test_gram_schmidt_orthogonal_and_first_unchanged():
    rng = RngHandle(3)
    vectors = [rng.complex_normal(6) for _ in range(4)]
    basis = gram_schmidt_orthogonalize(vectors)
    np.testing.assert_allclose(basis[0], vectors[0])
    for i in range(4):
        for j in range(i):
            assert abs(np.vdot(basis[i], basis[j])) < 1e-10


def test_gram_schmidt_empty():
    assert gram_schmidt_orthogonalize([]) == []


def test_gram_schmidt_rejects_dependent_vectors():
    v = np.array([1.0, 2.0, 3.0])
    with pytest.raises(RankDeficiencyError):
        gram_schmidt_orthogonalize([v, 2.0 * v])


def test_gram_schmidt_rejects_too_many_vectors():
    with pytest.raises(ContractViolation):
        gram_schmidt_orthogonalize([np.ones(2)] * 3)


def test_frob_norm_diff():
    assert frob_norm_diff(np.eye(2), np.zeros((2, 2))) == pytest.approx(np.sqrt(2.0))
    with pytest.raises(ContractViolation):
        frob_norm_diff(np.eye(2), np.eye(3))
