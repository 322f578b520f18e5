import numpy as np
import pytest

from droplab.linalg import jacobi_eigenvalues, min_singular_value


def test_diagonal_matrix():
    eigs = jacobi_eigenvalues(np.diag([3.0, -1.0, 2.0]))
    assert np.allclose(eigs, [-1.0, 2.0, 3.0])


def test_matches_lapack_on_random_symmetric():
    rng = np.random.default_rng(0)
    for n in (2, 3, 5, 10, 30):
        a = rng.normal(size=(n, n))
        a = (a + a.T) / 2
        ours = jacobi_eigenvalues(a)
        ref = np.linalg.eigvalsh(a)
        assert np.allclose(ours, ref, atol=1e-10 * max(1.0, np.abs(ref).max()))


def test_psd_gram_eigenvalues_nonnegative():
    rng = np.random.default_rng(1)
    m = rng.random((6, 3))
    eigs = jacobi_eigenvalues(m.T @ m)
    assert eigs[0] >= -1e-12


def test_rejects_nonsymmetric():
    with pytest.raises(ValueError):
        jacobi_eigenvalues(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_rejects_oversized():
    with pytest.raises(ValueError):
        jacobi_eigenvalues(np.eye(65))


def test_zero_matrix():
    assert np.allclose(jacobi_eigenvalues(np.zeros((4, 4))), 0.0)


def test_min_singular_value_matches_svd():
    rng = np.random.default_rng(2)
    for shape in ((5, 2), (10, 4), (7, 7)):
        m = rng.normal(size=shape)
        assert min_singular_value(m) == pytest.approx(
            np.linalg.svd(m, compute_uv=False).min(), abs=1e-10)


def test_min_singular_value_orthonormal_columns():
    m = np.eye(5)[:, :3]
    assert min_singular_value(m) == pytest.approx(1.0, abs=1e-12)
