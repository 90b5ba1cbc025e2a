import numpy as np
import pytest

from uqtraj.core import covariance_factor, det2, ensure_psd, inv2, is_psd, symmetrize
from uqtraj.utils import InvalidCovariance


def test_symmetrize():
    """
    Test.
    """
    matrix = np.array([[1.0, 2.0], [0.0, 3.0]])
    np.testing.assert_array_equal(symmetrize(matrix), np.array([[1.0, 1.0], [1.0, 3.0]]))


def test_is_psd():
    """
    Test.
    """
    assert is_psd(np.eye(2))
    assert is_psd(np.zeros((2, 2)))
    assert is_psd(np.array([[1.0, 1.0], [1.0, 1.0]]))
    assert not is_psd(np.array([[1.0, 2.0], [2.0, 1.0]]))
    assert not is_psd(np.array([[np.nan, 0.0], [0.0, 1.0]]))
    assert is_psd(np.stack([np.eye(2), 2 * np.eye(2)]))


def test_ensure_psd_keeps_psd_matrices():
    """
    Test.
    """
    matrix = np.array([[2.0, 1.0], [1.0, 2.0]])
    np.testing.assert_array_equal(ensure_psd(matrix), matrix)
    np.testing.assert_array_equal(ensure_psd(np.zeros((2, 2))), np.zeros((2, 2)))


def test_ensure_psd_clamps_rounding_noise():
    """
    Test.
    """
    matrix = np.array([[1.0, 1.0], [1.0, 1.0 - 1e-14]])
    repaired = ensure_psd(matrix)
    assert np.linalg.eigvalsh(repaired).min() >= 0
    np.testing.assert_allclose(repaired, matrix, atol=1e-12)


def test_ensure_psd_errors():
    """
    Test.
    """
    with pytest.raises(InvalidCovariance):
        ensure_psd(np.array([[1.0, 0.0], [0.0, -0.5]]))
    with pytest.raises(InvalidCovariance):
        ensure_psd(np.array([[np.inf, 0.0], [0.0, 1.0]]))


def test_covariance_factor():
    """
    Test.
    """
    cov = np.array([[2.0, 1.0], [1.0, 2.0]])
    factor = covariance_factor(cov)
    np.testing.assert_allclose(factor @ factor.T, cov, atol=1e-12)

    singular = np.array([[1.0, 0.0], [0.0, 0.0]])
    factor = covariance_factor(singular)
    np.testing.assert_allclose(factor @ factor.T, singular, atol=1e-12)

    np.testing.assert_array_equal(covariance_factor(np.zeros((4, 4))), np.zeros((4, 4)))


def test_det2_inv2():
    """
    Test.
    """
    cov = np.array([[[4.0, 1.0], [1.0, 2.0]], [[1.0, 0.0], [0.0, 1.0]]])
    np.testing.assert_allclose(det2(cov), [7.0, 1.0])
    np.testing.assert_allclose(inv2(cov), np.linalg.inv(cov), atol=1e-12)
