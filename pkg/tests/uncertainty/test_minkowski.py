import numpy as np
import pytest

from uqtraj.core import make_ellipse, mahalanobis_squared
from uqtraj.uncertainty import (
    in_minkowski_sum,
    in_minkowski_sum_batch,
    minkowski_total,
    outer_sum_cov,
    total_uncertainty_from_covs,
)
from uqtraj.utils import DegenerateEllipse


def rotated(cov, angle):
    c, s = np.cos(angle), np.sin(angle)
    r = np.array([[c, -s], [s, c]])
    return r @ np.asarray(cov, dtype=float) @ r.T


def support_oracle(q1, q2, diffs, n_directions=4000):
    """
    Membership in a convex sum via its support function h(n) = sqrt(n^T Q1 n) + sqrt(n^T Q2 n).
    """
    angles = np.linspace(0.0, 2 * np.pi, n_directions, endpoint=False)
    normals = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    support = np.sqrt(np.einsum("ni,ij,nj->n", normals, q1, normals)) + np.sqrt(
        np.einsum("ni,ij,nj->n", normals, q2, normals)
    )
    return np.all(diffs @ normals.T <= support, axis=1)


@pytest.fixture(scope="function")
def anisotropic_pair():
    """
    Fixture.
    """
    return np.diag([4.0, 1.0]), rotated(np.diag([1.0, 0.25]), 0.7)


def test_outer_sum_cov():
    """
    Test.
    """
    sigma = np.array([[2.0, 0.3], [0.3, 1.0]])
    np.testing.assert_allclose(outer_sum_cov(sigma, np.zeros((2, 2))), sigma)
    np.testing.assert_allclose(outer_sum_cov(np.zeros((2, 2)), sigma), sigma)
    np.testing.assert_allclose(outer_sum_cov(np.eye(2), np.eye(2)), 4 * np.eye(2))
    stacked = outer_sum_cov(np.tile(np.eye(2), (3, 1, 1)), np.tile(np.eye(2), (3, 1, 1)))
    np.testing.assert_allclose(stacked, np.tile(4 * np.eye(2), (3, 1, 1)))


def test_outer_contains_boundary_sums():
    """
    Test.
    """
    q1, q2 = np.diag([4.0, 1.0]), np.diag([1.0, 4.0])
    outer = outer_sum_cov(q1, q2)
    rng = np.random.default_rng(0)
    theta1, theta2 = rng.uniform(0, 2 * np.pi, size=(2, 10 ** 6))
    l1, l2 = np.linalg.cholesky(q1), np.linalg.cholesky(q2)
    points = np.stack([np.cos(theta1), np.sin(theta1)], axis=1) @ l1.T
    points += np.stack([np.cos(theta2), np.sin(theta2)], axis=1) @ l2.T
    assert np.all(mahalanobis_squared(points, outer) <= 1 + 1e-9)


def test_minkowski_total():
    """
    Test.
    """
    total = minkowski_total(make_ellipse((5, 5), np.eye(2)), make_ellipse((0, 0), np.eye(2)), center=(1, 2))
    assert total.center == (1.0, 2.0)
    assert total.e1.center == (1.0, 2.0)
    np.testing.assert_allclose(total.outer.cov.to_matrix(), 4 * np.eye(2))
    assert not total.is_degenerate

    scaled = total_uncertainty_from_covs((0, 0), np.eye(2), np.eye(2), scale=2.0)
    assert scaled.outer.scale == 2.0
    np.testing.assert_allclose(scaled.outer.scaled_matrix(), 16 * np.eye(2))

    mixed = minkowski_total(make_ellipse((0, 0), np.eye(2), scale=1), make_ellipse((0, 0), np.eye(2), scale=2))
    assert mixed.outer.scale == 1.0
    np.testing.assert_allclose(mixed.outer.scaled_matrix(), 9 * np.eye(2))


@pytest.mark.parametrize(
    "point, expected",
    [((0.0, 0.0), True), ((1.99, 0.0), True), ((2.01, 0.0), False), ((1.4, 1.4), True), ((1.45, 1.45), False)],
)
def test_in_minkowski_sum_unit_disks(point, expected):
    """
    Test.
    """
    disk = make_ellipse((0, 0), np.eye(2))
    assert in_minkowski_sum(disk, disk, (0.0, 0.0), point) == expected
    shifted = np.asarray(point) + [3.0, -1.0]
    assert in_minkowski_sum(disk, disk, (3.0, -1.0), shifted) == expected


def test_in_minkowski_sum_agrees_with_oracle(anisotropic_pair):
    """
    Test.
    """
    q1, q2 = anisotropic_pair
    n = 2000
    diffs = np.random.default_rng(1).uniform(-4, 4, size=(n, 2))
    covered, degenerate = in_minkowski_sum_batch(np.broadcast_to(q1, (n, 2, 2)), np.broadcast_to(q2, (n, 2, 2)), diffs)
    assert not degenerate.any()
    expected = support_oracle(q1, q2, diffs)
    assert np.mean(covered == expected) >= 0.999
    assert 0.1 < covered.mean() < 0.9


def test_exact_inside_outer_and_swap_symmetry(anisotropic_pair):
    """
    Test.
    """
    q1, q2 = anisotropic_pair
    n = 1000
    diffs = np.random.default_rng(2).uniform(-4, 4, size=(n, 2))
    cov1, cov2 = np.broadcast_to(q1, (n, 2, 2)), np.broadcast_to(q2, (n, 2, 2))
    covered, _ = in_minkowski_sum_batch(cov1, cov2, diffs)
    swapped, _ = in_minkowski_sum_batch(cov2, cov1, diffs)
    np.testing.assert_array_equal(covered, swapped)

    in_outer = mahalanobis_squared(diffs, outer_sum_cov(q1, q2)) <= 1.0
    assert np.all(in_outer[covered])
    assert in_outer.sum() > covered.sum()


def test_in_minkowski_sum_degenerate():
    """
    Test.
    """
    point_ellipse = make_ellipse((0, 0), np.zeros((2, 2)))
    disk = make_ellipse((0, 0), np.eye(2))
    assert in_minkowski_sum(point_ellipse, disk, (0, 0), (0.5, 0.0))
    assert not in_minkowski_sum(point_ellipse, disk, (0, 0), (1.5, 0.0))
    assert in_minkowski_sum(disk, point_ellipse, (0, 0), (0.5, 0.0))

    segment = make_ellipse((0, 0), np.diag([1.0, 0.0]))
    assert in_minkowski_sum(segment, disk, (0, 0), (1.9, 0.0))
    assert in_minkowski_sum(segment, disk, (0, 0), (1.3, 0.9))
    assert not in_minkowski_sum(segment, disk, (0, 0), (0.0, 1.01))
    assert not in_minkowski_sum(segment, disk, (0, 0), (1.5, 0.9))

    with pytest.raises(DegenerateEllipse):
        in_minkowski_sum(point_ellipse, point_ellipse, (0, 0), (0, 0))

    covered, degenerate = in_minkowski_sum_batch(
        np.stack([np.zeros((2, 2)), np.eye(2)]), np.zeros((2, 2, 2)), np.zeros((2, 2))
    )
    np.testing.assert_array_equal(degenerate, [True, False])
    np.testing.assert_array_equal(covered, [False, True])


def test_outer_sum_scaling(anisotropic_pair):
    """
    Test.
    """
    q1, q2 = anisotropic_pair
    np.testing.assert_allclose(outer_sum_cov(2 * q1, 2 * q2), 2 * outer_sum_cov(q1, q2))
    np.testing.assert_allclose(outer_sum_cov(9 * q1, 9 * q2), 9 * outer_sum_cov(q1, q2))
    assert np.trace(outer_sum_cov(q1, q2)) == pytest.approx((np.sqrt(np.trace(q1)) + np.sqrt(np.trace(q2))) ** 2)

    s, n = 3.0, 1000
    diffs = np.random.default_rng(3).uniform(-4, 4, size=(n, 2))
    cov1, cov2 = np.broadcast_to(q1, (n, 2, 2)), np.broadcast_to(q2, (n, 2, 2))
    covered, _ = in_minkowski_sum_batch(cov1, cov2, diffs)
    scaled, _ = in_minkowski_sum_batch(s ** 2 * cov1, s ** 2 * cov2, s * diffs)
    np.testing.assert_array_equal(covered, scaled)
    multiplied, _ = in_minkowski_sum_batch(cov1, cov2, s * diffs, scale=s)
    np.testing.assert_array_equal(covered, multiplied)

    for point in [(1.0, 0.5), (2.5, 0.0), (-0.4, 1.6)]:
        plain = in_minkowski_sum(make_ellipse((0, 0), q1), make_ellipse((0, 0), q2), (1.0, 1.0), point)
        big = in_minkowski_sum(
            make_ellipse((0, 0), q1, scale=s),
            make_ellipse((0, 0), q2, scale=s),
            (s, s),
            (s * point[0], s * point[1]),
        )
        assert plain == big
