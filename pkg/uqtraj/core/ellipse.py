# Copyright (c) 2023 uqtraj developers
#
# Permission is hereby granted, free of charge, to any person obtaining a copy of
# this software and associated documentation files (the "Software"), to deal in
# the Software without restriction, including without limitation the rights to
# use, copy, modify, merge, publish, distribute, sublicense, and/or sell copies of
# the Software, and to permit persons to whom the Software is furnished to do so,
# subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY, FITNESS
# FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE AUTHORS OR
# COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER LIABILITY, WHETHER
# IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM, OUT OF OR IN
# CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE SOFTWARE.


import numpy as np

from uqtraj.core.covariance import check_finite, det2, ensure_psd
from uqtraj.core.types import CovMatrix2, Ellipse
from uqtraj.utils.exceptions import DegenerateEllipse, InvalidCovariance

DEGENERATE_DET = 1e-12


def principal_angle(cov):
    """
    Counterclockwise angle of the principal eigenvector of 2x2 covariances, in [-pi/2, pi/2).

    Args:
        cov (np.ndarray): Array of shape (..., 2, 2).

    Returns:
        (np.ndarray or float): Angle in radians.
    """
    cov = np.asarray(cov, dtype=float)
    angle = 0.5 * np.arctan2(2 * cov[..., 0, 1], cov[..., 0, 0] - cov[..., 1, 1])
    return np.where(angle >= np.pi / 2, angle - np.pi, angle)


def half_widths(cov, scale=1.0):
    """
    Major and minor half-widths scale * sqrt(eigenvalue) of 2x2 covariances.

    Args:
        cov (np.ndarray): Array of shape (..., 2, 2).
        scale (float, optional): Sigma multiplier.

    Returns:
        (tuple of np.ndarray): Major and minor half-widths, each of shape (...).
    """
    cov = ensure_psd(cov, name="ellipse covariance")
    eigenvalues = np.clip(np.linalg.eigvalsh(cov), 0.0, None)
    return scale * np.sqrt(eigenvalues[..., 1]), scale * np.sqrt(eigenvalues[..., 0])


def ellipse_axes(e):
    """
    Half-widths and orientation of an ellipse.

    Args:
        e (Ellipse): The ellipse.

    Returns:
        (float, float, float): Major half-width, minor half-width (both meters) and angle of the major axis in
            radians, counterclockwise from +x, in [-pi/2, pi/2).
    """
    cov = e.cov.to_matrix()
    if not np.all(np.isfinite(cov)) or not np.all(np.isfinite(e.center)) or not np.isfinite(e.scale):
        raise InvalidCovariance(f"Ellipse contains non-finite values: {e}")
    major, minor = half_widths(cov, scale=e.scale)
    return float(major), float(minor), float(principal_angle(cov))


def cov_from_axes(major, minor, angle, scale=1.0):
    """
    Rebuilds the covariance whose scale-sigma ellipse has the given half-widths and orientation.

    Args:
        major (float): Major half-width.
        minor (float): Minor half-width.
        angle (float): Angle of the major axis in radians.
        scale (float, optional): Sigma multiplier the half-widths were computed with.

    Returns:
        (CovMatrix2): The covariance.
    """
    c, s = np.cos(angle), np.sin(angle)
    rotation = np.array([[c, -s], [s, c]])
    variances = np.array([major, minor]) ** 2 / scale ** 2
    return CovMatrix2.from_matrix(rotation @ np.diag(variances) @ rotation.T)


def mahalanobis_squared(diff, cov):
    """
    Squared Mahalanobis distance diff^T cov^-1 diff for stacks of 2-vectors and 2x2 covariances.

    Uses the closed-form 2x2 inverse. Degenerate covariances give inf or nan, the caller filters them.

    Args:
        diff (np.ndarray): Array of shape (..., 2).
        cov (np.ndarray): Array of shape (..., 2, 2).

    Returns:
        (np.ndarray): Array of shape (...).
    """
    diff = np.asarray(diff, dtype=float)
    cov = np.asarray(cov, dtype=float)
    a, b, c = cov[..., 0, 0], 0.5 * (cov[..., 0, 1] + cov[..., 1, 0]), cov[..., 1, 1]
    dx, dy = diff[..., 0], diff[..., 1]
    with np.errstate(divide="ignore", invalid="ignore"):
        return (c * dx ** 2 - 2 * b * dx * dy + a * dy ** 2) / (a * c - b ** 2)


def contains(e, p):
    """
    Tests whether a point lies in the ellipse (boundary included).

    The degeneracy threshold applies to the unscaled covariance: an ellipse whose `cov` has determinant at most
    1e-12 raises `DegenerateEllipse` whatever its `scale`, and a large `scale` does not rescue it.

    Args:
        e (Ellipse): Nondegenerate ellipse.
        p (array-like): (x, y) point.

    Returns:
        (bool): True if (p - c)^T (scale^2 cov)^-1 (p - c) <= 1.
    """
    cov = e.cov.to_matrix()
    check_finite(cov, name="ellipse covariance")
    if det2(cov) <= DEGENERATE_DET:
        raise DegenerateEllipse(f"Ellipse covariance has determinant {det2(cov):.3e}, containment is undefined")
    diff = np.asarray(p, dtype=float) - np.asarray(e.center)
    return bool(mahalanobis_squared(diff, e.scaled_matrix()) <= 1.0)


def contains_batch(centers, covs, points, scale=1.0):
    """
    Vectorized containment for many ellipses sharing a sigma multiplier.

    Degenerate ellipses (determinant of the unscaled cov at most 1e-12, before `scale` is applied) are reported as
    not containing the point.

    Args:
        centers (np.ndarray): Array of shape (..., 2).
        covs (np.ndarray): Array of shape (..., 2, 2).
        points (np.ndarray): Array of shape (..., 2).
        scale (float, optional): Sigma multiplier.

    Returns:
        (np.ndarray, np.ndarray): Boolean arrays of shape (...): covered and degenerate.
    """
    covs = np.asarray(covs, dtype=float)
    check_finite(covs, name="ellipse covariance")
    degenerate = det2(covs) <= DEGENERATE_DET
    distance = mahalanobis_squared(np.asarray(points) - np.asarray(centers), scale ** 2 * covs)
    with np.errstate(invalid="ignore"):
        covered = np.where(degenerate, False, distance <= 1.0)
    return covered, degenerate


def make_ellipse(center, cov, scale=1.0):
    """
    Convenience constructor accepting a 2x2 matrix or compact (sxx, sxy, syy) covariance.
    """
    cov = np.asarray(cov, dtype=float)
    cov_matrix = CovMatrix2(*cov) if cov.shape == (3,) else CovMatrix2.from_matrix(cov)
    return Ellipse(center=tuple(np.asarray(center, dtype=float)), cov=cov_matrix, scale=float(scale))
