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


from dataclasses import dataclass

import numpy as np

from uqtraj.core.covariance import det2, ensure_psd
from uqtraj.core.ellipse import DEGENERATE_DET, make_ellipse, mahalanobis_squared
from uqtraj.core.types import CovMatrix2, Ellipse
from uqtraj.utils.exceptions import DegenerateEllipse, NumericalFailure

BISECTION_TOL = 1e-10
MAX_ITERATIONS = 200


@dataclass(frozen=True)
class TotalUncertainty:
    """
    Sensing and prediction ellipses around a predicted position and an ellipse enclosing their Minkowski sum.

    Attributes:
        center (tuple of float): Predicted position.
        e1 (Ellipse): Sensing ellipse centered at `center`.
        e2 (Ellipse): Prediction ellipse centered at `center`.
        outer (Ellipse): Trace-minimal ellipse containing E1 + E2, centered at `center`.
    """

    center: tuple
    e1: Ellipse
    e2: Ellipse
    outer: Ellipse

    @property
    def is_degenerate(self):
        """
        (bool): True if the outer ellipse has (near) zero area.
        """
        return self.outer.cov.det <= DEGENERATE_DET


def outer_sum_cov(q1, q2):
    """
    Trace-minimal outer ellipse of the Minkowski sum of two centered ellipses {x : x^T Q^-1 x <= 1}.

    Returns (1 + k) Q1 + (1 + 1/k) Q2 with k = sqrt(tr Q2 / tr Q1). A zero shape leaves the other one unchanged.

    Args:
        q1 (np.ndarray): Shape matrices of shape (..., 2, 2), already multiplied by scale^2.
        q2 (np.ndarray): Shape matrices of shape (..., 2, 2).

    Returns:
        (np.ndarray): Shape matrices of the outer ellipses.
    """
    q1 = np.asarray(q1, dtype=float)
    q2 = np.asarray(q2, dtype=float)
    t1 = np.trace(q1, axis1=-2, axis2=-1)[..., None, None]
    t2 = np.trace(q2, axis1=-2, axis2=-1)[..., None, None]
    both = (t1 > 0) & (t2 > 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        k = np.sqrt(np.where(both, t2 / np.where(t1 > 0, t1, 1.0), 1.0))
        combined = (1 + k) * q1 + (1 + 1 / k) * q2
    return np.where(both, combined, q1 + q2)


def minkowski_total(e1, e2, center=None):
    """
    Total uncertainty ellipse of a sensing and a prediction ellipse.

    Both ellipses are moved to `center`. The outer ellipse keeps the common sigma multiplier if both inputs share
    one, otherwise it holds the scaled matrix with multiplier 1.

    Args:
        e1 (Ellipse): Sensing ellipse.
        e2 (Ellipse): Prediction ellipse.
        center (array-like, optional): Predicted position. Center of `e1` if None.

    Returns:
        (TotalUncertainty): Both ellipses and their outer approximation.
    """
    center = e1.center if center is None else tuple(float(c) for c in center)
    q1 = ensure_psd(e1.scaled_matrix(), name="sensing covariance")
    q2 = ensure_psd(e2.scaled_matrix(), name="prediction covariance")
    outer = outer_sum_cov(q1, q2)
    scale = e1.scale if e1.scale == e2.scale else 1.0
    return TotalUncertainty(
        center=center,
        e1=Ellipse(center=center, cov=e1.cov, scale=e1.scale),
        e2=Ellipse(center=center, cov=e2.cov, scale=e2.scale),
        outer=make_ellipse(center, outer / scale ** 2, scale=scale),
    )


def _sqrt_psd(q):
    eigenvalues, eigenvectors = np.linalg.eigh(q)
    return (eigenvectors * np.sqrt(np.clip(eigenvalues, 0.0, None))) @ eigenvectors.T


def _inv_sqrt_pd(q):
    eigenvalues, eigenvectors = np.linalg.eigh(q)
    return (eigenvectors / np.sqrt(eigenvalues)) @ eigenvectors.T


def _min_distance_squared(q1, q2, d):
    """
    min over x2 in {x : x^T Q2^-1 x <= 1} of (d - x2)^T Q1^-1 (d - x2), Q1 positive definite.

    With M = Q1^-1/2 Q2^1/2 and g = Q1^-1/2 d this is min ||M u - g||^2 over ||u|| <= 1. If the least-squares
    solution lies outside the unit ball, the multiplier lambda with ||(M^T M + lambda I)^-1 M^T g|| = 1 is found by
    bisection on [0, ||M^T g||].
    """
    a = _inv_sqrt_pd(q1)
    m = a @ _sqrt_psd(q2)
    g = a @ d
    mtg = m.T @ g
    mu, basis = np.linalg.eigh(m.T @ m)
    b = basis.T @ mtg
    positive = mu > 1e-14 * max(1.0, mu.max())

    def solution(lam):
        if lam == 0:
            coefficients = np.where(positive, b / np.where(positive, mu, 1.0), 0.0)
        else:
            coefficients = b / (mu + lam)
        return basis @ coefficients

    u = solution(0.0)
    if u @ u > 1.0:
        low, high = 0.0, float(np.linalg.norm(mtg))
        for _ in range(MAX_ITERATIONS):
            middle = 0.5 * (low + high)
            u = solution(middle)
            if u @ u > 1.0:
                low = middle
            else:
                high = middle
            if high - low <= BISECTION_TOL * max(1.0, high):
                break
        else:
            raise NumericalFailure(f"Minkowski membership did not converge in {MAX_ITERATIONS} iterations")
        u = solution(high)
    residual = m @ u - g
    return float(residual @ residual)


def _member(q1, q2, d):
    if mahalanobis_squared(d, q1) <= 1.0:
        return True
    if det2(q2) > DEGENERATE_DET and mahalanobis_squared(d, q2) <= 1.0:
        return True
    outer = outer_sum_cov(q1, q2)
    if det2(outer) > DEGENERATE_DET and mahalanobis_squared(d, outer) > 1.0:
        return False
    return _min_distance_squared(q1, q2, d) <= 1.0


def in_minkowski_sum(e1, e2, center, p):
    """
    Exact membership test for the Minkowski sum of two ellipses translated to `center`.

    p belongs to the sum iff the smallest Mahalanobis distance (w.r.t. E1) between p - center and a point of E2 is
    at most 1. The roles of the ellipses are swapped when E1 is degenerate.

    Args:
        e1 (Ellipse): Sensing ellipse.
        e2 (Ellipse): Prediction ellipse.
        center (array-like): Predicted position.
        p (array-like): Point to test.

    Returns:
        (bool): True if p lies in the translated sum.
    """
    q1 = ensure_psd(e1.scaled_matrix(), name="sensing covariance")
    q2 = ensure_psd(e2.scaled_matrix(), name="prediction covariance")
    d = np.asarray(p, dtype=float) - np.asarray(center, dtype=float)
    if det2(e1.cov.to_matrix()) <= DEGENERATE_DET:
        if det2(e2.cov.to_matrix()) <= DEGENERATE_DET:
            raise DegenerateEllipse("Both ellipses of the Minkowski sum are degenerate")
        q1, q2 = q2, q1
    return _member(q1, q2, d)


def in_minkowski_sum_batch(cov1, cov2, diffs, scale=1.0):
    """
    Exact Minkowski membership for stacks of covariance pairs sharing a sigma multiplier.

    Args:
        cov1 (np.ndarray): Sensing covariances of shape (..., 2, 2).
        cov2 (np.ndarray): Prediction covariances of shape (..., 2, 2).
        diffs (np.ndarray): Points minus centers, shape (..., 2).
        scale (float, optional): Sigma multiplier of both ellipses.

    Returns:
        (np.ndarray, np.ndarray): Boolean arrays of shape (...): covered and degenerate. Steps where both
            ellipses are degenerate count as not covered.
    """
    cov1 = ensure_psd(cov1, name="sensing covariance")
    cov2 = ensure_psd(cov2, name="prediction covariance")
    diffs = np.asarray(diffs, dtype=float)
    shape = diffs.shape[:-1]
    covered = np.zeros(shape, dtype=bool)
    degenerate = np.zeros(shape, dtype=bool)
    for index in np.ndindex(*shape):
        q1, q2 = scale ** 2 * cov1[index], scale ** 2 * cov2[index]
        if det2(cov1[index]) <= DEGENERATE_DET:
            if det2(cov2[index]) <= DEGENERATE_DET:
                degenerate[index] = True
                continue
            q1, q2 = q2, q1
        covered[index] = _member(q1, q2, diffs[index])
    return covered, degenerate


def total_uncertainty_from_covs(center, sens_cov, pred_cov, scale=1.0):
    """
    Convenience wrapper of `minkowski_total` for 2x2 matrices.
    """
    return minkowski_total(
        Ellipse(center=tuple(center), cov=CovMatrix2.from_matrix(sens_cov), scale=scale),
        Ellipse(center=tuple(center), cov=CovMatrix2.from_matrix(pred_cov), scale=scale),
        center=center,
    )
