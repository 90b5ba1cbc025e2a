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

from uqtraj.utils.exceptions import InvalidCovariance

PSD_TOLERANCE = 1e-12


def symmetrize(matrix):
    """
    Returns (M + M^T) / 2 over the last two axes.
    """
    matrix = np.asarray(matrix, dtype=float)
    return 0.5 * (matrix + np.swapaxes(matrix, -1, -2))


def check_finite(matrix, name="covariance"):
    """
    Raises InvalidCovariance if the matrix holds NaN or infinite entries.
    """
    if not np.all(np.isfinite(matrix)):
        raise InvalidCovariance(f"{name} contains non-finite values")


def is_psd(matrix, tol=PSD_TOLERANCE):
    """
    Checks whether a symmetric matrix (or a stack of them) is positive semidefinite within tolerance.

    Args:
        matrix (np.ndarray): Array of shape (..., n, n).
        tol (float, optional): Relative tolerance on the smallest eigenvalue.

    Returns:
        (bool): True if every matrix in the stack is PSD.
    """
    matrix = symmetrize(matrix)
    if not np.all(np.isfinite(matrix)):
        return False
    eigenvalues = np.linalg.eigvalsh(matrix)
    bound = tol * np.maximum(1.0, np.abs(eigenvalues).max(axis=-1))
    return bool(np.all(eigenvalues.min(axis=-1) >= -bound))


def ensure_psd(matrix, tol=PSD_TOLERANCE, name="covariance"):
    """
    Symmetrizes a covariance and clamps tiny negative eigenvalues to zero.

    Matrices that are already PSD after symmetrization are returned unchanged, so exact zeros stay exact. Negative
    eigenvalues larger in magnitude than `tol * max(1, |lambda|_max)` are not rounding noise and raise an error.

    Args:
        matrix (np.ndarray): Array of shape (..., n, n).
        tol (float, optional): Relative tolerance. By default 1e-12.
        name (str, optional): Name used in error messages.

    Returns:
        (np.ndarray): Symmetric PSD array of the same shape.
    """
    matrix = symmetrize(matrix)
    check_finite(matrix, name=name)
    eigenvalues, eigenvectors = np.linalg.eigh(matrix)
    smallest = eigenvalues.min(axis=-1)
    if np.all(smallest >= 0):
        return matrix

    bound = tol * np.maximum(1.0, np.abs(eigenvalues).max(axis=-1))
    if np.any(smallest < -bound):
        raise InvalidCovariance(f"{name} is not positive semidefinite (smallest eigenvalue {smallest.min():.3e})")

    clipped = np.clip(eigenvalues, 0.0, None)
    repaired = np.einsum("...ij,...j,...kj->...ik", eigenvectors, clipped, eigenvectors)
    needs_repair = (smallest < 0)[..., None, None]
    return np.where(needs_repair, symmetrize(repaired), matrix)


def covariance_factor(cov, tol=PSD_TOLERANCE):
    """
    Returns a matrix L with L @ L.T == cov.

    Cholesky is used when the matrix is positive definite; semidefinite matrices fall back to the symmetric
    eigen-factor V sqrt(Lambda).

    Args:
        cov (np.ndarray): Array of shape (..., n, n).
        tol (float, optional): Tolerance passed to `ensure_psd`.

    Returns:
        (np.ndarray): Factor of shape (..., n, n).
    """
    cov = ensure_psd(cov, tol=tol)
    try:
        return np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        eigenvalues, eigenvectors = np.linalg.eigh(cov)
        return eigenvectors * np.sqrt(np.clip(eigenvalues, 0.0, None))[..., None, :]


def det2(cov):
    """
    Closed-form determinant of a stack of 2x2 matrices.
    """
    cov = np.asarray(cov, dtype=float)
    return cov[..., 0, 0] * cov[..., 1, 1] - cov[..., 0, 1] * cov[..., 1, 0]


def inv2(cov):
    """
    Closed-form (adjugate) inverse of a stack of 2x2 matrices. The caller checks the determinant.
    """
    cov = np.asarray(cov, dtype=float)
    det = det2(cov)
    adj = np.empty_like(cov)
    adj[..., 0, 0] = cov[..., 1, 1]
    adj[..., 1, 1] = cov[..., 0, 0]
    adj[..., 0, 1] = -cov[..., 0, 1]
    adj[..., 1, 0] = -cov[..., 1, 0]
    return adj / det[..., None, None]
