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
import pandas as pd

from uqtraj.utils.exceptions import InvalidArgument


def assure_numpy_array(x, dtype=float):
    """
    Returns x as numpy array. X can be a list, list of lists, numpy array, pandas dataframe or pandas series.

    Args:
        x: list, numpy array, pandas dataframe, pandas series
        dtype: dtype of the returned array. By default float.

    Returns: numpy array
    """
    if isinstance(x, (pd.DataFrame, pd.Series)):
        x = x.values
    return np.asarray(x, dtype=dtype)


def assure_points(x, name="points"):
    """
    Returns x as a float array whose last axis holds (x, y) coordinates.

    Args:
        x (array-like): Array of shape (..., 2).
        name (str, optional): Name printed in the error message.

    Returns:
        (np.ndarray): Float array of shape (..., 2).
    """
    x = assure_numpy_array(x)
    if x.ndim < 1 or x.shape[-1] != 2:
        raise InvalidArgument(f"{name} needs to have shape (..., 2), got {x.shape}")
    return x


def assure_cov_matrices(x, name="covariances"):
    """
    Returns x as a float array of 2x2 matrices.

    Compact (..., 3) input in (sxx, sxy, syy) order is expanded into (..., 2, 2).

    Args:
        x (array-like): Array of shape (..., 2, 2) or (..., 3).
        name (str, optional): Name printed in the error message.

    Returns:
        (np.ndarray): Float array of shape (..., 2, 2).
    """
    x = assure_numpy_array(x)
    if x.ndim >= 1 and x.shape[-1] == 3:
        return compact_to_matrix(x)
    if x.ndim < 2 or x.shape[-2:] != (2, 2):
        raise InvalidArgument(f"{name} needs to have shape (..., 2, 2) or (..., 3), got {x.shape}")
    return x


def compact_to_matrix(compact):
    """
    Expands compact (sxx, sxy, syy) covariances into symmetric 2x2 matrices.

    Args:
        compact (np.ndarray): Array of shape (..., 3).

    Returns:
        (np.ndarray): Array of shape (..., 2, 2).
    """
    compact = np.asarray(compact, dtype=float)
    out = np.empty(compact.shape[:-1] + (2, 2))
    out[..., 0, 0] = compact[..., 0]
    out[..., 0, 1] = compact[..., 1]
    out[..., 1, 0] = compact[..., 1]
    out[..., 1, 1] = compact[..., 2]
    return out


def matrix_to_compact(matrix):
    """
    Packs symmetric 2x2 matrices into compact (sxx, sxy, syy) form. Off-diagonal entries are averaged.

    Args:
        matrix (np.ndarray): Array of shape (..., 2, 2).

    Returns:
        (np.ndarray): Array of shape (..., 3).
    """
    matrix = np.asarray(matrix, dtype=float)
    return np.stack(
        [matrix[..., 0, 0], 0.5 * (matrix[..., 0, 1] + matrix[..., 1, 0]), matrix[..., 1, 1]],
        axis=-1,
    )


def check_equal_shapes(a, b, a_name="prediction", b_name="ground truth"):
    """
    Raises InvalidArgument when two arrays do not have the same shape.
    """
    if a.shape != b.shape:
        raise InvalidArgument(f"Shape of {a_name} {a.shape} does not match shape of {b_name} {b.shape}")
