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


import json
import warnings
from dataclasses import asdict, dataclass

import numpy as np
import pandas as pd
from sklearn.metrics import mean_squared_error

from uqtraj.core.covariance import ensure_psd
from uqtraj.core.ellipse import contains_batch, half_widths
from uqtraj.net.losses import gaussian_nll_terms
from uqtraj.uncertainty.minkowski import in_minkowski_sum_batch, outer_sum_cov
from uqtraj.utils._utils import assure_list_values_allowed
from uqtraj.utils.arrayfuncs import assure_cov_matrices, assure_points, check_equal_shapes
from uqtraj.utils.exceptions import InvalidArgument
from uqtraj.utils.warnings import ApproximationWarning

UNCERTAINTY_MODES = ["prediction", "total-exact", "total-outer"]
DEFAULT_SIGMA_SCALE = 1.0


def _as_batch(points, name):
    points = assure_points(points, name=name)
    if points.ndim == 2:
        points = points[None]
    if points.ndim != 3:
        raise InvalidArgument(f"{name} needs to have shape (S, T, 2) or (T, 2), got {points.shape}")
    if points.shape[1] == 0:
        raise InvalidArgument(f"{name} has no steps")
    return points


def _displacements(pred, truth):
    pred = _as_batch(pred, "prediction")
    truth = _as_batch(truth, "ground truth")
    check_equal_shapes(pred, truth)
    return np.linalg.norm(pred - truth, axis=-1)


def ade(pred, truth):
    """
    Average displacement error: mean Euclidean distance over all steps and sequences.

    Args:
        pred (np.ndarray): Predicted means of shape (S, T, 2) or (T, 2).
        truth (np.ndarray): Ground truth of the same shape.

    Returns:
        (float): ADE in meters.
    """
    return float(_displacements(pred, truth).mean())


def fde(pred, truth):
    """
    Final displacement error: Euclidean distance at the last step, averaged over sequences.

    Args:
        pred (np.ndarray): Predicted means of shape (S, T, 2) or (T, 2).
        truth (np.ndarray): Ground truth of the same shape.

    Returns:
        (float): FDE in meters.
    """
    return float(_displacements(pred, truth)[:, -1].mean())


def _check_mode(mode, sens_cov):
    assure_list_values_allowed([mode], "mode", UNCERTAINTY_MODES)
    if mode != "prediction" and sens_cov is None:
        raise InvalidArgument(f"Mode {mode} needs sensing covariances")


def coverage(pred, truth, pred_cov, sens_cov=None, sigma_scale=DEFAULT_SIGMA_SCALE, mode="prediction", verbose=0):
    """
    Per-step coverage of the ground truth by the forecast ellipses.

    Args:
        pred (np.ndarray): Predicted means of shape (S, T, 2).
        truth (np.ndarray): Ground truth of the same shape.
        pred_cov (np.ndarray): Prediction covariances, (S, T, 2, 2) or compact (S, T, 3).
        sens_cov (np.ndarray, optional): Sensing covariances, needed by the total modes.
        sigma_scale (float, optional): Sigma multiplier of the ellipses. By default 1.
        mode (str, optional): Region tested for every step:

            - `'prediction'` - ellipse of the prediction covariance
            - `'total-exact'` - exact Minkowski sum of the sensing and prediction ellipses
            - `'total-outer'` - trace-minimal ellipse enclosing that sum

        verbose (int, optional): Controls verbosity of the output:

            - 0 - neither prints nor warnings are shown
            - 1 - 50 - only most important warnings
            - 51 - 100 - shows other warnings and prints
            - above 100 - presents all prints and all warnings

    Returns:
        (np.ndarray, np.ndarray): Boolean arrays of shape (S, T): covered and degenerate. Degenerate steps count as
            not covered.
    """
    _check_mode(mode, sens_cov)
    if sigma_scale <= 0:
        raise InvalidArgument(f"sigma_scale needs to be positive, got {sigma_scale}")
    pred = _as_batch(pred, "prediction")
    truth = _as_batch(truth, "ground truth")
    check_equal_shapes(pred, truth)
    pred_cov = assure_cov_matrices(pred_cov, name="prediction covariances").reshape(pred.shape + (2,))

    if mode == "prediction":
        return contains_batch(pred, pred_cov, truth, scale=sigma_scale)

    sens_cov = assure_cov_matrices(sens_cov, name="sensing covariances").reshape(pred.shape + (2,))
    if mode == "total-outer":
        if verbose > 0:
            warnings.warn(
                ApproximationWarning(
                    "Coverage is tested against the outer ellipse of the Minkowski sum, which overestimates the "
                    "exact total uncertainty region."
                )
            )
        outer = outer_sum_cov(ensure_psd(sens_cov), ensure_psd(pred_cov))
        return contains_batch(pred, outer, truth, scale=sigma_scale)
    return in_minkowski_sum_batch(sens_cov, pred_cov, truth - pred, scale=sigma_scale)


def picp(pred, truth, pred_cov, sens_cov=None, sigma_scale=DEFAULT_SIGMA_SCALE, mode="prediction", verbose=0):
    """
    Prediction interval coverage probability: fraction of (sequence, step) pairs whose ground truth lies inside the
    forecast ellipse.

    Arguments as in `coverage`.

    Returns:
        (float): PICP in [0, 1].
    """
    covered, _ = coverage(pred, truth, pred_cov, sens_cov, sigma_scale=sigma_scale, mode=mode, verbose=verbose)
    return float(covered.mean())


def mpiw(pred_cov, sens_cov=None, sigma_scale=DEFAULT_SIGMA_SCALE, mode="prediction"):
    """
    Mean prediction interval width of the forecast ellipses.

    Both total modes measure the outer ellipse of the Minkowski sum.

    Args:
        pred_cov (np.ndarray): Prediction covariances, (..., 2, 2) or compact (..., 3).
        sens_cov (np.ndarray, optional): Sensing covariances, needed by the total modes.
        sigma_scale (float, optional): Sigma multiplier. By default 1.
        mode (str, optional): One of `'prediction'`, `'total-exact'` and `'total-outer'`.

    Returns:
        (float, float, float): Mean full width of the major axis, of the minor axis and their root mean square
            sqrt(mpiw_x^2 / 2 + mpiw_y^2 / 2).
    """
    _check_mode(mode, sens_cov)
    cov = ensure_psd(assure_cov_matrices(pred_cov, name="prediction covariances"))
    if mode != "prediction":
        cov = outer_sum_cov(ensure_psd(assure_cov_matrices(sens_cov, name="sensing covariances")), cov)
    major, minor = half_widths(cov, scale=sigma_scale)
    mpiw_x = float(2 * major.mean())
    mpiw_y = float(2 * minor.mean())
    return mpiw_x, mpiw_y, float(np.sqrt(mpiw_x ** 2 / 2 + mpiw_y ** 2 / 2))


def gaussian_nll(summary, truth):
    """
    Mean bivariate Gaussian NLL (without the log(2 pi) constant) of the ground truth under the total predictive
    covariance.

    Args:
        summary (PredictiveSummary): Ensemble or dropout prediction.
        truth (np.ndarray): Ground-truth positions of shape (B, T, 2).

    Returns:
        (float): NLL in nats per step.
    """
    truth = assure_points(truth, name="ground truth")
    check_equal_shapes(summary.mean, truth)
    nll, _, _, _ = gaussian_nll_terms(summary.mean, summary.total_cov, truth)
    return float(nll.mean())


def prediction_mse(summary, truth):
    """
    Mean squared error of the predicted mean over sequences, steps and coordinates.
    """
    truth = assure_points(truth, name="ground truth")
    check_equal_shapes(summary.mean, truth)
    return float(mean_squared_error(truth.reshape(-1, 2), summary.mean.reshape(-1, 2)))


@dataclass(frozen=True)
class MetricReport:
    """
    Point and interval metrics of a set of forecasts.

    Attributes:
        ade (float): Average displacement error in meters.
        fde (float): Final displacement error in meters.
        picp (float): Coverage probability in [0, 1].
        mpiw_x (float): Mean full width of the major axes in meters.
        mpiw_y (float): Mean full width of the minor axes in meters.
        mpiw (float): sqrt(mpiw_x^2 / 2 + mpiw_y^2 / 2).
        n_sequences (int): Number of evaluated sequences.
        sigma_scale (float): Sigma multiplier of the ellipses.
        uncertainty_mode (str): `'prediction'`, `'total-exact'` or `'total-outer'`.
        n_degenerate (int): Steps with a degenerate ellipse, counted as not covered.
    """

    ade: float
    fde: float
    picp: float
    mpiw_x: float
    mpiw_y: float
    mpiw: float
    n_sequences: int
    sigma_scale: float
    uncertainty_mode: str
    n_degenerate: int = 0

    def __post_init__(self):
        """
        Validates the report.
        """
        if not 0 <= self.picp <= 1:
            raise InvalidArgument(f"picp needs to be in [0, 1], got {self.picp}")

    def to_dict(self):
        """
        (dict): Flat record of the report.
        """
        return asdict(self)

    def to_frame(self):
        """
        (pd.DataFrame): One-row frame, the CSV row of the report.
        """
        return pd.DataFrame([self.to_dict()])

    def to_json(self):
        """
        (str): JSON record of the report.
        """
        return json.dumps(self.to_dict(), sort_keys=True)


def evaluate_forecasts(
    pred, truth, pred_cov, sens_cov=None, sigma_scale=DEFAULT_SIGMA_SCALE, mode="prediction", verbose=0
):
    """
    All metrics of a set of forecasts for one uncertainty mode and sigma multiplier.

    Args:
        pred (np.ndarray): Predicted means of shape (S, T, 2).
        truth (np.ndarray): Ground truth of the same shape.
        pred_cov (np.ndarray): Prediction (or total predictive) covariances of shape (S, T, 2, 2).
        sens_cov (np.ndarray, optional): Sensing covariances, needed by the total modes.
        sigma_scale (float, optional): Sigma multiplier. By default 1.
        mode (str, optional): Uncertainty mode, see `coverage`.
        verbose (int, optional): Verbosity, see `coverage`.

    Returns:
        (MetricReport): The metrics.
    """
    pred = _as_batch(pred, "prediction")
    truth = _as_batch(truth, "ground truth")
    covered, degenerate = coverage(
        pred, truth, pred_cov, sens_cov, sigma_scale=sigma_scale, mode=mode, verbose=verbose
    )
    if verbose > 50 and degenerate.any():
        print(f"{int(degenerate.sum())} steps have degenerate ellipses and count as not covered")
    mpiw_x, mpiw_y, mpiw_value = mpiw(pred_cov, sens_cov, sigma_scale=sigma_scale, mode=mode)
    return MetricReport(
        ade=ade(pred, truth),
        fde=fde(pred, truth),
        picp=float(covered.mean()),
        mpiw_x=mpiw_x,
        mpiw_y=mpiw_y,
        mpiw=mpiw_value,
        n_sequences=len(pred),
        sigma_scale=float(sigma_scale),
        uncertainty_mode=mode,
        n_degenerate=int(degenerate.sum()),
    )
