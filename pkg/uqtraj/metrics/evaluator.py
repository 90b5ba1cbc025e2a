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

from uqtraj.core.covariance import ensure_psd
from uqtraj.metrics.metrics import UNCERTAINTY_MODES, evaluate_forecasts
from uqtraj.uncertainty.minkowski import outer_sum_cov
from uqtraj.utils._utils import assure_list_of_strings, assure_list_values_allowed
from uqtraj.utils.arrayfuncs import assure_points, check_equal_shapes, matrix_to_compact
from uqtraj.utils.exceptions import InvalidArgument
from uqtraj.utils.interface import BaseFitComputePlotClass
from uqtraj.utils.plots import plot_forecast

FORECAST_COLUMNS = [
    "step",
    "phase",
    "truth_x",
    "truth_y",
    "mean_x",
    "mean_y",
    "sens_xx",
    "sens_xy",
    "sens_yy",
    "pred_xx",
    "pred_xy",
    "pred_yy",
    "total_xx",
    "total_xy",
    "total_yy",
    "epistemic_trace",
    "aleatoric_trace",
]


def forecast_frame(summary, index=0, truth=None, observed=None, observed_cov=None, origin=None):
    """
    Columnar dump of one forecast, the input of `uqtraj.utils.plot_forecast`.

    Observed steps get phase `'observed'` with the observed positions as truth and their input covariances as
    sensing covariance. Future steps get phase `'forecast'` with the predicted mean, the sensing covariance, the
    predictive covariance (aleatoric + epistemic) as prediction covariance and the outer Minkowski ellipse of both as
    total covariance.

    Args:
        summary (PredictiveSummary): Prediction of a batch.
        index (int, optional): Sequence of the batch to dump.
        truth (np.ndarray, optional): Future ground truth of shape (T, 2). Missing values are left empty.
        observed (np.ndarray, optional): Observed positions of shape (n, 2).
        observed_cov (np.ndarray, optional): Compact covariances of the observed positions, shape (n, 3).
        origin (array-like, optional): Translation added to every position, e.g. the origin removed by normalization.

    Returns:
        (pd.DataFrame): Frame with columns FORECAST_COLUMNS.
    """
    origin = np.zeros(2) if origin is None else np.asarray(origin, dtype=float)
    mean = summary.mean[index] + origin
    n_future = len(mean)
    sens = ensure_psd(summary.sens_cov[index], name="sensing covariance")
    pred = ensure_psd(summary.total_cov[index], name="predictive covariance")
    future = pd.DataFrame(
        {
            "step": np.arange(n_future),
            "phase": "forecast",
            "truth_x": np.nan,
            "truth_y": np.nan,
            "mean_x": mean[:, 0],
            "mean_y": mean[:, 1],
        }
    )
    if truth is not None:
        truth = assure_points(truth, name="ground truth")
        check_equal_shapes(truth, summary.mean[index])
        future["truth_x"] = truth[:, 0] + origin[0]
        future["truth_y"] = truth[:, 1] + origin[1]
    for prefix, cov in [("sens", sens), ("pred", pred), ("total", outer_sum_cov(sens, pred))]:
        compact = matrix_to_compact(cov)
        future[f"{prefix}_xx"], future[f"{prefix}_xy"], future[f"{prefix}_yy"] = compact.T
    future["epistemic_trace"] = summary.epistemic_trace[index]
    future["aleatoric_trace"] = summary.aleatoric_trace[index]

    if observed is None:
        return future[FORECAST_COLUMNS]

    observed = assure_points(observed, name="observed positions") + origin
    past = pd.DataFrame(
        {
            "step": np.arange(-len(observed), 0),
            "phase": "observed",
            "truth_x": observed[:, 0],
            "truth_y": observed[:, 1],
        }
    )
    if observed_cov is not None:
        observed_cov = np.asarray(observed_cov, dtype=float)
        past["sens_xx"], past["sens_xy"], past["sens_yy"] = observed_cov.T
    frame = pd.concat([past, future], ignore_index=True)
    frame["step"] = frame["step"] + len(observed)
    return frame.reindex(columns=FORECAST_COLUMNS)


class ForecastEvaluator(BaseFitComputePlotClass):
    """
    Point and interval metrics of a probabilistic forecast for several uncertainty modes and sigma multipliers.

    The prediction ellipse of a step is the predictive covariance of the summary (aleatoric + epistemic). The total
    modes add the sensing ellipse by Minkowski addition, tested exactly (`'total-exact'`) or through the enclosing
    ellipse (`'total-outer'`).

    ```python
    import numpy as np
    from uqtraj.metrics import ForecastEvaluator
    from uqtraj.uq import aggregate_members

    rng = np.random.default_rng(0)
    means = rng.normal(size=(3, 4, 12, 2))
    covs = np.tile(np.eye(2), (3, 4, 12, 1, 1))
    summary = aggregate_members(means, covs, 0.1 * covs)
    truth = rng.normal(size=(4, 12, 2))

    evaluator = ForecastEvaluator(scales=[1, 2])
    report = evaluator.fit_compute(summary, truth)
    evaluator.plot(sequence=0, show=False)
    ```
    """

    def __init__(self, scales=(1.0, 2.0), modes=None, verbose=0):
        """
        Initializes the class.

        Args:
            scales (list of float, optional):
                Sigma multipliers of the ellipses. By default 1 and 2.

            modes (str or list of str, optional):
                Uncertainty modes, any of `'prediction'`, `'total-exact'` and `'total-outer'`. All by default.

            verbose (int, optional):
                Controls verbosity of the output:

                - 0 - neither prints nor warnings are shown
                - 1 - 50 - only most important warnings
                - 51 - 100 - shows other warnings and prints
                - above 100 - presents all prints and all warnings
        """
        self.scales = [float(scale) for scale in scales]
        if not self.scales or min(self.scales) <= 0:
            raise InvalidArgument("scales need to be positive")
        self.modes = list(UNCERTAINTY_MODES) if modes is None else assure_list_of_strings(modes, "modes")
        assure_list_values_allowed(self.modes, "modes", UNCERTAINTY_MODES)
        self.verbose = verbose

    def fit(self, summary, truth, observed=None):
        """
        Stores the forecast and the ground truth.

        Args:
            summary (PredictiveSummary):
                Prediction of S sequences.

            truth (np.ndarray):
                Future ground truth of shape (S, T, 2), in the coordinates of the summary.

            observed (np.ndarray, optional):
                Observed positions of shape (S, n, 2), only used by `plot`.

        Returns:
            (ForecastEvaluator):
                Fitted object.
        """
        truth = assure_points(truth, name="ground truth")
        check_equal_shapes(summary.mean, truth)
        self.summary = summary
        self.truth = truth
        self.observed = observed
        self.fitted = True
        return self

    def compute(self):
        """
        Metrics for every combination of uncertainty mode and sigma multiplier.

        Returns:
            (pd.DataFrame):
                One row per MetricReport. The reports are also kept in `reports`.
        """
        self._check_if_fitted()
        self.reports = [
            evaluate_forecasts(
                self.summary.mean,
                self.truth,
                self.summary.total_cov,
                self.summary.sens_cov,
                sigma_scale=scale,
                mode=mode,
                verbose=self.verbose,
            )
            for mode in self.modes
            for scale in self.scales
        ]
        self.report = pd.concat([report.to_frame() for report in self.reports], ignore_index=True)
        return self.report

    def fit_compute(self, summary, truth, observed=None):
        """
        Fits the object and computes the metrics.

        Returns:
            (pd.DataFrame):
                One row per MetricReport.
        """
        self.fit(summary, truth, observed=observed)
        return self.compute()

    def plot(self, sequence=0, scale=2.0, ax=None, plot_figsize=(8, 8), show=True):
        """
        Plots one forecast with its sensing, prediction and total ellipses.

        Args:
            sequence (int, optional): Index of the sequence.
            scale (float, optional): Sigma multiplier of the ellipses. By default 2.
            ax (matplotlib.axes.Axes, optional): Axis to draw on.
            plot_figsize (tuple, optional): Size of the created figure.
            show (bool, optional): Call `plt.show()` at the end.

        Returns:
            (matplotlib.axes.Axes): Axis with the plot.
        """
        self._check_if_fitted()
        observed = None if self.observed is None else self.observed[sequence]
        frame = forecast_frame(self.summary, index=sequence, truth=self.truth[sequence], observed=observed)
        return plot_forecast(frame, scale=scale, ax=ax, plot_figsize=plot_figsize, show=show)
