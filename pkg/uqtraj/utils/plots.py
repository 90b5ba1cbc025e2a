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


import matplotlib.pyplot as plt
import numpy as np
from matplotlib.patches import Ellipse as EllipsePatch

from uqtraj.utils.arrayfuncs import compact_to_matrix


def add_covariance_ellipse(ax, center, cov, scale=1.0, **patch_kwargs):
    """
    Draws the scale-sigma ellipse of a 2x2 covariance on a matplotlib axis.

    Args:
        ax (matplotlib.axes.Axes): Axis to draw on.
        center (array-like): (x, y) center of the ellipse.
        cov (array-like): 2x2 covariance matrix.
        scale (float, optional): Sigma multiplier. By default 1.
        **patch_kwargs: Keyword arguments passed to `matplotlib.patches.Ellipse`.

    Returns:
        (matplotlib.patches.Ellipse): The added patch.
    """
    cov = np.asarray(cov, dtype=float)
    eigenvalues, eigenvectors = np.linalg.eigh(0.5 * (cov + cov.T))
    eigenvalues = np.clip(eigenvalues, 0.0, None)
    angle = np.degrees(np.arctan2(eigenvectors[1, 1], eigenvectors[0, 1]))
    patch = EllipsePatch(
        xy=(float(center[0]), float(center[1])),
        width=2 * scale * np.sqrt(eigenvalues[1]),
        height=2 * scale * np.sqrt(eigenvalues[0]),
        angle=angle,
        **patch_kwargs,
    )
    ax.add_patch(patch)
    return patch


def plot_forecast(
    forecast,
    scale=2.0,
    show_sensing=True,
    show_prediction=True,
    show_total=True,
    ax=None,
    plot_figsize=(8, 8),
    show=True,
):
    """
    Plots a forecast dump produced by `uqtraj evaluate` or `uqtraj ood-predict`.

    The observed path, ground truth, predicted mean path and, per future step, the sensing, prediction and total
    (outer Minkowski) ellipses are drawn.

    Args:
        forecast (pd.DataFrame):
            Forecast frame with columns `phase`, `truth_x`, `truth_y`, `mean_x`, `mean_y`, `sens_xx`, `sens_xy`,
            `sens_yy`, `pred_xx`, `pred_xy`, `pred_yy`, `total_xx`, `total_xy`, `total_yy`. It can be read from the
            dumped CSV with `pd.read_csv`.

        scale (float, optional):
            Sigma multiplier of the ellipses. By default 2.

        show_sensing (bool, optional):
            Draw the sensing ellipses.

        show_prediction (bool, optional):
            Draw the prediction ellipses.

        show_total (bool, optional):
            Draw the total uncertainty ellipses.

        ax (matplotlib.axes.Axes, optional):
            Axis to draw on. A new figure is created if None.

        plot_figsize (tuple, optional):
            Size of the created figure.

        show (bool, optional):
            Call `plt.show()` at the end.

    Returns:
        (matplotlib.axes.Axes): Axis with the plot.
    """
    if ax is None:
        _, ax = plt.subplots(figsize=plot_figsize)

    if "phase" in forecast.columns:
        observed = forecast[forecast["phase"] == "observed"]
        future = forecast[forecast["phase"] != "observed"]
    else:
        observed = forecast.iloc[:0]
        future = forecast

    if len(observed) > 0:
        ax.plot(observed["truth_x"], observed["truth_y"], "k.-", label="Observed")
    if future["truth_x"].notna().any():
        ax.plot(future["truth_x"], future["truth_y"], "g.-", label="Ground truth")
    ax.plot(future["mean_x"], future["mean_y"], "b.-", label="Predicted mean")

    layers = [
        (show_total, "total", "tab:red", "Total"),
        (show_prediction, "pred", "tab:blue", "Prediction"),
        (show_sensing, "sens", "tab:orange", "Sensing"),
    ]
    for enabled, prefix, color, label in layers:
        if not enabled:
            continue
        covs = compact_to_matrix(future[[f"{prefix}_xx", f"{prefix}_xy", f"{prefix}_yy"]].values)
        centers = future[["mean_x", "mean_y"]].values
        for index, (center, cov) in enumerate(zip(centers, covs)):
            add_covariance_ellipse(
                ax,
                center,
                cov,
                scale=scale,
                fill=False,
                edgecolor=color,
                alpha=0.6,
                label=f"{label} ({scale:g}σ)" if index == 0 else None,
            )

    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    ax.set_aspect("equal", adjustable="datalim")
    ax.autoscale_view()
    ax.legend(loc="best")
    if show:
        plt.show()
    return ax
