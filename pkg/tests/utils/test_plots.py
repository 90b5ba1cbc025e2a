import matplotlib
import matplotlib.pyplot as plt
import numpy as np
import pandas as pd
import pytest

from uqtraj.metrics import FORECAST_COLUMNS
from uqtraj.utils import add_covariance_ellipse, plot_forecast

plt.ioff()
matplotlib.use("Agg")


@pytest.fixture(scope="function")
def forecast():
    """
    Fixture.
    """
    n = 4
    frame = pd.DataFrame(
        {
            "step": np.arange(n),
            "phase": ["observed", "observed", "forecast", "forecast"],
            "truth_x": [0.0, 1.0, 2.0, np.nan],
            "truth_y": [0.0, 0.5, 1.0, np.nan],
            "mean_x": [np.nan, np.nan, 2.1, 3.0],
            "mean_y": [np.nan, np.nan, 0.9, 1.6],
        }
    )
    for prefix, variance in [("sens", 0.1), ("pred", 0.3), ("total", 0.6)]:
        frame[f"{prefix}_xx"] = variance
        frame[f"{prefix}_xy"] = 0.0
        frame[f"{prefix}_yy"] = variance
    frame["epistemic_trace"] = 0.1
    frame["aleatoric_trace"] = 0.6
    return frame[FORECAST_COLUMNS]


def test_add_covariance_ellipse():
    """
    Test.
    """
    _, ax = plt.subplots()
    patch = add_covariance_ellipse(ax, (1.0, 2.0), np.diag([1.0, 4.0]), scale=2.0)
    assert patch.width == pytest.approx(8.0)
    assert patch.height == pytest.approx(4.0)
    assert patch.angle == pytest.approx(90.0) or patch.angle == pytest.approx(-90.0)
    plt.close("all")


def test_plot_forecast(forecast):
    """
    Test.
    """
    ax = plot_forecast(forecast, show=False)
    assert len(ax.patches) == 6
    assert len(ax.lines) == 3

    ax = plot_forecast(forecast, show_sensing=False, show_total=False, show=False)
    assert len(ax.patches) == 2
    plt.close("all")
