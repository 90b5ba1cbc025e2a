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


from .exceptions import (
    NotFittedError,
    InvalidArgument,
    InvalidCovariance,
    DegenerateEllipse,
    SingularInnovation,
    IngestError,
    NumericalOverflow,
    NumericalFailure,
    GradCheckFailure,
    CheckpointMismatch,
)
from .warnings import UqtrajWarning, ApproximationWarning, NotIntendedUseWarning, DatasetCountWarning
from .arrayfuncs import (
    assure_numpy_array,
    assure_points,
    assure_cov_matrices,
    compact_to_matrix,
    matrix_to_compact,
    check_equal_shapes,
)
from ._utils import (
    assure_list_of_strings,
    assure_list_values_allowed,
    assure_generator,
    spawn_seeds,
)
from .plots import add_covariance_ellipse, plot_forecast
from .interface import BaseFitComputeClass, BaseFitComputePlotClass

__all__ = [
    "NotFittedError",
    "InvalidArgument",
    "InvalidCovariance",
    "DegenerateEllipse",
    "SingularInnovation",
    "IngestError",
    "NumericalOverflow",
    "NumericalFailure",
    "GradCheckFailure",
    "CheckpointMismatch",
    "UqtrajWarning",
    "ApproximationWarning",
    "NotIntendedUseWarning",
    "DatasetCountWarning",
    "assure_numpy_array",
    "assure_points",
    "assure_cov_matrices",
    "compact_to_matrix",
    "matrix_to_compact",
    "check_equal_shapes",
    "assure_list_of_strings",
    "assure_list_values_allowed",
    "assure_generator",
    "spawn_seeds",
    "add_covariance_ellipse",
    "plot_forecast",
    "BaseFitComputeClass",
    "BaseFitComputePlotClass",
]
