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


from .types import TrackState, CovMatrix2, CovMatrix4, Ellipse, Trajectory, STEP_SECONDS
from .covariance import (
    symmetrize,
    is_psd,
    ensure_psd,
    covariance_factor,
    det2,
    inv2,
    PSD_TOLERANCE,
)
from .ellipse import (
    ellipse_axes,
    contains,
    contains_batch,
    cov_from_axes,
    half_widths,
    principal_angle,
    mahalanobis_squared,
    make_ellipse,
    DEGENERATE_DET,
)

__all__ = [
    "TrackState",
    "CovMatrix2",
    "CovMatrix4",
    "Ellipse",
    "Trajectory",
    "STEP_SECONDS",
    "symmetrize",
    "is_psd",
    "ensure_psd",
    "covariance_factor",
    "det2",
    "inv2",
    "PSD_TOLERANCE",
    "ellipse_axes",
    "contains",
    "contains_batch",
    "cov_from_axes",
    "half_widths",
    "principal_angle",
    "mahalanobis_squared",
    "make_ellipse",
    "DEGENERATE_DET",
]
