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


class NotFittedError(Exception):
    """
    Error.
    """

    def __init__(self, message):
        """
        Init error.
        """
        super().__init__(message)
        self.message = message


class InvalidArgument(ValueError):
    """
    Raised when a user supplied argument is outside of its allowed range.
    """

    def __init__(self, message):
        """
        Init error.
        """
        super().__init__(message)
        self.message = message


class InvalidCovariance(Exception):
    """
    Raised when a covariance matrix is non-finite or cannot be repaired into a PSD matrix.
    """

    def __init__(self, message):
        """
        Init error.
        """
        super().__init__(message)
        self.message = message


class DegenerateEllipse(Exception):
    """
    Raised when a containment test is requested on an ellipse with (near) zero area.
    """

    def __init__(self, message):
        """
        Init error.
        """
        super().__init__(message)
        self.message = message


class SingularInnovation(Exception):
    """
    Raised when the innovation covariance of a Kalman update cannot be inverted.
    """

    def __init__(self, message, step=None):
        """
        Init error.

        Args:
            message (str): Description of the failure.
            step (int, optional): Index of the measurement at which the update failed.
        """
        if step is not None:
            message = f"{message} (step {step})"
        super().__init__(message)
        self.message = message
        self.step = step


class IngestError(Exception):
    """
    Raised when an annotation file cannot be read.
    """

    def __init__(self, message, line_number=None, path=None):
        """
        Init error.

        Args:
            message (str): Description of the failure.
            line_number (int, optional): 1-based line of the offending row.
            path (str, optional): File that was being read.
        """
        location = []
        if path is not None:
            location.append(str(path))
        if line_number is not None:
            location.append(f"line {line_number}")
        if location:
            message = f"{':'.join(location)}: {message}"
        super().__init__(message)
        self.message = message
        self.line_number = line_number
        self.path = path


class NumericalOverflow(Exception):
    """
    Raised when the network produces non-finite values or a degenerate covariance.

    When raised from training, `params` holds the last parameters that produced finite losses and
    `history` the losses recorded up to the abort.
    """

    def __init__(self, message, params=None, history=None):
        """
        Init error.
        """
        super().__init__(message)
        self.message = message
        self.params = params
        self.history = history


class NumericalFailure(Exception):
    """
    Raised when an iterative numerical routine does not converge.
    """

    def __init__(self, message):
        """
        Init error.
        """
        super().__init__(message)
        self.message = message


class GradCheckFailure(Exception):
    """
    Raised when analytic and finite-difference gradients disagree.
    """

    def __init__(self, message, report=None):
        """
        Init error.

        Args:
            message (str): Description of the worst parameter.
            report (GradCheckReport, optional): Full report of the check.
        """
        super().__init__(message)
        self.message = message
        self.report = report


class CheckpointMismatch(Exception):
    """
    Raised when a stored model does not fit the configuration it is loaded with.
    """

    def __init__(self, message):
        """
        Init error.
        """
        super().__init__(message)
        self.message = message
