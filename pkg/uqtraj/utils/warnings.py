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
class UqtrajWarning(Warning):
    """
    Base class of the warnings raised by uqtraj. The text is kept in `message`.
    """

    def __init__(self, message):
        """
        Init.
        """
        super().__init__(message)
        self.message = message


class ApproximationWarning(UqtrajWarning):
    """
    Raised when coverage is measured against the outer ellipse of a Minkowski sum instead of the exact sum.
    """


class NotIntendedUseWarning(UqtrajWarning):
    """
    Raised for settings that run but fall outside the tested range, e.g. noise fractions outside [0.02, 0.20],
    ensemble members with dropout, or training that stopped on a numerical overflow.
    """


class DatasetCountWarning(UqtrajWarning):
    """
    Raised when a scene yields a different number of sequences than its published count.
    """
