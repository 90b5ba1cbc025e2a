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
import warnings
from abc import ABC, abstractmethod

from uqtraj.utils.exceptions import NotFittedError


class BaseFitComputeClass(ABC):
    """
    Common API of the models and evaluators in uqtraj.

    `fit()` learns or stores whatever the object needs, `compute()` produces the output and `fit_compute()` runs both.
    Subclasses set `verbose` in their constructor.
    """

    fitted = False
    verbose = 0

    def _check_if_fitted(self):
        """
        Raises NotFittedError unless `fit()` has been run.
        """
        if not self.fitted:
            raise NotFittedError(f"{self.__class__.__name__} has not been fitted. Please run fit() method first")

    def _warn(self, warning, min_verbose=0):
        """
        Emits `warning` if `verbose` is above `min_verbose`.
        """
        if self.verbose > min_verbose:
            warnings.warn(warning, stacklevel=3)

    @abstractmethod
    def fit(self, *args, **kwargs):
        """
        Placeholder that must be overwritten by subclass.
        """
        pass

    @abstractmethod
    def compute(self, *args, **kwargs):
        """
        Placeholder that must be overwritten by subclass.
        """
        pass

    def fit_compute(self, *args, **kwargs):
        """
        Runs `fit()` with the given arguments, then `compute()` without arguments.
        """
        self.fit(*args, **kwargs)
        return self.compute()


class BaseFitComputePlotClass(BaseFitComputeClass):
    """
    Base class of objects that can draw their output with matplotlib.
    """

    @abstractmethod
    def plot(self, *args, **kwargs):
        """
        Placeholder method for plotting.
        """
        pass
