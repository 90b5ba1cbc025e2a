import numpy as np
import pytest

from uqtraj.utils import (
    InvalidArgument,
    NotFittedError,
    NotIntendedUseWarning,
    assure_generator,
    assure_list_of_strings,
    assure_list_values_allowed,
    spawn_seeds,
)
from uqtraj.utils.interface import BaseFitComputeClass


def test_spawn_seeds():
    """
    Test.
    """
    seeds = spawn_seeds(0, 4)
    assert len(seeds) == 4
    assert len(set(seeds)) == 4
    assert spawn_seeds(0, 4) == seeds
    assert spawn_seeds(1, 4) != seeds
    assert spawn_seeds(0, 6)[:4] == seeds


def test_assure_generator():
    """
    Test.
    """
    rng = np.random.default_rng(3)
    assert assure_generator(rng) is rng
    assert assure_generator(3).random() == np.random.default_rng(3).random()
    assert isinstance(assure_generator(None), np.random.Generator)


def test_assure_lists():
    """
    Test.
    """
    assert assure_list_of_strings("prediction", "modes") == ["prediction"]
    assert assure_list_of_strings(("a", "b"), "modes") == ["a", "b"]
    with pytest.raises(InvalidArgument):
        assure_list_of_strings(3, "modes")

    assure_list_values_allowed(["nll"], "terms", ["joint", "nll"])
    with pytest.raises(InvalidArgument):
        assure_list_values_allowed(["mse"], "terms", ["joint", "nll"])


def test_check_if_fitted():
    """
    Test.
    """

    class Constant(BaseFitComputeClass):
        def __init__(self, verbose=0):
            self.verbose = verbose

        def fit(self, value=1):
            self.value = value
            self.fitted = True
            return self

        def compute(self):
            self._check_if_fitted()
            self._warn(NotIntendedUseWarning("computed"), min_verbose=50)
            return self.value

    with pytest.raises(NotFittedError):
        Constant().compute()
    assert Constant().fit_compute() == 1
    assert Constant().fit_compute(value=3) == 3
    with pytest.warns(NotIntendedUseWarning):
        Constant(verbose=51).fit_compute()
