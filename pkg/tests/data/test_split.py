import pytest

from uqtraj.data import split_pairs
from uqtraj.utils import InvalidArgument


def test_split_pairs_hotel_sizes():
    """
    Test.
    """
    split = split_pairs(list(range(1597)))
    assert (len(split.train), len(split.test)) == (1260, 337)
    assert split.metadata["n_test"] == 337
    assert split.metadata["scale"] == 1.0
    assert split.name == "HOTEL"


def test_split_pairs_disjoint_and_deterministic():
    """
    Test.
    """
    items = list(range(100))
    split = split_pairs(items, test_size=0.25, random_state=3, name="ZARA1")
    assert set(split.train).isdisjoint(split.test)
    assert sorted(split.train + split.test) == items
    assert split_pairs(items, test_size=0.25, random_state=3).test == split.test
    assert split_pairs(items, test_size=0.25, random_state=4).test != split.test


def test_split_pairs_errors():
    """
    Test.
    """
    with pytest.raises(InvalidArgument):
        split_pairs([1])
    with pytest.raises(InvalidArgument):
        split_pairs(list(range(10)), test_size=1.0)
