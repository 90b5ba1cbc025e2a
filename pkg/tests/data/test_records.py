import numpy as np
import pytest

from uqtraj.data import SequencePair, denormalize_positions, normalize_pair, read_pairs, write_pairs
from uqtraj.utils import InvalidArgument, InvalidCovariance


def test_sequence_pair_validation(raw_pairs):
    """
    Test.
    """
    pair = raw_pairs[0]
    with pytest.raises(InvalidArgument):
        SequencePair(past=pair.past[:, :2], future=pair.future)
    with pytest.raises(InvalidArgument):
        SequencePair(past=pair.past, future=pair.future, past_cov=np.ones((7, 3)))
    with pytest.raises(InvalidCovariance):
        SequencePair(past=pair.past, future=pair.future, past_cov=np.tile([1.0, 2.0, 1.0], (8, 1)))


def test_normalize_pair(raw_pairs):
    """
    Test.
    """
    pair = raw_pairs[1]
    normalized = normalize_pair(pair)
    np.testing.assert_allclose(normalized.past[0, :2], [0.0, 0.0])
    np.testing.assert_allclose(normalized.origin, [4.0, -1.0])
    np.testing.assert_array_equal(normalized.past[:, 2:], pair.past[:, 2:])
    np.testing.assert_allclose(denormalize_positions(normalized.future_positions, normalized), pair.future_positions)
    np.testing.assert_allclose(normalize_pair(normalized).origin, normalized.origin)


def test_to_trajectory(augmented_pairs):
    """
    Test.
    """
    traj = augmented_pairs[0].to_trajectory()
    assert len(traj) == 20
    assert traj.cov_array().shape == (20, 3)


def test_write_read_pairs(tmp_path, raw_pairs, augmented_pairs):
    """
    Test.
    """
    path = str(tmp_path / "pairs" / "train.jsonl")
    write_pairs(augmented_pairs, path)
    restored = read_pairs(path)
    assert len(restored) == len(augmented_pairs)
    for original, pair in zip(augmented_pairs, restored):
        np.testing.assert_allclose(pair.past, original.past, rtol=1e-9, atol=1e-9)
        np.testing.assert_allclose(pair.future_cov, original.future_cov, rtol=1e-9, atol=1e-9)
        np.testing.assert_allclose(pair.origin, original.origin, rtol=1e-9, atol=1e-9)
        assert pair.fraction == original.fraction
        assert pair.sample_index == original.sample_index
        assert pair.ped_id == original.ped_id

    write_pairs(raw_pairs, path)
    restored = read_pairs(path)
    assert restored[0].past_cov is None
    assert restored[0].fraction is None

    write_pairs([], path)
    assert read_pairs(path) == []


def test_write_read_pairs_is_lossless(tmp_path, augmented_pairs):
    """
    Test.
    """
    path = str(tmp_path / "exact.jsonl")
    values = np.random.default_rng(0).normal(size=(8, 4)) / 3.0
    values[0, 0] = 0.1 + 0.2
    values[1, 1] = 1.0 + 2.0 ** -52
    pair = SequencePair(past=values, future=augmented_pairs[0].future, origin=np.array([1 / 3, 2 / 3]), fraction=0.07)
    write_pairs([pair] + augmented_pairs, path)
    restored = read_pairs(path)
    np.testing.assert_array_equal(restored[0].past, values)
    np.testing.assert_array_equal(restored[0].origin, [1 / 3, 2 / 3])
    assert restored[0].past_cov is None
    for original, copy in zip(augmented_pairs, restored[1:]):
        np.testing.assert_array_equal(copy.past, original.past)
        np.testing.assert_array_equal(copy.future_cov, original.future_cov)
