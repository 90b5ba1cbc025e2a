import numpy as np
import pytest

from uqtraj.net import NetConfig, pairs_to_inputs
from uqtraj.uq import DeepEnsemble, MCDropoutModel, ensemble_scaling, member_pairs
from uqtraj.utils import CheckpointMismatch, InvalidArgument, NotFittedError, NotIntendedUseWarning


def test_member_pairs(augmented_pairs):
    """
    Test.
    """
    first = member_pairs(augmented_pairs, 0)
    assert len(first) == 4
    assert all(pair.sample_index == 0 for pair in first)
    assert [pair.sample_index for pair in member_pairs(augmented_pairs, 4)] == [1, 1, 1, 1]


def test_deep_ensemble(tmp_path, small_config, augmented_pairs):
    """
    Test.
    """
    model = DeepEnsemble(n_members=2, net_config=small_config, epochs=2, batch_size=4, random_state=0)
    with pytest.raises(NotFittedError):
        model.compute(augmented_pairs)

    summary = model.fit_compute(augmented_pairs)
    assert summary.mean.shape == (12, 12, 2)
    assert summary.n_members == 2
    assert model.history["member"].tolist() == [0, 0, 1, 1]
    assert len(set(model.seeds)) == 2

    again = DeepEnsemble(n_members=2, net_config=small_config, epochs=2, batch_size=4, random_state=0)
    np.testing.assert_array_equal(again.fit_compute(augmented_pairs).mean, summary.mean)

    paths = model.save(str(tmp_path))
    assert [path.split("/")[-1] for path in paths] == ["member_0.json", "member_1.json"]
    restored = DeepEnsemble.load(str(tmp_path), net_config=small_config)
    assert restored.n_members == 2
    np.testing.assert_array_equal(restored.compute(augmented_pairs).total_cov, summary.total_cov)
    assert len(restored.history) == 0

    with pytest.raises(CheckpointMismatch):
        DeepEnsemble.load(str(tmp_path), net_config=NetConfig())
    with pytest.raises(InvalidArgument):
        DeepEnsemble.load(str(tmp_path / "empty"))
    with pytest.raises(InvalidArgument):
        DeepEnsemble(n_members=0)
    with pytest.raises(InvalidArgument):
        model.fit([])
    with pytest.warns(NotIntendedUseWarning):
        DeepEnsemble(net_config=NetConfig.small(dropout_p=0.3), verbose=51)


def test_mc_dropout_model(tmp_path, small_config, augmented_pairs):
    """
    Test.
    """
    model = MCDropoutModel(net_config=small_config, dropout_p=0.2, n_samples=8, epochs=2, batch_size=4, random_state=1)
    assert model.net_config.dropout_p == 0.2
    with pytest.raises(NotFittedError):
        model.compute(augmented_pairs)

    summary = model.fit_compute(augmented_pairs)
    assert summary.n_members == 8
    assert np.all(summary.epistemic_trace > 0)
    np.testing.assert_array_equal(model.compute(augmented_pairs).mean, summary.mean)
    assert not np.allclose(model.compute(augmented_pairs, seed=99).mean, summary.mean)

    model.save(str(tmp_path))
    restored = MCDropoutModel.load(str(tmp_path))
    assert restored.n_samples == 8
    np.testing.assert_array_equal(restored.compute(augmented_pairs).mean, summary.mean)

    with pytest.raises(InvalidArgument):
        MCDropoutModel(n_samples=1)
    with pytest.warns(NotIntendedUseWarning):
        MCDropoutModel(net_config=small_config, dropout_p=0.0, verbose=1)


def test_ensemble_scaling(small_config, augmented_pairs):
    """
    Test.
    """
    scaling = ensemble_scaling(
        augmented_pairs[:9],
        augmented_pairs[9:],
        member_counts=[2, 1],
        net_config=small_config,
        epochs=1,
        batch_size=4,
        random_state=0,
    )
    assert list(scaling.columns) == ["n_members", "train_nll", "test_nll", "test_mse"]
    assert scaling["n_members"].tolist() == [1, 2]
    assert np.all(np.isfinite(scaling[["train_nll", "test_nll", "test_mse"]].values))

    with pytest.raises(InvalidArgument):
        ensemble_scaling(augmented_pairs, augmented_pairs, member_counts=[0])


def test_epistemic_grows_off_training_range(augmented_pairs):
    """
    Test.
    """
    inputs = pairs_to_inputs(augmented_pairs)
    far = inputs.copy()
    position_columns = np.tile([True, True, False, False, False], 8)
    far[:, position_columns] *= 50.0

    config = NetConfig.small(activation="relu")
    ensemble = DeepEnsemble(n_members=3, net_config=config, epochs=20, batch_size=4, random_state=0)
    ensemble.fit(augmented_pairs)
    assert ensemble.compute(far).epistemic_trace.mean() > ensemble.compute(inputs).epistemic_trace.mean()

    dropout = MCDropoutModel(
        net_config=config, dropout_p=0.2, n_samples=20, epochs=20, batch_size=4, random_state=0
    )
    dropout.fit(augmented_pairs)
    assert dropout.compute(far).epistemic_trace.mean() > dropout.compute(inputs).epistemic_trace.mean()
