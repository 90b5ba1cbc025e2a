import numpy as np
import pytest

from uqtraj.net import NetConfig, NetParams, adam_step, init_optim_state, init_params, train
from uqtraj.net.train import HISTORY_COLUMNS
from uqtraj.utils import InvalidArgument


def test_adam_step():
    """
    Test.
    """
    params = init_params(NetConfig.small(), seed=0)
    grads = NetParams(
        weights=[-np.ones_like(w) for w in params.weights], biases=[np.ones_like(b) for b in params.biases]
    )
    state = init_optim_state(params, learning_rate=0.1)
    before = params.weights[0].copy()
    adam_step(params, grads, state)
    assert state.step == 1
    np.testing.assert_allclose(params.weights[0], before + 0.1, atol=1e-6)
    np.testing.assert_allclose(params.biases[0], -0.1 * np.ones(8), atol=1e-6)


def test_train_history(small_config, augmented_pairs):
    """
    Test.
    """
    params, history = train(augmented_pairs, small_config, epochs=3, batch_size=5, seed=7)
    assert list(history.columns) == HISTORY_COLUMNS
    assert history["epoch"].tolist() == [1, 2, 3]
    np.testing.assert_allclose(history["total"], history["nll"] + history["cov_mse"])
    assert params.is_finite()

    again_params, again = train(augmented_pairs, small_config, epochs=3, batch_size=5, seed=7)
    np.testing.assert_array_equal(history.values, again.values)
    np.testing.assert_array_equal(params.weights[0], again_params.weights[0])

    other_params, _ = train(augmented_pairs, small_config, epochs=3, batch_size=5, seed=8)
    assert not np.allclose(params.weights[0], other_params.weights[0])


def test_train_zero_learning_rate(small_config, augmented_pairs):
    """
    Test.
    """
    start = init_params(small_config, seed=0)
    params, _ = train(augmented_pairs, small_config, epochs=2, learning_rate=0.0, params=start)
    for trained, initial in zip(params.arrays(), start.arrays()):
        np.testing.assert_array_equal(trained, initial)


def test_train_reduces_loss(small_config, augmented_pairs):
    """
    Test.
    """
    _, history = train(augmented_pairs, small_config, epochs=40, batch_size=4, seed=0, learning_rate=5e-3)
    assert history["total"].iloc[-1] < history["total"].iloc[0]


def test_train_errors(small_config, augmented_pairs, raw_pairs):
    """
    Test.
    """
    with pytest.raises(InvalidArgument):
        train([], small_config)
    with pytest.raises(InvalidArgument):
        train(augmented_pairs, small_config, batch_size=0)
    with pytest.raises(InvalidArgument):
        train(raw_pairs, small_config, epochs=1)
