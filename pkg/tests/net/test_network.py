import numpy as np
import pytest

from uqtraj.core import is_psd
from uqtraj.net import (
    NetConfig,
    draw_masks,
    factor_to_cov,
    forward,
    init_params,
    pairs_to_inputs,
    pairs_to_targets,
    predict,
    zero_params,
)
from uqtraj.utils import InvalidArgument, NumericalOverflow


def test_net_config():
    """
    Test.
    """
    cfg = NetConfig()
    assert (cfg.input_dim, cfg.output_dim) == (40, 96)
    assert cfg.layer_sizes == [40, 128, 64, 32, 64, 128, 96]
    assert NetConfig.from_dict(cfg.to_dict()) == cfg
    assert NetConfig.small(beta=0.0).layer_sizes == [40, 8, 8, 8, 96]

    with pytest.raises(InvalidArgument):
        NetConfig.from_dict({"encoder": [8], "depth": 3})
    with pytest.raises(InvalidArgument):
        NetConfig(activation="sigmoid")
    with pytest.raises(InvalidArgument):
        NetConfig(beta=1.5)
    with pytest.raises(InvalidArgument):
        NetConfig(dropout_p=1.0)


def test_zero_params_forward(small_config):
    """
    Test.
    """
    out, _ = forward(zero_params(small_config), small_config, np.ones((3, 40)))
    assert out.mean.shape == (3, 12, 2)
    np.testing.assert_array_equal(out.mean, np.zeros((3, 12, 2)))
    expected = np.log(2.0) ** 2 * np.eye(2)
    np.testing.assert_allclose(out.sens_cov, np.broadcast_to(expected, (3, 12, 2, 2)))
    np.testing.assert_allclose(out.pred_cov, np.broadcast_to(expected, (3, 12, 2, 2)))


def test_forward_deterministic_and_input_dependent(small_config):
    """
    Test.
    """
    params = init_params(small_config, seed=3)
    inputs = np.random.default_rng(0).normal(size=(5, 40))
    first = predict(params, small_config, inputs)
    second = predict(params, small_config, inputs)
    np.testing.assert_array_equal(first.mean, second.mean)
    np.testing.assert_array_equal(first.pred_cov, second.pred_cov)

    shifted = predict(params, small_config, inputs + 1.0)
    assert not np.allclose(first.mean, shifted.mean)

    single = predict(params, small_config, inputs[0])
    np.testing.assert_allclose(single.mean[0], first.mean[0])

    assert is_psd(first.sens_cov)
    assert is_psd(first.pred_cov)


def test_init_params_seeds(small_config):
    """
    Test.
    """
    a = init_params(small_config, seed=1)
    b = init_params(small_config, seed=1)
    c = init_params(small_config, seed=2)
    np.testing.assert_array_equal(a.weights[0], b.weights[0])
    assert not np.allclose(a.weights[0], c.weights[0])
    assert np.abs(a.weights[0]).max() <= 1 / np.sqrt(40)
    np.testing.assert_array_equal(a.biases[1], np.zeros(8))


def test_forward_errors(small_config):
    """
    Test.
    """
    with pytest.raises(InvalidArgument):
        forward(zero_params(small_config), small_config, np.ones((2, 39)))

    params = init_params(small_config, seed=0)
    params.biases[-1][0] = np.inf
    with pytest.raises(NumericalOverflow):
        forward(params, small_config, np.ones((2, 40)))

    with pytest.raises(InvalidArgument):
        init_params(small_config, seed=0).check_shapes(NetConfig())


def test_dropout_masks():
    """
    Test.
    """
    cfg = NetConfig.small(dropout_p=0.5)
    masks = draw_masks(cfg, 1000, np.random.default_rng(0))
    assert len(masks) == 3
    assert set(np.unique(masks[0])) <= {0.0, 2.0}
    assert np.mean(masks[0]) == pytest.approx(1.0, abs=0.05)
    assert draw_masks(NetConfig.small(), 4, 0) == [None, None, None]

    params = init_params(cfg, seed=0)
    inputs = np.ones((2, 40))
    first = predict(params, cfg, inputs, rng=1)
    again = predict(params, cfg, inputs, rng=1)
    other = predict(params, cfg, inputs, rng=2)
    np.testing.assert_array_equal(first.mean, again.mean)
    assert not np.allclose(first.mean, other.mean)


def test_factor_to_cov():
    """
    Test.
    """
    cov = factor_to_cov(np.array([2.0, 1.0, 3.0]))
    np.testing.assert_allclose(cov, [[4.0, 2.0], [2.0, 10.0]])


def test_pairs_to_inputs(raw_pairs, augmented_pairs):
    """
    Test.
    """
    inputs = pairs_to_inputs(augmented_pairs)
    assert inputs.shape == (12, 40)
    np.testing.assert_array_equal(inputs[0, :2], augmented_pairs[0].past_positions[0])
    np.testing.assert_array_equal(inputs[0, 2:5], augmented_pairs[0].past_cov[0])

    target, target_cov = pairs_to_targets(augmented_pairs)
    assert target.shape == (12, 12, 2)
    assert target_cov.shape == (12, 12, 3)

    with pytest.raises(InvalidArgument):
        pairs_to_inputs(raw_pairs)
    with pytest.raises(InvalidArgument):
        pairs_to_targets(raw_pairs)
