import numpy as np
import pytest

from uqtraj.net import (
    ForecastOutput,
    beta_nll_loss,
    cov_mse_loss,
    evaluate_loss,
    gaussian_nll_terms,
    joint_loss,
    pairs_to_inputs,
    pairs_to_targets,
    zero_params,
)
from uqtraj.utils import NumericalOverflow


def make_output(mean, pred_cov, sens_cov=None):
    mean = np.asarray(mean, dtype=float).reshape(1, -1, 2)
    pred_cov = np.broadcast_to(np.asarray(pred_cov, dtype=float), mean.shape[:2] + (2, 2)).copy()
    sens_cov = pred_cov.copy() if sens_cov is None else np.broadcast_to(sens_cov, pred_cov.shape).copy()
    return ForecastOutput(mean=mean, sens_cov=sens_cov, pred_cov=pred_cov)


def test_gaussian_nll_terms():
    """
    Test.
    """
    nll, det, _, q = gaussian_nll_terms(np.zeros(2), np.diag([2.0, 1.0]), np.array([1.0, 0.0]))
    assert nll == pytest.approx(0.5 * np.log(2) + 0.25)
    assert nll == pytest.approx(0.5966, abs=1e-4)
    assert det == pytest.approx(2.0)
    np.testing.assert_allclose(q, [0.5, 0.0])

    nll, _, _, _ = gaussian_nll_terms(np.array([3.0, -1.0]), np.eye(2), np.array([3.0, -1.0]))
    assert nll == pytest.approx(0.0)

    with pytest.raises(NumericalOverflow):
        gaussian_nll_terms(np.zeros(2), np.zeros((2, 2)), np.ones(2))


def test_beta_nll_loss_weights():
    """
    Test.
    """
    out = make_output([[0.0, 0.0], [1.0, 1.0]], 4.0 * np.eye(2))
    target = np.array([[[1.0, 0.0], [1.0, 3.0]]])

    plain = beta_nll_loss(out, target, beta=0.0)
    np.testing.assert_array_equal(plain.weights, np.ones((1, 2)))
    assert plain.objective == pytest.approx(plain.value)

    weighted = beta_nll_loss(out, target, beta=0.5)
    np.testing.assert_allclose(weighted.weights, np.full((1, 2), 4.0))
    assert weighted.value == pytest.approx(plain.value)
    assert weighted.objective == pytest.approx(4.0 * plain.value)
    np.testing.assert_allclose(weighted.grad_mean, 4.0 * plain.grad_mean)


def test_beta_nll_mean_gradient():
    """
    Test.
    """
    cov = np.array([[2.0, 0.5], [0.5, 1.0]])
    out = make_output([[0.5, -0.5]], cov)
    target = np.array([[[1.0, 1.0]]])
    terms = beta_nll_loss(out, target, beta=0.3)
    expected = np.linalg.det(cov) ** 0.3 * np.linalg.solve(cov, out.mean[0, 0] - target[0, 0])
    np.testing.assert_allclose(terms.grad_mean[0, 0], expected)


def test_beta_one_isotropic_matches_mse_direction():
    """
    Test.
    """
    out = make_output([[0.0, 0.0]], 3.0 * np.eye(2))
    target = np.array([[[2.0, -1.0]]])
    terms = beta_nll_loss(out, target, beta=1.0)
    mse_direction = out.mean[0, 0] - target[0, 0]
    gradient = terms.grad_mean[0, 0]
    np.testing.assert_allclose(gradient / np.linalg.norm(gradient), mse_direction / np.linalg.norm(mse_direction))
    np.testing.assert_allclose(gradient, 3.0 * mse_direction)


def test_cov_mse_loss():
    """
    Test.
    """
    sigma = np.array([[1.0, 0.3], [0.3, 2.0]])
    out = make_output(np.zeros((3, 2)), sigma, sens_cov=sigma + 0.5 * np.eye(2))
    target_cov = np.tile([1.0, 0.3, 2.0], (1, 3, 1))
    terms = cov_mse_loss(out, target_cov)
    assert terms.value == pytest.approx(2 * 0.5 ** 2)

    out = make_output(np.zeros((1, 2)), sigma, sens_cov=np.array([[1.5, 0.1], [0.1, 1.0]]))
    terms = cov_mse_loss(out, np.array([[[1.0, 0.3, 2.0]]]))
    elementwise = np.sum((out.sens_cov[0, 0] - sigma) ** 2)
    assert terms.value == pytest.approx(elementwise)

    out = make_output(np.zeros((1, 2)), sigma)
    assert cov_mse_loss(out, np.array([[[1.0, 0.3, 2.0]]])).value == pytest.approx(0.0)


def test_joint_loss_terms(small_config, augmented_pairs):
    """
    Test.
    """
    params = zero_params(small_config)
    inputs = pairs_to_inputs(augmented_pairs)
    target, target_cov = pairs_to_targets(augmented_pairs)
    loss = joint_loss(params, small_config, inputs, target, target_cov)
    assert loss.total == pytest.approx(loss.nll + loss.cov_mse)
    assert loss.grads.weights[0].shape == (40, 8)

    only_mse = joint_loss(params, small_config, inputs, target, target_cov, terms="cov_mse")
    assert only_mse.objective == pytest.approx(loss.cov_mse)
    np.testing.assert_array_equal(only_mse.grads.weights[-1][:, 0], np.zeros(8))

    values = evaluate_loss(params, small_config, augmented_pairs)
    assert values["nll"] == pytest.approx(loss.nll)
    assert values["total"] == pytest.approx(loss.total)
