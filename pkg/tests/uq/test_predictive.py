import numpy as np
import pytest

from uqtraj.core import is_psd
from uqtraj.net import NetConfig, init_params
from uqtraj.uq import Ensemble, aggregate_members, ensemble_predict, mc_dropout_predict
from uqtraj.utils import InvalidArgument, NumericalOverflow


def test_aggregate_two_members():
    """
    Test.
    """
    means = np.array([[[[0.0, 0.0]]], [[[2.0, 0.0]]]])
    covs = np.tile(np.eye(2), (2, 1, 1, 1, 1))
    summary = aggregate_members(means, covs, 0.5 * covs)
    np.testing.assert_allclose(summary.mean[0, 0], [1.0, 0.0])
    np.testing.assert_allclose(summary.aleatoric[0, 0], np.eye(2))
    np.testing.assert_allclose(summary.epistemic[0, 0], np.diag([1.0, 0.0]))
    np.testing.assert_allclose(summary.total_cov[0, 0], np.diag([2.0, 1.0]))
    np.testing.assert_allclose(summary.sens_cov[0, 0], 0.5 * np.eye(2))
    assert summary.n_members == 2
    np.testing.assert_allclose(summary.epistemic_trace, [[1.0]])
    np.testing.assert_allclose(summary.aleatoric_trace, [[2.0]])


def test_aggregate_single_and_identical_members():
    """
    Test.
    """
    rng = np.random.default_rng(0)
    means = rng.normal(size=(1, 3, 12, 2))
    covs = np.tile(np.eye(2), (1, 3, 12, 1, 1))
    summary = aggregate_members(means, covs, covs)
    np.testing.assert_array_equal(summary.epistemic, np.zeros((3, 12, 2, 2)))
    np.testing.assert_array_equal(summary.mean, means[0])

    repeated = np.repeat(means, 4, axis=0)
    summary = aggregate_members(repeated, np.repeat(covs, 4, axis=0), np.repeat(covs, 4, axis=0))
    np.testing.assert_array_equal(summary.epistemic, np.zeros((3, 12, 2, 2)))


def test_aggregate_properties():
    """
    Test.
    """
    rng = np.random.default_rng(1)
    means = rng.normal(size=(5, 2, 12, 2))
    factors = rng.normal(size=(5, 2, 12, 2, 2))
    covs = factors @ np.swapaxes(factors, -1, -2)
    summary = aggregate_members(means, covs, covs)

    np.testing.assert_allclose(summary.total_cov, summary.aleatoric + summary.epistemic)
    assert is_psd(summary.epistemic)
    assert is_psd(summary.total_cov)

    order = [3, 0, 4, 1, 2]
    permuted = aggregate_members(means[order], covs[order], covs[order])
    np.testing.assert_allclose(permuted.mean, summary.mean)
    np.testing.assert_allclose(permuted.epistemic, summary.epistemic, atol=1e-12)

    expected = np.einsum("m...i,m...j->...ij", means, means) / 5 - np.einsum(
        "...i,...j->...ij", summary.mean, summary.mean
    )
    np.testing.assert_allclose(summary.epistemic, expected, atol=1e-12)

    selected = summary.select(1)
    assert selected.mean.shape == (1, 12, 2)
    assert selected.member_means.shape == (5, 1, 12, 2)


def test_aggregate_non_finite():
    """
    Test.
    """
    means = np.zeros((3, 1, 12, 2))
    means[1, 0, 4, 0] = np.nan
    covs = np.tile(np.eye(2), (3, 1, 12, 1, 1))
    with pytest.raises(NumericalOverflow) as error:
        aggregate_members(means, covs, covs)
    assert "Member 1" in error.value.message


def test_ensemble_predict(small_config):
    """
    Test.
    """
    members = [init_params(small_config, seed=seed) for seed in range(3)]
    ens = Ensemble(members=members, cfg=small_config)
    assert len(ens) == 3
    assert ens.seeds == [0, 1, 2]

    inputs = np.random.default_rng(0).normal(size=(4, 40))
    summary = ensemble_predict(ens, inputs)
    assert summary.mean.shape == (4, 12, 2)
    assert summary.member_means.shape == (3, 4, 12, 2)
    assert np.all(summary.epistemic_trace > 0)

    single = ensemble_predict(Ensemble(members=members[:1], cfg=small_config), inputs)
    np.testing.assert_array_equal(single.epistemic, np.zeros((4, 12, 2, 2)))

    with pytest.raises(InvalidArgument):
        Ensemble(members=[], cfg=small_config)
    with pytest.raises(InvalidArgument):
        Ensemble(members=members, cfg=NetConfig())


def test_mc_dropout_predict():
    """
    Test.
    """
    inputs = np.random.default_rng(0).normal(size=(2, 40))
    no_dropout = NetConfig.small()
    summary = mc_dropout_predict(init_params(no_dropout, seed=0), no_dropout, inputs, n_samples=5, seed=0)
    np.testing.assert_array_equal(summary.epistemic, np.zeros((2, 12, 2, 2)))

    cfg = NetConfig.small(dropout_p=0.5)
    params = init_params(cfg, seed=0)
    first = mc_dropout_predict(params, cfg, inputs, n_samples=10, seed=3)
    again = mc_dropout_predict(params, cfg, inputs, n_samples=10, seed=3)
    other = mc_dropout_predict(params, cfg, inputs, n_samples=10, seed=4)
    assert first.n_members == 10
    np.testing.assert_array_equal(first.mean, again.mean)
    assert not np.allclose(first.mean, other.mean)
    assert np.all(first.epistemic_trace > 0)

    with pytest.raises(InvalidArgument):
        mc_dropout_predict(params, cfg, inputs, n_samples=1)


def test_mc_dropout_predict_converges():
    """
    Test.
    """
    inputs = np.random.default_rng(5).normal(size=(2, 40))
    cfg = NetConfig.small(dropout_p=0.5)
    params = init_params(cfg, seed=1)
    few = mc_dropout_predict(params, cfg, inputs, n_samples=200, seed=0)
    many = mc_dropout_predict(params, cfg, inputs, n_samples=2000, seed=1)

    member_var = np.diagonal(many.epistemic, axis1=-2, axis2=-1)
    standard_error = np.sqrt(member_var * (1 / 200 + 1 / 2000))
    assert np.all(np.abs(few.mean - many.mean) <= 5 * standard_error + 1e-12)
    np.testing.assert_allclose(few.epistemic_trace, many.epistemic_trace, rtol=0.5)
    np.testing.assert_allclose(few.aleatoric_trace, many.aleatoric_trace, rtol=0.2)
