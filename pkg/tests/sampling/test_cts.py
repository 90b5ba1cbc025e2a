import numpy as np
import pytest

from uqtraj.kalman import KfConfig, KfPosterior, filter_trajectory
from uqtraj.sampling import CtsConfig, sample_multivariate_normal, sample_states, sample_trajectories
from uqtraj.utils import InvalidArgument, InvalidCovariance


def make_posterior(n, cov, means=None):
    """
    Posterior with the same covariance at every step.
    """
    means = np.zeros((n, 4)) if means is None else means
    return KfPosterior(
        means=means,
        covariances=np.tile(cov, (n, 1, 1)),
        innovations=np.zeros((n, 2)),
        steps=np.arange(n),
    )


def test_cts_config_validation():
    """
    Test.
    """
    with pytest.raises(InvalidArgument):
        CtsConfig(m=0)
    with pytest.raises(InvalidArgument):
        CtsConfig(lam=1.0)
    with pytest.raises(InvalidArgument):
        CtsConfig(dynamics="random_walk")
    np.testing.assert_array_equal(CtsConfig(dynamics="identity").F, np.eye(4))


def test_sample_multivariate_normal_zero_cov():
    """
    Test.
    """
    mean = np.array([1.0, -2.0, 3.0])
    np.testing.assert_array_equal(sample_multivariate_normal(mean, np.zeros((3, 3)), rng=0), mean)


def test_sample_multivariate_normal_moments():
    """
    Test.
    """
    rng = np.random.default_rng(0)
    draws = np.array([sample_multivariate_normal([0.0], [[4.0]], rng=rng) for _ in range(20000)])
    assert draws.std() == pytest.approx(2.0, abs=0.05)

    target = np.array([[2.0, 1.0], [1.0, 2.0]])
    draws = np.array([sample_multivariate_normal([0.0, 0.0], target, rng=rng) for _ in range(20000)])
    assert np.linalg.norm(np.cov(draws.T) - target) / np.linalg.norm(target) < 0.05


def test_sample_multivariate_normal_indefinite():
    """
    Test.
    """
    with pytest.raises(InvalidCovariance):
        sample_multivariate_normal([0.0, 0.0], [[1.0, 0.0], [0.0, -1.0]])


def test_zero_covariance_returns_mean():
    """
    Test.
    """
    means = np.cumsum(np.ones((6, 4)), axis=0)
    post = make_posterior(6, np.zeros((4, 4)), means=means)
    samples = sample_states(post, CtsConfig(m=4, rng_seed=3))
    assert samples.shape == (4, 6, 4)
    np.testing.assert_array_equal(samples, np.broadcast_to(means, samples.shape))


def test_stationary_marginals_and_persistence():
    """
    Test.
    """
    post = make_posterior(6, np.eye(4))
    cfg = CtsConfig(m=20000, lam=0.9, dynamics="identity", rng_seed=0)
    samples = sample_states(post, cfg)
    for t in range(6):
        empirical = np.cov(samples[:, t, :2].T)
        assert np.linalg.norm(empirical - np.eye(2)) / np.sqrt(2) < 0.05
    np.testing.assert_allclose(samples[:, :, :2].mean(axis=0), 0.0, atol=4 / np.sqrt(20000))
    lag1 = np.corrcoef(samples[:, 4, 0], samples[:, 5, 0])[0, 1]
    assert lag1 == pytest.approx(0.9, abs=0.01)


def test_lambda_zero_is_independent():
    """
    Test.
    """
    post = make_posterior(3, np.eye(4))
    samples = sample_states(post, CtsConfig(m=50000, lam=0.0, dynamics="identity", rng_seed=1))
    lag1 = np.corrcoef(samples[:, 1, 0], samples[:, 2, 0])[0, 1]
    assert abs(lag1) < 0.02


def test_sampling_reproducible():
    """
    Test.
    """
    post = make_posterior(5, 0.5 * np.eye(4))
    first = sample_states(post, CtsConfig(m=3, rng_seed=11))
    second = sample_states(post, CtsConfig(m=3, rng_seed=11))
    other = sample_states(post, CtsConfig(m=3, rng_seed=12))
    np.testing.assert_array_equal(first, second)
    assert not np.allclose(first, other)


def test_sample_trajectories():
    """
    Test.
    """
    t = np.arange(10) * 0.4
    z = np.stack([t, 2 * t], axis=1)
    post = filter_trajectory(z, KfConfig.from_noise_std(0.1))
    trajectories = sample_trajectories(post, CtsConfig(m=3, rng_seed=0), ped_id=9)
    assert len(trajectories) == 3
    for traj in trajectories:
        assert len(traj) == 10
        assert traj.ped_id == 9
        np.testing.assert_array_equal(traj.velocities, post.means[:, 2:])
        np.testing.assert_allclose(traj.cov_array()[:, 0], post.covariances[:, 0, 0])


def test_empty_posterior():
    """
    Test.
    """
    post = KfPosterior(
        means=np.zeros((0, 4)), covariances=np.zeros((0, 4, 4)), innovations=np.zeros((0, 2)), steps=np.zeros(0)
    )
    with pytest.raises(InvalidArgument):
        sample_states(post, CtsConfig())
