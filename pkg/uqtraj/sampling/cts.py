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


from dataclasses import dataclass

import numpy as np

from uqtraj.core.covariance import covariance_factor
from uqtraj.core.types import Trajectory, STEP_SECONDS
from uqtraj.kalman.filter import position_covariances, transition_matrix
from uqtraj.utils._utils import assure_generator
from uqtraj.utils.exceptions import InvalidArgument

ALLOWED_DYNAMICS = ["constant_velocity", "identity"]


@dataclass(frozen=True)
class CtsConfig:
    """
    Settings of conditional trajectory sampling.

    Attributes:
        m (int): Number of sampled trajectories per posterior. By default 3.
        lam (float): Persistence of the deviation from the posterior mean, in [0, 1). By default 0.9.
        rng_seed (int): Seed of the sampler.
        dynamics (str): Model propagating the deviation, `'constant_velocity'` or `'identity'`.
        dt (float): Step length used by the constant-velocity model.
    """

    m: int = 3
    lam: float = 0.9
    rng_seed: int = 0
    dynamics: str = "constant_velocity"
    dt: float = STEP_SECONDS

    def __post_init__(self):
        """
        Validates the configuration.
        """
        if self.m < 1:
            raise InvalidArgument(f"m needs to be at least 1, got {self.m}")
        if not 0 <= self.lam < 1:
            raise InvalidArgument(f"lam needs to be in [0, 1), got {self.lam}")
        if self.dynamics not in ALLOWED_DYNAMICS:
            raise InvalidArgument(f"dynamics needs to be one of {ALLOWED_DYNAMICS}, got {self.dynamics}")

    @property
    def F(self):
        """
        (np.ndarray): 4x4 matrix propagating the deviation.
        """
        if self.dynamics == "identity":
            return np.eye(4)
        return transition_matrix(self.dt)


def sample_multivariate_normal(mean, cov, rng=None):
    """
    Draws one sample of N(mean, cov).

    The covariance factor comes from Cholesky, with an eigendecomposition fallback for semidefinite matrices, so a
    zero covariance returns the mean exactly.

    Args:
        mean (array-like): Mean of length k.
        cov (array-like): PSD k x k covariance.
        rng (int, None or np.random.Generator, optional): Random source.

    Returns:
        (np.ndarray): Sample of length k.
    """
    mean = np.asarray(mean, dtype=float)
    factor = covariance_factor(np.asarray(cov, dtype=float))
    return mean + factor @ assure_generator(rng).standard_normal(len(mean))


def sample_states(post, cfg):
    """
    Samples m full-state trajectories around a Kalman posterior.

    The deviation from the posterior mean follows d_t = lam F d_{t-1} + e_t with
    e_t ~ N(0, (1 - lam^2) P_t) and d_0 ~ N(0, P_0). Every trajectory uses its own stream spawned from
    `cfg.rng_seed`.

    Args:
        post (KfPosterior): Filter output with N steps.
        cfg (CtsConfig): Sampler settings.

    Returns:
        (np.ndarray): Sampled states of shape (m, N, 4).
    """
    n = len(post)
    if n == 0:
        raise InvalidArgument("Cannot sample from an empty posterior")
    factors = covariance_factor(post.covariances)
    streams = [np.random.default_rng(s) for s in np.random.SeedSequence(cfg.rng_seed).spawn(cfg.m)]
    normals = np.stack([rng.standard_normal((n, 4)) for rng in streams])

    innovation_scale = np.sqrt(1.0 - cfg.lam ** 2)
    transition = cfg.lam * cfg.F
    deviations = np.empty((cfg.m, n, 4))
    deviations[:, 0] = normals[:, 0] @ factors[0].T
    for t in range(1, n):
        deviations[:, t] = deviations[:, t - 1] @ transition.T + innovation_scale * normals[:, t] @ factors[t].T
    return post.means[None] + deviations


def sample_trajectories(post, cfg, ped_id=0):
    """
    Conditional trajectory sampling from a Kalman posterior.

    Positions are sampled, velocities are carried over from the posterior mean and the per-step position
    covariances of the posterior are attached.

    Args:
        post (KfPosterior): Filter output.
        cfg (CtsConfig): Sampler settings.
        ped_id (int, optional): Identifier stored on the trajectories.

    Returns:
        (list of Trajectory): m trajectories of the same length as the posterior.
    """
    samples = sample_states(post, cfg)
    covs = position_covariances(post)
    velocities = post.means[:, 2:]
    return [
        Trajectory.from_arrays(sample[:, :2], velocities, steps=post.steps, ped_id=ped_id, covs=covs)
        for sample in samples
    ]
