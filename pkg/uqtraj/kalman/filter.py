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


from dataclasses import dataclass, field
from typing import List

import numpy as np
from filterpy.common import Q_discrete_white_noise

from uqtraj.core.covariance import ensure_psd, inv2, det2
from uqtraj.core.types import CovMatrix2, CovMatrix4, TrackState, STEP_SECONDS
from uqtraj.utils.arrayfuncs import matrix_to_compact
from uqtraj.utils.exceptions import InvalidArgument, InvalidCovariance, SingularInnovation

SINGULAR_DET = 1e-15

H = np.array([[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]])


def transition_matrix(dt):
    """
    Constant-velocity transition over (x, y, u, v).
    """
    F = np.eye(4)
    F[0, 2] = dt
    F[1, 3] = dt
    return F


def process_noise(dt, q_scale):
    """
    Discrete white-noise-acceleration process noise for a 2D constant-velocity model.

    The per-axis block is q_scale * [[dt^4/4, dt^3/2], [dt^3/2, dt^2]], arranged in (x, y, u, v) order.

    Args:
        dt (float): Step length in seconds.
        q_scale (float): Acceleration noise intensity.

    Returns:
        (np.ndarray): 4x4 process noise matrix.
    """
    return np.asarray(Q_discrete_white_noise(dim=2, dt=dt, var=q_scale, block_size=2, order_by_dim=False))


@dataclass(frozen=True)
class KfConfig:
    """
    Settings of the constant-velocity Kalman filter.

    Attributes:
        dt (float): Step length in seconds. By default 0.4.
        q_scale (float): Process noise intensity. By default 0.05.
        r (CovMatrix2): Measurement noise covariance.
        p0 (CovMatrix4): Covariance of the initial state.
    """

    dt: float = STEP_SECONDS
    q_scale: float = 0.05
    r: CovMatrix2 = field(default_factory=lambda: CovMatrix2.identity(0.01))
    p0: CovMatrix4 = field(default_factory=lambda: CovMatrix4.diag([0.01, 0.01, 1.0, 1.0]))

    def __post_init__(self):
        """
        Validates the configuration.
        """
        if not self.dt > 0:
            raise InvalidArgument(f"dt needs to be positive, got {self.dt}")
        if not self.q_scale >= 0:
            raise InvalidArgument(f"q_scale needs to be non-negative, got {self.q_scale}")
        if not self.r.is_psd():
            raise InvalidCovariance("Measurement noise r is not positive semidefinite")
        if not self.p0.is_psd():
            raise InvalidCovariance("Initial covariance p0 is not positive semidefinite")

    @property
    def F(self):
        """
        (np.ndarray): Transition matrix.
        """
        return transition_matrix(self.dt)

    @property
    def Q(self):
        """
        (np.ndarray): Process noise matrix.
        """
        return process_noise(self.dt, self.q_scale)

    @property
    def R(self):
        """
        (np.ndarray): Measurement noise matrix.
        """
        return self.r.to_matrix()

    @property
    def P0(self):
        """
        (np.ndarray): Initial covariance matrix.
        """
        return self.p0.to_matrix()

    @classmethod
    def from_noise_std(cls, sigma, dt=STEP_SECONDS, q_scale=0.05, velocity_var=1.0):
        """
        Builds a configuration with isotropic measurement noise.

        Args:
            sigma (float): Measurement noise standard deviation in meters.
            dt (float, optional): Step length in seconds.
            q_scale (float, optional): Process noise intensity.
            velocity_var (float, optional): Initial velocity variance.

        Returns:
            (KfConfig): R = sigma^2 I and p0 = diag(sigma^2, sigma^2, velocity_var, velocity_var).
        """
        variance = float(sigma) ** 2
        return cls(
            dt=dt,
            q_scale=q_scale,
            r=CovMatrix2.identity(variance),
            p0=CovMatrix4.diag([variance, variance, velocity_var, velocity_var]),
        )


@dataclass(frozen=True, eq=False)
class KfPosterior:
    """
    Filtered states of a trajectory.

    Attributes:
        means (np.ndarray): Posterior means of shape (N, 4) in (x, y, u, v) order.
        covariances (np.ndarray): Posterior covariances of shape (N, 4, 4).
        innovations (np.ndarray): Measurement residuals z - H x_prior of shape (N, 2). The first row is zero.
        steps (np.ndarray): Step indices of shape (N,).
    """

    means: np.ndarray
    covariances: np.ndarray
    innovations: np.ndarray
    steps: np.ndarray

    def __post_init__(self):
        """
        Validates lengths.
        """
        n = len(self.means)
        if not (len(self.covariances) == len(self.innovations) == len(self.steps) == n):
            raise InvalidArgument("KfPosterior arrays need equal lengths")

    def __len__(self):
        """
        Number of filtered steps.
        """
        return len(self.means)

    @property
    def states(self) -> List[TrackState]:
        """
        (list of TrackState): Posterior means.
        """
        return [TrackState.from_array(m, t=t) for m, t in zip(self.means, self.steps)]

    @property
    def covs(self) -> List[CovMatrix4]:
        """
        (list of CovMatrix4): Posterior covariances.
        """
        return [CovMatrix4.from_matrix(c) for c in self.covariances]


def position_covariances(post):
    """
    Position blocks of the posterior covariances in compact (sxx, sxy, syy) form.

    Args:
        post (KfPosterior): Filter output.

    Returns:
        (np.ndarray): Array of shape (N, 3).
    """
    return matrix_to_compact(post.covariances[:, :2, :2])


def _predict(x, P, F, Q):
    x_prior = F @ x
    P_prior = ensure_psd(F @ P @ F.T + Q)
    return x_prior, P_prior


def _update(x_prior, P_prior, z, R):
    S = P_prior[:2, :2] + R
    det = det2(S)
    if not np.isfinite(det) or det < SINGULAR_DET:
        raise SingularInnovation(f"Innovation covariance is singular (det {det:.3e})")
    K = P_prior[:, :2] @ inv2(S)
    innovation = z - x_prior[:2]
    x = x_prior + K @ innovation
    P = ensure_psd((np.eye(4) - K @ H) @ P_prior)
    return x, P, innovation


def predict(x, p, cfg):
    """
    Propagates a state through the constant-velocity model.

    Args:
        x (TrackState): Posterior state at the previous step.
        p (CovMatrix4): Posterior covariance at the previous step.
        cfg (KfConfig): Filter settings.

    Returns:
        (TrackState, CovMatrix4): Prior state (at step t + 1) and covariance F P F^T + Q.
    """
    P = ensure_psd(p.to_matrix(), name="state covariance")
    x_prior, P_prior = _predict(x.to_array(), P, cfg.F, cfg.Q)
    return TrackState.from_array(x_prior, t=x.t + 1), CovMatrix4.from_matrix(P_prior)


def update(x_prior, p_prior, z, cfg):
    """
    Corrects a prior state with a position measurement.

    Args:
        x_prior (TrackState): Prior state.
        p_prior (CovMatrix4): Prior covariance.
        z (array-like): Measured (x, y).
        cfg (KfConfig): Filter settings.

    Returns:
        (TrackState, CovMatrix4): Posterior state and covariance (I - K H) P, symmetrized and PSD-clamped.
    """
    P_prior = ensure_psd(p_prior.to_matrix(), name="prior covariance")
    x, P, _ = _update(x_prior.to_array(), P_prior, np.asarray(z, dtype=float), cfg.R)
    return TrackState.from_array(x, t=x_prior.t), CovMatrix4.from_matrix(P)


def filter_trajectory(measurements, cfg, steps=None):
    """
    Runs the Kalman filter over a sequence of position measurements.

    The first state is initialized at the first measurement with the finite-difference velocity of the first two
    measurements and covariance `cfg.p0`. Every following measurement goes through predict and update.

    Args:
        measurements (array-like): Positions of shape (N, 2), N >= 2.
        cfg (KfConfig): Filter settings.
        steps (array-like, optional): Step indices attached to the posterior. 0..N-1 if None.

    Returns:
        (KfPosterior): Posterior means, covariances and innovations.
    """
    z = np.asarray(measurements, dtype=float)
    if z.ndim != 2 or z.shape[1] != 2:
        raise InvalidArgument(f"Measurements need to have shape (N, 2), got {z.shape}")
    if len(z) < 2:
        raise InvalidArgument(f"Filtering needs at least 2 measurements, got {len(z)}")
    if not np.all(np.isfinite(z)):
        raise InvalidArgument("Measurements need to be finite")

    n = len(z)
    F, Q, R = cfg.F, cfg.Q, cfg.R
    means = np.zeros((n, 4))
    covariances = np.zeros((n, 4, 4))
    innovations = np.zeros((n, 2))

    means[0, :2] = z[0]
    means[0, 2:] = (z[1] - z[0]) / cfg.dt
    covariances[0] = ensure_psd(cfg.P0, name="p0")

    for k in range(1, n):
        x_prior, P_prior = _predict(means[k - 1], covariances[k - 1], F, Q)
        try:
            means[k], covariances[k], innovations[k] = _update(x_prior, P_prior, z[k], R)
        except SingularInnovation as error:
            raise SingularInnovation("Innovation covariance is singular", step=k) from error

    steps = np.arange(n) if steps is None else np.asarray(steps, dtype=int)
    return KfPosterior(means=means, covariances=covariances, innovations=innovations, steps=steps)
