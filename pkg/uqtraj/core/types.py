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
from typing import Optional, Tuple

import numpy as np

from uqtraj.core.covariance import check_finite, is_psd
from uqtraj.utils.exceptions import InvalidArgument, InvalidCovariance

STEP_SECONDS = 0.4

_UPPER4 = np.triu_indices(4)


@dataclass(frozen=True)
class TrackState:
    """
    Kinematic state of a pedestrian at one step.

    Attributes:
        x (float): Position in meters.
        y (float): Position in meters.
        u (float): Velocity along x in meters per second.
        v (float): Velocity along y in meters per second.
        t (int): Step index. Consecutive steps are `STEP_SECONDS` apart.
    """

    x: float
    y: float
    u: float = 0.0
    v: float = 0.0
    t: int = 0

    def __post_init__(self):
        """
        Validates the state.
        """
        if not np.all(np.isfinite([self.x, self.y, self.u, self.v])):
            raise InvalidArgument(f"TrackState fields need to be finite, got {self}")
        if self.t < 0:
            raise InvalidArgument(f"TrackState step index needs to be non-negative, got {self.t}")

    @property
    def position(self):
        """
        (np.ndarray): (x, y).
        """
        return np.array([self.x, self.y])

    def to_array(self):
        """
        Returns the state vector (x, y, u, v).
        """
        return np.array([self.x, self.y, self.u, self.v])

    @classmethod
    def from_array(cls, state, t=0):
        """
        Builds a TrackState from a (x, y, u, v) vector.
        """
        state = np.asarray(state, dtype=float)
        return cls(x=float(state[0]), y=float(state[1]), u=float(state[2]), v=float(state[3]), t=int(t))


@dataclass(frozen=True)
class CovMatrix2:
    """
    Symmetric 2x2 position covariance stored as (sxx, sxy, syy), in meters squared.
    """

    sxx: float
    sxy: float
    syy: float

    def __post_init__(self):
        """
        Validates the covariance.
        """
        check_finite(np.array([self.sxx, self.sxy, self.syy]), name="CovMatrix2")

    def to_matrix(self):
        """
        Returns the full 2x2 matrix.
        """
        return np.array([[self.sxx, self.sxy], [self.sxy, self.syy]])

    def to_compact(self):
        """
        Returns the (sxx, sxy, syy) vector.
        """
        return np.array([self.sxx, self.sxy, self.syy])

    @property
    def det(self):
        """
        (float): Determinant.
        """
        return self.sxx * self.syy - self.sxy ** 2

    @property
    def trace(self):
        """
        (float): Trace.
        """
        return self.sxx + self.syy

    def is_psd(self, tol=1e-12):
        """
        Checks positive semidefiniteness within tolerance.
        """
        return is_psd(self.to_matrix(), tol=tol)

    @classmethod
    def from_matrix(cls, matrix):
        """
        Builds a CovMatrix2 from a 2x2 matrix. The off-diagonal entries are averaged.
        """
        matrix = np.asarray(matrix, dtype=float)
        if matrix.shape != (2, 2):
            raise InvalidCovariance(f"CovMatrix2 needs a 2x2 matrix, got shape {matrix.shape}")
        return cls(
            sxx=float(matrix[0, 0]), sxy=float(0.5 * (matrix[0, 1] + matrix[1, 0])), syy=float(matrix[1, 1])
        )

    @classmethod
    def identity(cls, variance=1.0):
        """
        Isotropic covariance variance * I.
        """
        return cls(sxx=float(variance), sxy=0.0, syy=float(variance))


@dataclass(frozen=True)
class CovMatrix4:
    """
    Symmetric 4x4 covariance over (x, y, u, v), stored as the 10 upper-triangular entries in row-major order.
    """

    values: Tuple[float, ...]

    def __post_init__(self):
        """
        Validates the covariance.
        """
        if len(self.values) != 10:
            raise InvalidCovariance(f"CovMatrix4 needs 10 entries, got {len(self.values)}")
        check_finite(np.asarray(self.values, dtype=float), name="CovMatrix4")

    def to_matrix(self):
        """
        Returns the full 4x4 matrix.
        """
        matrix = np.zeros((4, 4))
        matrix[_UPPER4] = self.values
        return matrix + np.triu(matrix, 1).T

    def position_block(self):
        """
        Returns the 2x2 position block as CovMatrix2.
        """
        return CovMatrix2.from_matrix(self.to_matrix()[:2, :2])

    @property
    def trace(self):
        """
        (float): Trace.
        """
        return float(np.trace(self.to_matrix()))

    def is_psd(self, tol=1e-12):
        """
        Checks positive semidefiniteness within tolerance.
        """
        return is_psd(self.to_matrix(), tol=tol)

    @classmethod
    def from_matrix(cls, matrix):
        """
        Builds a CovMatrix4 from a 4x4 matrix after symmetrizing it.
        """
        matrix = np.asarray(matrix, dtype=float)
        if matrix.shape != (4, 4):
            raise InvalidCovariance(f"CovMatrix4 needs a 4x4 matrix, got shape {matrix.shape}")
        matrix = 0.5 * (matrix + matrix.T)
        return cls(values=tuple(float(v) for v in matrix[_UPPER4]))

    @classmethod
    def diag(cls, diagonal):
        """
        Diagonal covariance.
        """
        return cls.from_matrix(np.diag(np.asarray(diagonal, dtype=float)))


@dataclass(frozen=True)
class Ellipse:
    """
    Scaled covariance ellipse {p : (p - center)^T (scale^2 cov)^-1 (p - center) <= 1}.

    Attributes:
        center (tuple of float): (x, y) center in meters.
        cov (CovMatrix2): Covariance of the ellipse.
        scale (float): Sigma multiplier, typically 1 or 2.
    """

    center: Tuple[float, float]
    cov: CovMatrix2
    scale: float = 1.0

    def __post_init__(self):
        """
        Validates the ellipse.
        """
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))
        if not np.all(np.isfinite(self.center)):
            raise InvalidCovariance(f"Ellipse center needs to be finite, got {self.center}")
        if not self.scale > 0:
            raise InvalidArgument(f"Ellipse scale needs to be positive, got {self.scale}")

    def scaled_matrix(self):
        """
        Returns scale^2 * cov as 2x2 matrix.
        """
        return self.scale ** 2 * self.cov.to_matrix()


@dataclass(frozen=True)
class Trajectory:
    """
    Ordered track of one pedestrian with optional per-step position covariances.

    Attributes:
        states (tuple of TrackState): States with strictly increasing step index.
        covs (tuple of CovMatrix2, optional): Per-step covariances, same length as states.
        ped_id (int): Pedestrian identifier.
    """

    states: Tuple[TrackState, ...]
    covs: Optional[Tuple[CovMatrix2, ...]] = None
    ped_id: int = 0

    def __post_init__(self):
        """
        Validates ordering and lengths.
        """
        object.__setattr__(self, "states", tuple(self.states))
        if self.covs is not None:
            object.__setattr__(self, "covs", tuple(self.covs))
            if len(self.covs) != len(self.states):
                raise InvalidArgument(
                    f"Trajectory has {len(self.states)} states but {len(self.covs)} covariances"
                )
        steps = [s.t for s in self.states]
        if any(b <= a for a, b in zip(steps, steps[1:])):
            raise InvalidArgument(f"Trajectory of pedestrian {self.ped_id} needs strictly increasing step indices")

    def __len__(self):
        """
        Number of states.
        """
        return len(self.states)

    @property
    def positions(self):
        """
        (np.ndarray): Array of shape (N, 2).
        """
        return np.array([[s.x, s.y] for s in self.states]).reshape(-1, 2)

    @property
    def velocities(self):
        """
        (np.ndarray): Array of shape (N, 2).
        """
        return np.array([[s.u, s.v] for s in self.states]).reshape(-1, 2)

    @property
    def steps(self):
        """
        (np.ndarray): Step indices of shape (N,).
        """
        return np.array([s.t for s in self.states], dtype=int)

    def cov_array(self):
        """
        Returns the covariances as an (N, 3) compact array, or None.
        """
        if self.covs is None:
            return None
        return np.array([c.to_compact() for c in self.covs]).reshape(-1, 3)

    @classmethod
    def from_arrays(cls, positions, velocities=None, steps=None, ped_id=0, covs=None):
        """
        Builds a trajectory from arrays.

        Args:
            positions (np.ndarray): Array of shape (N, 2).
            velocities (np.ndarray, optional): Array of shape (N, 2). Zeros if None.
            steps (array-like, optional): Step indices. 0..N-1 if None.
            ped_id (int, optional): Pedestrian identifier.
            covs (np.ndarray, optional): Array of shape (N, 3) or (N, 2, 2).

        Returns:
            (Trajectory): The trajectory.
        """
        positions = np.asarray(positions, dtype=float).reshape(-1, 2)
        n = len(positions)
        velocities = np.zeros((n, 2)) if velocities is None else np.asarray(velocities, dtype=float).reshape(-1, 2)
        steps = np.arange(n) if steps is None else np.asarray(steps)
        states = tuple(
            TrackState(x=p[0], y=p[1], u=w[0], v=w[1], t=int(t)) for p, w, t in zip(positions, velocities, steps)
        )
        cov_states = None
        if covs is not None:
            covs = np.asarray(covs, dtype=float)
            if covs.ndim == 2:
                cov_states = tuple(CovMatrix2(sxx=c[0], sxy=c[1], syy=c[2]) for c in covs)
            else:
                cov_states = tuple(CovMatrix2.from_matrix(c) for c in covs)
        return cls(states=states, covs=cov_states, ped_id=int(ped_id))
