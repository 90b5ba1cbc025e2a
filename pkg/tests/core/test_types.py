import numpy as np
import pytest

from uqtraj.core import CovMatrix2, CovMatrix4, Ellipse, TrackState, Trajectory
from uqtraj.utils import InvalidArgument, InvalidCovariance


def test_track_state():
    """
    Test.
    """
    state = TrackState(x=1.0, y=2.0, u=0.5, v=-0.5, t=3)
    np.testing.assert_array_equal(state.position, [1.0, 2.0])
    np.testing.assert_array_equal(state.to_array(), [1.0, 2.0, 0.5, -0.5])
    assert TrackState.from_array(state.to_array(), t=3) == state


def test_track_state_validation():
    """
    Test.
    """
    with pytest.raises(InvalidArgument):
        TrackState(x=np.nan, y=0.0)
    with pytest.raises(InvalidArgument):
        TrackState(x=0.0, y=0.0, t=-1)


def test_cov_matrix2():
    """
    Test.
    """
    cov = CovMatrix2(sxx=4.0, sxy=1.0, syy=2.0)
    np.testing.assert_array_equal(cov.to_matrix(), [[4.0, 1.0], [1.0, 2.0]])
    assert cov.det == 7.0
    assert cov.trace == 6.0
    assert cov.is_psd()
    assert not CovMatrix2(sxx=1.0, sxy=2.0, syy=1.0).is_psd()
    assert CovMatrix2.from_matrix(cov.to_matrix()) == cov
    assert CovMatrix2.identity(2.0) == CovMatrix2(2.0, 0.0, 2.0)


def test_cov_matrix2_errors():
    """
    Test.
    """
    with pytest.raises(InvalidCovariance):
        CovMatrix2(sxx=np.inf, sxy=0.0, syy=1.0)
    with pytest.raises(InvalidCovariance):
        CovMatrix2.from_matrix(np.eye(3))


def test_cov_matrix4():
    """
    Test.
    """
    matrix = np.diag([1.0, 2.0, 3.0, 4.0])
    matrix[0, 1] = matrix[1, 0] = 0.5
    cov = CovMatrix4.from_matrix(matrix)
    np.testing.assert_array_equal(cov.to_matrix(), matrix)
    assert cov.trace == 10.0
    assert cov.is_psd()
    assert cov.position_block() == CovMatrix2(1.0, 0.5, 2.0)
    assert CovMatrix4.diag([1.0, 1.0, 1.0, 1.0]).to_matrix().tolist() == np.eye(4).tolist()

    with pytest.raises(InvalidCovariance):
        CovMatrix4(values=(1.0, 2.0))


def test_ellipse():
    """
    Test.
    """
    e = Ellipse(center=(1, 2), cov=CovMatrix2.identity(1.0), scale=2)
    assert e.center == (1.0, 2.0)
    np.testing.assert_array_equal(e.scaled_matrix(), 4 * np.eye(2))
    with pytest.raises(InvalidArgument):
        Ellipse(center=(0, 0), cov=CovMatrix2.identity(1.0), scale=0.0)
    with pytest.raises(InvalidCovariance):
        Ellipse(center=(np.nan, 0), cov=CovMatrix2.identity(1.0))


def test_trajectory_from_arrays():
    """
    Test.
    """
    positions = np.array([[0.0, 0.0], [1.0, 0.5], [2.0, 1.0]])
    covs = np.array([[1.0, 0.0, 1.0], [0.5, 0.1, 0.5], [0.2, 0.0, 0.2]])
    traj = Trajectory.from_arrays(positions, steps=[4, 5, 6], ped_id=7, covs=covs)
    assert len(traj) == 3
    assert traj.ped_id == 7
    np.testing.assert_array_equal(traj.positions, positions)
    np.testing.assert_array_equal(traj.velocities, np.zeros((3, 2)))
    np.testing.assert_array_equal(traj.steps, [4, 5, 6])
    np.testing.assert_array_equal(traj.cov_array(), covs)
    assert Trajectory.from_arrays(positions).cov_array() is None


def test_trajectory_validation():
    """
    Test.
    """
    with pytest.raises(InvalidArgument):
        Trajectory.from_arrays(np.zeros((3, 2)), steps=[0, 2, 2])
    with pytest.raises(InvalidArgument):
        Trajectory(states=(TrackState(0.0, 0.0),), covs=(CovMatrix2.identity(), CovMatrix2.identity()))
