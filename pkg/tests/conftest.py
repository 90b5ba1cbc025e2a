import os

import numpy as np
import pytest

from uqtraj.data import SequencePair, augment_with_kf, normalize_pair
from uqtraj.net import NetConfig
from uqtraj.sampling import CtsConfig

FIXTURES_DIR = os.path.join(os.path.dirname(__file__), "fixtures")


def straight_pair(velocity=(1.2, 0.3), start=(0.0, 0.0), ped_id=0):
    """
    Constant-velocity pair of 8 + 12 steps at 0.4 s.
    """
    t = np.arange(20) * 0.4
    positions = np.asarray(start) + t[:, None] * np.asarray(velocity)
    states = np.hstack([positions, np.tile(velocity, (20, 1))])
    return SequencePair(past=states[:8], future=states[8:], ped_id=ped_id)


@pytest.fixture(scope="function")
def mini_scene_path():
    """
    Fixture.
    """
    return os.path.join(FIXTURES_DIR, "mini_scene.txt")


@pytest.fixture(scope="function")
def raw_pairs():
    """
    Fixture.
    """
    return [
        straight_pair(velocity=(1.2, 0.3), start=(1.0, 2.0), ped_id=1),
        straight_pair(velocity=(-0.8, 0.5), start=(4.0, -1.0), ped_id=2),
        straight_pair(velocity=(0.2, -1.1), start=(-3.0, 0.5), ped_id=3),
        straight_pair(velocity=(0.9, 0.9), start=(0.0, 0.0), ped_id=4),
    ]


@pytest.fixture(scope="function")
def augmented_pairs(raw_pairs):
    """
    Fixture.
    """
    augmented = augment_with_kf(raw_pairs, 0.05, cts_cfg=CtsConfig(m=3), rng=0)
    return [normalize_pair(pair) for pair in augmented]


@pytest.fixture(scope="function")
def small_config():
    """
    Fixture.
    """
    return NetConfig.small()
