import json

import numpy as np
import pytest

from uqtraj.net import NetConfig, init_params, load_checkpoint, save_checkpoint
from uqtraj.utils import CheckpointMismatch, InvalidArgument


def test_checkpoint_round_trip(tmp_path, small_config):
    """
    Test.
    """
    params = init_params(small_config, seed=11)
    path = str(tmp_path / "checkpoints" / "member_0.json")
    save_checkpoint(path, params, small_config, extra={"member": 0})

    restored, cfg, extra = load_checkpoint(path, small_config)
    assert cfg == small_config
    assert extra == {"member": 0}
    assert restored.seed == 11
    for loaded, original in zip(restored.arrays(), params.arrays()):
        np.testing.assert_array_equal(loaded, original)


def test_checkpoint_errors(tmp_path, small_config):
    """
    Test.
    """
    path = str(tmp_path / "member_0.json")
    save_checkpoint(path, init_params(small_config, seed=0), small_config)
    with pytest.raises(CheckpointMismatch):
        load_checkpoint(path, NetConfig())

    with pytest.raises(InvalidArgument):
        load_checkpoint(str(tmp_path / "missing.json"))

    with open(path, "w", encoding="utf-8") as f:
        f.write("not json")
    with pytest.raises(CheckpointMismatch):
        load_checkpoint(path)

    with open(path, "w", encoding="utf-8") as f:
        json.dump({"format": "other", "version": 1}, f)
    with pytest.raises(CheckpointMismatch):
        load_checkpoint(path)
