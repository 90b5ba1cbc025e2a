import os

import numpy as np
import pytest

from uqtraj.data import base_frame_step, build_sequences, ingest, read_annotations, split_pairs
from uqtraj.utils import IngestError, InvalidArgument

DATA_DIR = os.environ.get("UQTRAJ_DATA_DIR")


def write_lines(path, lines):
    with open(path, "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")
    return str(path)


def test_ingest_mini_scene(mini_scene_path):
    """
    Test.
    """
    trajectories = ingest(mini_scene_path)
    assert [t.ped_id for t in trajectories] == [1, 2, 3]
    assert [len(t) for t in trajectories] == [25, 25, 25]
    np.testing.assert_allclose(trajectories[0].positions[0], [-2.0, 1.0])
    np.testing.assert_allclose(trajectories[0].velocities, np.tile([1.25, 0.25], (25, 1)), atol=1e-9)
    np.testing.assert_allclose(trajectories[1].velocities, np.tile([-1.25, 0.5], (25, 1)), atol=1e-9)
    assert len(build_sequences(trajectories)) == 18


def test_ingest_frame_stride(mini_scene_path):
    """
    Test.
    """
    trajectories = ingest(mini_scene_path, frame_stride=2)
    assert [len(t) for t in trajectories] == [13, 13, 13]
    np.testing.assert_allclose(trajectories[2].positions[1], [3.0, 3.6])
    assert build_sequences(trajectories) == []

    with pytest.raises(InvalidArgument):
        ingest(mini_scene_path, frame_stride=0)


def test_ingest_two_rows(tmp_path):
    """
    Test.
    """
    path = write_lines(tmp_path / "two.txt", ["0\t5\t1.0\t2.0", "10.0\t5.0\t1.4\t2.8"])
    trajectories = ingest(path)
    assert len(trajectories) == 1
    assert trajectories[0].ped_id == 5
    np.testing.assert_allclose(trajectories[0].velocities, [[1.0, 2.0], [1.0, 2.0]])


def test_ingest_empty_file(tmp_path):
    """
    Test.
    """
    assert ingest(write_lines(tmp_path / "empty.txt", ["# only a comment", ""])) == []
    assert len(read_annotations(write_lines(tmp_path / "blank.txt", [""]))) == 0


def test_ingest_errors(tmp_path):
    """
    Test.
    """
    with pytest.raises(IngestError) as error:
        ingest(str(tmp_path / "missing.txt"))
    assert "missing.txt" in error.value.message

    path = write_lines(tmp_path / "bad.txt", ["0 1 1.0 2.0", "# comment", "10 1 x 2.0"])
    with pytest.raises(IngestError) as error:
        ingest(path)
    assert error.value.line_number == 3

    path = write_lines(tmp_path / "columns.txt", ["0 1 1.0"])
    with pytest.raises(IngestError) as error:
        ingest(path)
    assert error.value.line_number == 1

    path = write_lines(tmp_path / "order.txt", ["0 1 1.0 2.0", "10 2 0.0 0.0", "20 1 1.1 2.1", "10 1 1.2 2.2"])
    with pytest.raises(IngestError) as error:
        ingest(path)
    assert error.value.line_number == 4


def test_ingest_splits_track_at_frame_gap(tmp_path):
    """
    Test.
    """
    lines = []
    for frame in range(0, 200, 10):
        lines.append(f"{frame} 1 {frame / 100:.2f} 0.0")
    for frame in range(500, 700, 10):
        lines.append(f"{frame} 1 {100 + frame / 100:.2f} 0.0")
    path = write_lines(tmp_path / "gap.txt", lines)

    trajectories = ingest(path)
    assert [t.ped_id for t in trajectories] == [1, 1]
    np.testing.assert_array_equal(trajectories[0].steps, np.arange(20))
    np.testing.assert_array_equal(trajectories[1].steps, np.arange(50, 70))
    for trajectory in trajectories:
        np.testing.assert_allclose(trajectory.velocities, np.tile([0.25, 0.0], (20, 1)), atol=1e-9)

    pairs = build_sequences(trajectories)
    assert [p.start_step for p in pairs] == [0, 50]
    for pair in pairs:
        np.testing.assert_array_equal(np.diff(pair.to_trajectory().steps), np.ones(19))


def test_ingest_short_segments_give_no_pairs(tmp_path):
    """
    Test.
    """
    lines = []
    for frame in list(range(0, 100, 10)) + list(range(500, 600, 10)):
        lines.append(f"{frame} 1 {frame / 100:.2f} 0.0")
    trajectories = ingest(write_lines(tmp_path / "gap.txt", lines))
    assert [len(t) for t in trajectories] == [10, 10]
    assert build_sequences(trajectories) == []


def test_ingest_stride_counts_frames(tmp_path):
    """
    Test.
    """
    path = write_lines(tmp_path / "missing.txt", ["0 1 0.0 0.0", "10 1 0.1 0.0", "30 1 0.3 0.0", "40 1 0.4 0.0"])
    assert base_frame_step(read_annotations(path)) == 10
    trajectories = ingest(path, frame_stride=2)
    assert [t.steps.tolist() for t in trajectories] == [[0], [2]]
    np.testing.assert_allclose(trajectories[1].positions, [[0.4, 0.0]])
    assert [len(t) for t in ingest(path, frame_step=10)] == [2, 2]

    with pytest.raises(InvalidArgument):
        ingest(path, frame_step=0)


def test_base_frame_step(mini_scene_path, tmp_path):
    """
    Test.
    """
    assert base_frame_step(read_annotations(mini_scene_path)) == 10
    assert base_frame_step(read_annotations(write_lines(tmp_path / "one.txt", ["0 1 1.0 2.0"]))) == 1


@pytest.mark.skipif(DATA_DIR is None, reason="UQTRAJ_DATA_DIR is not set")
def test_ingest_hotel():
    """
    Test.
    """
    path = os.path.join(DATA_DIR, "biwi_hotel.txt")
    if not os.path.isfile(path):
        pytest.skip(f"{path} not found")
    pairs = build_sequences(ingest(path))
    assert len(pairs) == 1597
    split = split_pairs(pairs)
    assert (len(split.train), len(split.test)) == (1260, 337)
