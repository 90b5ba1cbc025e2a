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


import os
from dataclasses import dataclass

import numpy as np
import pandas as pd

from uqtraj.core.types import Trajectory, STEP_SECONDS
from uqtraj.utils.exceptions import IngestError, InvalidArgument

ANNOTATION_COLUMNS = ["frame", "ped_id", "x", "y"]


@dataclass(frozen=True)
class RawAnnotation:
    """
    One annotation row: pedestrian `ped_id` at (x, y) meters in video frame `frame`.
    """

    frame: int
    ped_id: int
    x: float
    y: float


def read_annotations(path):
    """
    Reads a whitespace separated annotation file into a DataFrame.

    Every non-empty line not starting with `#` holds `frame ped_id x y`. Floats are accepted in every column, frame
    and ped_id are truncated to integers.

    Args:
        path (str): Annotation file.

    Returns:
        (pd.DataFrame): Columns frame, ped_id, x, y and line (1-based line number in the file).
    """
    if not os.path.isfile(path):
        raise IngestError("annotation file not found", path=path)

    tokens, line_numbers = [], []
    with open(path, "r", encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            fields = stripped.split()
            if len(fields) != len(ANNOTATION_COLUMNS):
                raise IngestError(
                    f"expected {len(ANNOTATION_COLUMNS)} columns, got {len(fields)}", line_number=line_number, path=path
                )
            tokens.append(fields)
            line_numbers.append(line_number)

    if len(tokens) == 0:
        return pd.DataFrame(columns=ANNOTATION_COLUMNS + ["line"])

    raw = pd.DataFrame(tokens, columns=ANNOTATION_COLUMNS)
    values = raw.apply(pd.to_numeric, errors="coerce")
    invalid = ~np.isfinite(values.to_numpy(dtype=float)).all(axis=1)
    if invalid.any():
        first = int(np.argmax(invalid))
        raise IngestError(f"cannot parse row {' '.join(tokens[first])!r}", line_number=line_numbers[first], path=path)

    annotations = pd.DataFrame(
        {
            "frame": np.trunc(values["frame"].to_numpy()).astype(int),
            "ped_id": np.trunc(values["ped_id"].to_numpy()).astype(int),
            "x": values["x"].to_numpy(dtype=float),
            "y": values["y"].to_numpy(dtype=float),
            "line": line_numbers,
        }
    )
    return annotations


def base_frame_step(annotations):
    """
    Most frequent positive frame difference between consecutive rows of the same pedestrian.

    ETH/UCY files annotate every 10th video frame, which gives 10. Returns 1 if no pedestrian has two rows.

    Args:
        annotations (pd.DataFrame): Output of `read_annotations`.

    Returns:
        (int): Frames between two annotated rows.
    """
    if len(annotations) == 0:
        return 1
    diffs = annotations.groupby("ped_id", sort=False)["frame"].diff()
    diffs = diffs[diffs > 0]
    if len(diffs) == 0:
        return 1
    return int(diffs.mode().iloc[0])


def _split_at_gaps(steps):
    """
    Index ranges of the runs of consecutive step indices.
    """
    breaks = np.flatnonzero(np.diff(steps) != 1) + 1
    bounds = np.concatenate([[0], breaks, [len(steps)]])
    return list(zip(bounds[:-1], bounds[1:]))


def ingest(path, frame_stride=1, dt=STEP_SECONDS, frame_step=None):
    """
    Reads pedestrian tracks from an annotation file.

    Rows are grouped by pedestrian in file order. Frames of one pedestrian need to be strictly increasing. A state
    is kept every `frame_stride * frame_step` frames, counted from the first frame of the pedestrian, so consecutive
    states are `dt` seconds apart; rows off that grid are dropped. Where frames are missing the track is split, so
    every returned trajectory has consecutive step indices. Velocities are central finite differences within a
    trajectory.

    Args:
        path (str): Annotation file with `frame ped_id x y` rows.
        frame_stride (int, optional): Keep every `frame_stride`-th annotated frame. By default 1.
        dt (float, optional): Seconds between kept states. By default 0.4.
        frame_step (int, optional): Frames between two annotated rows. Detected with `base_frame_step` if None.

    Returns:
        (list of Trajectory): Trajectories sorted by ped_id, then by time. A pedestrian who leaves the scene or misses
            frames gives several trajectories with the same ped_id.
    """
    if frame_stride < 1:
        raise InvalidArgument(f"frame_stride needs to be at least 1, got {frame_stride}")
    if frame_step is not None and frame_step < 1:
        raise InvalidArgument(f"frame_step needs to be at least 1, got {frame_step}")

    annotations = read_annotations(path)
    if frame_step is None:
        frame_step = base_frame_step(annotations)
    unit = frame_stride * frame_step

    trajectories = []
    for ped_id, rows in annotations.groupby("ped_id", sort=True):
        frames = rows["frame"].to_numpy()
        decreasing = np.flatnonzero(np.diff(frames) <= 0)
        if len(decreasing) > 0:
            line_number = int(rows["line"].iloc[decreasing[0] + 1])
            raise IngestError(
                f"frames of pedestrian {ped_id} are not strictly increasing", line_number=line_number, path=path
            )
        offsets = frames - frames[0]
        on_grid = offsets % unit == 0
        kept = rows[on_grid]
        steps = offsets[on_grid] // unit
        positions = kept[["x", "y"]].to_numpy(dtype=float)

        for start, end in _split_at_gaps(steps):
            segment = positions[start:end]
            if len(segment) > 1:
                velocities = np.gradient(segment, dt, axis=0)
            else:
                velocities = np.zeros_like(segment)
            trajectories.append(Trajectory.from_arrays(segment, velocities, steps=steps[start:end], ped_id=int(ped_id)))
    return trajectories
