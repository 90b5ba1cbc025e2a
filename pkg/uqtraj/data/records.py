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


import json
import os
from dataclasses import dataclass, field, replace
from typing import List, Optional

import numpy as np
import pandas as pd

from uqtraj.core.covariance import is_psd
from uqtraj.core.types import Trajectory
from uqtraj.utils.arrayfuncs import compact_to_matrix
from uqtraj.utils.exceptions import InvalidArgument, InvalidCovariance

PAST_STEPS = 8
FUTURE_STEPS = 12

RECORD_COLUMNS = [
    "ped_id",
    "fraction",
    "sample_index",
    "start_step",
    "origin",
    "past",
    "future",
    "past_cov",
    "future_cov",
]


@dataclass(frozen=True, eq=False)
class SequencePair:
    """
    Observed and future part of one sliding-window sequence.

    Attributes:
        past (np.ndarray): Observed states of shape (8, 4) in (x, y, u, v) order.
        future (np.ndarray): Future ground-truth states of shape (12, 4).
        past_cov (np.ndarray, optional): Position covariances of the observed steps, shape (8, 3).
        future_cov (np.ndarray, optional): Target position covariances of the future steps, shape (12, 3).
        ped_id (int): Pedestrian identifier.
        fraction (float, optional): Measurement noise fraction the pair was augmented with.
        sample_index (int): Index of the sampled variant of the original pair.
        start_step (int): Step index of the first observed state.
        origin (np.ndarray): Translation removed by `normalize_pair`, shape (2,).
    """

    past: np.ndarray
    future: np.ndarray
    past_cov: Optional[np.ndarray] = None
    future_cov: Optional[np.ndarray] = None
    ped_id: int = 0
    fraction: Optional[float] = None
    sample_index: int = 0
    start_step: int = 0
    origin: np.ndarray = field(default_factory=lambda: np.zeros(2))

    def __post_init__(self):
        """
        Validates shapes and covariances.
        """
        object.__setattr__(self, "past", np.asarray(self.past, dtype=float))
        object.__setattr__(self, "future", np.asarray(self.future, dtype=float))
        object.__setattr__(self, "origin", np.asarray(self.origin, dtype=float).reshape(2))
        if self.past.ndim != 2 or self.past.shape[1] != 4:
            raise InvalidArgument(f"past needs to have shape (n, 4), got {self.past.shape}")
        if self.future.ndim != 2 or self.future.shape[1] != 4:
            raise InvalidArgument(f"future needs to have shape (n, 4), got {self.future.shape}")
        for name, steps in [("past_cov", len(self.past)), ("future_cov", len(self.future))]:
            value = getattr(self, name)
            if value is None:
                continue
            value = np.asarray(value, dtype=float)
            if value.shape != (steps, 3):
                raise InvalidArgument(f"{name} needs to have shape ({steps}, 3), got {value.shape}")
            if not is_psd(compact_to_matrix(value)):
                raise InvalidCovariance(f"{name} of pedestrian {self.ped_id} is not positive semidefinite")
            object.__setattr__(self, name, value)

    @property
    def past_positions(self):
        """
        (np.ndarray): Observed positions of shape (8, 2).
        """
        return self.past[:, :2]

    @property
    def future_positions(self):
        """
        (np.ndarray): Future positions of shape (12, 2).
        """
        return self.future[:, :2]

    @property
    def has_covariances(self):
        """
        (bool): True if both covariance channels are attached.
        """
        return self.past_cov is not None and self.future_cov is not None

    def to_trajectory(self):
        """
        Joins past and future into one Trajectory with covariances attached when present.
        """
        states = np.vstack([self.past, self.future])
        covs = np.vstack([self.past_cov, self.future_cov]) if self.has_covariances else None
        steps = self.start_step + np.arange(len(states))
        return Trajectory.from_arrays(states[:, :2], states[:, 2:], steps=steps, ped_id=self.ped_id, covs=covs)


@dataclass(eq=False)
class DatasetSplit:
    """
    Train and test sequences of one scene.

    Attributes:
        train (list of SequencePair): Training sequences.
        test (list of SequencePair): Test sequences.
        name (str): Scene label, e.g. `'HOTEL'`.
        metadata (dict): Split settings and sizes.
    """

    train: List[SequencePair]
    test: List[SequencePair]
    name: str = "HOTEL"
    metadata: dict = field(default_factory=dict)


def normalize_pair(pair):
    """
    Translates a pair so its first observed position is the origin.

    The removed translation is accumulated in `origin`, velocities and covariances are unchanged.

    Args:
        pair (SequencePair): Pair in world coordinates.

    Returns:
        (SequencePair): Translated pair.
    """
    shift = pair.past[0, :2].copy()
    offset = np.array([shift[0], shift[1], 0.0, 0.0])
    return replace(pair, past=pair.past - offset, future=pair.future - offset, origin=pair.origin + shift)


def denormalize_positions(positions, pair):
    """
    Maps positions predicted for a normalized pair back to world coordinates.

    Args:
        positions (np.ndarray): Array of shape (..., 2).
        pair (SequencePair): Normalized pair.

    Returns:
        (np.ndarray): Array of shape (..., 2).
    """
    return np.asarray(positions, dtype=float) + pair.origin


def _to_list(value):
    return None if value is None else np.asarray(value).tolist()


def _pair_record(p):
    return {
        "ped_id": int(p.ped_id),
        "fraction": None if p.fraction is None else float(p.fraction),
        "sample_index": int(p.sample_index),
        "start_step": int(p.start_step),
        "origin": _to_list(p.origin),
        "past": _to_list(p.past),
        "future": _to_list(p.future),
        "past_cov": _to_list(p.past_cov),
        "future_cov": _to_list(p.future_cov),
    }


def pairs_to_frame(pairs):
    """
    Turns pairs into a DataFrame with one row per pair and nested lists for the arrays.
    """
    return pd.DataFrame([_pair_record(p) for p in pairs], columns=RECORD_COLUMNS)


def _optional_array(value):
    if value is None or (isinstance(value, float) and np.isnan(value)):
        return None
    return np.asarray(value, dtype=float)


def frame_to_pairs(frame):
    """
    Inverse of `pairs_to_frame`.
    """
    pairs = []
    for row in frame.to_dict(orient="records"):
        fraction = row.get("fraction")
        pairs.append(
            SequencePair(
                past=np.asarray(row["past"], dtype=float),
                future=np.asarray(row["future"], dtype=float),
                past_cov=_optional_array(row.get("past_cov")),
                future_cov=_optional_array(row.get("future_cov")),
                ped_id=int(row["ped_id"]),
                fraction=None if fraction is None or pd.isna(fraction) else float(fraction),
                sample_index=int(row.get("sample_index", 0)),
                start_step=int(row.get("start_step", 0)),
                origin=np.asarray(row.get("origin", [0.0, 0.0]), dtype=float),
            )
        )
    return pairs


def write_pairs(pairs, path):
    """
    Writes pairs as JSON lines, one object per pair.

    Keys: ped_id, fraction, sample_index, start_step, origin, past (8 x [x, y, u, v]),
    future (12 x [x, y, u, v]), past_cov (8 x [sxx, sxy, syy]) and future_cov (12 x [sxx, sxy, syy]).

    Floats are written with their shortest round-trip representation, so `read_pairs` restores them bit for bit.
    `DataFrame.to_json` is not used since it rounds to at most 15 significant digits.

    Args:
        pairs (list of SequencePair): Pairs to write.
        path (str): Output file.
    """
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        for pair in pairs:
            f.write(json.dumps(_pair_record(pair)) + "\n")


def read_pairs(path):
    """
    Reads pairs written by `write_pairs`.

    Args:
        path (str): JSON lines file.

    Returns:
        (list of SequencePair): The pairs.
    """
    with open(path, "r", encoding="utf-8") as f:
        records = [json.loads(line) for line in f if line.strip()]
    if len(records) == 0:
        return []
    return frame_to_pairs(pd.DataFrame(records))
