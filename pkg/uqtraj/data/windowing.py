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


import numpy as np

from uqtraj.data.records import FUTURE_STEPS, PAST_STEPS, SequencePair
from uqtraj.utils.exceptions import InvalidArgument


def sliding_window(traj, past=PAST_STEPS, future=FUTURE_STEPS, stride=1):
    """
    Cuts a trajectory into overlapping (past, future) pairs.

    A trajectory of N consecutive steps gives (N - past - future) // stride + 1 pairs, a trajectory shorter than
    past + future gives none. Windows spanning a jump in the step indices are skipped. Covariances are attached
    when the trajectory carries them.

    Args:
        traj (Trajectory): Track of one pedestrian.
        past (int, optional): Observed steps. By default 8.
        future (int, optional): Predicted steps. By default 12.
        stride (int, optional): Shift between consecutive windows. By default 1.

    Returns:
        (list of SequencePair): The pairs, in order of their start step.
    """
    if past < 1 or future < 1 or stride < 1:
        raise InvalidArgument("past, future and stride need to be positive")

    window = past + future
    n = len(traj)
    if n < window:
        return []

    states = np.hstack([traj.positions, traj.velocities])
    covs = traj.cov_array()
    steps = traj.steps
    pairs = []
    for start in range(0, n - window + 1, stride):
        end = start + window
        if np.any(np.diff(steps[start:end]) != 1):
            continue
        pairs.append(
            SequencePair(
                past=states[start : start + past],
                future=states[start + past : end],
                past_cov=None if covs is None else covs[start : start + past],
                future_cov=None if covs is None else covs[start + past : end],
                ped_id=traj.ped_id,
                start_step=int(steps[start]),
            )
        )
    return pairs


def build_sequences(trajectories, past=PAST_STEPS, future=FUTURE_STEPS, stride=1):
    """
    Applies `sliding_window` to every trajectory and concatenates the pairs.
    """
    pairs = []
    for traj in trajectories:
        pairs.extend(sliding_window(traj, past=past, future=future, stride=stride))
    return pairs
