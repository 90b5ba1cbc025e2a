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
from sklearn.model_selection import train_test_split

from uqtraj.data.records import DatasetSplit
from uqtraj.utils.exceptions import InvalidArgument

# 337 of 1597 HOTEL sequences
DEFAULT_TEST_SIZE = 0.211
SCENES = ["ETH", "HOTEL", "UNIV", "ZARA1", "ZARA2"]


def split_pairs(pairs, test_size=DEFAULT_TEST_SIZE, random_state=42, name="HOTEL"):
    """
    Deterministic shuffle split of sequences into train and test.

    Args:
        pairs (list of SequencePair): Sequences before augmentation.
        test_size (float, optional): Fraction of test sequences. By default 0.211.
        random_state (int, optional): Seed of the shuffle.
        name (str, optional): Scene label.

    Returns:
        (DatasetSplit): Disjoint train and test lists with the split settings in `metadata`.
    """
    if len(pairs) < 2:
        raise InvalidArgument(f"Splitting needs at least 2 sequences, got {len(pairs)}")
    if not 0 < test_size < 1:
        raise InvalidArgument(f"test_size needs to be in (0, 1), got {test_size}")

    train_index, test_index = train_test_split(
        np.arange(len(pairs)), test_size=test_size, random_state=random_state, shuffle=True
    )
    return DatasetSplit(
        train=[pairs[i] for i in train_index],
        test=[pairs[i] for i in test_index],
        name=name,
        metadata={
            "test_size": test_size,
            "random_state": random_state,
            "n_train": len(train_index),
            "n_test": len(test_index),
            "scale": 1.0,
        },
    )
