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


from .records import (
    SequencePair,
    DatasetSplit,
    normalize_pair,
    denormalize_positions,
    write_pairs,
    read_pairs,
    PAST_STEPS,
    FUTURE_STEPS,
)
from .ingest import RawAnnotation, read_annotations, base_frame_step, ingest
from .windowing import sliding_window, build_sequences
from .augmentation import measurement_noise_std, augment_pair, augment_with_kf, domain_randomize
from .split import split_pairs, SCENES

__all__ = [
    "SequencePair",
    "DatasetSplit",
    "normalize_pair",
    "denormalize_positions",
    "write_pairs",
    "read_pairs",
    "PAST_STEPS",
    "FUTURE_STEPS",
    "RawAnnotation",
    "read_annotations",
    "base_frame_step",
    "ingest",
    "sliding_window",
    "build_sequences",
    "measurement_noise_std",
    "augment_pair",
    "augment_with_kf",
    "domain_randomize",
    "split_pairs",
    "SCENES",
]
