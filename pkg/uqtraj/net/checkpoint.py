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

import numpy as np

from uqtraj.net.config import NetConfig
from uqtraj.net.network import NetParams
from uqtraj.utils.exceptions import CheckpointMismatch, InvalidArgument

CHECKPOINT_FORMAT = "uqtraj-checkpoint"
CHECKPOINT_VERSION = 1


def save_checkpoint(path, params, cfg, extra=None):
    """
    Stores one network as a JSON document.

    The document holds `format`, `version`, the echoed `config`, the initialization `seed`, the per-layer `weights`
    (nested lists of shape fan_in x fan_out) and `biases`, and a free-form `extra` dict. Floats are written with
    full round-trip precision.

    Args:
        path (str): Output file.
        params (NetParams): Parameters to store.
        cfg (NetConfig): Architecture the parameters belong to.
        extra (dict, optional): Additional JSON serializable information, e.g. the member index.
    """
    params.check_shapes(cfg)
    document = {
        "format": CHECKPOINT_FORMAT,
        "version": CHECKPOINT_VERSION,
        "config": cfg.to_dict(),
        "seed": params.seed,
        "weights": [w.tolist() for w in params.weights],
        "biases": [b.tolist() for b in params.biases],
        "extra": extra or {},
    }
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(document, f)


def load_checkpoint(path, cfg=None):
    """
    Loads a network stored by `save_checkpoint`.

    Args:
        path (str): Checkpoint file.
        cfg (NetConfig, optional): Expected architecture. A stored config that differs raises CheckpointMismatch.

    Returns:
        (NetParams, NetConfig, dict): Parameters, stored config and the `extra` dict.
    """
    if not os.path.isfile(path):
        raise InvalidArgument(f"Checkpoint {path} does not exist")
    with open(path, "r", encoding="utf-8") as f:
        try:
            document = json.load(f)
        except json.JSONDecodeError as error:
            raise CheckpointMismatch(f"Checkpoint {path} is not valid JSON: {error}") from error

    if document.get("format") != CHECKPOINT_FORMAT:
        raise CheckpointMismatch(f"{path} is not a uqtraj checkpoint")
    if document.get("version") != CHECKPOINT_VERSION:
        raise CheckpointMismatch(
            f"Checkpoint {path} has version {document.get('version')}, expected {CHECKPOINT_VERSION}"
        )

    try:
        stored_cfg = NetConfig.from_dict(document["config"])
    except (InvalidArgument, TypeError, KeyError) as error:
        raise CheckpointMismatch(f"Checkpoint {path} holds an invalid config: {error}") from error
    if cfg is not None and cfg != stored_cfg:
        raise CheckpointMismatch(
            f"Checkpoint {path} was trained with {stored_cfg.to_dict()}, but {cfg.to_dict()} was requested"
        )

    params = NetParams(
        weights=[
            np.asarray(w, dtype=float).reshape(-1, len(b)) for w, b in zip(document["weights"], document["biases"])
        ],
        biases=[np.asarray(b, dtype=float) for b in document["biases"]],
        seed=document.get("seed"),
    )
    try:
        params.check_shapes(stored_cfg)
    except InvalidArgument as error:
        raise CheckpointMismatch(f"Checkpoint {path}: {error.message}") from error
    return params, stored_cfg, document.get("extra", {})
