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


import hashlib
import json
import os
import platform
import sys
from datetime import datetime, timezone

import numpy as np

from uqtraj import __version__
from uqtraj.utils.exceptions import InvalidArgument

MANIFEST_PATTERN = "manifest_{command}.json"

# Published sequence counts after 8 + 12 windowing at 0.4 s
EXPECTED_SEQUENCE_COUNTS = {"HOTEL": 1597}


def sha256_file(path, chunk_size=1 << 16):
    """
    Hex SHA-256 digest of a file.
    """
    if not os.path.isfile(path):
        raise InvalidArgument(f"Input file {path} does not exist")
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(chunk_size), b""):
            digest.update(chunk)
    return digest.hexdigest()


def count_check(scene, count):
    """
    Compares a sequence count with the published count of the scene.

    Args:
        scene (str): Scene label.
        count (int): Number of windowed sequences.

    Returns:
        (dict): Keys count, expected (None if unknown) and discrepancy (count - expected, None if unknown).
    """
    expected = EXPECTED_SEQUENCE_COUNTS.get(scene)
    return {
        "count": int(count),
        "expected": expected,
        "discrepancy": None if expected is None else int(count) - expected,
    }


def _json_default(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def write_manifest(output_dir, command, config, inputs=(), outputs=(), seeds=None, extra=None):
    """
    Writes the manifest of one command run: config echo, seeds, input hashes and produced files.

    Args:
        output_dir (str): Output directory of the run.
        command (str): Subcommand name.
        config (ExperimentConfig): Effective configuration.
        inputs (iterable of str, optional): Files read by the run.
        outputs (iterable of str, optional): Files written by the run.
        seeds (dict, optional): Seeds used by the run.
        extra (dict, optional): Command specific information, e.g. sequence counts.

    Returns:
        (str): Path of the manifest.
    """
    document = {
        "command": command,
        "created": datetime.now(timezone.utc).isoformat(),
        "uqtraj_version": __version__,
        "python": sys.version.split()[0],
        "platform": platform.platform(),
        "argv": sys.argv,
        "config": config.to_dict(),
        "seeds": seeds or {"seed": config.seed},
        "inputs": {path: sha256_file(path) for path in inputs},
        "outputs": sorted(os.path.relpath(path, output_dir) for path in outputs),
        "extra": extra or {},
    }
    os.makedirs(output_dir, exist_ok=True)
    path = manifest_path(output_dir, command)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(document, f, indent=2, sort_keys=True, default=_json_default)
    return path


def manifest_path(output_dir, command):
    """
    Path of the manifest of one command. Each command keeps its own file so that commands sharing an output
    directory do not overwrite each other.
    """
    return os.path.join(output_dir, MANIFEST_PATTERN.format(command=command.replace("-", "_")))


def read_manifest(output_dir, command):
    """
    Reads the manifest written by one command in a run directory.

    Args:
        output_dir (str): Output directory of the run.
        command (str): Subcommand name, e.g. "ingest" or "ood-predict".

    Returns:
        (dict): Manifest document.
    """
    path = manifest_path(output_dir, command)
    if not os.path.isfile(path):
        raise InvalidArgument(f"No {command} manifest found in {output_dir}")
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)
