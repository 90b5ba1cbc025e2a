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


import warnings

import numpy as np
import pandas as pd
from tqdm.auto import tqdm

from uqtraj.net.losses import joint_loss
from uqtraj.net.network import init_params, pairs_to_inputs, pairs_to_targets
from uqtraj.net.optim import adam_step, init_optim_state
from uqtraj.utils.exceptions import InvalidArgument, NumericalOverflow
from uqtraj.utils.warnings import NotIntendedUseWarning

HISTORY_COLUMNS = ["epoch", "nll", "cov_mse", "total"]


def _stream_seeds(seed):
    init_seq, shuffle_seq, dropout_seq = np.random.SeedSequence(seed).spawn(3)
    init_seed = int(init_seq.generate_state(1, dtype=np.uint64)[0])
    return init_seed, np.random.default_rng(shuffle_seq), np.random.default_rng(dropout_seq)


def train(
    pairs,
    cfg,
    epochs=150,
    batch_size=64,
    seed=0,
    learning_rate=1e-3,
    params=None,
    verbose=0,
):
    """
    Trains one network on augmented pairs with the joint loss and Adam.

    The minimized objective is the variance-weighted NLL plus `cfg.loss_weight_mse` times the covariance MSE. The
    pairs are reshuffled every epoch. Initialization, shuffling and dropout masks use separate streams derived
    from `seed`, so a rerun with the same arguments reproduces the loss history exactly.

    Args:
        pairs (list of SequencePair): Normalized, augmented training pairs.
        cfg (NetConfig): Architecture and loss settings.
        epochs (int, optional): Number of passes over the pairs. By default 150.
        batch_size (int, optional): Pairs per update. By default 64.
        seed (int, optional): Seed of the run.
        learning_rate (float, optional): Adam step size. By default 1e-3.
        params (NetParams, optional): Starting parameters. Initialized from `seed` if None.
        verbose (int, optional): Controls verbosity of the output:

            - 0 - neither prints nor warnings are shown
            - 1 - 50 - only most important warnings and a progress bar over epochs
            - 51 - 100 - shows other warnings and prints
            - above 100 - presents all prints and all warnings

    Returns:
        (NetParams, pd.DataFrame): Trained parameters and per-epoch mean training losses with columns epoch, nll,
            cov_mse and total.
    """
    if len(pairs) == 0:
        raise InvalidArgument("Training needs at least one pair")
    if epochs < 0 or batch_size < 1:
        raise InvalidArgument("epochs needs to be non-negative and batch_size positive")

    inputs = pairs_to_inputs(pairs)
    target, target_cov = pairs_to_targets(pairs)
    init_seed, shuffle_rng, dropout_rng = _stream_seeds(seed)
    if params is None:
        params = init_params(cfg, seed=init_seed)
    else:
        params = params.copy()
    params.check_shapes(cfg)
    state = init_optim_state(params, learning_rate=learning_rate)

    history = []
    n = len(inputs)
    epoch_iterator = range(1, epochs + 1)
    if verbose > 0:
        epoch_iterator = tqdm(epoch_iterator, desc="Training")

    for epoch in epoch_iterator:
        order = shuffle_rng.permutation(n)
        totals = np.zeros(3)
        for start in range(0, n, batch_size):
            batch = order[start : start + batch_size]
            last_good = params.copy()
            try:
                loss = joint_loss(params, cfg, inputs[batch], target[batch], target_cov[batch], rng=dropout_rng)
                if not np.isfinite(loss.objective) or not loss.grads.is_finite():
                    raise NumericalOverflow("Non-finite loss or gradient")
                adam_step(params, loss.grads, state)
                if not params.is_finite():
                    raise NumericalOverflow("Non-finite parameters after update")
            except NumericalOverflow as error:
                frame = pd.DataFrame(history, columns=HISTORY_COLUMNS)
                if verbose > 0:
                    warnings.warn(
                        NotIntendedUseWarning(f"Training aborted in epoch {epoch}: {error.message}"), stacklevel=2
                    )
                raise NumericalOverflow(
                    f"Training aborted in epoch {epoch}: {error.message}", params=last_good, history=frame
                ) from error
            totals += len(batch) * np.array([loss.nll, loss.cov_mse, loss.total])
        history.append([epoch, *(totals / n)])

    return params, pd.DataFrame(history, columns=HISTORY_COLUMNS)


def evaluate_loss(params, cfg, pairs):
    """
    NLL, covariance MSE and joint loss of parameters on pairs, without dropout.

    Args:
        params (NetParams): Network parameters.
        cfg (NetConfig): Architecture and loss settings.
        pairs (list of SequencePair): Normalized, augmented pairs.

    Returns:
        (dict): Keys nll, cov_mse and total.
    """
    masks = [None] * (len(cfg.layer_sizes) - 2)
    target, target_cov = pairs_to_targets(pairs)
    loss = joint_loss(params, cfg, pairs_to_inputs(pairs), target, target_cov, masks=masks, with_grads=False)
    return {"nll": loss.nll, "cov_mse": loss.cov_mse, "total": loss.total}
