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


import glob
import os
from dataclasses import replace

import numpy as np
import pandas as pd
from joblib import Parallel, delayed
from tqdm.auto import tqdm

from uqtraj.metrics.metrics import gaussian_nll, prediction_mse
from uqtraj.net.checkpoint import load_checkpoint, save_checkpoint
from uqtraj.net.config import NetConfig
from uqtraj.net.network import pairs_to_inputs, pairs_to_targets
from uqtraj.net.train import HISTORY_COLUMNS, evaluate_loss, train
from uqtraj.uq.predictive import DEFAULT_MC_SAMPLES, Ensemble, ensemble_predict, mc_dropout_predict
from uqtraj.utils._utils import spawn_seeds
from uqtraj.utils.exceptions import InvalidArgument
from uqtraj.utils.interface import BaseFitComputeClass
from uqtraj.utils.warnings import NotIntendedUseWarning

MEMBER_FILE_PATTERN = "member_{index}.json"


def _to_inputs(data):
    if isinstance(data, np.ndarray):
        return data
    return pairs_to_inputs(list(data))


def member_pairs(pairs, member_index):
    """
    Training pairs of one ensemble member.

    Member i consumes the sampled variant with `sample_index == i mod m` of every original sequence, where m is the
    number of variants present.

    Args:
        pairs (list of SequencePair): Augmented pairs.
        member_index (int): Index of the member.

    Returns:
        (list of SequencePair): Pairs assigned to the member.
    """
    n_variants = max(pair.sample_index for pair in pairs) + 1
    variant = member_index % n_variants
    return [pair for pair in pairs if pair.sample_index == variant]


class DeepEnsemble(BaseFitComputeClass):
    """
    Ensemble of independently initialized encoder-decoder networks whose Gaussian outputs are merged by moment
    matching.

    Every member is trained on its own CTS-sampled variant of each sequence. The predictive covariance splits into an
    aleatoric part (mean of member covariances) and an epistemic part (covariance of member means).

    ```python
    import numpy as np
    from uqtraj.data import SequencePair, augment_with_kf, normalize_pair
    from uqtraj.net import NetConfig
    from uqtraj.sampling import CtsConfig
    from uqtraj.uq import DeepEnsemble

    t = np.arange(20) * 0.4
    positions = np.stack([1.2 * t, 0.3 * t], axis=1)
    velocities = np.tile([1.2, 0.3], (20, 1))
    states = np.hstack([positions, velocities])
    pair = SequencePair(past=states[:8], future=states[8:])
    pairs = list(map(normalize_pair, augment_with_kf([pair], 0.05, cts_cfg=CtsConfig(m=3), rng=0)))

    model = DeepEnsemble(n_members=3, net_config=NetConfig.small(), epochs=5, random_state=0)
    summary = model.fit_compute(pairs)
    summary.epistemic_trace
    ```
    """

    def __init__(
        self,
        n_members=3,
        net_config=None,
        epochs=150,
        batch_size=64,
        learning_rate=1e-3,
        n_jobs=1,
        verbose=0,
        random_state=None,
    ):
        """
        Initializes the class.

        Args:
            n_members (int, optional):
                Number of networks M. By default 3.

            net_config (NetConfig, optional):
                Shared architecture. Members need `dropout_p = 0`. Defaults to `NetConfig()`.

            epochs (int, optional):
                Training epochs per member. By default 150.

            batch_size (int, optional):
                Pairs per update. By default 64.

            learning_rate (float, optional):
                Adam step size. By default 1e-3.

            n_jobs (int, optional):
                Number of members trained in parallel. If -1 use all available cores. By default 1.

            verbose (int, optional):
                Controls verbosity of the output:

                - 0 - neither prints nor warnings are shown
                - 1 - 50 - only most important warnings and a progress bar over members
                - 51 - 100 - shows other warnings and prints
                - above 100 - presents all prints and all warnings

            random_state (int, optional):
                Parent seed of the member seeds. Set it to an integer for reproducible ensembles.
        """
        if n_members < 1:
            raise InvalidArgument(f"n_members needs to be at least 1, got {n_members}")
        self.n_members = n_members
        self.net_config = net_config if net_config is not None else NetConfig()
        self.epochs = epochs
        self.batch_size = batch_size
        self.learning_rate = learning_rate
        self.n_jobs = n_jobs
        self.verbose = verbose
        self.random_state = random_state

        if self.net_config.dropout_p > 0:
            self._warn(NotIntendedUseWarning("Ensemble members are usually trained without dropout"), min_verbose=50)

    def fit(self, pairs):
        """
        Trains all members.

        Args:
            pairs (list of SequencePair):
                Normalized, augmented training pairs.

        Returns:
            (DeepEnsemble):
                Fitted object.
        """
        if len(pairs) == 0:
            raise InvalidArgument("DeepEnsemble needs at least one training pair")
        self.seeds = spawn_seeds(self.random_state, self.n_members)

        member_indices = range(self.n_members)
        if self.verbose > 0:
            member_indices = tqdm(member_indices, desc="Members")

        results = Parallel(n_jobs=self.n_jobs)(
            delayed(train)(
                member_pairs(pairs, index),
                self.net_config,
                epochs=self.epochs,
                batch_size=self.batch_size,
                seed=self.seeds[index],
                learning_rate=self.learning_rate,
            )
            for index in member_indices
        )

        self.ensemble = Ensemble(members=[params for params, _ in results], cfg=self.net_config)
        self.histories = [history for _, history in results]
        self.fitted = True
        return self

    def compute(self, data):
        """
        Predictive distribution of the ensemble.

        Args:
            data (list of SequencePair or np.ndarray):
                Normalized pairs with observed covariances, or network inputs of shape (B, input_dim).

        Returns:
            (PredictiveSummary):
                Aggregated distribution.
        """
        self._check_if_fitted()
        return ensemble_predict(self.ensemble, _to_inputs(data))

    def fit_compute(self, pairs, data=None):
        """
        Trains the members and predicts `data`, or the training pairs if `data` is None.

        Returns:
            (PredictiveSummary):
                Aggregated distribution.
        """
        self.fit(pairs)
        return self.compute(pairs if data is None else data)

    @property
    def history(self):
        """
        (pd.DataFrame): Per-epoch training losses of all members with a `member` column.
        """
        self._check_if_fitted()
        if not self.histories:
            return pd.DataFrame(columns=HISTORY_COLUMNS + ["member"])
        return pd.concat(
            [history.assign(member=index) for index, history in enumerate(self.histories)], ignore_index=True
        )

    def save(self, directory):
        """
        Writes one checkpoint per member into `directory`.

        Returns:
            (list of str): Paths of the written checkpoints.
        """
        self._check_if_fitted()
        paths = []
        for index, member in enumerate(self.ensemble.members):
            path = os.path.join(directory, MEMBER_FILE_PATTERN.format(index=index))
            save_checkpoint(path, member, self.ensemble.cfg, extra={"member": index, "kind": "ensemble"})
            paths.append(path)
        return paths

    @classmethod
    def load(cls, directory, net_config=None, verbose=0):
        """
        Restores a fitted ensemble from the member checkpoints in `directory`.

        Args:
            directory (str): Directory written by `save`.
            net_config (NetConfig, optional): Expected architecture, checked against every checkpoint.
            verbose (int, optional): Verbosity of the restored object.

        Returns:
            (DeepEnsemble): Fitted object.
        """
        paths = sorted(
            glob.glob(os.path.join(directory, MEMBER_FILE_PATTERN.format(index="*"))),
            key=lambda path: int(os.path.basename(path)[len("member_") : -len(".json")]),
        )
        if not paths:
            raise InvalidArgument(f"No member checkpoints found in {directory}")
        members = []
        for path in paths:
            params, stored_cfg, _ = load_checkpoint(path, cfg=net_config)
            net_config = stored_cfg
            members.append(params)
        model = cls(n_members=len(members), net_config=net_config, verbose=verbose)
        model.ensemble = Ensemble(members=members, cfg=net_config)
        model.seeds = model.ensemble.seeds
        model.histories = []
        model.fitted = True
        return model


class MCDropoutModel(BaseFitComputeClass):
    """
    Single network trained with dropout and queried with B stochastic forward passes.

    The dropout samples play the role of ensemble members in the moment matching, so the summary has the same
    aleatoric / epistemic split as `DeepEnsemble`.

    ```python
    import numpy as np
    from uqtraj.data import SequencePair, augment_with_kf, normalize_pair
    from uqtraj.net import NetConfig
    from uqtraj.uq import MCDropoutModel

    t = np.arange(20) * 0.4
    states = np.hstack([np.stack([t, -0.5 * t], axis=1), np.tile([1.0, -0.5], (20, 1))])
    pair = SequencePair(past=states[:8], future=states[8:])
    pairs = list(map(normalize_pair, augment_with_kf([pair], 0.05, rng=0)))

    model = MCDropoutModel(net_config=NetConfig.small(), n_samples=20, epochs=5, random_state=0)
    summary = model.fit_compute(pairs)
    summary.n_members
    ```
    """

    def __init__(
        self,
        net_config=None,
        dropout_p=0.5,
        n_samples=DEFAULT_MC_SAMPLES,
        epochs=150,
        batch_size=64,
        learning_rate=1e-3,
        verbose=0,
        random_state=None,
    ):
        """
        Initializes the class.

        Args:
            net_config (NetConfig, optional):
                Architecture. Its dropout rate is replaced by `dropout_p`. Defaults to `NetConfig()`.

            dropout_p (float, optional):
                Dropout rate used in training and inference. By default 0.5.

            n_samples (int, optional):
                Number of stochastic forward passes B >= 2. By default 50.

            epochs (int, optional):
                Training epochs. By default 150.

            batch_size (int, optional):
                Pairs per update. By default 64.

            learning_rate (float, optional):
                Adam step size. By default 1e-3.

            verbose (int, optional):
                Controls verbosity of the output:

                - 0 - neither prints nor warnings are shown
                - 1 - 50 - only most important warnings and a progress bar over epochs
                - 51 - 100 - shows other warnings and prints
                - above 100 - presents all prints and all warnings

            random_state (int, optional):
                Seed of training and of the inference masks.
        """
        if n_samples < 2:
            raise InvalidArgument(f"MC dropout needs at least 2 samples, got {n_samples}")
        base = net_config if net_config is not None else NetConfig()
        self.net_config = replace(base, dropout_p=dropout_p)
        self.dropout_p = dropout_p
        self.n_samples = n_samples
        self.epochs = epochs
        self.batch_size = batch_size
        self.learning_rate = learning_rate
        self.verbose = verbose
        self.random_state = random_state
        self.train_seed, self.inference_seed = spawn_seeds(random_state, 2)

        if dropout_p == 0:
            self._warn(NotIntendedUseWarning("With dropout_p = 0 all passes agree, the epistemic covariance is zero"))

    def fit(self, pairs):
        """
        Trains the network on all pairs.

        Args:
            pairs (list of SequencePair):
                Normalized, augmented training pairs.

        Returns:
            (MCDropoutModel):
                Fitted object.
        """
        self.params, self.history = train(
            pairs,
            self.net_config,
            epochs=self.epochs,
            batch_size=self.batch_size,
            seed=self.train_seed,
            learning_rate=self.learning_rate,
            verbose=self.verbose,
        )
        self.fitted = True
        return self

    def compute(self, data, seed=None):
        """
        Predictive distribution from `n_samples` forward passes.

        Args:
            data (list of SequencePair or np.ndarray):
                Normalized pairs or network inputs.

            seed (int, optional):
                Seed of the dropout masks. Derived from `random_state` if None.

        Returns:
            (PredictiveSummary):
                Aggregated distribution.
        """
        self._check_if_fitted()
        seed = self.inference_seed if seed is None else seed
        return mc_dropout_predict(self.params, self.net_config, _to_inputs(data), n_samples=self.n_samples, seed=seed)

    def fit_compute(self, pairs, data=None):
        """
        Trains the network and predicts `data`, or the training pairs if `data` is None.
        """
        self.fit(pairs)
        return self.compute(pairs if data is None else data)

    def save(self, directory):
        """
        Writes the checkpoint of the network into `directory`.
        """
        self._check_if_fitted()
        path = os.path.join(directory, "dropout.json")
        save_checkpoint(
            path,
            self.params,
            self.net_config,
            extra={"kind": "dropout", "n_samples": self.n_samples, "inference_seed": self.inference_seed},
        )
        return path

    @classmethod
    def load(cls, directory, net_config=None, verbose=0):
        """
        Restores a fitted model written by `save`.
        """
        params, stored_cfg, extra = load_checkpoint(os.path.join(directory, "dropout.json"), cfg=net_config)
        model = cls(
            net_config=stored_cfg,
            dropout_p=stored_cfg.dropout_p,
            n_samples=extra.get("n_samples", DEFAULT_MC_SAMPLES),
            verbose=verbose,
        )
        model.inference_seed = extra.get("inference_seed", model.inference_seed)
        model.params = params
        model.history = pd.DataFrame()
        model.fitted = True
        return model


def ensemble_scaling(
    pairs_train,
    pairs_test,
    member_counts=(1, 2, 3, 4, 5),
    net_config=None,
    epochs=150,
    batch_size=64,
    learning_rate=1e-3,
    n_jobs=1,
    verbose=0,
    random_state=None,
):
    """
    Train and test losses as a function of the ensemble size.

    One ensemble with max(member_counts) members is trained and every size is evaluated on its first members, so
    smaller ensembles are nested in larger ones.

    Args:
        pairs_train (list of SequencePair): Normalized, augmented training pairs.
        pairs_test (list of SequencePair): Normalized test pairs with observed covariances.
        member_counts (iterable of int, optional): Ensemble sizes to evaluate.
        net_config (NetConfig, optional): Shared architecture.
        epochs (int, optional): Training epochs per member.
        batch_size (int, optional): Pairs per update.
        learning_rate (float, optional): Adam step size.
        n_jobs (int, optional): Number of members trained in parallel.
        verbose (int, optional): Verbosity, see `DeepEnsemble`.
        random_state (int, optional): Parent seed of the member seeds.

    Returns:
        (pd.DataFrame): One row per size with columns n_members, train_nll (mean over the members of the NLL on
            their own training pairs), test_nll and test_mse (of the moment-matched ensemble on the test pairs).
    """
    member_counts = sorted(set(int(count) for count in member_counts))
    if not member_counts or member_counts[0] < 1:
        raise InvalidArgument("member_counts needs positive ensemble sizes")

    model = DeepEnsemble(
        n_members=member_counts[-1],
        net_config=net_config,
        epochs=epochs,
        batch_size=batch_size,
        learning_rate=learning_rate,
        n_jobs=n_jobs,
        verbose=verbose,
        random_state=random_state,
    ).fit(pairs_train)

    train_nll = [
        evaluate_loss(member, model.net_config, member_pairs(pairs_train, index))["nll"]
        for index, member in enumerate(model.ensemble.members)
    ]
    test_inputs = pairs_to_inputs(pairs_test)
    test_truth, _ = pairs_to_targets(pairs_test)

    rows = []
    for count in member_counts:
        summary = ensemble_predict(Ensemble(model.ensemble.members[:count], model.net_config), test_inputs)
        rows.append(
            {
                "n_members": count,
                "train_nll": float(np.mean(train_nll[:count])),
                "test_nll": gaussian_nll(summary, test_truth),
                "test_mse": prediction_mse(summary, test_truth),
            }
        )
        if verbose > 50:
            print(f"M={count}: test NLL {rows[-1]['test_nll']:.4f}, test MSE {rows[-1]['test_mse']:.4f}")
    return pd.DataFrame(rows, columns=["n_members", "train_nll", "test_nll", "test_mse"])
