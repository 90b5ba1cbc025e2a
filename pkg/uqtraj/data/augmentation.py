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
from dataclasses import replace

import numpy as np
from joblib import Parallel, delayed
from tqdm.auto import tqdm

from uqtraj.data.records import SequencePair
from uqtraj.kalman.filter import KfConfig, filter_trajectory, position_covariances
from uqtraj.sampling.cts import CtsConfig, sample_states
from uqtraj.utils._utils import spawn_seeds
from uqtraj.utils.exceptions import InvalidArgument
from uqtraj.utils.warnings import NotIntendedUseWarning

NOISE_FRACTION_RANGE = (0.02, 0.20)
MIN_NOISE_STD = 1e-3


def measurement_noise_std(positions, fraction):
    """
    Measurement noise standard deviation as a fraction of the bounding-box diagonal of a track.

    Args:
        positions (np.ndarray): Ground-truth positions of shape (N, 2).
        fraction (float): Noise fraction, e.g. 0.05 for 5%.

    Returns:
        (float): Standard deviation in meters.
    """
    positions = np.asarray(positions, dtype=float)
    extent = np.ptp(positions, axis=0)
    return float(fraction) * float(np.hypot(extent[0], extent[1]))


def _seed_from(rng):
    if isinstance(rng, np.random.Generator):
        return int(rng.integers(0, 2 ** 63 - 1))
    return rng


def augment_pair(pair, noise_fraction, kf_cfg, cts_cfg, seed, sample=True):
    """
    Augments one pair with Kalman covariances and sampled observed paths.

    Noisy measurements of the 20 true positions are filtered. The posterior position covariances become the input
    channels of the observed steps and the targets of the future steps. The future positions stay the ground truth.

    Args:
        pair (SequencePair): Pair with ground-truth states.
        noise_fraction (float): Noise fraction of the measurement model.
        kf_cfg (KfConfig): Filter settings. `dt`, `q_scale` and the velocity variance of `p0` are used, measurement
            noise and initial position variance follow from the noise fraction.
        cts_cfg (CtsConfig): Sampler settings. The seed is replaced by one derived from `seed`.
        seed (int): Seed of this pair.
        sample (bool, optional): If True, emit `cts_cfg.m` sampled variants. Otherwise emit one variant whose observed
            path is the posterior mean.

    Returns:
        (list of SequencePair): Augmented variants.
    """
    truth = np.vstack([pair.past_positions, pair.future_positions])
    sigma = max(measurement_noise_std(truth, noise_fraction), MIN_NOISE_STD)
    cfg = KfConfig.from_noise_std(
        sigma, dt=kf_cfg.dt, q_scale=kf_cfg.q_scale, velocity_var=float(kf_cfg.P0[2, 2])
    )

    noise_seed, sampling_seed = spawn_seeds(seed, 2)
    measurements = truth + np.random.default_rng(noise_seed).normal(0.0, sigma, size=truth.shape)
    post = filter_trajectory(measurements, cfg)
    covs = position_covariances(post)
    n_past = len(pair.past)

    if sample:
        states = sample_states(post, replace(cts_cfg, rng_seed=sampling_seed))
        observed = [np.hstack([s[:n_past, :2], post.means[:n_past, 2:]]) for s in states]
    else:
        observed = [post.means[:n_past].copy()]

    return [
        replace(
            pair,
            past=past,
            past_cov=covs[:n_past],
            future_cov=covs[n_past:],
            fraction=float(noise_fraction),
            sample_index=index,
        )
        for index, past in enumerate(observed)
    ]


def _check_fraction(fraction, verbose):
    if not 0 <= fraction < 1:
        raise InvalidArgument(f"noise fraction needs to be in [0, 1), got {fraction}")
    low, high = NOISE_FRACTION_RANGE
    if verbose > 0 and not low <= fraction <= high:
        warnings.warn(
            NotIntendedUseWarning(
                f"Noise fraction {fraction} is outside of the typical range [{low}, {high}] the estimator is "
                f"trained for."
            )
        )


def augment_with_kf(
    pairs, noise_fraction, kf_cfg=None, cts_cfg=None, rng=None, sample=True, n_jobs=1, verbose=0
):
    """
    Kalman augmentation of a list of pairs.

    Every pair gets its own seed derived from `rng`, so the output does not depend on `n_jobs`.

    Args:
        pairs (list of SequencePair): Ground-truth pairs.
        noise_fraction (float): Measurement noise fraction, typically in [0.02, 0.20].
        kf_cfg (KfConfig, optional): Filter settings. Defaults of KfConfig if None.
        cts_cfg (CtsConfig, optional): Sampler settings. Defaults of CtsConfig if None.
        rng (int, None or np.random.Generator, optional): Seed of the augmentation.
        sample (bool, optional): Emit sampled variants (True) or the posterior mean only (False).
        n_jobs (int, optional): Number of parallel jobs. If -1 use all available cores. By default 1.
        verbose (int, optional): Controls verbosity of the output:

            - 0 - neither prints nor warnings are shown
            - 1 - 50 - only most important warnings and a progress bar
            - 51 - 100 - shows other warnings and prints
            - above 100 - presents all prints and all warnings

    Returns:
        (list of SequencePair): `cts_cfg.m` variants per pair (or one if `sample` is False), grouped by pair.
    """
    if len(pairs) == 0:
        raise InvalidArgument("augment_with_kf needs at least one pair")
    _check_fraction(noise_fraction, verbose)
    kf_cfg = KfConfig() if kf_cfg is None else kf_cfg
    cts_cfg = CtsConfig() if cts_cfg is None else cts_cfg
    seeds = spawn_seeds(_seed_from(rng), len(pairs))

    items = zip(pairs, seeds)
    if verbose > 0:
        items = tqdm(items, total=len(pairs), desc=f"Augmenting (R {noise_fraction:.0%})")

    results = Parallel(n_jobs=n_jobs)(
        delayed(augment_pair)(pair, noise_fraction, kf_cfg, cts_cfg, seed, sample) for pair, seed in items
    )
    return [variant for variants in results for variant in variants]


def domain_randomize(
    pairs, fractions, kf_cfg=None, cts_cfg=None, rng=None, sample=True, n_jobs=1, verbose=0
):
    """
    Union of Kalman augmentations over several measurement noise fractions.

    Args:
        pairs (list of SequencePair): Ground-truth pairs.
        fractions (list of float): Noise fractions, typically within [0.02, 0.20].
        kf_cfg (KfConfig, optional): Filter settings.
        cts_cfg (CtsConfig, optional): Sampler settings.
        rng (int, None or np.random.Generator, optional): Seed of the augmentation.
        sample (bool, optional): Emit sampled variants (True) or the posterior mean only (False).
        n_jobs (int, optional): Number of parallel jobs.
        verbose (int, optional): Verbosity, as in `augment_with_kf`.

    Returns:
        (list of SequencePair): Augmented pairs of every fraction, each tagged with its fraction.
    """
    fractions = list(fractions)
    if len(fractions) == 0:
        raise InvalidArgument("domain_randomize needs at least one noise fraction")
    seeds = spawn_seeds(_seed_from(rng), len(fractions))
    augmented = []
    for fraction, seed in zip(fractions, seeds):
        augmented.extend(
            augment_with_kf(
                pairs,
                fraction,
                kf_cfg=kf_cfg,
                cts_cfg=cts_cfg,
                rng=seed,
                sample=sample,
                n_jobs=n_jobs,
                verbose=verbose,
            )
        )
    return augmented
