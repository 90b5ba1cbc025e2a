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


from dataclasses import dataclass
from typing import List

import numpy as np

from uqtraj.net.config import NetConfig
from uqtraj.net.network import NetParams, forward
from uqtraj.utils._utils import assure_generator
from uqtraj.utils.exceptions import InvalidArgument, NumericalOverflow

DEFAULT_MC_SAMPLES = 50


@dataclass(eq=False)
class Ensemble:
    """
    Independently initialized networks sharing one architecture.

    Attributes:
        members (list of NetParams): Member parameters.
        cfg (NetConfig): Shared architecture.
    """

    members: List[NetParams]
    cfg: NetConfig

    def __post_init__(self):
        """
        Validates the members.
        """
        if len(self.members) < 1:
            raise InvalidArgument("An ensemble needs at least one member")
        for member in self.members:
            member.check_shapes(self.cfg)

    def __len__(self):
        """
        Number of members.
        """
        return len(self.members)

    @property
    def seeds(self):
        """
        (list): Initialization seeds of the members.
        """
        return [member.seed for member in self.members]


@dataclass(eq=False)
class PredictiveSummary:
    """
    Moment-matched predictive distribution with disentangled uncertainty.

    All arrays have a leading batch axis B and a step axis T.

    Attributes:
        mean (np.ndarray): Mean of member means, shape (B, T, 2).
        total_cov (np.ndarray): aleatoric + epistemic, shape (B, T, 2, 2).
        aleatoric (np.ndarray): Mean of member prediction covariances, shape (B, T, 2, 2).
        epistemic (np.ndarray): Covariance of member means, shape (B, T, 2, 2).
        sens_cov (np.ndarray): Mean of member sensing covariances, shape (B, T, 2, 2).
        member_means (np.ndarray): Raw member means, shape (M, B, T, 2).
        member_pred_covs (np.ndarray): Raw member prediction covariances, shape (M, B, T, 2, 2).
        member_sens_covs (np.ndarray): Raw member sensing covariances, shape (M, B, T, 2, 2).
    """

    mean: np.ndarray
    total_cov: np.ndarray
    aleatoric: np.ndarray
    epistemic: np.ndarray
    sens_cov: np.ndarray
    member_means: np.ndarray
    member_pred_covs: np.ndarray
    member_sens_covs: np.ndarray

    @property
    def n_members(self):
        """
        (int): Number of members or dropout samples.
        """
        return len(self.member_means)

    @property
    def epistemic_trace(self):
        """
        (np.ndarray): Trace of the epistemic covariance per step, shape (B, T).
        """
        return np.trace(self.epistemic, axis1=-2, axis2=-1)

    @property
    def aleatoric_trace(self):
        """
        (np.ndarray): Trace of the aleatoric covariance per step, shape (B, T).
        """
        return np.trace(self.aleatoric, axis1=-2, axis2=-1)

    def select(self, index):
        """
        Summary of one sequence of the batch, keeping a batch axis of length 1.
        """
        index = slice(index, index + 1)
        return PredictiveSummary(
            mean=self.mean[index],
            total_cov=self.total_cov[index],
            aleatoric=self.aleatoric[index],
            epistemic=self.epistemic[index],
            sens_cov=self.sens_cov[index],
            member_means=self.member_means[:, index],
            member_pred_covs=self.member_pred_covs[:, index],
            member_sens_covs=self.member_sens_covs[:, index],
        )


def aggregate_members(means, pred_covs, sens_covs):
    """
    Moment matching of a uniform mixture of Gaussians.

    mean = M^-1 sum mu_i, aleatoric = M^-1 sum Sigma_i and epistemic = M^-1 sum mu_i mu_i^T - mean mean^T. The
    epistemic term is evaluated from deviations to the member mean, so identical members give exactly zero and the
    result is PSD.

    Args:
        means (np.ndarray): Member means of shape (M, ..., 2).
        pred_covs (np.ndarray): Member prediction covariances of shape (M, ..., 2, 2).
        sens_covs (np.ndarray): Member sensing covariances of shape (M, ..., 2, 2).

    Returns:
        (PredictiveSummary): Aggregated distribution.
    """
    means = np.asarray(means, dtype=float)
    pred_covs = np.asarray(pred_covs, dtype=float)
    sens_covs = np.asarray(sens_covs, dtype=float)
    for index in range(len(means)):
        if not (
            np.all(np.isfinite(means[index]))
            and np.all(np.isfinite(pred_covs[index]))
            and np.all(np.isfinite(sens_covs[index]))
        ):
            raise NumericalOverflow(f"Member {index} produced non-finite outputs")

    offsets = means - means[0]
    centered = offsets - offsets.mean(axis=0)
    mean = means[0] + offsets.mean(axis=0)
    epistemic = np.einsum("m...i,m...j->...ij", centered, centered) / len(means)
    aleatoric = pred_covs.mean(axis=0)
    return PredictiveSummary(
        mean=mean,
        total_cov=aleatoric + epistemic,
        aleatoric=aleatoric,
        epistemic=epistemic,
        sens_cov=sens_covs.mean(axis=0),
        member_means=means,
        member_pred_covs=pred_covs,
        member_sens_covs=sens_covs,
    )


def ensemble_predict(ens, inputs):
    """
    Predictive distribution of a deep ensemble.

    Members run without dropout. The sensing covariance is the member mean of the sensing heads.

    Args:
        ens (Ensemble): Trained members.
        inputs (np.ndarray): Normalized inputs of shape (B, input_dim) or (input_dim,).

    Returns:
        (PredictiveSummary): Aggregated distribution with M member outputs retained.
    """
    masks = [None] * (len(ens.cfg.layer_sizes) - 2)
    outputs = []
    for index, member in enumerate(ens.members):
        try:
            out, _ = forward(member, ens.cfg, inputs, masks=masks)
        except NumericalOverflow as error:
            raise NumericalOverflow(f"Member {index}: {error.message}") from error
        outputs.append(out)
    return aggregate_members(
        [o.mean for o in outputs], [o.pred_cov for o in outputs], [o.sens_cov for o in outputs]
    )


def mc_dropout_predict(params, cfg, inputs, n_samples=DEFAULT_MC_SAMPLES, seed=None):
    """
    Predictive distribution from stochastic forward passes with fresh dropout masks.

    Args:
        params (NetParams): Parameters of a network trained with dropout.
        cfg (NetConfig): Architecture, `cfg.dropout_p` sets the dropout rate.
        inputs (np.ndarray): Normalized inputs of shape (B, input_dim) or (input_dim,).
        n_samples (int, optional): Number of forward passes B >= 2. By default 50.
        seed (int, None or np.random.Generator, optional): Random source of the masks.

    Returns:
        (PredictiveSummary): Aggregated distribution with the dropout samples as members.
    """
    if n_samples < 2:
        raise InvalidArgument(f"MC dropout needs at least 2 samples, got {n_samples}")
    rng = assure_generator(seed)
    outputs = []
    for index in range(n_samples):
        try:
            out, _ = forward(params, cfg, inputs, rng=rng)
        except NumericalOverflow as error:
            raise NumericalOverflow(f"Dropout sample {index}: {error.message}") from error
        outputs.append(out)
    return aggregate_members(
        [o.mean for o in outputs], [o.pred_cov for o in outputs], [o.sens_cov for o in outputs]
    )
