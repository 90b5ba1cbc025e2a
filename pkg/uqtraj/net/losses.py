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
from typing import Optional

import numpy as np

from uqtraj.core.covariance import det2, inv2
from uqtraj.net.network import backward, forward, output_gradient
from uqtraj.utils.arrayfuncs import matrix_to_compact
from uqtraj.utils.exceptions import NumericalOverflow

MIN_DET = 1e-15


@dataclass(eq=False)
class LossTerms:
    """
    Value and output gradients of one loss.

    Attributes:
        value (float): Reported loss, averaged over steps and batch.
        objective (float): Value of the objective the gradients belong to. Equals `value` except for the
            variance-weighted NLL, where it is the weighted surrogate.
        grad_mean (np.ndarray, optional): Gradient w.r.t. the predicted means, shape (B, T, 2).
        grad_cov (np.ndarray, optional): Gradient w.r.t. the compact covariance entries, shape (B, T, 3).
        weights (np.ndarray, optional): Stop-gradient step weights det(Sigma)^beta, shape (B, T).
    """

    value: float
    objective: float
    grad_mean: Optional[np.ndarray] = None
    grad_cov: Optional[np.ndarray] = None
    weights: Optional[np.ndarray] = None


def gaussian_nll_terms(mean, cov, target):
    """
    Per-step bivariate Gaussian negative log-likelihood without the log(2 pi) constant.

    Args:
        mean (np.ndarray): Shape (..., 2).
        cov (np.ndarray): Shape (..., 2, 2).
        target (np.ndarray): Shape (..., 2).

    Returns:
        (np.ndarray, np.ndarray, np.ndarray, np.ndarray): NLL per step, determinant, inverse covariance and
            inverse covariance times residual.
    """
    det = det2(cov)
    if not np.all(np.isfinite(det)) or np.any(det < MIN_DET):
        raise NumericalOverflow(f"Predicted covariance is degenerate (min det {np.nanmin(det):.3e})")
    inverse = inv2(cov)
    residual = np.asarray(target, dtype=float) - mean
    q = np.einsum("...ij,...j->...i", inverse, residual)
    nll = 0.5 * np.log(det) + 0.5 * np.einsum("...i,...i->...", residual, q)
    return nll, det, inverse, q


def beta_nll_loss(out, target, beta, weights=None):
    """
    Variance-weighted Gaussian NLL of the target positions under the prediction covariance.

    Every step's NLL is multiplied by the stop-gradient weight det(Sigma)^beta. The reported value is the unweighted
    mean NLL, the gradients belong to the weighted mean. With beta = 0 this is the plain NLL gradient.

    Args:
        out (ForecastOutput): Network outputs.
        target (np.ndarray): Future positions of shape (B, T, 2).
        beta (float): Weighting exponent in [0, 1].
        weights (np.ndarray, optional): Step weights to use instead of det(Sigma)^beta, e.g. frozen at other
            parameters for finite-difference checks.

    Returns:
        (LossTerms): Loss value and gradients w.r.t. means and compact prediction covariances.
    """
    nll, det, inverse, q = gaussian_nll_terms(out.mean, out.pred_cov, target)
    if weights is None:
        weights = det ** beta if beta > 0 else np.ones_like(det)
    count = nll.size

    grad_mean = -weights[..., None] * q / count
    G = 0.5 * (inverse - np.einsum("...i,...j->...ij", q, q))
    grad_cov = np.stack([G[..., 0, 0], 2 * G[..., 0, 1], G[..., 1, 1]], axis=-1) * (weights[..., None] / count)
    return LossTerms(
        value=float(nll.mean()),
        objective=float((weights * nll).mean()),
        grad_mean=grad_mean,
        grad_cov=grad_cov,
        weights=weights,
    )


def cov_mse_loss(out, target_cov):
    """
    Mean squared Frobenius distance between sensing covariances and target covariances.

    Args:
        out (ForecastOutput): Network outputs.
        target_cov (np.ndarray): Target covariances, compact (B, T, 3).

    Returns:
        (LossTerms): Loss value and gradient w.r.t. the compact sensing covariances.
    """
    diff = matrix_to_compact(out.sens_cov) - np.asarray(target_cov, dtype=float)
    per_step = diff[..., 0] ** 2 + 2 * diff[..., 1] ** 2 + diff[..., 2] ** 2
    count = per_step.size
    grad_cov = np.stack([2 * diff[..., 0], 4 * diff[..., 1], 2 * diff[..., 2]], axis=-1) / count
    value = float(per_step.mean())
    return LossTerms(value=value, objective=value, grad_cov=grad_cov)


@dataclass(eq=False)
class JointLoss:
    """
    Joint training loss of one batch.

    Attributes:
        nll (float): Mean Gaussian NLL of the targets.
        cov_mse (float): Mean squared Frobenius error of the sensing covariances.
        total (float): nll + loss_weight_mse * cov_mse.
        objective (float): Minimized objective, weighted NLL + loss_weight_mse * cov_mse.
        grads (NetParams, optional): Parameter gradients of the objective.
    """

    nll: float
    cov_mse: float
    total: float
    objective: float
    grads: Optional[object] = None


def joint_loss(
    params,
    cfg,
    inputs,
    target,
    target_cov,
    masks=None,
    rng=None,
    with_grads=True,
    nll_weights=None,
    terms="joint",
):
    """
    Forward pass, joint loss and backpropagation for one batch.

    Args:
        params (NetParams): Network parameters.
        cfg (NetConfig): Architecture and loss settings.
        inputs (np.ndarray): Shape (B, input_dim).
        target (np.ndarray): Future positions of shape (B, T, 2).
        target_cov (np.ndarray): Target covariances of shape (B, T, 3).
        masks (list of np.ndarray, optional): Dropout masks.
        rng (np.random.Generator, optional): Random source of dropout masks when `masks` is None.
        with_grads (bool, optional): Backpropagate. By default True.
        nll_weights (np.ndarray, optional): Frozen NLL step weights.
        terms (str, optional): `'joint'`, `'nll'` or `'cov_mse'` selects which terms enter the objective.

    Returns:
        (JointLoss): Loss values and gradients.
    """
    out, cache = forward(params, cfg, inputs, masks=masks, rng=rng)
    nll = beta_nll_loss(out, target, cfg.beta, weights=nll_weights)
    mse = cov_mse_loss(out, target_cov)

    use_nll = terms in ("joint", "nll")
    mse_weight = cfg.loss_weight_mse if terms == "joint" else (1.0 if terms == "cov_mse" else 0.0)
    objective = (nll.objective if use_nll else 0.0) + mse_weight * mse.objective

    grads = None
    if with_grads:
        grad_raw = output_gradient(
            cache,
            grad_mean=nll.grad_mean if use_nll else None,
            grad_sens=mse_weight * mse.grad_cov,
            grad_pred=nll.grad_cov if use_nll else None,
        )
        grads = backward(params, cfg, cache, grad_raw)

    return JointLoss(
        nll=nll.value,
        cov_mse=mse.value,
        total=nll.value + cfg.loss_weight_mse * mse.value,
        objective=objective,
        grads=grads,
    )
