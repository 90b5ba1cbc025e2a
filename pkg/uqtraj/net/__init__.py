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


from .config import NetConfig
from .network import (
    NetParams,
    ForecastOutput,
    init_params,
    zero_params,
    forward,
    backward,
    predict,
    draw_masks,
    factor_to_cov,
    softplus,
    pairs_to_inputs,
    pairs_to_targets,
)
from .losses import beta_nll_loss, cov_mse_loss, joint_loss, gaussian_nll_terms, LossTerms, JointLoss
from .optim import OptimState, init_optim_state, adam_step
from .train import train, evaluate_loss
from .gradcheck import grad_check, GradCheckReport
from .checkpoint import save_checkpoint, load_checkpoint

__all__ = [
    "NetConfig",
    "NetParams",
    "ForecastOutput",
    "init_params",
    "zero_params",
    "forward",
    "backward",
    "predict",
    "draw_masks",
    "factor_to_cov",
    "softplus",
    "pairs_to_inputs",
    "pairs_to_targets",
    "beta_nll_loss",
    "cov_mse_loss",
    "joint_loss",
    "gaussian_nll_terms",
    "LossTerms",
    "JointLoss",
    "OptimState",
    "init_optim_state",
    "adam_step",
    "train",
    "evaluate_loss",
    "grad_check",
    "GradCheckReport",
    "save_checkpoint",
    "load_checkpoint",
]
