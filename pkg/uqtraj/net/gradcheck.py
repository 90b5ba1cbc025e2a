from dataclasses import dataclass

import numpy as np

from uqtraj.net.losses import beta_nll_loss, joint_loss
from uqtraj.net.network import draw_masks, forward, pairs_to_inputs, pairs_to_targets
from uqtraj.utils._utils import assure_list_values_allowed
from uqtraj.utils.exceptions import GradCheckFailure

ALLOWED_TERMS = ["joint", "nll", "cov_mse"]
DENOMINATOR_FLOOR = 1e-4


@dataclass(frozen=True)
class GradCheckReport:
    """
    Outcome of a finite-difference gradient check.

    Attributes:
        max_relative_error (float): Largest relative error over all parameters.
        worst_parameter (str): Name and index of the parameter with the largest error, e.g. `'W2[3, 1]'`.
        analytic (float): Analytic gradient of the worst parameter.
        numeric (float): Finite-difference gradient of the worst parameter.
        n_parameters (int): Number of parameters checked.
        tolerance (float): Tolerance the check was run with.
        terms (str): Loss terms checked.
    """

    max_relative_error: float
    worst_parameter: str
    analytic: float
    numeric: float
    n_parameters: int
    tolerance: float
    terms: str

    @property
    def passed(self):
        """
        (bool): True if the largest error is below the tolerance.
        """
        return self.max_relative_error < self.tolerance


def relative_error(analytic, numeric):
    """
    |a - n| / max(|a| + |n|, 1e-4).
    """
    return np.abs(analytic - numeric) / np.maximum(np.abs(analytic) + np.abs(numeric), DENOMINATOR_FLOOR)


def grad_check(params, cfg, pairs, tolerance=1e-4, h=1e-5, terms="joint", seed=0, raise_on_failure=True):
    """
    Compares backpropagated gradients with central finite differences over every parameter.

    Dropout masks are drawn once and reused for every evaluation. With beta > 0 the NLL step weights
    det(Sigma)^beta are frozen at `params`, so the finite differences are taken of the same weighted surrogate
    whose gradient backpropagation returns.

    Args:
        params (NetParams): Parameters to check at, typically of a small network.
        cfg (NetConfig): Architecture and loss settings.
        pairs (list of SequencePair): Normalized, augmented pairs forming the batch.
        tolerance (float, optional): Maximal accepted relative error. By default 1e-4.
        h (float, optional): Finite-difference step. By default 1e-5.
        terms (str, optional): `'joint'`, `'nll'` or `'cov_mse'`.
        seed (int, optional): Seed of the dropout masks.
        raise_on_failure (bool, optional): Raise GradCheckFailure if the check fails. By default True.

    Returns:
        (GradCheckReport): Summary of the check.
    """
    assure_list_values_allowed([terms], "terms", ALLOWED_TERMS)
    inputs = pairs_to_inputs(pairs)
    target, target_cov = pairs_to_targets(pairs)
    masks = draw_masks(cfg, len(inputs), np.random.default_rng(seed))
    params = params.copy()

    out, _ = forward(params, cfg, inputs, masks=masks)
    frozen = beta_nll_loss(out, target, cfg.beta).weights
    base = joint_loss(params, cfg, inputs, target, target_cov, masks=masks, nll_weights=frozen, terms=terms)

    def objective():
        return joint_loss(
            params, cfg, inputs, target, target_cov, masks=masks, with_grads=False, nll_weights=frozen, terms=terms
        ).objective

    worst = (-1.0, "", 0.0, 0.0)
    n_parameters = 0
    for name, array, grad in zip(params.names(), params.arrays(), base.grads.arrays()):
        for index in np.ndindex(array.shape):
            original = array[index]
            array[index] = original + h
            plus = objective()
            array[index] = original - h
            minus = objective()
            array[index] = original
            numeric = (plus - minus) / (2 * h)
            error = float(relative_error(grad[index], numeric))
            n_parameters += 1
            if error > worst[0]:
                label = f"{name}[{', '.join(str(i) for i in index)}]"
                worst = (error, label, float(grad[index]), float(numeric))

    report = GradCheckReport(
        max_relative_error=worst[0],
        worst_parameter=worst[1],
        analytic=worst[2],
        numeric=worst[3],
        n_parameters=n_parameters,
        tolerance=tolerance,
        terms=terms,
    )
    if raise_on_failure and not report.passed:
        raise GradCheckFailure(
            f"Gradient check failed: relative error {report.max_relative_error:.3e} at {report.worst_parameter} "
            f"(analytic {report.analytic:.6e}, numeric {report.numeric:.6e})",
            report=report,
        )
    return report
