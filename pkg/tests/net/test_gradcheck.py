import pytest

from uqtraj.net import NetConfig, grad_check, init_params
from uqtraj.utils import GradCheckFailure, InvalidArgument


@pytest.mark.parametrize(
    "cfg, terms, tolerance",
    [
        (NetConfig.small(), "cov_mse", 1e-6),
        (NetConfig.small(beta=0.0), "nll", 1e-4),
        (NetConfig.small(beta=0.5), "nll", 1e-4),
        (NetConfig.small(beta=0.5), "joint", 1e-4),
        (NetConfig.small(dropout_p=0.3), "joint", 1e-4),
    ],
)
def test_grad_check_passes(cfg, terms, tolerance, augmented_pairs):
    """
    Test.
    """
    report = grad_check(init_params(cfg, seed=0), cfg, augmented_pairs[:3], tolerance=tolerance, terms=terms)
    assert report.passed
    assert report.n_parameters == 40 * 8 + 8 + 8 * 8 + 8 + 8 * 8 + 8 + 8 * 96 + 96
    assert report.terms == terms


def test_grad_check_failure(small_config, augmented_pairs):
    """
    Test.
    """
    params = init_params(small_config, seed=0)
    with pytest.raises(GradCheckFailure) as error:
        grad_check(params, small_config, augmented_pairs[:2], tolerance=0.0)
    assert error.value.report.worst_parameter in error.value.message
    assert not error.value.report.passed

    report = grad_check(params, small_config, augmented_pairs[:2], tolerance=0.0, raise_on_failure=False)
    assert report.max_relative_error >= 0

    with pytest.raises(InvalidArgument):
        grad_check(params, small_config, augmented_pairs[:2], terms="mse")
