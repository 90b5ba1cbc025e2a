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


from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from scipy.special import expit

from uqtraj.utils._utils import assure_generator
from uqtraj.utils.exceptions import InvalidArgument, NumericalOverflow


@dataclass(eq=False)
class NetParams:
    """
    Weights and biases of one network.

    Layer l maps activations a to a @ weights[l] + biases[l].

    Attributes:
        weights (list of np.ndarray): Matrices of shape (fan_in, fan_out).
        biases (list of np.ndarray): Vectors of shape (fan_out,).
        seed (int, optional): Seed the parameters were initialized with.
    """

    weights: List[np.ndarray]
    biases: List[np.ndarray]
    seed: Optional[int] = None

    def copy(self):
        """
        Deep copy.
        """
        return NetParams(
            weights=[w.copy() for w in self.weights], biases=[b.copy() for b in self.biases], seed=self.seed
        )

    def arrays(self):
        """
        Weights and biases interleaved as [W1, b1, W2, b2, ...].
        """
        return [a for pair in zip(self.weights, self.biases) for a in pair]

    def names(self):
        """
        Names matching `arrays()`.
        """
        return [n for i in range(len(self.weights)) for n in (f"W{i + 1}", f"b{i + 1}")]

    def is_finite(self):
        """
        True if all entries are finite.
        """
        return all(np.all(np.isfinite(a)) for a in self.arrays())

    def check_shapes(self, cfg):
        """
        Raises InvalidArgument if the parameter shapes do not match the configuration.
        """
        sizes = cfg.layer_sizes
        if len(self.weights) != len(sizes) - 1 or len(self.biases) != len(sizes) - 1:
            raise InvalidArgument(f"Parameters have {len(self.weights)} layers, config expects {len(sizes) - 1}")
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.shape != (sizes[i], sizes[i + 1]) or b.shape != (sizes[i + 1],):
                raise InvalidArgument(
                    f"Layer {i + 1} has shapes {w.shape}/{b.shape}, config expects "
                    f"{(sizes[i], sizes[i + 1])}/{(sizes[i + 1],)}"
                )


@dataclass(eq=False)
class ForecastOutput:
    """
    Per-step outputs of the network for a batch of inputs.

    Attributes:
        mean (np.ndarray): Predicted positions of shape (B, T, 2).
        sens_cov (np.ndarray): Sensing covariances of shape (B, T, 2, 2).
        pred_cov (np.ndarray): Prediction covariances of shape (B, T, 2, 2).
    """

    mean: np.ndarray
    sens_cov: np.ndarray
    pred_cov: np.ndarray


@dataclass(eq=False)
class ForwardCache:
    """
    Intermediate values of a forward pass needed by `backward`.
    """

    inputs: np.ndarray
    activations: List[np.ndarray] = field(default_factory=list)
    masks: List[Optional[np.ndarray]] = field(default_factory=list)
    raw: Optional[np.ndarray] = None
    sens_factor: Optional[np.ndarray] = None
    pred_factor: Optional[np.ndarray] = None


def init_params(cfg, seed=None):
    """
    Symmetric uniform fan-in initialization, U(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights and zero biases.

    Args:
        cfg (NetConfig): Architecture.
        seed (int, optional): Seed of the initialization.

    Returns:
        (NetParams): Initialized parameters.
    """
    rng = np.random.default_rng(seed)
    sizes = cfg.layer_sizes
    weights, biases = [], []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        bound = 1.0 / np.sqrt(fan_in)
        weights.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return NetParams(weights=weights, biases=biases, seed=seed)


def zero_params(cfg):
    """
    Parameters with all weights and biases zero.
    """
    sizes = cfg.layer_sizes
    return NetParams(
        weights=[np.zeros((i, o)) for i, o in zip(sizes[:-1], sizes[1:])],
        biases=[np.zeros(o) for o in sizes[1:]],
    )


def softplus(x):
    """
    log(1 + exp(x)), stable for large |x|.
    """
    return np.logaddexp(0.0, x)


def factor_to_cov(factor):
    """
    Covariance L L^T from lower-triangular factors stored as (l11, l21, l22).

    Args:
        factor (np.ndarray): Array of shape (..., 3).

    Returns:
        (np.ndarray): Array of shape (..., 2, 2).
    """
    l11, l21, l22 = factor[..., 0], factor[..., 1], factor[..., 2]
    cov = np.empty(factor.shape[:-1] + (2, 2))
    cov[..., 0, 0] = l11 * l11
    cov[..., 0, 1] = l11 * l21
    cov[..., 1, 0] = l11 * l21
    cov[..., 1, 1] = l21 * l21 + l22 * l22
    return cov


def _head_factor(raw):
    return np.stack([softplus(raw[..., 0]), raw[..., 1], softplus(raw[..., 2])], axis=-1)


def pairs_to_inputs(pairs):
    """
    Flattened network inputs [x, y, sxx, sxy, syy] per observed step.

    Args:
        pairs (list of SequencePair): Normalized pairs with covariances.

    Returns:
        (np.ndarray): Array of shape (B, past_steps * 5).
    """
    rows = []
    for pair in pairs:
        if pair.past_cov is None:
            raise InvalidArgument("Network inputs need observed covariances, augment the pairs first")
        rows.append(np.hstack([pair.past_positions, pair.past_cov]).ravel())
    return np.asarray(rows, dtype=float).reshape(len(pairs), -1)


def pairs_to_targets(pairs):
    """
    Target future positions of shape (B, T, 2) and target covariances of shape (B, T, 3).
    """
    if any(pair.future_cov is None for pair in pairs):
        raise InvalidArgument("Training targets need future covariances, augment the pairs first")
    positions = np.asarray([pair.future_positions for pair in pairs], dtype=float)
    covs = np.asarray([pair.future_cov for pair in pairs], dtype=float)
    return positions, covs


def _activate(z, activation):
    if activation == "tanh":
        return np.tanh(z)
    return np.maximum(z, 0.0)


def _activation_grad(a, activation):
    if activation == "tanh":
        return 1.0 - a * a
    return (a > 0).astype(float)


def draw_masks(cfg, batch_size, rng):
    """
    Inverted dropout masks for every hidden layer, or None entries when dropout is off.
    """
    if cfg.dropout_p == 0:
        return [None] * (len(cfg.layer_sizes) - 2)
    rng = assure_generator(rng)
    keep = 1.0 - cfg.dropout_p
    return [(rng.random((batch_size, size)) < keep) / keep for size in cfg.layer_sizes[1:-1]]


def forward(params, cfg, inputs, masks=None, rng=None):
    """
    Forward pass of the encoder-decoder network.

    Hidden layers use the configured activation followed by inverted dropout when `cfg.dropout_p > 0`. The linear
    output holds per future step the mean and two lower-triangular factors (l11, l21, l22) with a softplus on the
    diagonal entries, so both covariances L L^T are PSD.

    Args:
        params (NetParams): Network parameters.
        cfg (NetConfig): Architecture.
        inputs (np.ndarray): Array of shape (B, input_dim) or (input_dim,).
        masks (list of np.ndarray, optional): Dropout masks from `draw_masks`. Drawn from `rng` if None.
        rng (int, None or np.random.Generator, optional): Random source of the dropout masks.

    Returns:
        (ForecastOutput, ForwardCache): Outputs with a leading batch axis and the cache for `backward`.
    """
    x = np.atleast_2d(np.asarray(inputs, dtype=float))
    if x.shape[1] != cfg.input_dim:
        raise InvalidArgument(f"Inputs need {cfg.input_dim} features, got {x.shape[1]}")
    if masks is None:
        masks = draw_masks(cfg, len(x), rng)

    cache = ForwardCache(inputs=x)
    a = x
    n_layers = len(params.weights)
    with np.errstate(over="ignore", invalid="ignore"):
        for layer in range(n_layers - 1):
            a = _activate(a @ params.weights[layer] + params.biases[layer], cfg.activation)
            cache.activations.append(a)
            mask = masks[layer]
            cache.masks.append(mask)
            if mask is not None:
                a = a * mask
        raw = a @ params.weights[-1] + params.biases[-1]

    if not np.all(np.isfinite(raw)):
        raise NumericalOverflow("Network produced non-finite outputs")

    raw = raw.reshape(len(x), cfg.future_steps, -1)
    sens_factor = _head_factor(raw[..., 2:5])
    pred_factor = _head_factor(raw[..., 5:8])
    cache.raw = raw
    cache.sens_factor = sens_factor
    cache.pred_factor = pred_factor
    out = ForecastOutput(
        mean=raw[..., :2].copy(), sens_cov=factor_to_cov(sens_factor), pred_cov=factor_to_cov(pred_factor)
    )
    return out, cache


def _factor_grad(raw_head, factor, grad_cov):
    """
    Maps gradients w.r.t. compact covariance entries (s11, s12, s22) back to the raw head outputs.
    """
    l11, l21, l22 = factor[..., 0], factor[..., 1], factor[..., 2]
    g11, g12, g22 = grad_cov[..., 0], grad_cov[..., 1], grad_cov[..., 2]
    g_l11 = 2 * l11 * g11 + l21 * g12
    g_l21 = l11 * g12 + 2 * l21 * g22
    g_l22 = 2 * l22 * g22
    return np.stack([g_l11 * expit(raw_head[..., 0]), g_l21, g_l22 * expit(raw_head[..., 2])], axis=-1)


def output_gradient(cache, grad_mean=None, grad_sens=None, grad_pred=None):
    """
    Gradient w.r.t. the raw linear outputs given gradients w.r.t. the forecast quantities.

    Covariance gradients are taken w.r.t. the compact entries (s11, s12, s22), where s12 is the single
    off-diagonal variable.

    Args:
        cache (ForwardCache): Cache of the forward pass.
        grad_mean (np.ndarray, optional): Shape (B, T, 2).
        grad_sens (np.ndarray, optional): Shape (B, T, 3).
        grad_pred (np.ndarray, optional): Shape (B, T, 3).

    Returns:
        (np.ndarray): Gradient of shape (B, T * 8).
    """
    raw = cache.raw
    grad = np.zeros_like(raw)
    if grad_mean is not None:
        grad[..., :2] = grad_mean
    if grad_sens is not None:
        grad[..., 2:5] = _factor_grad(raw[..., 2:5], cache.sens_factor, grad_sens)
    if grad_pred is not None:
        grad[..., 5:8] = _factor_grad(raw[..., 5:8], cache.pred_factor, grad_pred)
    return grad.reshape(len(raw), -1)


def backward(params, cfg, cache, grad_raw):
    """
    Backpropagation of an output gradient through the network.

    Args:
        params (NetParams): Parameters used in the forward pass.
        cfg (NetConfig): Architecture.
        cache (ForwardCache): Cache of the forward pass.
        grad_raw (np.ndarray): Gradient w.r.t. the raw outputs, shape (B, output_dim).

    Returns:
        (NetParams): Gradients with the same structure as `params`.
    """
    n_layers = len(params.weights)
    grad_w = [None] * n_layers
    grad_b = [None] * n_layers
    delta = grad_raw
    for layer in range(n_layers - 1, -1, -1):
        if layer == 0:
            previous = cache.inputs
        else:
            previous = cache.activations[layer - 1]
            if cache.masks[layer - 1] is not None:
                previous = previous * cache.masks[layer - 1]
        grad_w[layer] = previous.T @ delta
        grad_b[layer] = delta.sum(axis=0)
        if layer > 0:
            upstream = delta @ params.weights[layer].T
            if cache.masks[layer - 1] is not None:
                upstream = upstream * cache.masks[layer - 1]
            delta = upstream * _activation_grad(cache.activations[layer - 1], cfg.activation)
    return NetParams(weights=grad_w, biases=grad_b, seed=params.seed)


def predict(params, cfg, inputs, rng=None):
    """
    Forward pass returning only the outputs.
    """
    out, _ = forward(params, cfg, inputs, rng=rng)
    return out

