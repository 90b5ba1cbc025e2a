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


from dataclasses import asdict, dataclass
from typing import Tuple

from uqtraj.utils.exceptions import InvalidArgument

ALLOWED_ACTIVATIONS = ["tanh", "relu"]

# per observed step: x, y, sxx, sxy, syy
INPUT_CHANNELS = 5
# per future step: mean (2), sensing factor (3), prediction factor (3)
OUTPUT_CHANNELS = 8


@dataclass(frozen=True)
class NetConfig:
    """
    Architecture and loss settings of the encoder-decoder forecaster.

    Attributes:
        past_steps (int): Observed steps. By default 8.
        future_steps (int): Predicted steps. By default 12.
        encoder (tuple of int): Hidden sizes of the encoder. By default (128, 64).
        latent (int): Width of the latent layer. By default 32.
        decoder (tuple of int): Hidden sizes of the decoder. By default (64, 128).
        activation (str): Hidden activation, `'tanh'` or `'relu'`. By default `'tanh'`.
        beta (float): Exponent of the variance weighting of the NLL, in [0, 1]. By default 0.5.
        loss_weight_mse (float): Weight of the covariance MSE in the joint loss. By default 1.0.
        dropout_p (float): Dropout probability of hidden units, in [0, 1). By default 0.
    """

    past_steps: int = 8
    future_steps: int = 12
    encoder: Tuple[int, ...] = (128, 64)
    latent: int = 32
    decoder: Tuple[int, ...] = (64, 128)
    activation: str = "tanh"
    beta: float = 0.5
    loss_weight_mse: float = 1.0
    dropout_p: float = 0.0

    def __post_init__(self):
        """
        Validates the configuration.
        """
        object.__setattr__(self, "encoder", tuple(int(s) for s in self.encoder))
        object.__setattr__(self, "decoder", tuple(int(s) for s in self.decoder))
        if self.past_steps < 1 or self.future_steps < 1:
            raise InvalidArgument("past_steps and future_steps need to be positive")
        if self.latent < 1 or any(s < 1 for s in self.encoder + self.decoder):
            raise InvalidArgument("Layer sizes need to be positive")
        if self.activation not in ALLOWED_ACTIVATIONS:
            raise InvalidArgument(f"activation needs to be one of {ALLOWED_ACTIVATIONS}, got {self.activation}")
        if not 0 <= self.beta <= 1:
            raise InvalidArgument(f"beta needs to be in [0, 1], got {self.beta}")
        if not self.loss_weight_mse >= 0:
            raise InvalidArgument(f"loss_weight_mse needs to be non-negative, got {self.loss_weight_mse}")
        if not 0 <= self.dropout_p < 1:
            raise InvalidArgument(f"dropout_p needs to be in [0, 1), got {self.dropout_p}")

    @property
    def input_dim(self):
        """
        (int): Flattened input size, 40 by default.
        """
        return self.past_steps * INPUT_CHANNELS

    @property
    def output_dim(self):
        """
        (int): Flattened output size, 96 by default.
        """
        return self.future_steps * OUTPUT_CHANNELS

    @property
    def layer_sizes(self):
        """
        (list of int): Sizes of all layers from input to output.
        """
        return [self.input_dim, *self.encoder, self.latent, *self.decoder, self.output_dim]

    def to_dict(self):
        """
        Returns the configuration as a JSON serializable dict.
        """
        config = asdict(self)
        config["encoder"] = list(self.encoder)
        config["decoder"] = list(self.decoder)
        return config

    @classmethod
    def from_dict(cls, config):
        """
        Builds a configuration from `to_dict` output. Unknown keys raise InvalidArgument.
        """
        unknown = set(config) - set(cls.__dataclass_fields__)
        if unknown:
            raise InvalidArgument(f"Unknown NetConfig keys: {sorted(unknown)}")
        return cls(**config)

    @classmethod
    def small(cls, **overrides):
        """
        Tiny architecture (8-8-8 hidden units) for gradient checks and tests.
        """
        settings = dict(encoder=(8,), latent=8, decoder=(8,))
        settings.update(overrides)
        return cls(**settings)
