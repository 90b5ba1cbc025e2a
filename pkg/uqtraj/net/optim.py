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


@dataclass(eq=False)
class OptimState:
    """
    Adam state of one network.

    Attributes:
        m (list of np.ndarray): First-moment estimates, one per parameter array.
        v (list of np.ndarray): Second-moment estimates, one per parameter array.
        step (int): Number of updates taken.
        learning_rate (float): Step size. By default 1e-3.
        beta1 (float): Decay of the first moment. By default 0.9.
        beta2 (float): Decay of the second moment. By default 0.999.
        eps (float): Denominator offset. By default 1e-8.
    """

    m: List[np.ndarray]
    v: List[np.ndarray]
    step: int = 0
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8


def init_optim_state(params, learning_rate=1e-3, beta1=0.9, beta2=0.999, eps=1e-8):
    """
    Zero moments shaped like the parameters.

    Args:
        params (NetParams): Network parameters.
        learning_rate (float, optional): Step size.
        beta1 (float, optional): First-moment decay.
        beta2 (float, optional): Second-moment decay.
        eps (float, optional): Denominator offset.

    Returns:
        (OptimState): Fresh optimizer state.
    """
    arrays = params.arrays()
    return OptimState(
        m=[np.zeros_like(a) for a in arrays],
        v=[np.zeros_like(a) for a in arrays],
        learning_rate=learning_rate,
        beta1=beta1,
        beta2=beta2,
        eps=eps,
    )


def adam_step(params, grads, state):
    """
    One bias-corrected Adam update of the parameters, in place.

    Args:
        params (NetParams): Parameters, updated in place.
        grads (NetParams): Gradients with the same structure.
        state (OptimState): Optimizer state, updated in place.

    Returns:
        (NetParams): The updated parameters.
    """
    state.step += 1
    correction1 = 1.0 - state.beta1 ** state.step
    correction2 = 1.0 - state.beta2 ** state.step
    step_size = state.learning_rate / correction1

    for param, grad, m, v in zip(params.arrays(), grads.arrays(), state.m, state.v):
        m *= state.beta1
        m += (1.0 - state.beta1) * grad
        v *= state.beta2
        v += (1.0 - state.beta2) * (grad * grad)
        param -= step_size * m / (np.sqrt(v / correction2) + state.eps)
    return params
