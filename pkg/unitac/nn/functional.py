#  * Copyright (c) 2024-2026. Authors: see NOTICE file.
#  *
#  * Licensed under the Apache License, Version 2.0 (the "License");
#  * you may not use this file except in compliance with the License.
#  * You may obtain a copy of the License at
#  *
#  *      http://www.apache.org/licenses/LICENSE-2.0
#  *
#  * Unless required by applicable law or agreed to in writing, software
#  * distributed under the License is distributed on an "AS IS" BASIS,
#  * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#  * See the License for the specific language governing permissions and
#  * limitations under the License.
"""
Fused differentiable functions, each with a hand-written backward pass.
"""
import math
from typing import Optional, Tuple

import numpy as np

from unitac.exceptions import DataProblem
from unitac.nn.tensor import Tensor

GELU_COEFFICIENT = 0.044715
SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)


def _stable_softmax(x: np.ndarray, axis: int, mask: Optional[np.ndarray]) -> np.ndarray:
    if mask is not None:
        x = np.where(mask, -np.inf, x)
    peak = np.max(x, axis=axis, keepdims=True)
    peak = np.where(np.isfinite(peak), peak, 0.0)
    e = np.exp(x - peak)
    total = e.sum(axis=axis, keepdims=True)
    return np.divide(e, total, out=np.zeros_like(e), where=total > 0)


def softmax(x: Tensor, axis: int = -1, mask: Optional[np.ndarray] = None) -> Tensor:
    """
    Softmax along `axis`. Positions where `mask` is True get probability 0;
    a row whose positions are all masked is all zeros.
    """
    y = _stable_softmax(x.data, axis, mask)

    def backward(g):
        x._accumulate(y * (g - np.sum(g * y, axis=axis, keepdims=True)))
    return Tensor._make(y, (x,), backward)


def log_softmax(x: Tensor, axis: int = -1) -> Tensor:
    shifted = x.data - np.max(x.data, axis=axis, keepdims=True)
    out = shifted - np.log(np.exp(shifted).sum(axis=axis, keepdims=True))

    def backward(g):
        x._accumulate(g - np.exp(out) * g.sum(axis=axis, keepdims=True))
    return Tensor._make(out, (x,), backward)


def layer_norm(x: Tensor, gamma: Tensor, beta: Tensor, eps: float = 1e-5) -> Tensor:
    """Normalize over the last axis, then scale by `gamma` and shift by `beta`."""
    mu = x.data.mean(axis=-1, keepdims=True)
    centered = x.data - mu
    inv_std = 1.0 / np.sqrt((centered ** 2).mean(axis=-1, keepdims=True) + eps)
    xhat = centered * inv_std

    def backward(g):
        if gamma.requires_grad:
            gamma._accumulate((g * xhat).reshape(-1, xhat.shape[-1]).sum(axis=0))
        if beta.requires_grad:
            beta._accumulate(g.reshape(-1, g.shape[-1]).sum(axis=0))
        if x.requires_grad:
            gxhat = g * gamma.data
            x._accumulate(inv_std * (
                gxhat - gxhat.mean(axis=-1, keepdims=True)
                - xhat * (gxhat * xhat).mean(axis=-1, keepdims=True)
            ))
    return Tensor._make(xhat * gamma.data + beta.data, (x, gamma, beta), backward)


def gelu(x: Tensor) -> Tensor:
    """GELU, tanh approximation."""
    inner = SQRT_2_OVER_PI * (x.data + GELU_COEFFICIENT * x.data ** 3)
    t = np.tanh(inner)
    out = 0.5 * x.data * (1.0 + t)

    def backward(g):
        d_inner = SQRT_2_OVER_PI * (1.0 + 3.0 * GELU_COEFFICIENT * x.data ** 2)
        x._accumulate(g * (0.5 * (1.0 + t) + 0.5 * x.data * (1.0 - t ** 2) * d_inner))
    return Tensor._make(out, (x,), backward)


def cross_entropy(
    logits: Tensor, targets: np.ndarray, weights: Optional[np.ndarray] = None,
    reduction: str = 'mean'
) -> Tensor:
    """
    Token cross-entropy of (N, V) logits against N target ids.

    Parameters
    ----------
    logits
        (..., V) logits, flattened over the leading axes.
    targets
        Integer target ids with the leading shape of `logits`.
    weights
        Optional per-token weights (0 masks a token out).
    reduction
        'sum' returns the weighted sum of token losses, 'mean' divides it by
        the sum of weights.
    """
    vocab = logits.shape[-1]
    flat = logits.data.reshape(-1, vocab)
    targets = np.asarray(targets, dtype=np.int64).reshape(-1)
    if targets.shape[0] != flat.shape[0]:
        raise DataProblem("Invalid targets", f"{targets.shape[0]} targets for {flat.shape[0]} positions.")
    if np.any(targets < 0) or np.any(targets >= vocab):
        raise DataProblem("Invalid targets", f"Target ids must be in 0..{vocab - 1}.")
    weights = np.ones(flat.shape[0], dtype=flat.dtype) if weights is None \
        else np.asarray(weights, dtype=flat.dtype).reshape(-1)

    shifted = flat - flat.max(axis=1, keepdims=True)
    log_norm = np.log(np.exp(shifted).sum(axis=1))
    rows = np.arange(flat.shape[0])
    nll = log_norm - shifted[rows, targets]
    total = float((weights * nll).sum())
    scale = 1.0
    if reduction == 'mean':
        denominator = float(weights.sum())
        if denominator <= 0:
            raise DataProblem("Invalid targets", "No target token has a positive weight.")
        scale = 1.0 / denominator
    elif reduction != 'sum':
        raise ValueError(f"Unknown reduction {reduction}")

    def backward(g):
        probs = np.exp(shifted - log_norm[:, None])
        probs[rows, targets] -= 1.0
        grad = probs * (weights * scale)[:, None] * g
        logits._accumulate(grad.reshape(logits.shape))
    return Tensor._make(np.asarray(total * scale, dtype=flat.dtype), (logits,), backward)


def softmax_cross_entropy(logits: np.ndarray, target: int) -> Tuple[float, np.ndarray]:
    """
    Loss and gradient of `-log softmax(logits)[target]` for a single logit
    vector, computed with max subtraction.

    Returns
    -------
    loss
        The cross-entropy.
    gradient
        `softmax(logits) - one_hot(target)`.
    """
    logits = np.asarray(logits, dtype=np.float64)
    if not 0 <= target < logits.shape[-1]:
        raise DataProblem("Invalid target", f"Target {target} is not below {logits.shape[-1]}.")
    shifted = logits - logits.max()
    log_norm = np.log(np.exp(shifted).sum())
    probs = np.exp(shifted - log_norm)
    gradient = probs.copy()
    gradient[target] -= 1.0
    return float(log_norm - shifted[target]), gradient
