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
from typing import Optional

import numpy as np
from pydantic import BaseModel, conint, validator

from unitac.nn.functional import softmax
from unitac.nn.modules import Linear, Module, Parameter
from unitac.nn.tensor import Tensor

DEFAULT_REL_WINDOW = 16


class AttentionConfig(BaseModel):
    """
    Multi-head attention shape.

    `rel_window` R is the largest relative distance with its own learned
    bias; offsets beyond ±R share the bias of ±R.
    """
    heads: conint(ge=1) = 4
    model_dim: conint(ge=1) = 64
    rel_window: conint(ge=0) = DEFAULT_REL_WINDOW

    class Config:
        frozen = True

    @validator('model_dim')
    def check_divisible(cls, value, values):
        heads = values.get('heads')
        if heads is not None and value % heads != 0:
            raise ValueError(f"model_dim {value} is not divisible by {heads} heads")
        return value

    @property
    def head_dim(self) -> int:
        return self.model_dim // self.heads


def relative_buckets(n_queries: int, n_keys: int, window: int, query_offset: int = 0) -> np.ndarray:
    """(n_queries, n_keys) bucket index `clip(j - i, -R, R) + R`."""
    i = np.arange(query_offset, query_offset + n_queries)[:, None]
    j = np.arange(n_keys)[None, :]
    return np.clip(j - i, -window, window) + window


def causal_mask(n_queries: int, n_keys: int, query_offset: int = 0) -> np.ndarray:
    """True where key `j` lies after query `i`."""
    i = np.arange(query_offset, query_offset + n_queries)[:, None]
    j = np.arange(n_keys)[None, :]
    return j > i


def scaled_dot_product_attention(
    q: Tensor, k: Tensor, v: Tensor, bias: Optional[Tensor] = None,
    mask: Optional[np.ndarray] = None
) -> Tensor:
    """
    `softmax(q kᵀ / sqrt(d) + bias) v` over (..., T, d) tensors.

    `mask` is a boolean array broadcastable to the logits; True blocks
    the corresponding key.
    """
    scale = 1.0 / np.sqrt(q.shape[-1])
    logits = (q @ k.transpose(tuple(range(k.ndim - 2)) + (k.ndim - 1, k.ndim - 2))) * scale
    if bias is not None:
        logits = logits + bias
    return softmax(logits, axis=-1, mask=mask) @ v


class MultiHeadAttention(Module):
    """
    Multi-head attention with an optional learned relative position bias,
    one scalar per head and clamped offset, added to the logits.
    The key projection has no bias.
    """

    def __init__(self, config: AttentionConfig, rng: np.random.Generator, relative: bool = True):
        self.config = config
        m = config.model_dim
        self.query = Linear(m, m, rng)
        self.key = Linear(m, m, rng, bias=False)
        self.value = Linear(m, m, rng)
        self.output = Linear(m, m, rng)
        self.rel_bias = Parameter(np.zeros((config.heads, 2 * config.rel_window + 1))) \
            if relative else None

    def _split_heads(self, x: Tensor) -> Tensor:
        b, t, _ = x.shape
        return x.reshape(b, t, self.config.heads, self.config.head_dim).transpose(0, 2, 1, 3)

    def forward(
        self, x: Tensor, memory: Optional[Tensor] = None,
        key_padding: Optional[np.ndarray] = None, causal: bool = False
    ) -> Tensor:
        """
        Parameters
        ----------
        x
            (B, Tq, M) queries.
        memory
            (B, Tk, M) keys and values; `x` itself when omitted.
        key_padding
            (B, Tk) boolean, True on padded keys.
        causal
            Block keys after the query position.
        """
        source = x if memory is None else memory
        b, tq, m = x.shape
        tk = source.shape[1]

        q = self._split_heads(self.query(x))
        k = self._split_heads(self.key(source))
        v = self._split_heads(self.value(source))

        bias = None
        if self.rel_bias is not None:
            buckets = relative_buckets(tq, tk, self.config.rel_window)
            bias = self.rel_bias[:, buckets]

        mask = None
        if key_padding is not None:
            mask = np.asarray(key_padding, dtype=bool)[:, None, None, :]
        if causal:
            blocked = causal_mask(tq, tk)[None, None, :, :]
            mask = blocked if mask is None else (mask | blocked)

        context = scaled_dot_product_attention(q, k, v, bias=bias, mask=mask)
        merged = context.transpose(0, 2, 1, 3).reshape(b, tq, m)
        return self.output(merged)
