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

from unitac.nn.attention import AttentionConfig, MultiHeadAttention
from unitac.nn.modules import FeedForward, LayerNorm, Module
from unitac.nn.tensor import Tensor


def sinusoidal_positions(length: int, dim: int) -> np.ndarray:
    """(length, dim) sinusoidal position table."""
    positions = np.arange(length)[:, None]
    rates = np.exp(-np.log(10000.0) * (np.arange(0, dim, 2) / dim))
    table = np.zeros((length, dim))
    table[:, 0::2] = np.sin(positions * rates)
    table[:, 1::2] = np.cos(positions * rates[:dim // 2])
    return table


class EncoderLayer(Module):
    """Pre-norm self-attention block with relative position bias."""

    def __init__(self, config: AttentionConfig, ff_dim: int, rng: np.random.Generator):
        self.norm_attention = LayerNorm(config.model_dim)
        self.attention = MultiHeadAttention(config, rng, relative=True)
        self.norm_ff = LayerNorm(config.model_dim)
        self.ff = FeedForward(config.model_dim, ff_dim, rng)

    def forward(self, x: Tensor, padding: Optional[np.ndarray] = None) -> Tensor:
        x = x + self.attention(self.norm_attention(x), key_padding=padding)
        return x + self.ff(self.norm_ff(x))


class DecoderLayer(Module):
    """
    Pre-norm block: causal self-attention with relative position bias,
    cross-attention over the encoder memory, feed-forward.

    Without memory the cross-attention sub-block is skipped, which turns the
    stack into a causal language model.
    """

    def __init__(self, config: AttentionConfig, ff_dim: int, rng: np.random.Generator):
        self.norm_self = LayerNorm(config.model_dim)
        self.self_attention = MultiHeadAttention(config, rng, relative=True)
        self.norm_cross = LayerNorm(config.model_dim)
        self.cross_attention = MultiHeadAttention(config, rng, relative=False)
        self.norm_ff = LayerNorm(config.model_dim)
        self.ff = FeedForward(config.model_dim, ff_dim, rng)

    def forward(
        self, x: Tensor, memory: Optional[Tensor] = None,
        padding: Optional[np.ndarray] = None, memory_padding: Optional[np.ndarray] = None
    ) -> Tensor:
        x = x + self.self_attention(self.norm_self(x), key_padding=padding, causal=True)
        if memory is not None:
            x = x + self.cross_attention(
                self.norm_cross(x), memory=memory, key_padding=memory_padding
            )
        return x + self.ff(self.norm_ff(x))
