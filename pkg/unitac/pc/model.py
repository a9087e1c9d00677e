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
import logging
from typing import Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, conint, validator

from unitac.exceptions import DimensionMismatchProblem
from unitac.nn.attention import AttentionConfig, DEFAULT_REL_WINDOW
from unitac.nn.functional import cross_entropy
from unitac.nn.modules import Embedding, LayerNorm, Linear, Module
from unitac.nn.tensor import Tensor
from unitac.nn.transformer import DecoderLayer, EncoderLayer, sinusoidal_positions
from unitac.pc.batching import FeatureBatch, TargetBatch
from unitac.utils.seeds import rng_for

log = logging.getLogger("unitac.pc")

DEFAULT_MAX_DECODE_LEN = 200


class Vocabulary(BaseModel):
    """
    Decoder vocabulary: units `0..K-1` followed by BOS, EOS and PAD.
    """
    n_units: conint(ge=2)

    class Config:
        frozen = True

    @property
    def bos(self) -> int:
        return self.n_units

    @property
    def eos(self) -> int:
        return self.n_units + 1

    @property
    def pad(self) -> int:
        return self.n_units + 2

    @property
    def size(self) -> int:
        return self.n_units + 3


class PCConfig(BaseModel):
    feature_dim: conint(ge=1)
    n_units: conint(ge=2)
    model_dim: conint(ge=1) = 64
    heads: conint(ge=1) = 4
    encoder_layers: conint(ge=0) = 2
    decoder_layers: conint(ge=0) = 2
    ff_dim: conint(ge=1) = 256
    rel_window: conint(ge=0) = DEFAULT_REL_WINDOW
    subsample: conint(ge=1) = 1
    seed: int = 0

    class Config:
        frozen = True

    @validator('heads')
    def check_heads(cls, value, values):
        model_dim = values.get('model_dim')
        if model_dim is not None and model_dim % value != 0:
            raise ValueError(f"model_dim {model_dim} is not divisible by {value} heads")
        return value

    @property
    def vocabulary(self) -> Vocabulary:
        return Vocabulary(n_units=self.n_units)

    @property
    def attention(self) -> AttentionConfig:
        return AttentionConfig(
            heads=self.heads, model_dim=self.model_dim, rel_window=self.rel_window
        )


def stack_frames(batch: FeatureBatch, factor: int) -> FeatureBatch:
    """
    Concatenate every `factor` consecutive frames into one. A stacked frame
    is padding only when all its frames are.
    """
    if factor == 1:
        return batch
    b, t, d = batch.frames.shape
    padded_t = -(-t // factor) * factor
    frames = np.zeros((b, padded_t, d), dtype=batch.frames.dtype)
    frames[:, :t] = batch.frames
    padding = np.ones((b, padded_t), dtype=bool)
    padding[:, :t] = batch.padding
    return FeatureBatch(
        frames.reshape(b, padded_t // factor, d * factor),
        padding.reshape(b, padded_t // factor, factor).all(axis=2),
    )


class SpeechEncoder(Module):
    def __init__(self, config: PCConfig, rng: np.random.Generator):
        self.subsample = config.subsample
        self.model_dim = config.model_dim
        self.input = Linear(config.feature_dim * config.subsample, config.model_dim, rng)
        self.layers = [
            EncoderLayer(config.attention, config.ff_dim, rng)
            for _ in range(config.encoder_layers)
        ]
        self.norm = LayerNorm(config.model_dim)

    def forward(
        self, batch: FeatureBatch, masked: Optional[np.ndarray] = None
    ) -> Tuple[Tensor, np.ndarray]:
        """
        Encode a batch. `masked` (B, T / subsample) zeroes whole stacked
        frames before projection.
        """
        batch = stack_frames(batch, self.subsample)
        frames = batch.frames
        if masked is not None:
            frames = np.where(masked[..., None], 0.0, frames)
        x = self.input(Tensor(frames, dtype=self.dtype))
        x = x + sinusoidal_positions(x.shape[1], self.model_dim)
        for layer in self.layers:
            x = layer(x, padding=batch.padding)
        return self.norm(x), batch.padding


class UnitLanguageDecoder(Module):
    """
    Causal transformer over unit tokens. Given an encoder memory it
    cross-attends to it; without memory it is a unit language model.
    """

    def __init__(self, config: PCConfig, rng: np.random.Generator):
        self.model_dim = config.model_dim
        self.embedding = Embedding(config.vocabulary.size, config.model_dim, rng)
        self.layers = [
            DecoderLayer(config.attention, config.ff_dim, rng)
            for _ in range(config.decoder_layers)
        ]
        self.norm = LayerNorm(config.model_dim)
        self.head = Linear(config.model_dim, config.vocabulary.size, rng)

    def forward(
        self, tokens: np.ndarray, memory: Optional[Tensor] = None,
        padding: Optional[np.ndarray] = None, memory_padding: Optional[np.ndarray] = None
    ) -> Tensor:
        x = self.embedding(tokens) * np.sqrt(self.model_dim)
        x = x + sinusoidal_positions(x.shape[1], self.model_dim)
        for layer in self.layers:
            x = layer(x, memory=memory, padding=padding, memory_padding=memory_padding)
        return self.head(self.norm(x))


class PCModel(Module):
    """
    The pronunciation corrector: a speech encoder over feature frames and a
    unit decoder predicting native reduced unit sequences.

    `median_target_length` is the median reduced target length of the
    training corpus; decoding stops after 4 times that many steps by default.
    """

    def __init__(self, config: PCConfig):
        self.config = config
        self.vocabulary = config.vocabulary
        rng = rng_for(config.seed, "init")
        self.encoder = SpeechEncoder(config, rng)
        self.decoder = UnitLanguageDecoder(config, rng)
        self.median_target_length: Optional[float] = None

    def check_features(self, dim: int) -> None:
        if dim != self.config.feature_dim:
            raise DimensionMismatchProblem("Input features", self.config.feature_dim, dim)

    def encode(self, batch: FeatureBatch) -> Tuple[Tensor, np.ndarray]:
        self.check_features(batch.frames.shape[2])
        return self.encoder(batch)

    def forward(self, features: FeatureBatch, targets: TargetBatch) -> Tensor:
        """(B, L, V) next-token logits under teacher forcing."""
        memory, memory_padding = self.encode(features)
        return self.decoder(
            targets.inputs, memory=memory, padding=targets.padding,
            memory_padding=memory_padding
        )

    def loss(
        self, features: FeatureBatch, targets: TargetBatch, reduction: str = 'sum'
    ) -> Tensor:
        """Token cross-entropy of the targets, padding excluded, EOS included."""
        logits = self(features, targets)
        return cross_entropy(logits, targets.outputs, weights=targets.weights, reduction=reduction)

    @property
    def max_decode_len(self) -> int:
        if not self.median_target_length:
            return DEFAULT_MAX_DECODE_LEN
        return max(1, int(np.ceil(4 * self.median_target_length)))

    def set_target_lengths(self, lengths: Sequence[int]) -> None:
        if len(lengths) > 0:
            self.median_target_length = float(np.median(lengths))
