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
from typing import NamedTuple, Sequence

import numpy as np

from unitac.exceptions import EmptyInputProblem


class FeatureBatch(NamedTuple):
    frames: np.ndarray  # (B, T, D)
    padding: np.ndarray  # (B, T), True on padded frames


class TargetBatch(NamedTuple):
    inputs: np.ndarray  # (B, L) BOS-prefixed tokens
    outputs: np.ndarray  # (B, L) EOS-terminated tokens
    padding: np.ndarray  # (B, L)

    @property
    def weights(self) -> np.ndarray:
        return (~self.padding).astype(np.float64)

    @property
    def n_tokens(self) -> int:
        return int((~self.padding).sum())


def collate_features(sequences: Sequence[np.ndarray]) -> FeatureBatch:
    if len(sequences) == 0:
        raise EmptyInputProblem("The feature batch")
    dim = sequences[0].shape[1]
    longest = max(s.shape[0] for s in sequences)
    frames = np.zeros((len(sequences), longest, dim), dtype=np.float64)
    padding = np.ones((len(sequences), longest), dtype=bool)
    for i, s in enumerate(sequences):
        frames[i, :s.shape[0]] = s
        padding[i, :s.shape[0]] = False
    return FeatureBatch(frames, padding)


def collate_targets(sequences: Sequence[Sequence[int]], bos: int, eos: int, pad: int) -> TargetBatch:
    """`[BOS, u1..un]` inputs against `[u1..un, EOS]` outputs, right-padded."""
    if len(sequences) == 0:
        raise EmptyInputProblem("The target batch")
    length = max(len(s) for s in sequences) + 1
    inputs = np.full((len(sequences), length), pad, dtype=np.int64)
    outputs = np.full((len(sequences), length), pad, dtype=np.int64)
    padding = np.ones((len(sequences), length), dtype=bool)
    for i, s in enumerate(sequences):
        n = len(s)
        inputs[i, 0] = bos
        inputs[i, 1:n + 1] = s
        outputs[i, :n] = s
        outputs[i, n] = eos
        padding[i, :n + 1] = False
    return TargetBatch(inputs, outputs, padding)
