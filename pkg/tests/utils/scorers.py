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

from typing import Callable, Sequence, Tuple

import numpy as np

from unitac.augment.pairs import PairMeta, ParallelPair
from unitac.s2u.units import UnitSequence
from unitac.synth.features import FeatureSequence


class TableScorer:
    """
    Scorer whose next-token distribution only depends on the prefix,
    given by `table(prefix) -> probabilities`. The input frames are ignored.
    """

    def __init__(
        self, table: Callable[[Tuple[int, ...]], Sequence[float]], eos_id: int,
        forbidden_ids: Tuple[int, ...] = tuple()
    ):
        self.table = table
        self.eos_id = eos_id
        self.forbidden_ids = forbidden_ids
        self.calls = 0

    def start(self, frames):
        return None

    def next_log_probs(self, state, prefixes):
        self.calls += 1
        return np.log(np.array([self.table(tuple(p)) for p in prefixes], dtype=np.float64))

    def token_log_probs(self, features, units):
        out = []
        for sequence in units:
            sequence = list(sequence)
            tokens = sequence + [self.eos_id]
            out.append(np.array([
                np.log(self.table(tuple(sequence[:i]))[token]) for i, token in enumerate(tokens)
            ]))
        return out


def toy_table(prefix: Tuple[int, ...]) -> Tuple[float, float, float]:
    """Vocabulary a=0, b=1, EOS=2, where beam search beats greedy search."""
    if len(prefix) == 0:
        return 0.5, 0.4, 0.1
    if len(prefix) == 1:
        return (0.3, 0.3, 0.4) if prefix[0] == 0 else (0.05, 0.05, 0.9)
    return 0.01, 0.01, 0.98


def make_pair(units: Sequence[int], frames: np.ndarray = None, pair_id: str = "p0", accent_id: str = "acc0"):
    if frames is None:
        frames = np.zeros((max(1, len(units)), 2))
    meta = PairMeta(
        pair_id=pair_id, sentence_id=pair_id, accent_id=accent_id, speaker_id="spk0", seed=0
    )
    return ParallelPair(FeatureSequence(frames), UnitSequence(units, reduced=True), meta)
