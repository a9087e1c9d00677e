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

from pydantic import BaseModel, confloat

from unitac.corpus.sentences import Sentence
from unitac.exceptions import DataProblem
from unitac.s2u.units import UnitSequence
from unitac.synth.features import FeatureSequence


class PairMeta(BaseModel):
    pair_id: str
    sentence_id: str
    accent_id: str
    speaker_id: str
    seed: int
    inference_noise_scale: confloat(ge=0) = 0.0
    duration_noise_scale: confloat(ge=0) = 0.0

    class Config:
        frozen = True


class ParallelPair:
    """
    A training example: accented input features and the native reduced
    unit sequence of the same sentence.
    """
    __slots__ = ('input', 'target', 'meta', 'sentence')

    def __init__(
        self, input: FeatureSequence, target: UnitSequence, meta: PairMeta,
        sentence: Optional[Sentence] = None
    ):
        if not target.reduced:
            raise DataProblem("Invalid pair", f"The target of pair {meta.pair_id} is not reduced.")
        self.input = input
        self.target = target
        self.meta = meta
        self.sentence = sentence

    @property
    def accent_id(self) -> str:
        return self.meta.accent_id

    def __eq__(self, o: object) -> bool:
        return isinstance(o, ParallelPair) and self.meta == o.meta \
            and self.target == o.target and self.input == o.input

    def __repr__(self) -> str:
        return f"ParallelPair({self.meta.pair_id}, T={self.input.n_frames}, |target|={len(self.target)})"
