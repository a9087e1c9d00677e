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
from enum import Enum
from typing import Tuple

from pydantic import BaseModel, confloat, conint, validator

from unitac.exceptions import ConfigurationProblem

DEFAULT_ACCENTS_PER_SENTENCE = 6
DEFAULT_INFERENCE_NOISE_RANGE = (0.02, 0.10)
DEFAULT_DURATION_NOISE_RANGE = (0.0, 0.2)


class StrategyKind(str, Enum):
    """
    How sentences are spread over accents.

    * `NON_OVERLAPPED` - Every sentence is rendered once, with a random accent.
    * `OVERLAPPED` - Every sentence is rendered under several accents.
    """

    NON_OVERLAPPED = 'non-overlapped'
    OVERLAPPED = 'overlapped'


class AugmentStrategy(BaseModel):
    kind: StrategyKind = StrategyKind.OVERLAPPED
    accents_per_sentence: conint(ge=1) = DEFAULT_ACCENTS_PER_SENTENCE

    class Config:
        frozen = True

    @property
    def pairs_per_sentence(self) -> int:
        if self.kind == StrategyKind.NON_OVERLAPPED:
            return 1
        return self.accents_per_sentence

    def n_sentences(self, budget: int) -> int:
        """
        Number of distinct sentences needed for `budget` pairs.

        Raises
        ------
        ConfigurationProblem
            If the budget is not a positive multiple of the pairs per sentence.
        """
        if budget < 1:
            raise ConfigurationProblem(detail=f"The pair budget must be positive, got {budget}.")
        if budget % self.pairs_per_sentence != 0:
            raise ConfigurationProblem(
                detail=f"The budget {budget} is not divisible by "
                       f"{self.pairs_per_sentence} accents per sentence."
            )
        return budget // self.pairs_per_sentence

    def __str__(self) -> str:
        if self.kind == StrategyKind.NON_OVERLAPPED:
            return self.kind.value
        return f"{self.kind.value}({self.accents_per_sentence})"


class AugmentConfig(BaseModel):
    """
    Per-pair randomization of the render noise. Each pair draws its
    inference and duration noise scales uniformly in these ranges.
    """
    inference_noise_range: Tuple[confloat(ge=0), confloat(ge=0)] = DEFAULT_INFERENCE_NOISE_RANGE
    duration_noise_range: Tuple[confloat(ge=0), confloat(ge=0)] = DEFAULT_DURATION_NOISE_RANGE

    class Config:
        frozen = True

    @validator('inference_noise_range', 'duration_noise_range')
    def check_range(cls, value):
        low, high = value
        if high < low:
            raise ValueError(f"invalid range ({low}, {high})")
        return value
