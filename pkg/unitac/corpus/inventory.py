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

from typing import List, Tuple

import numpy as np
from pydantic import BaseModel, conint, validator

from unitac.exceptions import ConfigurationProblem

DEFAULT_INVENTORY_SIZE = 40
DEFAULT_N_CONFUSABLES = 2


class PhonemeInventory(BaseModel):
    """
    The synthetic phonetic content space.

    Phoneme ids are dense in `0..size-1`. The last id is the filler phoneme,
    only ever produced by disfluent (accented) pronunciation; sentences are
    written with the other ids, the content phonemes.
    """
    size: conint(ge=2) = DEFAULT_INVENTORY_SIZE
    confusion_map: Tuple[Tuple[int, ...], ...]

    class Config:
        frozen = True

    @validator('confusion_map')
    def check_confusion_map(cls, value, values):
        size = values.get('size')
        if size is None:
            return value
        if len(value) != size:
            raise ValueError(
                f"confusion map has {len(value)} entries for {size} phonemes"
            )
        for key, confusables in enumerate(value):
            for c in confusables:
                if not 0 <= c < size:
                    raise ValueError(f"confusable {c} of phoneme {key} is not a phoneme id")
                if c == key:
                    raise ValueError(f"phoneme {key} is confusable with itself")
        return value

    @property
    def symbols(self) -> range:
        return range(self.size)

    @property
    def filler(self) -> int:
        return self.size - 1

    @property
    def n_content(self) -> int:
        return self.size - 1

    @property
    def content_symbols(self) -> range:
        return range(self.n_content)

    def confusables(self, phoneme: int) -> Tuple[int, ...]:
        return self.confusion_map[phoneme]

    @classmethod
    def create(
        cls, size: int = DEFAULT_INVENTORY_SIZE,
        n_confusables: int = DEFAULT_N_CONFUSABLES, seed: int = 0
    ) -> "PhonemeInventory":
        """
        Create an inventory whose content phonemes each have `n_confusables`
        distinct confusable content phonemes. The filler has none.
        """
        if size < 2:
            raise ConfigurationProblem(detail=f"An inventory needs at least 2 phonemes, got {size}.")
        n_content = size - 1
        n_confusables = min(n_confusables, n_content - 1)

        rng = np.random.default_rng(seed)
        confusion_map: List[Tuple[int, ...]] = []
        for p in range(n_content):
            others = np.array([q for q in range(n_content) if q != p], dtype=np.int64)
            picked = rng.choice(others, size=n_confusables, replace=False) \
                if n_confusables > 0 else []
            confusion_map.append(tuple(int(q) for q in picked))
        confusion_map.append(tuple())
        return cls(size=size, confusion_map=tuple(confusion_map))
