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
from typing import List, Sequence, Tuple

from pydantic import BaseModel, validator

from unitac.corpus.inventory import PhonemeInventory
from unitac.exceptions import ConfigurationProblem
from unitac.utils.seeds import rng_for

log = logging.getLogger("unitac.corpus")

DEFAULT_LEN_RANGE = (5, 30)
SENTENCE_ID_PREFIX = "s"


class Sentence(BaseModel):
    id: str
    phonemes: Tuple[int, ...]

    class Config:
        frozen = True

    @validator('phonemes')
    def check_nonempty(cls, value):
        if len(value) == 0:
            raise ValueError("a sentence has at least one phoneme")
        return value

    def __len__(self) -> int:
        return len(self.phonemes)


def sample_sentences(
    n: int, len_range: Tuple[int, int] = DEFAULT_LEN_RANGE,
    inventory: PhonemeInventory = None, seed: int = 0,
    id_prefix: str = SENTENCE_ID_PREFIX
) -> List[Sentence]:
    """
    Sample `n` sentences whose lengths are uniform in `len_range` (inclusive)
    and whose phonemes are uniform over the content phonemes of `inventory`.

    The output is a pure function of the parameters and the seed.

    Raises
    ------
    ConfigurationProblem
        If `n` < 1, the length range is invalid or the inventory has no
        content phoneme.
    """
    if inventory is None:
        inventory = PhonemeInventory.create()
    min_len, max_len = len_range
    if n < 1:
        raise ConfigurationProblem(detail=f"At least one sentence must be sampled, got {n}.")
    if min_len < 1 or max_len < min_len:
        raise ConfigurationProblem(detail=f"Invalid sentence length range ({min_len}, {max_len}).")
    if inventory.n_content < 1:
        raise ConfigurationProblem(detail="The inventory has no content phoneme.")

    rng = rng_for(seed, "sentences")
    lengths = rng.integers(min_len, max_len + 1, size=n)
    width = len(str(n - 1))
    sentences = []
    for i, length in enumerate(lengths):
        phonemes = rng.integers(0, inventory.n_content, size=int(length))
        sentences.append(Sentence(
            id=f"{id_prefix}{i:0{width}d}",
            phonemes=tuple(int(p) for p in phonemes)
        ))
    log.debug(f"Sampled {n} sentences (lengths {min_len}..{max_len}, seed {seed})")
    return sentences


def split_train_val(
    sentences: Sequence[Sentence], ratio: Tuple[int, int] = (1000, 1), seed: int = 0
) -> Tuple[List[Sentence], List[Sentence]]:
    """
    Partition sentences into train and validation sets in proportion to
    `ratio` = (train_parts, val_parts). The validation size is rounded down,
    so the remainder goes to train. Both sets keep the input order.

    Raises
    ------
    ConfigurationProblem
        If a ratio part is not positive or there are fewer sentences than
        `train_parts + val_parts`.
    """
    train_parts, val_parts = ratio
    if train_parts < 1 or val_parts < 1:
        raise ConfigurationProblem(detail=f"Ratio parts must be positive, got {ratio}.")
    n = len(sentences)
    if n == 0 or n < train_parts + val_parts:
        raise ConfigurationProblem(
            detail=f"Cannot split {n} sentences with ratio {train_parts}:{val_parts}."
        )

    n_val = (n * val_parts) // (train_parts + val_parts)
    rng = rng_for(seed, "split")
    permutation = rng.permutation(n)
    val_indices = set(int(i) for i in permutation[:n_val])

    train, val = [], []
    for i, sentence in enumerate(sentences):
        (val if i in val_indices else train).append(sentence)
    return train, val
