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
Scoring of unit sequences by a corrector model.

Decoders and metrics only talk to a scorer, an object exposing:

* `eos_id` and `forbidden_ids` (ids that are never emitted),
* `start(features)` returning a decoding state for one input,
* `next_log_probs(state, prefixes)` returning one row of next-token
  log-probabilities per prefix (prefixes exclude BOS),
* `token_log_probs(features_list, units_list)` returning, for every
  sequence, the teacher-forced log-probabilities of its units and EOS.
"""
import math
import sys
from typing import Any, List, Sequence, Tuple

import numpy as np

from unitac.exceptions import NumericProblem
from unitac.nn.functional import log_softmax
from unitac.nn.tensor import Tensor, no_grad
from unitac.pc.batching import collate_features, collate_targets
from unitac.pc.model import PCModel
from unitac.utils.iterables import chunks

DEFAULT_SCORING_BATCH = 32
MAX_MEAN_NLL = math.log(sys.float_info.max)


def teacher_forced_log_probs(
    model: PCModel, features: Sequence[np.ndarray], units: Sequence[Sequence[int]]
) -> List[np.ndarray]:
    vocabulary = model.vocabulary
    with no_grad():
        feature_batch = collate_features(features)
        target_batch = collate_targets(units, vocabulary.bos, vocabulary.eos, vocabulary.pad)
        logits = model(feature_batch, target_batch)
        log_probs = log_softmax(logits).data
    gathered = np.take_along_axis(log_probs, target_batch.outputs[..., None], axis=-1)[..., 0]
    return [gathered[i, :len(u) + 1].astype(np.float64) for i, u in enumerate(units)]


class ModelScorer:
    def __init__(self, model: PCModel, batch_size: int = DEFAULT_SCORING_BATCH):
        self.model = model
        self.batch_size = batch_size
        vocabulary = model.vocabulary
        self.vocabulary = vocabulary
        self.eos_id = vocabulary.eos
        self.forbidden_ids: Tuple[int, ...] = (vocabulary.bos, vocabulary.pad)

    @property
    def max_len(self) -> int:
        return self.model.max_decode_len

    def start(self, frames: np.ndarray) -> Any:
        with no_grad():
            batch = collate_features([frames])
            return self.model.encode(batch)

    def next_log_probs(self, state: Any, prefixes: Sequence[Sequence[int]]) -> np.ndarray:
        memory, memory_padding = state
        n = len(prefixes)
        tokens = np.array(
            [[self.vocabulary.bos] + list(p) for p in prefixes], dtype=np.int64
        )
        with no_grad():
            repeated = Tensor(np.repeat(memory.data, n, axis=0))
            logits = self.model.decoder(
                tokens, memory=repeated, memory_padding=np.repeat(memory_padding, n, axis=0)
            )
            last = Tensor(logits.data[:, -1, :])
            return log_softmax(last).data.astype(np.float64)

    def token_log_probs(
        self, features: Sequence[np.ndarray], units: Sequence[Sequence[int]]
    ) -> List[np.ndarray]:
        out = []
        for index in chunks(range(len(features)), self.batch_size):
            out.extend(teacher_forced_log_probs(
                self.model, [features[i] for i in index], [units[i] for i in index]
            ))
        return out


def corpus_nll(scorer, pairs: Sequence) -> Tuple[float, int]:
    """Total negative log-likelihood of the pair targets (EOS included) and token count."""
    log_probs = scorer.token_log_probs(
        [p.input.frames for p in pairs], [p.target.units for p in pairs]
    )
    total = -float(sum(float(lp.sum()) for lp in log_probs))
    count = int(sum(lp.shape[0] for lp in log_probs))
    return total, count


def perplexity_from_nll(total: float, count: int) -> float:
    """
    `exp(total / count)`.

    Raises
    ------
    NumericProblem
        If the mean negative log-likelihood is not finite or its
        exponential overflows.
    """
    mean = total / count
    if not math.isfinite(mean) or mean > MAX_MEAN_NLL:
        raise NumericProblem(
            "Perplexity overflow",
            f"The mean negative log-likelihood is {mean} over {count} tokens."
        )
    return math.exp(mean)
