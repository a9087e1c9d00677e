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
from typing import List, NamedTuple, Optional, Tuple

import numpy as np

from unitac.exceptions import ConfigurationProblem
from unitac.s2u.units import UnitSequence, has_adjacent_duplicates, reduce

log = logging.getLogger("unitac.pc")

DEFAULT_BEAM_SIZE = 8


class Hypothesis(NamedTuple):
    """
    A decoded unit sequence.

    `score` is the sum of the token log-probabilities, EOS included when the
    hypothesis is finished. `normalized_score` divides it by the number of
    scored tokens.
    """
    units: UnitSequence
    score: float
    normalized_score: float
    finished: bool

    @property
    def has_adjacent_duplicates(self) -> bool:
        return has_adjacent_duplicates(self.units)

    @property
    def reduced_units(self) -> UnitSequence:
        return reduce(self.units)


def _hypothesis(units: List[int], score: float, finished: bool) -> Hypothesis:
    length = len(units) + 1 if finished else max(1, len(units))
    return Hypothesis(UnitSequence(units), float(score), float(score) / length, finished)


def _masked(log_probs: np.ndarray, forbidden: Tuple[int, ...]) -> np.ndarray:
    log_probs = np.array(log_probs, dtype=np.float64)
    if forbidden:
        log_probs[..., list(forbidden)] = -np.inf
    return log_probs


def _max_len(scorer, max_len: Optional[int]) -> int:
    if max_len is None:
        max_len = getattr(scorer, 'max_len', None)
    if max_len is None or max_len < 1:
        raise ConfigurationProblem(detail="The decoding length limit must be at least 1.")
    return int(max_len)


def decode_greedy(scorer, frames: np.ndarray, max_len: Optional[int] = None) -> Hypothesis:
    """
    Pick the most probable token (lowest id on ties) at every step until
    EOS or `max_len` steps.
    """
    max_len = _max_len(scorer, max_len)
    state = scorer.start(frames)
    units: List[int] = []
    score = 0.0
    for _ in range(max_len):
        log_probs = _masked(scorer.next_log_probs(state, [units])[0], scorer.forbidden_ids)
        token = int(np.argmax(log_probs))
        score = score + log_probs[token]
        if token == scorer.eos_id:
            return _hypothesis(units, score, finished=True)
        units = units + [token]
    return _hypothesis(units, score, finished=False)


def beam_decode(
    scorer, frames: np.ndarray, beam_size: int = DEFAULT_BEAM_SIZE,
    length_norm: bool = False, max_len: Optional[int] = None
) -> List[Hypothesis]:
    """
    Beam search over unit sequences.

    At every step the extensions of the active prefixes are ranked by
    cumulative log-probability (ties by prefix rank, then token id). An
    EOS extension ranked within the first `beam_size` is moved to the
    finished pool; the first `beam_size` other extensions stay active.
    The search stops once the best finished hypothesis cannot be beaten
    by any active one, under raw or length-normalized scores.

    Returns
    -------
    hypotheses
        Finished hypotheses sorted by the selected criterion, best first.
        When none finished within `max_len` steps, the active ones are
        returned unfinished.

    Raises
    ------
    ConfigurationProblem
        If `beam_size` < 1.
    """
    if beam_size < 1:
        raise ConfigurationProblem(detail=f"The beam size must be at least 1, got {beam_size}.")
    max_len = _max_len(scorer, max_len)
    state = scorer.start(frames)

    active: List[Tuple[List[int], float]] = [([], 0.0)]
    finished: List[Hypothesis] = []

    def key(h: Hypothesis) -> float:
        return h.normalized_score if length_norm else h.score

    for _ in range(max_len):
        log_probs = _masked(
            scorer.next_log_probs(state, [units for units, _ in active]), scorer.forbidden_ids
        )
        scores = np.array([score for _, score in active], dtype=np.float64)
        totals = scores[:, None] + log_probs
        n_active, vocab = totals.shape
        beams = np.repeat(np.arange(n_active), vocab)
        tokens = np.tile(np.arange(vocab), n_active)
        flat = totals.reshape(-1)
        order = np.lexsort((tokens, beams, -flat))

        extended: List[Tuple[List[int], float]] = []
        for rank, i in enumerate(order):
            if not np.isfinite(flat[i]) or (len(extended) >= beam_size and rank >= beam_size):
                break
            units, token = active[beams[i]][0], int(tokens[i])
            if token == scorer.eos_id:
                if rank < beam_size:
                    finished.append(_hypothesis(units, flat[i], finished=True))
            elif len(extended) < beam_size:
                extended.append((units + [token], float(flat[i])))
        active = extended

        if not active:
            break
        if finished:
            best_finished = max(key(h) for h in finished)
            best_active = max(score for _, score in active)
            bound = best_active / max_len if length_norm else best_active
            if best_finished >= bound:
                break

    if finished:
        return sorted(finished, key=key, reverse=True)
    hypotheses = [_hypothesis(units, score, finished=False) for units, score in active]
    return sorted(hypotheses, key=key, reverse=True)
