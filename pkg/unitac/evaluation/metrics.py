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
Objective metrics of converted speech.
"""
import math
from collections import Counter
from typing import Iterable, Optional, Sequence

import numpy as np

from unitac.corpus.sentences import Sentence
from unitac.exceptions import DataProblem, EmptyInputProblem
from unitac.pc.model import PCModel
from unitac.pc.scoring import ModelScorer, corpus_nll, perplexity_from_nll
from unitac.s2u.codebook import Codebook
from unitac.s2u.units import UnitSequence, reduce
from unitac.synth.features import FeatureSequence
from unitac.u2s.speaker import speaker_embed
from unitac.utils.iterables import runs


def perplexity(model, pairs: Sequence) -> float:
    """
    Corpus-level perplexity of the pair targets: the exponential of the
    total teacher-forced negative log-likelihood, EOS included, divided by
    the total token count.

    `model` is a `PCModel` or any scorer (see `unitac.pc.scoring`).

    Raises
    ------
    EmptyInputProblem
        If there is no pair.
    NumericProblem
        If the perplexity overflows.
    """
    if len(pairs) == 0:
        raise EmptyInputProblem("The evaluation pair list")
    scorer = ModelScorer(model) if isinstance(model, PCModel) else model
    return perplexity_from_nll(*corpus_nll(scorer, pairs))


def edit_distance(hyp: Sequence[int], ref: Sequence[int]) -> int:
    """Levenshtein distance with unit insertion, deletion and substitution costs."""
    hyp = np.asarray(list(hyp), dtype=np.int64)
    ref = np.asarray(list(ref), dtype=np.int64)
    offsets = np.arange(ref.shape[0] + 1)
    previous = offsets
    for i, symbol in enumerate(hyp, start=1):
        best = np.minimum(previous[1:] + 1, previous[:-1] + (ref != symbol))
        # Insertions chain along the row: cur[j] = min_k(base[k] + j - k).
        base = np.concatenate(([i], best))
        previous = np.minimum.accumulate(base - offsets) + offsets
    return int(previous[-1])


def unit_error_rate(hyp: UnitSequence, ref: UnitSequence) -> float:
    """
    Raises
    ------
    DataProblem
        If the reference is empty.
    """
    if len(ref) == 0:
        raise DataProblem("Undefined error rate", "The reference unit sequence is empty.")
    return edit_distance(hyp, ref) / len(ref)


def collapse(values: Iterable[int]) -> list:
    return [run[0] for run in runs(list(values))]


def phoneme_recovery(
    hyp: UnitSequence, unit_phonemes: np.ndarray, sentence: Sentence,
    filler: Optional[int] = None
) -> float:
    """
    Phoneme-level accuracy of decoded units against the sentence content.

    Units are mapped to phonemes with `unit_phonemes` and adjacent repeats
    are collapsed on both sides. Filler phonemes are removed from the
    reference only. The result is `1 - distance / reference length`,
    floored at 0.
    """
    unit_phonemes = np.asarray(unit_phonemes)
    if any(u >= unit_phonemes.shape[0] for u in hyp):
        raise DataProblem("Invalid units", "A unit is missing from the unit-phoneme map.")
    decoded = collapse(int(unit_phonemes[u]) for u in hyp)
    reference = collapse(p for p in sentence.phonemes if p != filler)
    if not reference:
        raise DataProblem("Undefined accuracy", f"Sentence {sentence.id} has no content phoneme.")
    return max(0.0, 1.0 - edit_distance(decoded, reference) / len(reference))


def speaker_similarity(
    converted: FeatureSequence, source: FeatureSequence, codebook: Codebook
) -> float:
    return speaker_embed(converted, codebook).cosine(speaker_embed(source, codebook))


def fluency_ratio(hyp: UnitSequence, ref: UnitSequence) -> float:
    """Length ratio of the reduced sequences; 1 is a native-like length."""
    hyp = hyp if hyp.reduced else reduce(hyp)
    ref = ref if ref.reduced else reduce(ref)
    if len(ref) == 0:
        raise DataProblem("Undefined fluency ratio", "The reference unit sequence is empty.")
    return len(hyp) / len(ref)


def unigram_perplexity(
    corpus: Sequence[UnitSequence], evaluated: Optional[Sequence[UnitSequence]] = None,
    n_units: Optional[int] = None, smoothing: float = 0.0
) -> float:
    """
    Perplexity of a unigram model over units and EOS estimated by counting
    the tokens of `corpus`, measured on `evaluated` (default: `corpus`).

    With `smoothing` > 0, `n_units` must be given and every unit and EOS
    gets `smoothing` extra counts. A token of zero probability gives an
    infinite perplexity.
    """
    if len(corpus) == 0:
        raise EmptyInputProblem("The unit corpus")
    evaluated = corpus if evaluated is None else evaluated
    if len(evaluated) == 0:
        raise EmptyInputProblem("The evaluated unit corpus")
    if smoothing > 0 and n_units is None:
        raise DataProblem("Missing vocabulary size", "Smoothing requires the number of units.")

    eos = -1
    counts = Counter()
    for sequence in corpus:
        counts.update(sequence.units)
        counts[eos] += 1
    vocabulary = (n_units + 1) if smoothing > 0 else 0
    total = sum(counts.values()) + smoothing * vocabulary

    nll, n_tokens = 0.0, 0
    for sequence in evaluated:
        for token in list(sequence.units) + [eos]:
            count = counts[token] + smoothing
            if count == 0:
                return math.inf
            nll -= math.log(count / total)
            n_tokens += 1
    return math.exp(nll / n_tokens)
