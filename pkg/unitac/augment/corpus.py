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
from collections import Counter
from typing import Dict, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel

from unitac.augment.pairs import PairMeta, ParallelPair
from unitac.augment.strategy import AugmentConfig, AugmentStrategy
from unitac.corpus.sentences import Sentence
from unitac.exceptions import ConfigurationProblem, EmptyInputProblem
from unitac.s2u.codebook import Codebook
from unitac.s2u.quantize import speech_to_units
from unitac.synth.render import Renderer
from unitac.synth.specs import AccentSpec, FRAME_PERIOD_MS, SpeakerSpec
from unitac.utils import UNIT_REGISTRY
from unitac.utils.concurrency import map_ordered
from unitac.utils.iterables import flatten
from unitac.utils.seeds import derive_seed, rng_for

log = logging.getLogger("unitac.augment")


def _check_ids(what: str, ids: Sequence[str]) -> None:
    duplicates = [i for i, count in Counter(ids).items() if count > 1]
    if duplicates:
        raise ConfigurationProblem(detail=f"Duplicate {what} ids: {', '.join(duplicates)}.")


def build_parallel_corpus(
    sentences: Sequence[Sentence], strategy: AugmentStrategy,
    accents: Sequence[AccentSpec], speakers: Sequence[SpeakerSpec], budget: int,
    renderer: Renderer, codebook: Codebook, seed: int = 0,
    config: Optional[AugmentConfig] = None, threads: int = 1
) -> List[ParallelPair]:
    """
    Build `budget` parallel pairs of accented features and native units.

    With the non-overlapped strategy, `budget` distinct sentences are each
    rendered once with a uniformly drawn accent. With the overlapped
    strategy, `budget / accents_per_sentence` sentences are each rendered
    under `accents_per_sentence` distinct accents (all of them when it
    equals the number of accents). Every pair draws its speaker and its
    noise scales independently.

    The target of a sentence is computed once from its native render and
    shared by all its pairs. Pairs are ordered by sentence, in input order,
    then by accent, in `accents` order, whatever the number of threads.

    Raises
    ------
    ConfigurationProblem
        If there are not enough sentences or accents for the budget, or if
        accent or speaker lists are empty or hold duplicate ids.
    """
    config = config if config is not None else AugmentConfig()
    if not accents:
        raise ConfigurationProblem(detail="At least one accent is required.")
    if not speakers:
        raise ConfigurationProblem(detail="At least one speaker is required.")
    _check_ids("accent", [a.id for a in accents])
    _check_ids("speaker", [s.id for s in speakers])
    _check_ids("sentence", [s.id for s in sentences])

    per_sentence = strategy.pairs_per_sentence
    if per_sentence > len(accents):
        raise ConfigurationProblem(
            detail=f"{per_sentence} accents per sentence requested, "
                   f"only {len(accents)} accents available."
        )
    n_sentences = strategy.n_sentences(budget)
    if len(sentences) < n_sentences:
        raise ConfigurationProblem(
            "Insufficient sentences",
            f"The {strategy} strategy needs {n_sentences} sentences for "
            f"{budget} pairs, only {len(sentences)} are available."
        )

    chosen = np.sort(rng_for(seed, "sentences").choice(len(sentences), n_sentences, replace=False))
    low_sigma, high_sigma = config.inference_noise_range
    low_duration, high_duration = config.duration_noise_range

    def build(sentence: Sentence) -> List[ParallelPair]:
        rng = rng_for(seed, "assign", sentence.id)
        if per_sentence == len(accents):
            selected = list(range(len(accents)))
        else:
            selected = sorted(int(i) for i in rng.choice(len(accents), per_sentence, replace=False))
        target = speech_to_units(renderer.native_render(sentence), codebook)

        pairs = []
        for a in selected:
            accent = accents[a]
            speaker = speakers[int(rng.integers(len(speakers)))]
            sigma = float(rng.uniform(low_sigma, high_sigma))
            duration_noise = float(rng.uniform(low_duration, high_duration))
            pair_seed = derive_seed(seed, sentence.id, accent.id)
            features = renderer.render(
                sentence, speaker, accent, pair_seed,
                inference_noise_scale=sigma, duration_noise_scale=duration_noise
            )
            meta = PairMeta(
                pair_id=f"{sentence.id}-{accent.id}", sentence_id=sentence.id,
                accent_id=accent.id, speaker_id=speaker.id, seed=pair_seed,
                inference_noise_scale=sigma, duration_noise_scale=duration_noise
            )
            pairs.append(ParallelPair(features, target, meta, sentence))
        return pairs

    pairs = flatten(map_ordered(build, [sentences[i] for i in chosen], threads=threads))
    log.info(
        f"Built [green]{len(pairs)}[/] pairs from {n_sentences} sentences "
        f"({strategy}, {len(accents)} accents, {len(speakers)} speakers)"
    )
    return pairs


class LengthSummary(BaseModel):
    min: int
    median: float
    max: int

    @classmethod
    def of(cls, lengths: Sequence[int]) -> "LengthSummary":
        return cls(min=min(lengths), median=float(np.median(lengths)), max=max(lengths))


class CorpusStats(BaseModel):
    n_pairs: int
    n_sentences: int
    pairs_per_accent: Dict[str, int]
    target_length: LengthSummary
    input_length: LengthSummary
    audio_hours: float

    def __str__(self) -> str:
        accents = ", ".join(f"{a}: {n}" for a, n in self.pairs_per_accent.items())
        return (
            f"{self.n_pairs} pairs, {self.n_sentences} sentences, "
            f"{self.audio_hours:.3f} h of input; per accent: {accents}"
        )


def corpus_stats(pairs: Sequence[ParallelPair]) -> CorpusStats:
    """
    Exact counts of a parallel corpus. Input lengths are in frames, target
    lengths in reduced units.
    """
    if len(pairs) == 0:
        raise EmptyInputProblem("The parallel corpus")
    per_accent = Counter(p.accent_id for p in pairs)
    frames = sum(p.input.n_frames for p in pairs)
    duration = frames * FRAME_PERIOD_MS * UNIT_REGISTRY.millisecond
    return CorpusStats(
        n_pairs=len(pairs),
        n_sentences=len(set(p.meta.sentence_id for p in pairs)),
        pairs_per_accent={a: per_accent[a] for a in sorted(per_accent)},
        target_length=LengthSummary.of([len(p.target) for p in pairs]),
        input_length=LengthSummary.of([p.input.n_frames for p in pairs]),
        audio_hours=float(duration.to('hour').magnitude),
    )
