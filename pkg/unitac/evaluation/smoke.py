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
Smoke sets for end-to-end checks: native inputs, which the corrector must
leave unchanged, and disfluent inputs, slowed down and sprinkled with
fillers, whose length it must bring back towards the native one.
"""
from typing import List, Optional, Sequence

from unitac.augment.pairs import PairMeta, ParallelPair
from unitac.corpus.sentences import Sentence
from unitac.exceptions import ConfigurationProblem
from unitac.s2u.codebook import Codebook
from unitac.s2u.quantize import speech_to_units
from unitac.synth.render import Renderer
from unitac.synth.specs import AccentSpec, SpeakerSpec
from unitac.utils.seeds import derive_seed, rng_for

DISFLUENT_ID = "disfluent"
DEFAULT_DISFLUENT_FILLER_PROB = 0.2
DEFAULT_DISFLUENT_DURATION_MULTIPLIER = 1.5


def _smoke_pairs(
    sentences: Sequence[Sentence], accent: AccentSpec, speakers: Sequence[SpeakerSpec],
    renderer: Renderer, codebook: Codebook, seed: int,
    inference_noise_scale: Optional[float]
) -> List[ParallelPair]:
    if not speakers:
        raise ConfigurationProblem(detail="At least one speaker is required.")
    if inference_noise_scale is None:
        inference_noise_scale = renderer.config.inference_noise_scale
    rng = rng_for(seed, "smoke", accent.id)
    pairs = []
    for sentence in sentences:
        speaker = speakers[int(rng.integers(len(speakers)))]
        pair_seed = derive_seed(seed, "smoke", sentence.id, accent.id)
        features = renderer.render(
            sentence, speaker, accent, pair_seed, inference_noise_scale=inference_noise_scale
        )
        meta = PairMeta(
            pair_id=f"{sentence.id}-{accent.id}", sentence_id=sentence.id,
            accent_id=accent.id, speaker_id=speaker.id, seed=pair_seed,
            inference_noise_scale=inference_noise_scale,
            duration_noise_scale=renderer.config.duration_noise_scale,
        )
        target = speech_to_units(renderer.native_render(sentence), codebook)
        pairs.append(ParallelPair(features, target, meta, sentence))
    return pairs


def native_smoke_set(
    sentences: Sequence[Sentence], renderer: Renderer, codebook: Codebook,
    speakers: Optional[Sequence[SpeakerSpec]] = None, seed: int = 0,
    inference_noise_scale: Optional[float] = None
) -> List[ParallelPair]:
    """
    Native inputs: identity accent and, by default, the native speaker,
    rendered with their own noise draws.
    """
    speakers = speakers if speakers is not None else [renderer.native_speaker]
    return _smoke_pairs(
        sentences, renderer.native_accent, speakers, renderer, codebook, seed,
        inference_noise_scale
    )


def disfluent_accent(
    inventory_size: int, dim: int, filler_prob: float = DEFAULT_DISFLUENT_FILLER_PROB,
    duration_multiplier: float = DEFAULT_DISFLUENT_DURATION_MULTIPLIER
) -> AccentSpec:
    """No substitution nor shift: only fillers and slower phonemes."""
    if filler_prob <= 0 or duration_multiplier <= 1:
        raise ConfigurationProblem(
            detail="A disfluent accent has a positive filler probability "
                   "and a duration multiplier above 1."
        )
    return AccentSpec.identity(inventory_size, dim, id=DISFLUENT_ID).copy(update={
        "filler_prob": filler_prob, "duration_multiplier": duration_multiplier
    })


def disfluent_smoke_set(
    sentences: Sequence[Sentence], renderer: Renderer, codebook: Codebook,
    speakers: Sequence[SpeakerSpec], seed: int = 0,
    filler_prob: float = DEFAULT_DISFLUENT_FILLER_PROB,
    duration_multiplier: float = DEFAULT_DISFLUENT_DURATION_MULTIPLIER
) -> List[ParallelPair]:
    accent = disfluent_accent(
        renderer.inventory.size, renderer.dim, filler_prob, duration_multiplier
    )
    return _smoke_pairs(sentences, accent, speakers, renderer, codebook, seed, None)
