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
from typing import List, Optional

import numpy as np

from unitac.corpus.inventory import PhonemeInventory
from unitac.corpus.sentences import Sentence
from unitac.exceptions import ConfigurationProblem, DimensionMismatchProblem
from unitac.synth.features import FeatureSequence, Provenance
from unitac.synth.specs import AccentSpec, RenderConfig, SpeakerSpec
from unitac.utils.seeds import derive_seed, rng_for

log = logging.getLogger("unitac.synth")

DEFAULT_SEPARATION = 2.0
DEFAULT_PROTOTYPE_RETRIES = 1000


def phoneme_prototypes(
    inventory: PhonemeInventory, dim: int, separation: float = DEFAULT_SEPARATION,
    seed: int = 0, spread: Optional[float] = None,
    max_retries: int = DEFAULT_PROTOTYPE_RETRIES
) -> np.ndarray:
    """
    Draw one prototype frame per phoneme so that every pair of prototypes
    is at least `separation` apart.

    Rows are drawn one at a time uniformly in a centered hypercube and
    rejected while they are too close to an already accepted row.

    Parameters
    ----------
    inventory
        Phoneme inventory, one row per phoneme.
    dim
        Feature dimension.
    separation
        Minimum pairwise Euclidean distance.
    seed
        Random seed.
    spread
        Side of the hypercube, in units of `separation`. Defaults to
        `2 * max(1, size ** (1 / dim))`.
    max_retries
        Number of rejected draws allowed for a single row.

    Returns
    -------
    prototypes
        A (inventory.size x dim) float64 matrix.

    Raises
    ------
    ConfigurationProblem
        If `separation` is not positive or a row cannot be placed within
        `max_retries` draws.
    """
    if separation <= 0:
        raise ConfigurationProblem(detail=f"Separation must be positive, got {separation}.")
    if dim < 1:
        raise ConfigurationProblem(detail=f"Feature dimension must be positive, got {dim}.")

    n = inventory.size
    if spread is None:
        spread = 2.0 * max(1.0, n ** (1.0 / dim))
    half_side = spread * separation / 2.0

    rng = np.random.default_rng(seed)
    prototypes = np.zeros((n, dim), dtype=np.float64)
    for i in range(n):
        for _ in range(max_retries + 1):
            candidate = rng.uniform(-half_side, half_side, size=dim)
            if i == 0:
                break
            distances = np.linalg.norm(prototypes[:i] - candidate, axis=1)
            if distances.min() >= separation:
                break
        else:
            raise ConfigurationProblem(
                detail=f"Cannot place {n} prototypes {separation} apart in dimension "
                       f"{dim} after {max_retries} retries."
            )
        prototypes[i] = candidate
    return prototypes


def apply_accent(
    sentence: Sentence, accent: AccentSpec, inventory: PhonemeInventory, seed: int
) -> List[int]:
    """
    Surface pronunciation of a sentence under an accent.

    Each phoneme is independently replaced, with probability
    `substitution_prob`, by one of its confusables chosen uniformly. After
    each phoneme a filler is inserted with probability `filler_prob`.
    """
    rng = np.random.default_rng(seed)
    surface = []
    for p in sentence.phonemes:
        confusables = inventory.confusables(p)
        if rng.random() < accent.substitution_prob and len(confusables) > 0:
            p = confusables[int(rng.integers(len(confusables)))]
        surface.append(int(p))
        if rng.random() < accent.filler_prob:
            surface.append(inventory.filler)
    return surface


class Renderer:
    """
    Parametric multi-speaker multi-accent renderer.

    A renderer is immutable and stateless once built: every output is a pure
    function of the render arguments and the seed, so a single instance can
    be shared across threads.
    """

    def __init__(
        self, inventory: PhonemeInventory, prototypes: np.ndarray,
        config: RenderConfig, native_speaker: Optional[SpeakerSpec] = None
    ):
        prototypes = np.array(prototypes, dtype=np.float64)
        if prototypes.shape[0] != inventory.size:
            raise DimensionMismatchProblem("Prototype matrix rows", inventory.size, prototypes.shape[0])
        if prototypes.shape[1] != config.dim:
            raise DimensionMismatchProblem("Prototype matrix", config.dim, prototypes.shape[1])
        if len(config.base_durations) != inventory.size:
            raise ConfigurationProblem(
                detail=f"{len(config.base_durations)} base durations "
                       f"for {inventory.size} phonemes."
            )

        self.inventory = inventory
        self.prototypes = prototypes
        self.prototypes.setflags(write=False)
        self.config = config
        self.native_speaker = native_speaker if native_speaker is not None \
            else SpeakerSpec.native(config.dim)
        self.native_accent = AccentSpec.identity(inventory.size, config.dim)
        self._base_durations = np.asarray(config.base_durations, dtype=np.float64)

    @property
    def dim(self) -> int:
        return self.config.dim

    def apply_accent(self, sentence: Sentence, accent: AccentSpec, seed: int) -> List[int]:
        return apply_accent(sentence, accent, self.inventory, seed)

    def durations(
        self, surface: List[int], accent: AccentSpec, duration_noise_scale: float,
        rng: np.random.Generator
    ) -> np.ndarray:
        base = self._base_durations[surface]
        jitter = rng.standard_normal(len(surface))
        counts = np.rint(base * accent.duration_multiplier * np.exp(duration_noise_scale * jitter))
        return np.maximum(counts, 1).astype(np.int64)

    def render(
        self, sentence: Sentence, speaker: SpeakerSpec, accent: AccentSpec, seed: int,
        inference_noise_scale: Optional[float] = None,
        duration_noise_scale: Optional[float] = None
    ) -> FeatureSequence:
        """
        Render a sentence as a feature sequence.

        Each surface phoneme `p` lasts
        `rint(base_durations[p] * duration_multiplier * exp(duration_noise_scale * g))`
        frames (at least 1), and each of its frames is
        `prototypes[p] + shift_u[p] * shift_v + speaker.offset + noise`.
        Noise scales default to the render config.
        """
        speaker.check(self.config)
        accent.check(self.inventory, self.config)
        if inference_noise_scale is None:
            inference_noise_scale = self.config.inference_noise_scale
        if duration_noise_scale is None:
            duration_noise_scale = self.config.duration_noise_scale
        if inference_noise_scale < 0 or duration_noise_scale < 0:
            raise ConfigurationProblem(detail="Noise scales must be non-negative.")

        surface = self.apply_accent(sentence, accent, derive_seed(seed, "accent"))
        counts = self.durations(
            surface, accent, duration_noise_scale, rng_for(seed, "durations")
        )

        means = self.prototypes[surface] + np.outer(accent.u[surface], accent.v) \
            + speaker.vector
        frames = np.repeat(means, counts, axis=0)
        phonemes = np.repeat(np.asarray(surface, dtype=np.int64), counts)
        if inference_noise_scale > 0:
            noise = rng_for(seed, "frames").standard_normal(frames.shape)
            frames = frames + inference_noise_scale * noise

        provenance = Provenance(sentence.id, speaker.id, accent.id, int(seed))
        return FeatureSequence(frames, provenance=provenance, phonemes=phonemes)

    def native_render(self, sentence: Sentence) -> FeatureSequence:
        """
        Render a sentence with the native voice: canonical speaker, identity
        accent and the fixed native noise scales. The seed only depends on
        the sentence id so the result is a function of the content.
        """
        return self.render(
            sentence, self.native_speaker, self.native_accent,
            seed=derive_seed("native", sentence.id),
            inference_noise_scale=self.config.native_inference_noise_scale,
            duration_noise_scale=self.config.native_duration_noise_scale,
        )
