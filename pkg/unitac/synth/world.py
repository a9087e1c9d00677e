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
from typing import List, Tuple

import numpy as np
from pydantic import BaseModel, confloat, conint

from unitac.corpus.inventory import DEFAULT_INVENTORY_SIZE, DEFAULT_N_CONFUSABLES, PhonemeInventory
from unitac.exceptions import ConfigurationProblem, DataProblem
from unitac.files.records import PathLike, read_json, write_json
from unitac.synth.render import DEFAULT_SEPARATION, Renderer, phoneme_prototypes
from unitac.synth.specs import (
    AccentSpec, DEFAULT_ACCENT_DURATION_RANGE, DEFAULT_ACCENT_SHIFT_SCALE, DEFAULT_DIM,
    DEFAULT_FILLER_PROB, DEFAULT_SUBSTITUTION_PROB, NATIVE_ID, RenderConfig, SpeakerSpec
)
from unitac.utils.seeds import derive_seed

log = logging.getLogger("unitac.synth")


class WorldParameters(BaseModel):
    """Generation parameters of a synthetic world."""
    seed: int = 0
    inventory_size: conint(ge=2) = DEFAULT_INVENTORY_SIZE
    n_confusables: conint(ge=0) = DEFAULT_N_CONFUSABLES
    dim: conint(ge=2) = DEFAULT_DIM
    separation: confloat(gt=0) = DEFAULT_SEPARATION
    n_accents: conint(ge=1) = 6
    n_unseen_accents: conint(ge=0) = 2
    n_train_speakers: conint(ge=1) = 24
    n_test_speakers: conint(ge=1) = 8
    substitution_prob: confloat(ge=0, le=1) = DEFAULT_SUBSTITUTION_PROB
    filler_prob: confloat(ge=0, le=1) = DEFAULT_FILLER_PROB
    accent_duration_range: Tuple[confloat(gt=0), confloat(gt=0)] = DEFAULT_ACCENT_DURATION_RANGE
    accent_shift_scale: confloat(ge=0) = DEFAULT_ACCENT_SHIFT_SCALE
    duration_range: Tuple[conint(ge=1), conint(ge=1)] = (2, 6)
    duration_noise_scale: confloat(ge=0) = 0.1
    inference_noise_scale: confloat(ge=0) = 0.05

    class Config:
        frozen = True


class World(BaseModel):
    """
    Everything needed to render speech-like features: the inventory, the
    phoneme prototypes, the render config, the accents and two disjoint
    speaker pools (training speakers and held-out speakers).

    `unseen_accents` are never used to build training corpora and support
    zero-shot evaluation.
    """
    parameters: WorldParameters
    inventory: PhonemeInventory
    prototypes: Tuple[Tuple[float, ...], ...]
    render_config: RenderConfig
    accents: Tuple[AccentSpec, ...]
    unseen_accents: Tuple[AccentSpec, ...] = tuple()
    train_speakers: Tuple[SpeakerSpec, ...]
    test_speakers: Tuple[SpeakerSpec, ...]

    class Config:
        frozen = True

    @property
    def prototype_matrix(self) -> np.ndarray:
        return np.asarray(self.prototypes, dtype=np.float64)

    @property
    def dim(self) -> int:
        return self.render_config.dim

    @property
    def native_accent(self) -> AccentSpec:
        return AccentSpec.identity(self.inventory.size, self.dim)

    @property
    def native_speaker(self) -> SpeakerSpec:
        return SpeakerSpec.native(self.dim)

    def renderer(self) -> Renderer:
        return Renderer(self.inventory, self.prototype_matrix, self.render_config)

    def accent(self, accent_id: str) -> AccentSpec:
        if accent_id == NATIVE_ID:
            return self.native_accent
        for accent in self.accents + self.unseen_accents:
            if accent.id == accent_id:
                return accent
        raise ConfigurationProblem(detail=f"Unknown accent '{accent_id}'.")

    def speaker(self, speaker_id: str) -> SpeakerSpec:
        if speaker_id == NATIVE_ID:
            return self.native_speaker
        for speaker in self.train_speakers + self.test_speakers:
            if speaker.id == speaker_id:
                return speaker
        raise ConfigurationProblem(detail=f"Unknown speaker '{speaker_id}'.")

    def select_accents(self, ids: List[str] = None) -> List[AccentSpec]:
        if not ids:
            return list(self.accents)
        return [self.accent(i) for i in ids]

    @classmethod
    def create(cls, parameters: WorldParameters = None) -> "World":
        if parameters is None:
            parameters = WorldParameters()
        p = parameters
        inventory = PhonemeInventory.create(
            size=p.inventory_size, n_confusables=p.n_confusables,
            seed=derive_seed(p.seed, "inventory")
        )
        prototypes = phoneme_prototypes(
            inventory, p.dim, p.separation, seed=derive_seed(p.seed, "prototypes")
        )
        render_config = RenderConfig.for_inventory(
            inventory, dim=p.dim, duration_range=p.duration_range,
            seed=derive_seed(p.seed, "durations"),
            duration_noise_scale=p.duration_noise_scale,
            inference_noise_scale=p.inference_noise_scale,
        )

        def make_accent(accent_id):
            return AccentSpec.random(
                accent_id, inventory.size, p.dim, seed=derive_seed(p.seed, "accent", accent_id),
                substitution_prob=p.substitution_prob,
                duration_range=p.accent_duration_range,
                filler_prob=p.filler_prob, shift_scale=p.accent_shift_scale,
            )

        def make_speaker(speaker_id):
            return SpeakerSpec.random(
                speaker_id, p.dim, max_norm=render_config.max_speaker_offset,
                seed=derive_seed(p.seed, "speaker", speaker_id)
            )

        world = cls(
            parameters=p,
            inventory=inventory,
            prototypes=tuple(tuple(float(x) for x in row) for row in prototypes),
            render_config=render_config,
            accents=tuple(make_accent(f"acc{i}") for i in range(p.n_accents)),
            unseen_accents=tuple(
                make_accent(f"unseen{i}") for i in range(p.n_unseen_accents)
            ),
            train_speakers=tuple(make_speaker(f"spk{i}") for i in range(p.n_train_speakers)),
            test_speakers=tuple(make_speaker(f"test{i}") for i in range(p.n_test_speakers)),
        )
        log.info(
            f"Created world (seed {p.seed}): {inventory.size} phonemes, "
            f"D={p.dim}, {p.n_accents} accents, {p.n_train_speakers}+"
            f"{p.n_test_speakers} speakers"
        )
        return world


def write_world(world: World, path: PathLike) -> None:
    write_json(path, world.dict())


def read_world(path: PathLike) -> World:
    try:
        return World.parse_obj(read_json(path))
    except ValueError as e:
        raise DataProblem("Invalid world file", f"{path}: {e}")
