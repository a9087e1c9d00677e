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

import numpy as np
import pytest

from unitac.corpus.inventory import PhonemeInventory
from unitac.corpus.sentences import Sentence
from unitac.exceptions import ConfigurationProblem, DimensionMismatchProblem
from unitac.synth.render import Renderer, apply_accent, phoneme_prototypes
from unitac.synth.specs import AccentSpec, RenderConfig, SpeakerSpec


@pytest.fixture(scope="module")
def inventory():
    return PhonemeInventory.create(size=12, n_confusables=2, seed=0)


@pytest.fixture(scope="module")
def renderer(inventory):
    prototypes = phoneme_prototypes(inventory, dim=6, separation=2.0, seed=1)
    config = RenderConfig.for_inventory(inventory, dim=6, duration_range=(2, 5), seed=2)
    return Renderer(inventory, prototypes, config)


@pytest.fixture
def sentence():
    return Sentence(id="s7", phonemes=(0, 4, 4, 2, 9, 1))


def test_prototypes_are_separated(inventory):
    prototypes = phoneme_prototypes(inventory, dim=6, separation=2.0, seed=1)
    assert prototypes.shape == (12, 6)
    distances = np.linalg.norm(prototypes[:, None] - prototypes[None], axis=2)
    assert np.min(distances[~np.eye(12, dtype=bool)]) >= 2.0


def test_prototypes_cannot_be_placed(inventory):
    with pytest.raises(ConfigurationProblem):
        phoneme_prototypes(inventory, dim=2, separation=2.0, spread=0.5, max_retries=10)
    with pytest.raises(ConfigurationProblem):
        phoneme_prototypes(inventory, dim=2, separation=0.0)


def test_identity_accent_keeps_phonemes(inventory, sentence):
    accent = AccentSpec.identity(inventory.size, 6)
    assert apply_accent(sentence, accent, inventory, seed=3) == list(sentence.phonemes)


def test_full_substitution_uses_confusables(inventory, sentence):
    accent = AccentSpec.identity(inventory.size, 6).copy(update={"substitution_prob": 1.0})
    surface = apply_accent(sentence, accent, inventory, seed=3)
    assert len(surface) == len(sentence)
    for p, q in zip(sentence.phonemes, surface):
        assert q in inventory.confusables(p)


def test_fillers(inventory, sentence):
    accent = AccentSpec.identity(inventory.size, 6).copy(update={"filler_prob": 1.0})
    surface = apply_accent(sentence, accent, inventory, seed=3)
    assert surface[0::2] == list(sentence.phonemes)
    assert surface[1::2] == [inventory.filler] * len(sentence)


def test_noiseless_native_render(renderer, inventory, sentence):
    native = SpeakerSpec.native(6)
    accent = AccentSpec.identity(inventory.size, 6)
    features = renderer.render(
        sentence, native, accent, seed=0, inference_noise_scale=0.0, duration_noise_scale=0.0
    )
    durations = [renderer.config.base_durations[p] for p in sentence.phonemes]
    assert features.n_frames == sum(durations)
    expected = np.repeat(renderer.prototypes[list(sentence.phonemes)], durations, axis=0)
    np.testing.assert_array_equal(features.frames, expected)
    np.testing.assert_array_equal(features.phonemes, np.repeat(sentence.phonemes, durations))


def test_render_adds_speaker_and_accent_shift(renderer, inventory, sentence):
    speaker = SpeakerSpec.random("spk", 6, max_norm=0.5, seed=4)
    accent = AccentSpec.random("acc", inventory.size, 6, seed=5).copy(
        update={"substitution_prob": 0.0, "filler_prob": 0.0}
    )
    features = renderer.render(
        sentence, speaker, accent, seed=1, inference_noise_scale=0.0, duration_noise_scale=0.0
    )
    surface = features.phonemes
    expected = renderer.prototypes[surface] + np.outer(accent.u[surface], accent.v) \
        + speaker.vector
    np.testing.assert_allclose(features.frames, expected, atol=1e-12)
    assert features.provenance.speaker_id == "spk"
    assert features.provenance.accent_id == "acc"


def test_accent_stretches_durations(renderer, inventory, sentence):
    accent = AccentSpec.identity(inventory.size, 6).copy(update={"duration_multiplier": 2.0})
    native = renderer.native_render(sentence)
    stretched = renderer.render(
        sentence, SpeakerSpec.native(6), accent, seed=0, duration_noise_scale=0.0
    )
    assert stretched.n_frames == 2 * native.n_frames


def test_render_is_deterministic(renderer, inventory, sentence):
    speaker = SpeakerSpec.random("spk", 6, seed=4)
    accent = AccentSpec.random("acc", inventory.size, 6, seed=5)
    first = renderer.render(sentence, speaker, accent, seed=42)
    assert first == renderer.render(sentence, speaker, accent, seed=42)
    assert first != renderer.render(sentence, speaker, accent, seed=43)


def test_native_render_depends_on_content_only(renderer, sentence):
    assert renderer.native_render(sentence) == renderer.native_render(sentence)
    assert renderer.native_render(sentence).provenance.speaker_id == "native"


def test_invalid_specs(renderer, inventory, sentence):
    with pytest.raises(ConfigurationProblem):
        renderer.render(sentence, SpeakerSpec.native(5), AccentSpec.identity(inventory.size, 6), 0)
    with pytest.raises(ConfigurationProblem):
        renderer.render(sentence, SpeakerSpec.native(6), AccentSpec.identity(3, 6), 0)
    far = SpeakerSpec(id="far", offset=(1.0, 0, 0, 0, 0, 0))
    with pytest.raises(ConfigurationProblem):
        renderer.render(sentence, far, AccentSpec.identity(inventory.size, 6), 0)
    with pytest.raises(DimensionMismatchProblem):
        Renderer(inventory, renderer.prototypes[:, :5], renderer.config)


def test_random_speaker_norm():
    for seed in range(20):
        assert SpeakerSpec.random("s", 8, max_norm=0.5, seed=seed).norm <= 0.5 + 1e-12


def test_accent_shift_has_rank_one(inventory):
    accent = AccentSpec.random("acc", inventory.size, 6, seed=0)
    assert np.linalg.matrix_rank(accent.shift_matrix) == 1
    assert not accent.is_identity
    assert AccentSpec.identity(inventory.size, 6).is_identity
