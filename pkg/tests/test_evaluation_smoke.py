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

from unitac.evaluation.metrics import fluency_ratio
from unitac.evaluation.smoke import disfluent_accent, disfluent_smoke_set, native_smoke_set
from unitac.exceptions import ConfigurationProblem
from unitac.s2u.codebook import Codebook
from unitac.s2u.quantize import speech_to_units


@pytest.fixture(scope="module")
def codebook(tiny_world):
    return Codebook(tiny_world.prototype_matrix)


def test_native_smoke_set(tiny_world, tiny_sentences, codebook):
    renderer = tiny_world.renderer()
    pairs = native_smoke_set(tiny_sentences[:10], renderer, codebook, seed=1)
    assert len(pairs) == 10
    for pair, sentence in zip(pairs, tiny_sentences):
        assert pair.sentence == sentence
        assert pair.accent_id == "native"
        assert pair.meta.speaker_id == "native"
        assert speech_to_units(pair.input, codebook) == pair.target
    assert native_smoke_set(tiny_sentences[:10], renderer, codebook, seed=1) == pairs


def test_disfluent_smoke_set(tiny_world, tiny_sentences, codebook):
    renderer = tiny_world.renderer()
    pairs = disfluent_smoke_set(
        tiny_sentences[:10], renderer, codebook, tiny_world.train_speakers, seed=2
    )
    ratios = [fluency_ratio(speech_to_units(p.input, codebook), p.target) for p in pairs]
    assert np.mean(ratios) > 1.0
    assert {p.meta.speaker_id for p in pairs} <= {s.id for s in tiny_world.train_speakers}


def test_disfluent_accent():
    accent = disfluent_accent(8, 4)
    assert accent.substitution_prob == 0.0
    assert accent.filler_prob > 0 and accent.duration_multiplier > 1
    with pytest.raises(ConfigurationProblem):
        disfluent_accent(8, 4, filler_prob=0.0)
    with pytest.raises(ConfigurationProblem):
        disfluent_accent(8, 4, duration_multiplier=1.0)
