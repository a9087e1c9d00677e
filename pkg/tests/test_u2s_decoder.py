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

from unitac.exceptions import DataProblem, DimensionMismatchProblem, EmptyInputProblem
from unitac.s2u.codebook import Codebook
from unitac.s2u.quantize import quantize, speech_to_units
from unitac.s2u.units import UnitSequence, reduce
from unitac.synth.features import FeatureSequence
from unitac.u2s.decoder import UnitDecoder, fit_unit_decoder, synthesize
from unitac.u2s.speaker import SpeakerEmbedding, speaker_embed


@pytest.fixture(scope="module")
def codebook():
    rng = np.random.default_rng(0)
    return Codebook(4.0 * rng.standard_normal((12, 5)))


def random_units(rng, n_units, length):
    units = [int(rng.integers(n_units))]
    while len(units) < length:
        u = int(rng.integers(n_units))
        if u != units[-1]:
            units.append(u)
    return UnitSequence(units, reduced=True)


def random_embedding(rng, dim, max_norm):
    direction = rng.standard_normal(dim)
    direction /= np.linalg.norm(direction)
    return SpeakerEmbedding(direction * rng.uniform(0, max_norm))


def test_round_trip(codebook):
    rng = np.random.default_rng(1)
    decoder = UnitDecoder(codebook.centroids, rng.integers(1, 4, size=codebook.n_units))
    max_norm = 0.49 * codebook.min_separation()
    for _ in range(100):
        units = random_units(rng, codebook.n_units, int(rng.integers(1, 20)))
        embedding = random_embedding(rng, codebook.dim, max_norm)
        features = synthesize(units, embedding, decoder)
        assert reduce(quantize(features, codebook)) == units
        np.testing.assert_allclose(speaker_embed(features, codebook).vector, embedding.vector, atol=1e-9)


def test_synthesize_durations(codebook):
    decoder = UnitDecoder(codebook.centroids, np.arange(1, 13))
    features = synthesize(UnitSequence([0, 3]), SpeakerEmbedding.zeros(5), decoder)
    assert features.n_frames == 1 + 4
    np.testing.assert_array_equal(features.frames[1:], np.repeat(codebook.centroids[[3]], 4, axis=0))


def test_synthesize_empty(codebook):
    decoder = UnitDecoder.from_codebook(codebook)
    features = synthesize(UnitSequence([]), SpeakerEmbedding.zeros(5), decoder)
    assert features.n_frames == 0 and features.dim == 5


def test_synthesize_invalid(codebook):
    decoder = UnitDecoder.from_codebook(codebook)
    with pytest.raises(DataProblem):
        synthesize(UnitSequence([12]), SpeakerEmbedding.zeros(5), decoder)
    with pytest.raises(DimensionMismatchProblem):
        synthesize(UnitSequence([1]), SpeakerEmbedding.zeros(4), decoder)


def test_fit_unit_decoder():
    codebook = Codebook([[0.0], [10.0], [20.0]])
    features = FeatureSequence([[1.0], [-1.0], [11.0], [9.0], [10.0], [2.0]])
    units = quantize(features, codebook)
    decoder = fit_unit_decoder([(features, units)], codebook)
    np.testing.assert_allclose(decoder.unit_means, [[2.0 / 3], [10.0], [20.0]])
    # unit 0 runs: 2 then 1, median 1.5 rounds to even
    assert decoder.unit_durations.tolist() == [2, 3, 1]


def test_fit_unit_decoder_invalid():
    codebook = Codebook([[0.0], [10.0]])
    features = FeatureSequence([[0.0], [0.5]])
    with pytest.raises(DataProblem):
        fit_unit_decoder([(features, speech_to_units(features, codebook))], codebook)
    with pytest.raises(EmptyInputProblem):
        fit_unit_decoder([], codebook)


def test_speaker_embedding_cosine():
    a = SpeakerEmbedding([1.0, 0.0])
    assert a.cosine(SpeakerEmbedding([2.0, 0.0])) == pytest.approx(1.0)
    assert a.cosine(SpeakerEmbedding([0.0, 3.0])) == pytest.approx(0.0)
    assert a.cosine(SpeakerEmbedding.zeros(2)) == 0.0
    assert SpeakerEmbedding.zeros(2).cosine(SpeakerEmbedding.zeros(2)) == 1.0


def test_speaker_embed_empty(codebook):
    with pytest.raises(EmptyInputProblem):
        speaker_embed(FeatureSequence.empty(5), codebook)
