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

from tests.utils.models import tiny_model
from unitac.augment.corpus import build_parallel_corpus
from unitac.augment.strategy import AugmentStrategy, StrategyKind
from unitac.corpus.sentences import sample_sentences
from unitac.evaluation.report import run_eval
from unitac.evaluation.smoke import disfluent_smoke_set, native_smoke_set
from unitac.exceptions import DimensionMismatchProblem
from unitac.experiment.convert import UNITS_SUFFIX, convert, convert_features
from unitac.files.features import read_features, write_features
from unitac.files.units import read_units
from unitac.pc.model import PCConfig, PCModel
from unitac.pc.train import TrainConfig, train
from unitac.s2u.codebook import Codebook
from unitac.s2u.units import UnitSequence
from unitac.synth.features import FeatureSequence
from unitac.u2s.decoder import UnitDecoder
from unitac.u2s.speaker import speaker_embed


def constant_model(unit: int):
    """A corrector that emits `unit` at every step and never ends."""
    model = tiny_model()
    model.set_target_lengths([3])
    head = model.decoder.head
    head.weight.data[:] = 0.0
    head.bias.data[:] = 0.0
    head.bias.data[unit] = 10.0
    head.bias.data[model.vocabulary.eos] = -30.0
    return model


@pytest.fixture
def codebook():
    return Codebook(3.0 * np.random.default_rng(0).standard_normal((5, 3)))


def test_convert(tmp_path, codebook):
    decoder = UnitDecoder.from_codebook(codebook, duration=2)
    source = tmp_path / "input.feat"
    write_features(source, FeatureSequence(
        codebook.centroids[[0, 0, 2, 4]] + 0.1 * np.random.default_rng(1).standard_normal((4, 3))
    ))
    out = tmp_path / "converted.feat"

    conversion = convert(source, constant_model(1), codebook, decoder, out, beam_size=2)

    assert conversion.units == UnitSequence([1], reduced=True)
    assert not conversion.hypothesis.finished
    assert conversion.embedding == speaker_embed(read_features(source), codebook)
    expected = np.repeat(codebook.centroids[[1]] + conversion.embedding.vector, 2, axis=0)
    np.testing.assert_allclose(conversion.features.frames, expected)
    np.testing.assert_allclose(read_features(out).frames, expected, atol=1e-5)
    assert read_units(out.with_suffix(UNITS_SUFFIX), reduced=True) == [conversion.units]


def test_convert_checks_feature_dimension(codebook):
    decoder = UnitDecoder.from_codebook(codebook)
    with pytest.raises(DimensionMismatchProblem):
        convert_features(FeatureSequence(np.zeros((4, 2))), constant_model(1), codebook, decoder)


@pytest.fixture(scope="module")
def trained_corrector(tiny_world):
    """
    A corrector trained on every sentence rendered natively and under the
    three training accents.
    """
    renderer = tiny_world.renderer()
    codebook = Codebook(tiny_world.prototype_matrix)
    accents = [tiny_world.native_accent] + list(tiny_world.accents)
    speakers = [tiny_world.native_speaker] + list(tiny_world.train_speakers)
    sentences = sample_sentences(340, (3, 5), tiny_world.inventory, seed=21)
    corpus = build_parallel_corpus(
        sentences[:300], AugmentStrategy(kind=StrategyKind.OVERLAPPED, accents_per_sentence=4),
        accents, speakers, 1200, renderer, codebook, seed=3
    )
    val = build_parallel_corpus(
        sentences[300:], AugmentStrategy(kind=StrategyKind.NON_OVERLAPPED),
        accents, speakers, 40, renderer, codebook, seed=4
    )
    model = PCModel(PCConfig(
        feature_dim=tiny_world.dim, n_units=codebook.n_units, model_dim=32, heads=4,
        encoder_layers=2, decoder_layers=2, ff_dim=64, seed=0
    ))
    train(model, corpus, val, TrainConfig(
        peak_lr=2e-3, total_updates=4000, micro_batch=16, eval_interval=500
    ))
    return model, codebook, UnitDecoder.from_codebook(codebook, duration=2)


@pytest.fixture(scope="module")
def smoke_sentences(tiny_world):
    return sample_sentences(100, (3, 5), tiny_world.inventory, seed=22, id_prefix="smoke")


@pytest.mark.slow
def test_native_input_is_preserved(tiny_world, trained_corrector, smoke_sentences):
    model, codebook, decoder = trained_corrector
    pairs = native_smoke_set(smoke_sentences, tiny_world.renderer(), codebook, seed=5)
    report = run_eval(model, pairs, codebook, decoder, beam_size=2)

    assert report.n_pairs == 100
    assert report.exact_match >= 0.9
    assert report.uer <= 0.05
    assert report.speaker_cosine >= 0.95


@pytest.mark.slow
def test_disfluent_input_is_made_fluent(tiny_world, trained_corrector, smoke_sentences):
    model, codebook, decoder = trained_corrector
    pairs = disfluent_smoke_set(
        smoke_sentences, tiny_world.renderer(), codebook, tiny_world.test_speakers, seed=6
    )
    report = run_eval(model, pairs, codebook, decoder, beam_size=2)

    assert report.input_fluency_ratio > 1.0
    assert abs(report.fluency_ratio - 1.0) < abs(report.input_fluency_ratio - 1.0)
    assert report.speaker_cosine >= 0.95
