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

from tests.utils.models import random_units, tiny_model
from unitac.exceptions import EmptyInputProblem
from unitac.pc.pretrain import (
    pretrain_decoder_lm, pretrain_encoder_masked, span_mask, unit_lm_perplexity
)
from unitac.pc.train import TrainConfig
from unitac.s2u.codebook import Codebook
from unitac.s2u.units import UnitSequence
from unitac.synth.features import FeatureSequence


@pytest.fixture(scope="module")
def unit_corpus():
    rng = np.random.default_rng(0)
    return [UnitSequence(random_units(rng, 5, 4), reduced=True) for _ in range(6)]


def test_decoder_pretraining(unit_corpus):
    model = tiny_model()
    cross = model.decoder.layers[0].cross_attention.query.weight.data.copy()
    encoder = model.encoder.input.weight.data.copy()
    initial = unit_lm_perplexity(model, unit_corpus)
    config = TrainConfig(peak_lr=1e-2, total_updates=60, micro_batch=6, eval_interval=30)
    result = pretrain_decoder_lm(model, unit_corpus, config, val=unit_corpus)

    assert result.best_val_ppl < initial
    assert unit_lm_perplexity(model, unit_corpus) == pytest.approx(result.best_val_ppl)
    np.testing.assert_array_equal(model.decoder.layers[0].cross_attention.query.weight.data, cross)
    np.testing.assert_array_equal(model.encoder.input.weight.data, encoder)
    assert all(r["audio_seconds"] == 0.0 for r in result.records)


def test_span_mask():
    rng = np.random.default_rng(0)
    for _ in range(10):
        positions = np.flatnonzero(span_mask(10, 0.0, 3, rng))
        assert 1 <= positions.size <= 3
        assert positions.tolist() == list(range(positions[0], positions[0] + positions.size))
    assert span_mask(10, 1.0, 2, rng).all()


def test_encoder_pretraining():
    rng = np.random.default_rng(1)
    centroids = np.array([[0.0, 0.0, 0.0], [3.0, 0.0, 0.0], [0.0, 3.0, 0.0], [0.0, 0.0, 3.0], [3.0, 3.0, 3.0]])
    codebook = Codebook(centroids)
    corpus = [
        FeatureSequence(np.repeat(centroids[random_units(rng, 5, 4)], 3, axis=0))
        for _ in range(4)
    ]
    model = tiny_model(subsample=2)
    decoder = model.decoder.head.weight.data.copy()
    encoder = model.encoder.input.weight.data.copy()
    config = TrainConfig(peak_lr=1e-2, total_updates=30, micro_batch=2, mask_start_prob=0.2)
    result = pretrain_encoder_masked(model, corpus, codebook, config)

    assert all(np.isfinite(r["loss"]) for r in result.records)
    assert result.records[0]["audio_seconds"] == pytest.approx(2 * 12 * 0.02)
    assert not np.array_equal(model.encoder.input.weight.data, encoder)
    np.testing.assert_array_equal(model.decoder.head.weight.data, decoder)
    assert "probe.weight" not in model.state_dict()


def test_empty_pretraining_corpora():
    config = TrainConfig(total_updates=1)
    with pytest.raises(EmptyInputProblem):
        pretrain_decoder_lm(tiny_model(), [], config)
    with pytest.raises(EmptyInputProblem):
        pretrain_encoder_masked(tiny_model(), [], Codebook(np.eye(3)), config)
