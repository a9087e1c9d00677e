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

from tests.utils.models import random_pairs, tiny_model
from unitac.augment.corpus import build_parallel_corpus
from unitac.augment.strategy import AugmentStrategy, StrategyKind
from unitac.corpus.sentences import sample_sentences
from unitac.evaluation.metrics import unigram_perplexity
from unitac.exceptions import EmptyInputProblem
from unitac.files.records import read_records
from unitac.nn.modules import Parameter
from unitac.pc.optim import Adam, LinearDecay, clip_grad_norm
from unitac.pc.train import TrainConfig, micro_batches, train, validation_perplexity
from unitac.s2u.codebook import Codebook


def test_zero_learning_rate_keeps_parameters():
    model = tiny_model()
    before = model.state_dict()
    config = TrainConfig(peak_lr=0.0, total_updates=3, micro_batch=2, accumulation=2)
    train(model, random_pairs(6), [], config)
    for name, value in model.state_dict().items():
        assert np.array_equal(value, before[name]), name


def test_memorization(tmp_path):
    model = tiny_model()
    pairs = random_pairs(4, seed=1)
    log_path = tmp_path / "train.jsonl"
    config = TrainConfig(
        peak_lr=1e-2, total_updates=200, micro_batch=4, eval_interval=100, seed=2
    )
    initial = validation_perplexity(model, pairs)
    result = train(model, pairs, pairs, config, log_path=log_path)

    records = read_records(log_path)
    assert len(records) == 200
    assert [r["update"] for r in records] == list(range(1, 201))
    assert records[-1]["loss"] < 0.5 * records[0]["loss"]
    assert [r["update"] for r in records if r["val_ppl"] is not None] == [100, 200]
    assert result.best_val_ppl == min(r["val_ppl"] for r in records if r["val_ppl"] is not None)
    assert validation_perplexity(model, pairs) == pytest.approx(result.best_val_ppl)
    assert result.best_val_ppl < initial
    assert all(r["audio_seconds"] == pytest.approx(4 * 6 * 0.02) for r in records)
    assert model.median_target_length == 3


def test_single_pair_memorization():
    model = tiny_model()
    pair = random_pairs(1, seed=3)
    config = TrainConfig(peak_lr=1e-2, total_updates=400, micro_batch=1, seed=1)
    result = train(model, pair, [], config)
    assert result.final_loss < 0.01


@pytest.mark.slow
def test_validation_perplexity_beats_unigram_baseline(tiny_world):
    renderer = tiny_world.renderer()
    codebook = Codebook(tiny_world.prototype_matrix)
    sentences = sample_sentences(80, (3, 6), tiny_world.inventory, seed=8)
    corpus = build_parallel_corpus(
        sentences[:60], AugmentStrategy(kind=StrategyKind.OVERLAPPED, accents_per_sentence=3),
        tiny_world.accents, tiny_world.train_speakers, 180, renderer, codebook, seed=1
    )
    val = build_parallel_corpus(
        sentences[60:], AugmentStrategy(kind=StrategyKind.NON_OVERLAPPED),
        tiny_world.accents, tiny_world.train_speakers, 20, renderer, codebook, seed=2
    )
    model = tiny_model(feature_dim=tiny_world.dim, n_units=codebook.n_units)
    config = TrainConfig(peak_lr=3e-3, total_updates=600, micro_batch=8, eval_interval=100)
    result = train(model, corpus, val, config)

    baseline = unigram_perplexity(
        [p.target for p in corpus], [p.target for p in val],
        n_units=codebook.n_units, smoothing=1.0
    )
    assert result.best_val_ppl < baseline

def test_training_is_deterministic():
    config = TrainConfig(peak_lr=1e-3, total_updates=4, micro_batch=2, seed=5)
    states = []
    for _ in range(2):
        model = tiny_model()
        train(model, random_pairs(5), [], config)
        states.append(model.state_dict())
    for name in states[0]:
        assert np.array_equal(states[0][name], states[1][name])


def test_empty_corpus():
    with pytest.raises(EmptyInputProblem):
        train(tiny_model(), [], [], TrainConfig(total_updates=1))


def test_micro_batches_cover_every_epoch():
    stream = micro_batches(5, TrainConfig(micro_batch=2, seed=1))
    first_epoch = [next(stream) for _ in range(3)]
    assert [len(b) for b in first_epoch] == [2, 2, 1]
    assert sorted(np.concatenate(first_epoch).tolist()) == [0, 1, 2, 3, 4]


def test_linear_decay():
    schedule = LinearDecay(1e-3, 10)
    assert schedule(0) == 1e-3
    assert schedule(5) == pytest.approx(5e-4)
    assert schedule(10) == 0.0


def test_clip_grad_norm():
    p = Parameter(np.zeros(2))
    p.grad = np.array([3.0, 4.0])
    assert clip_grad_norm([p], 1.0) == 5.0
    np.testing.assert_allclose(p.grad, [0.6, 0.8])
    assert clip_grad_norm([p], 10.0) == pytest.approx(1.0)


def test_adam_step():
    p = Parameter(np.array([1.0, -1.0]))
    optimizer = Adam([("p", p)])
    p.grad = np.array([0.5, -2.0])
    optimizer.step(0.1)
    # the first bias-corrected step moves every entry by about lr
    np.testing.assert_allclose(p.data, [0.9, -0.9], atol=1e-6)

    restored = Adam([("p", p)])
    restored.load_state_dict(optimizer.state_dict())
    assert restored.steps == {"p": 1}
    np.testing.assert_array_equal(restored.first["p"], optimizer.first["p"])
