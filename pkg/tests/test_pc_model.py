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

from tests.utils.models import tiny_config, tiny_model
from unitac.exceptions import DimensionMismatchProblem
from unitac.pc.batching import FeatureBatch, collate_features, collate_targets
from unitac.pc.model import DEFAULT_MAX_DECODE_LEN, PCConfig, Vocabulary, stack_frames
from unitac.pc.scoring import ModelScorer


def test_vocabulary():
    vocabulary = Vocabulary(n_units=100)
    assert (vocabulary.bos, vocabulary.eos, vocabulary.pad) == (100, 101, 102)
    assert vocabulary.size == 103


def test_config_validation():
    with pytest.raises(ValueError):
        PCConfig(feature_dim=3, n_units=5, model_dim=10, heads=4)
    with pytest.raises(ValueError):
        PCConfig(feature_dim=3, n_units=1)
    assert tiny_config().attention.head_dim == 8


def test_collate():
    features = collate_features([np.ones((2, 3)), np.ones((4, 3))])
    assert features.frames.shape == (2, 4, 3)
    assert features.padding.tolist() == [[False, False, True, True], [False] * 4]
    targets = collate_targets([[1, 2], [3]], bos=5, eos=6, pad=7)
    assert targets.inputs.tolist() == [[5, 1, 2], [5, 3, 7]]
    assert targets.outputs.tolist() == [[1, 2, 6], [3, 6, 7]]
    assert targets.n_tokens == 5


def test_stack_frames():
    frames = np.arange(10.0).reshape(1, 5, 2)
    padding = np.array([[False, False, False, True, True]])
    stacked = stack_frames(FeatureBatch(frames, padding), 2)
    assert stacked.frames.shape == (1, 3, 4)
    assert stacked.frames[0, 0].tolist() == [0, 1, 2, 3]
    assert stacked.frames[0, 2].tolist() == [8, 9, 0, 0]
    assert stacked.padding.tolist() == [[False, False, True]]


def test_forward_shapes():
    model = tiny_model(subsample=2)
    features = collate_features([np.zeros((5, 3)), np.zeros((7, 3))])
    memory, memory_padding = model.encode(features)
    assert memory.shape == (2, 4, 16)
    assert memory_padding.tolist() == [[False, False, False, True], [False] * 4]
    vocabulary = model.vocabulary
    targets = collate_targets([[1, 2], [3]], vocabulary.bos, vocabulary.eos, vocabulary.pad)
    assert model(features, targets).shape == (2, 3, vocabulary.size)
    assert np.isfinite(model.loss(features, targets).item())


def test_feature_dimension_is_checked():
    model = tiny_model()
    with pytest.raises(DimensionMismatchProblem):
        model.encode(collate_features([np.zeros((4, 2))]))


def test_initialization_is_seeded():
    a, b, c = tiny_model(seed=1), tiny_model(seed=1), tiny_model(seed=2)
    for name, value in a.state_dict().items():
        np.testing.assert_array_equal(value, b.state_dict()[name])
    assert not np.array_equal(a.decoder.head.weight.data, c.decoder.head.weight.data)


def test_max_decode_len():
    model = tiny_model()
    assert model.max_decode_len == DEFAULT_MAX_DECODE_LEN
    model.set_target_lengths([3, 4, 10])
    assert model.max_decode_len == 16


def test_float32_inference():
    model = tiny_model()
    rng = np.random.default_rng(0)
    frames = [rng.standard_normal((6, 3))]
    units = [[0, 2, 4]]
    expected = ModelScorer(model).token_log_probs(frames, units)[0]
    model.to_dtype(np.float32)
    assert model.dtype == np.float32
    reduced = ModelScorer(model).token_log_probs(frames, units)[0]
    assert reduced.dtype == np.float64
    np.testing.assert_allclose(reduced, expected, atol=1e-4)


@pytest.mark.parametrize("rel_window", [0, 2, 8])
def test_decoder_is_causal(rel_window):
    model = tiny_model(rel_window=rel_window)
    rng = np.random.default_rng(3)
    for name, parameter in model.named_parameters():
        if name.endswith("rel_bias"):
            parameter.data[:] = rng.standard_normal(parameter.data.shape)
    vocabulary = model.vocabulary
    features = collate_features([rng.standard_normal((7, 3))])
    prefix = [0, 2]
    logits = [
        model(features, collate_targets(
            [prefix + suffix], vocabulary.bos, vocabulary.eos, vocabulary.pad
        )).data[0]
        for suffix in ([4, 1, 3], [1, 3, 0])
    ]
    # outputs up to the last shared input token only see the shared prefix
    shared = len(prefix) + 1
    np.testing.assert_allclose(logits[0][:shared], logits[1][:shared], rtol=0, atol=1e-12)
    assert not np.allclose(logits[0][shared], logits[1][shared])

    lm_logits = [
        model.decoder(np.array([[vocabulary.bos] + prefix + suffix])).data[0]
        for suffix in ([4, 1], [3, 0])
    ]
    np.testing.assert_allclose(lm_logits[0][:shared], lm_logits[1][:shared], rtol=0, atol=1e-12)
