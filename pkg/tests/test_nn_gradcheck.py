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

from tests.utils.models import tiny_model
from unitac.nn.modules import FeedForward, LayerNorm, Linear, Module
from unitac.nn.gradcheck import grad_check
from unitac.nn.tensor import Tensor
from unitac.pc.batching import collate_features, collate_targets


def test_linear_squared_loss():
    rng = np.random.default_rng(0)
    linear = Linear(4, 3, rng)
    linear.bias.data = rng.standard_normal(3)
    x = Tensor(rng.standard_normal((5, 4)))
    y = rng.standard_normal((5, 3))

    def loss():
        return ((linear(x) - y) ** 2).sum()

    assert grad_check(linear, loss) < 1e-7


def test_constant_loss_has_zero_gradient():
    linear = Linear(2, 2, np.random.default_rng(0))
    assert grad_check(linear, lambda: Tensor(3.0)) == 0.0
    assert linear.weight.grad is None


class Block(Module):
    def __init__(self, rng):
        self.norm = LayerNorm(4)
        self.ff = FeedForward(4, 8, rng)

    def forward(self, x):
        return self.ff(self.norm(x))


def test_layer_norm_and_feed_forward():
    rng = np.random.default_rng(1)
    block = Block(rng)
    block.norm.gamma.data = rng.uniform(0.5, 1.5, 4)
    block.norm.beta.data = rng.standard_normal(4)
    x = Tensor(rng.standard_normal((3, 4)))
    errors = {}
    assert grad_check(block, lambda: (block(x) ** 2).mean(), errors=errors) < 1e-6
    assert set(errors) == {
        "norm.gamma", "norm.beta", "ff.inner.weight", "ff.inner.bias",
        "ff.outer.weight", "ff.outer.bias"
    }


def test_full_encoder_decoder():
    model = tiny_model(feature_dim=3, n_units=5, model_dim=16, heads=2)
    rng = np.random.default_rng(2)
    features = collate_features([rng.standard_normal((6, 3)), rng.standard_normal((6, 3))])
    vocabulary = model.vocabulary
    targets = collate_targets([[0, 3, 1], [4, 2, 0]], vocabulary.bos, vocabulary.eos, vocabulary.pad)

    def loss():
        return model.loss(features, targets, reduction='mean')

    assert grad_check(model, loss, max_entries_per_param=3, seed=3) < 1e-4
