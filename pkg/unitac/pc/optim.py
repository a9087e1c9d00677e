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
from typing import Dict, List, Sequence, Tuple

import numpy as np

from unitac.nn.modules import Parameter


class LinearDecay:
    """Learning rate decaying linearly from `peak` at update 0 to 0 at `total`."""

    def __init__(self, peak: float, total: int):
        self.peak = peak
        self.total = total

    def __call__(self, update: int) -> float:
        return self.peak * max(0.0, 1.0 - update / self.total)


def clip_grad_norm(parameters: Sequence[Parameter], max_norm: float) -> float:
    """
    Rescale gradients so that their global L2 norm is at most `max_norm`.
    Returns the norm before clipping.
    """
    grads = [p.grad for p in parameters if p.grad is not None]
    if not grads:
        return 0.0
    norm = float(np.sqrt(sum(float(np.sum(g * g)) for g in grads)))
    if norm > max_norm:
        scale = max_norm / norm
        for p in parameters:
            if p.grad is not None:
                p.grad = p.grad * scale
    return norm


class Adam:
    """
    Adaptive moment estimation. Parameters without gradient at a step are
    left untouched and their moments are not advanced.
    """

    def __init__(
        self, named_parameters: Sequence[Tuple[str, Parameter]],
        betas: Tuple[float, float] = (0.9, 0.999), eps: float = 1e-8
    ):
        self.named_parameters: List[Tuple[str, Parameter]] = list(named_parameters)
        self.beta1, self.beta2 = betas
        self.eps = eps
        self.steps: Dict[str, int] = {}
        self.first: Dict[str, np.ndarray] = {}
        self.second: Dict[str, np.ndarray] = {}

    @property
    def parameters(self) -> List[Parameter]:
        return [p for _, p in self.named_parameters]

    def step(self, lr: float) -> None:
        for name, p in self.named_parameters:
            if p.grad is None:
                continue
            t = self.steps.get(name, 0) + 1
            self.steps[name] = t
            m = self.first.get(name)
            v = self.second.get(name)
            if m is None:
                m = np.zeros_like(p.data)
                v = np.zeros_like(p.data)
            m = self.beta1 * m + (1 - self.beta1) * p.grad
            v = self.beta2 * v + (1 - self.beta2) * p.grad ** 2
            self.first[name], self.second[name] = m, v
            if lr == 0:
                continue
            m_hat = m / (1 - self.beta1 ** t)
            v_hat = v / (1 - self.beta2 ** t)
            p.data = p.data - lr * m_hat / (np.sqrt(v_hat) + self.eps)

    def state_dict(self) -> Dict[str, np.ndarray]:
        state = {}
        for name in self.first:
            state[f"adam.m.{name}"] = self.first[name]
            state[f"adam.v.{name}"] = self.second[name]
            state[f"adam.t.{name}"] = np.asarray([self.steps[name]], dtype=np.float64)
        return state

    def load_state_dict(self, state: Dict[str, np.ndarray]) -> None:
        for name, _ in self.named_parameters:
            if f"adam.m.{name}" in state:
                self.first[name] = np.array(state[f"adam.m.{name}"])
                self.second[name] = np.array(state[f"adam.v.{name}"])
                self.steps[name] = int(state[f"adam.t.{name}"][0])
