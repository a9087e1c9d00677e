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
from typing import Tuple

import numpy as np
from pint import Quantity
from pydantic import BaseModel, confloat, conint, validator

from unitac.corpus.inventory import PhonemeInventory
from unitac.exceptions import ConfigurationProblem
from unitac.utils import UNIT_REGISTRY

FRAME_PERIOD_MS = 20
DEFAULT_DIM = 16
DEFAULT_DURATION_RANGE = (2, 6)
DEFAULT_MAX_SPEAKER_OFFSET = 0.5

DEFAULT_SUBSTITUTION_PROB = 0.15
DEFAULT_ACCENT_DURATION_RANGE = (1.1, 1.6)
DEFAULT_FILLER_PROB = 0.05
DEFAULT_ACCENT_SHIFT_SCALE = 0.5

NATIVE_ID = "native"


class RenderConfig(BaseModel):
    """
    Parameters of the parametric renderer.

    `inference_noise_scale` and `duration_noise_scale` are the defaults used
    for accented rendering and can be overridden per render call. Native
    rendering always uses the fixed `native_*` scales.
    """
    dim: conint(ge=2) = DEFAULT_DIM
    frame_period_ms: conint(ge=1) = FRAME_PERIOD_MS
    base_durations: Tuple[conint(ge=1), ...]
    duration_noise_scale: confloat(ge=0) = 0.1
    inference_noise_scale: confloat(ge=0) = 0.05
    native_duration_noise_scale: confloat(ge=0) = 0.0
    native_inference_noise_scale: confloat(ge=0) = 0.05
    max_speaker_offset: confloat(ge=0) = DEFAULT_MAX_SPEAKER_OFFSET

    class Config:
        frozen = True

    @validator('frame_period_ms')
    def check_frame_period(cls, value):
        if value != FRAME_PERIOD_MS:
            raise ValueError(f"the frame period is fixed at {FRAME_PERIOD_MS} ms")
        return value

    @property
    def frame_period(self) -> Quantity:
        return self.frame_period_ms * UNIT_REGISTRY.millisecond

    @classmethod
    def for_inventory(
        cls, inventory: PhonemeInventory, dim: int = DEFAULT_DIM,
        duration_range: Tuple[int, int] = DEFAULT_DURATION_RANGE, seed: int = 0,
        **kwargs
    ) -> "RenderConfig":
        """
        Create a render config whose per-phoneme base durations are drawn
        uniformly in `duration_range` (inclusive).
        """
        low, high = duration_range
        if low < 1 or high < low:
            raise ConfigurationProblem(detail=f"Invalid duration range {duration_range}.")
        rng = np.random.default_rng(seed)
        durations = rng.integers(low, high + 1, size=inventory.size)
        return cls(
            dim=dim, base_durations=tuple(int(d) for d in durations), **kwargs
        )


class SpeakerSpec(BaseModel):
    id: str
    offset: Tuple[float, ...]

    class Config:
        frozen = True

    @property
    def vector(self) -> np.ndarray:
        return np.asarray(self.offset, dtype=np.float64)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.vector))

    def check(self, config: RenderConfig) -> None:
        if len(self.offset) != config.dim:
            raise ConfigurationProblem(
                detail=f"Speaker {self.id} has dimension {len(self.offset)}, "
                       f"expected {config.dim}."
            )
        if self.norm > config.max_speaker_offset + 1e-12:
            raise ConfigurationProblem(
                detail=f"Speaker {self.id} offset norm {self.norm:.3f} exceeds "
                       f"{config.max_speaker_offset}."
            )

    @classmethod
    def native(cls, dim: int, id: str = NATIVE_ID) -> "SpeakerSpec":
        return cls(id=id, offset=tuple(0.0 for _ in range(dim)))

    @classmethod
    def random(
        cls, id: str, dim: int, max_norm: float = DEFAULT_MAX_SPEAKER_OFFSET,
        seed: int = 0
    ) -> "SpeakerSpec":
        """Offset with a uniform direction and a norm uniform in [0, max_norm]."""
        rng = np.random.default_rng(seed)
        direction = rng.standard_normal(dim)
        direction /= np.linalg.norm(direction)
        norm = rng.uniform(0.0, max_norm)
        return cls(id=id, offset=tuple(float(x) for x in direction * norm))


class AccentSpec(BaseModel):
    """
    A parametric accent.

    The accent-specific frame shift of phoneme `p` is `shift_u[p] * shift_v`,
    so the implied (inventory x dim) shift matrix is the outer product of the
    two vectors and has rank at most 1.
    """
    id: str
    substitution_prob: confloat(ge=0, le=1) = DEFAULT_SUBSTITUTION_PROB
    shift_u: Tuple[float, ...]
    shift_v: Tuple[float, ...]
    duration_multiplier: confloat(gt=0) = 1.0
    filler_prob: confloat(ge=0, le=1) = DEFAULT_FILLER_PROB

    class Config:
        frozen = True

    @property
    def u(self) -> np.ndarray:
        return np.asarray(self.shift_u, dtype=np.float64)

    @property
    def v(self) -> np.ndarray:
        return np.asarray(self.shift_v, dtype=np.float64)

    @property
    def shift_matrix(self) -> np.ndarray:
        return np.outer(self.u, self.v)

    @property
    def is_identity(self) -> bool:
        return self.substitution_prob == 0 and self.filler_prob == 0 \
            and self.duration_multiplier == 1.0 and not np.any(self.shift_matrix)

    def check(self, inventory: PhonemeInventory, config: RenderConfig) -> None:
        if len(self.shift_u) != inventory.size:
            raise ConfigurationProblem(
                detail=f"Accent {self.id} has {len(self.shift_u)} phoneme weights, "
                       f"expected {inventory.size}."
            )
        if len(self.shift_v) != config.dim:
            raise ConfigurationProblem(
                detail=f"Accent {self.id} has dimension {len(self.shift_v)}, "
                       f"expected {config.dim}."
            )

    @classmethod
    def identity(cls, inventory_size: int, dim: int, id: str = NATIVE_ID) -> "AccentSpec":
        return cls(
            id=id, substitution_prob=0.0, filler_prob=0.0, duration_multiplier=1.0,
            shift_u=tuple(0.0 for _ in range(inventory_size)),
            shift_v=tuple(0.0 for _ in range(dim)),
        )

    @classmethod
    def random(
        cls, id: str, inventory_size: int, dim: int, seed: int = 0,
        substitution_prob: float = DEFAULT_SUBSTITUTION_PROB,
        duration_range: Tuple[float, float] = DEFAULT_ACCENT_DURATION_RANGE,
        filler_prob: float = DEFAULT_FILLER_PROB,
        shift_scale: float = DEFAULT_ACCENT_SHIFT_SCALE
    ) -> "AccentSpec":
        """
        A non-native accent: standard normal phoneme weights `u`, a direction
        `v` of norm `shift_scale` and a duration multiplier uniform in
        `duration_range`.
        """
        rng = np.random.default_rng(seed)
        u = rng.standard_normal(inventory_size)
        v = rng.standard_normal(dim)
        v *= shift_scale / np.linalg.norm(v)
        tau = rng.uniform(*duration_range)
        return cls(
            id=id, substitution_prob=substitution_prob, filler_prob=filler_prob,
            duration_multiplier=float(tau),
            shift_u=tuple(float(x) for x in u), shift_v=tuple(float(x) for x in v),
        )
