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
from __future__ import annotations

from typing import NamedTuple, Optional

import numpy as np
from pint import Quantity

from unitac.exceptions import DataProblem, NumericProblem
from unitac.synth.specs import FRAME_PERIOD_MS
from unitac.utils import UNIT_REGISTRY


class Provenance(NamedTuple):
    sentence_id: Optional[str] = None
    speaker_id: Optional[str] = None
    accent_id: Optional[str] = None
    seed: Optional[int] = None


class FeatureSequence:
    """
    A time-ordered (T x D) matrix of feature frames, one frame every 20 ms.

    Rendered sequences also carry the surface phoneme emitted at every frame
    (`phonemes`), used to label units. Sequences produced by unit decoding
    may be empty; rendered ones never are.
    """

    def __init__(
        self, frames: np.ndarray, provenance: Provenance = None,
        phonemes: Optional[np.ndarray] = None, allow_empty: bool = False
    ):
        frames = np.asarray(frames, dtype=np.float64)
        if frames.ndim != 2:
            raise DataProblem(
                "Invalid feature sequence",
                f"Frames must be a (T, D) matrix, got shape {frames.shape}."
            )
        if frames.shape[0] == 0 and not allow_empty:
            raise DataProblem("Invalid feature sequence", "A feature sequence has at least one frame.")
        if not np.all(np.isfinite(frames)):
            raise NumericProblem(detail="A feature sequence contains non-finite values.")
        if phonemes is not None:
            phonemes = np.asarray(phonemes, dtype=np.int64)
            if phonemes.shape != (frames.shape[0],):
                raise DataProblem(
                    "Invalid feature sequence",
                    f"{phonemes.shape[0]} phoneme labels for {frames.shape[0]} frames."
                )

        self.frames = frames
        self.provenance = provenance if provenance is not None else Provenance()
        self.phonemes = phonemes

    @property
    def n_frames(self) -> int:
        return self.frames.shape[0]

    @property
    def dim(self) -> int:
        return self.frames.shape[1]

    @property
    def duration(self) -> Quantity:
        return (self.n_frames * FRAME_PERIOD_MS * UNIT_REGISTRY.millisecond).to('second')

    def __len__(self) -> int:
        return self.n_frames

    def __eq__(self, o: object) -> bool:
        return isinstance(o, FeatureSequence) \
               and self.provenance == o.provenance \
               and np.array_equal(self.frames, o.frames) \
               and ((self.phonemes is None and o.phonemes is None)
                    or (self.phonemes is not None and o.phonemes is not None
                        and np.array_equal(self.phonemes, o.phonemes)))

    def __repr__(self) -> str:
        return f"FeatureSequence(T={self.n_frames}, D={self.dim}, {self.provenance})"

    @classmethod
    def empty(cls, dim: int, provenance: Provenance = None) -> FeatureSequence:
        return cls(np.zeros((0, dim)), provenance=provenance, allow_empty=True)
