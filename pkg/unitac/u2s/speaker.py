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

import numpy as np

from unitac.exceptions import EmptyInputProblem, NumericProblem
from unitac.s2u.codebook import Codebook
from unitac.synth.features import FeatureSequence


class SpeakerEmbedding:
    def __init__(self, vector: np.ndarray):
        vector = np.array(vector, dtype=np.float64).reshape(-1)
        if not np.all(np.isfinite(vector)):
            raise NumericProblem(detail="The speaker embedding is not finite.")
        vector.setflags(write=False)
        self.vector = vector

    @property
    def dim(self) -> int:
        return self.vector.shape[0]

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.vector))

    def cosine(self, other: SpeakerEmbedding) -> float:
        """
        Cosine similarity. Two zero embeddings are identical (1.0); a zero
        embedding is unrelated to any other one (0.0).
        """
        a, b = self.norm, other.norm
        if a == 0 and b == 0:
            return 1.0
        if a == 0 or b == 0:
            return 0.0
        return float(np.dot(self.vector, other.vector) / (a * b))

    def __eq__(self, o: object) -> bool:
        return isinstance(o, SpeakerEmbedding) and np.array_equal(self.vector, o.vector)

    def __repr__(self) -> str:
        return f"SpeakerEmbedding(norm={self.norm:.4f})"

    @classmethod
    def zeros(cls, dim: int) -> SpeakerEmbedding:
        return cls(np.zeros(dim))


def speaker_embed(features: FeatureSequence, codebook: Codebook) -> SpeakerEmbedding:
    """
    Mean quantization residual: the average of `frame - nearest centroid`
    over the sequence.

    Raises
    ------
    EmptyInputProblem
        If the sequence has no frame.
    DimensionMismatchProblem
        If the feature dimension differs from the codebook dimension.
    """
    if features.n_frames == 0:
        raise EmptyInputProblem("The feature sequence to embed")
    assignment, _ = codebook.assign(features.frames)
    residuals = features.frames - codebook.centroids[assignment]
    return SpeakerEmbedding(residuals.mean(axis=0))
