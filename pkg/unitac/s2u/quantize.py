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
from typing import Iterable

import numpy as np

from unitac.exceptions import DataProblem, EmptyInputProblem
from unitac.s2u.codebook import Codebook, squared_distances
from unitac.s2u.units import UnitSequence, reduce
from unitac.synth.features import FeatureSequence

UNKNOWN_PHONEME = -1


def quantize(features: FeatureSequence, codebook: Codebook) -> UnitSequence:
    """
    Map every frame to its nearest centroid (Euclidean distance, ties to
    the lowest unit id). The output has one unit per frame.

    Raises
    ------
    DimensionMismatchProblem
        If the feature dimension differs from the codebook dimension.
    """
    assignment, _ = codebook.assign(features.frames)
    return UnitSequence(assignment, reduced=False)


def speech_to_units(features: FeatureSequence, codebook: Codebook) -> UnitSequence:
    """Quantize then reduce."""
    return reduce(quantize(features, codebook))


def unit_phoneme_map(
    codebook: Codebook, prototypes: np.ndarray, corpus: Iterable[FeatureSequence]
) -> np.ndarray:
    """
    Label every unit with the phoneme most often rendered at the frames
    assigned to it.

    Ties go to the tied phoneme whose prototype is closest to the unit
    centroid. Units assigned no frame are labelled `UNKNOWN_PHONEME`.

    Parameters
    ----------
    codebook
        The unit codebook.
    prototypes
        (inventory size, D) prototype matrix.
    corpus
        Rendered feature sequences carrying per-frame phoneme labels.

    Returns
    -------
    mapping
        (K,) int64 array, unit id -> phoneme id.

    Raises
    ------
    EmptyInputProblem
        If the corpus holds no labelled frame.
    """
    prototypes = np.asarray(prototypes, dtype=np.float64)
    n_phonemes = prototypes.shape[0]
    counts = np.zeros((codebook.n_units, n_phonemes), dtype=np.int64)
    seen = 0
    for features in corpus:
        if features.phonemes is None:
            raise DataProblem(
                "Unlabelled features",
                f"Sequence {features.provenance.sentence_id} carries no phoneme labels."
            )
        units, _ = codebook.assign(features.frames)
        np.add.at(counts, (units, features.phonemes), 1)
        seen += features.n_frames
    if seen == 0:
        raise EmptyInputProblem("The corpus used to label units")

    distances = squared_distances(codebook.centroids, prototypes)
    mapping = np.full(codebook.n_units, UNKNOWN_PHONEME, dtype=np.int64)
    for unit in range(codebook.n_units):
        row = counts[unit]
        if row.max() == 0:
            continue
        tied = np.flatnonzero(row == row.max())
        mapping[unit] = tied[np.argmin(distances[unit, tied])]
    return mapping
