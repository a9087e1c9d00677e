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

import logging
from collections import defaultdict
from typing import Dict, Iterable, List, Tuple

import numpy as np

from unitac.exceptions import (
    DataProblem, DimensionMismatchProblem, EmptyInputProblem, NumericProblem
)
from unitac.s2u.codebook import Codebook
from unitac.s2u.units import UnitSequence
from unitac.synth.features import FeatureSequence, Provenance
from unitac.u2s.speaker import SpeakerEmbedding
from unitac.utils.iterables import runs

log = logging.getLogger("unitac.u2s")


class UnitDecoder:
    """
    Statistical unit-to-features decoder: one mean frame and one duration
    (in frames) per unit.
    """

    def __init__(self, unit_means: np.ndarray, unit_durations: np.ndarray):
        unit_means = np.array(unit_means, dtype=np.float64)
        unit_durations = np.array(unit_durations, dtype=np.int64)
        if unit_means.ndim != 2:
            raise DataProblem("Invalid unit decoder", "Unit means must be a (K, D) matrix.")
        if unit_durations.shape != (unit_means.shape[0],):
            raise DimensionMismatchProblem("Unit durations", unit_means.shape[0], unit_durations.shape[0])
        if not np.all(np.isfinite(unit_means)):
            raise NumericProblem(detail="The unit decoder contains non-finite means.")
        if np.any(unit_durations < 1):
            raise DataProblem("Invalid unit decoder", "Unit durations are at least one frame.")
        unit_means.setflags(write=False)
        unit_durations.setflags(write=False)
        self.unit_means = unit_means
        self.unit_durations = unit_durations

    @property
    def n_units(self) -> int:
        return self.unit_means.shape[0]

    @property
    def dim(self) -> int:
        return self.unit_means.shape[1]

    def __eq__(self, o: object) -> bool:
        return isinstance(o, UnitDecoder) \
            and np.array_equal(self.unit_means, o.unit_means) \
            and np.array_equal(self.unit_durations, o.unit_durations)

    @classmethod
    def from_codebook(cls, codebook: Codebook, duration: int = 1) -> UnitDecoder:
        return cls(codebook.centroids, np.full(codebook.n_units, duration, dtype=np.int64))


def fit_unit_decoder(
    corpus: Iterable[Tuple[FeatureSequence, UnitSequence]], codebook: Codebook
) -> UnitDecoder:
    """
    Estimate the mean frame of every unit and its median run length on
    native speech.

    Units never observed fall back to their codebook centroid and a
    duration of one frame. Median durations are rounded to the nearest
    integer.

    Raises
    ------
    EmptyInputProblem
        If the corpus holds no frame.
    DataProblem
        If a sequence is not aligned with its units.
    """
    k, dim = codebook.n_units, codebook.dim
    sums = np.zeros((k, dim), dtype=np.float64)
    counts = np.zeros(k, dtype=np.int64)
    run_lengths: Dict[int, List[int]] = defaultdict(list)

    for features, units in corpus:
        if units.reduced or len(units) != features.n_frames:
            raise DataProblem(
                "Misaligned unit decoder corpus",
                f"{len(units)} units (reduced={units.reduced}) "
                f"for {features.n_frames} frames."
            )
        if features.dim != dim:
            raise DimensionMismatchProblem("Features", dim, features.dim)
        ids = units.to_array()
        if np.any(ids >= k):
            raise DataProblem("Invalid units", f"Unit ids must be below {k}.")
        np.add.at(sums, ids, features.frames)
        counts += np.bincount(ids, minlength=k)
        for run in runs(units.units):
            run_lengths[run[0]].append(len(run))

    if counts.sum() == 0:
        raise EmptyInputProblem("The unit decoder corpus")

    means = np.array(codebook.centroids, dtype=np.float64)
    seen = counts > 0
    means[seen] = sums[seen] / counts[seen, None]
    durations = np.ones(k, dtype=np.int64)
    for unit, lengths in run_lengths.items():
        durations[unit] = max(1, int(np.rint(np.median(lengths))))

    log.info(f"Unit decoder fitted: {int(seen.sum())}/{k} units observed")
    return UnitDecoder(means, durations)


def synthesize(
    units: UnitSequence, embedding: SpeakerEmbedding, decoder: UnitDecoder
) -> FeatureSequence:
    """
    Decode units into features carrying a speaker embedding: unit `k`
    emits `unit_durations[k]` copies of `unit_means[k] + embedding`.

    Decoding is noiseless. An empty unit sequence gives an empty feature
    sequence.

    Raises
    ------
    DataProblem
        If a unit id is not below the decoder size.
    """
    if embedding.dim != decoder.dim:
        raise DimensionMismatchProblem("Speaker embedding", decoder.dim, embedding.dim)
    ids = units.to_array()
    provenance = Provenance(speaker_id="synthesized")
    if ids.size == 0:
        return FeatureSequence.empty(decoder.dim, provenance=provenance)
    if np.any(ids >= decoder.n_units):
        raise DataProblem(
            "Invalid units", f"Unit id {int(ids.max())} is not below {decoder.n_units}."
        )
    means = decoder.unit_means[ids] + embedding.vector
    frames = np.repeat(means, decoder.unit_durations[ids], axis=0)
    return FeatureSequence(frames, provenance=provenance)
