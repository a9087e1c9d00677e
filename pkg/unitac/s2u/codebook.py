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
from typing import NamedTuple, Optional, Tuple

import numpy as np

from unitac.exceptions import DataProblem, DimensionMismatchProblem, NumericProblem
from unitac.utils.concurrency import map_ordered
from unitac.utils.iterables import chunks

DEFAULT_K = 100
ASSIGN_CHUNK_SIZE = 1024


class FitStats(NamedTuple):
    iterations: int = 0
    objective: float = 0.0
    history: Tuple[float, ...] = tuple()


class Codebook:
    """
    K centroid vectors defining the discrete unit vocabulary.
    """

    def __init__(self, centroids: np.ndarray, fit_stats: Optional[FitStats] = None):
        centroids = np.array(centroids, dtype=np.float64)
        if centroids.ndim != 2 or centroids.shape[0] < 2:
            raise DataProblem(
                "Invalid codebook", f"A codebook is a (K, D) matrix with K >= 2, got {centroids.shape}."
            )
        if not np.all(np.isfinite(centroids)):
            raise NumericProblem(detail="The codebook contains non-finite centroids.")
        if np.unique(centroids, axis=0).shape[0] != centroids.shape[0]:
            raise DataProblem("Invalid codebook", "Two centroids are identical.")
        centroids.setflags(write=False)
        self.centroids = centroids
        self.fit_stats = fit_stats if fit_stats is not None else FitStats()

    @property
    def n_units(self) -> int:
        return self.centroids.shape[0]

    @property
    def dim(self) -> int:
        return self.centroids.shape[1]

    def __len__(self) -> int:
        return self.n_units

    def __eq__(self, o: object) -> bool:
        return isinstance(o, Codebook) and np.array_equal(self.centroids, o.centroids)

    def min_separation(self) -> float:
        """Minimum distance between two distinct centroids."""
        distances = squared_distances(self.centroids, self.centroids)
        np.fill_diagonal(distances, np.inf)
        return float(np.sqrt(distances.min()))

    def assign(self, frames: np.ndarray, threads: int = 1) -> Tuple[np.ndarray, np.ndarray]:
        """
        Nearest centroid of every frame, ties going to the lowest index.

        Returns
        -------
        assignment
            (N,) int64 unit ids.
        distances
            (N,) squared distances to the assigned centroid.
        """
        frames = np.asarray(frames, dtype=np.float64)
        if frames.ndim != 2:
            raise DataProblem("Invalid frames", f"Expected a (N, D) matrix, got {frames.shape}.")
        if frames.shape[1] != self.dim:
            raise DimensionMismatchProblem("Features", self.dim, frames.shape[1])
        return nearest_centroids(frames, self.centroids, threads=threads)


def squared_distances(frames: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    """(N, K) squared Euclidean distances, computed on direct differences."""
    diff = frames[:, None, :] - centroids[None, :, :]
    return np.einsum('nkd,nkd->nk', diff, diff)


def nearest_centroids(
    frames: np.ndarray, centroids: np.ndarray, threads: int = 1
) -> Tuple[np.ndarray, np.ndarray]:
    n = frames.shape[0]
    if n == 0:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.float64)

    def assign_chunk(bounds):
        start, stop = bounds
        distances = squared_distances(frames[start:stop], centroids)
        best = np.argmin(distances, axis=1)
        return best, distances[np.arange(stop - start), best]

    bounds = [(c[0], c[-1] + 1) for c in chunks(range(n), ASSIGN_CHUNK_SIZE)]
    results = map_ordered(assign_chunk, bounds, threads=threads)
    assignment = np.concatenate([r[0] for r in results]).astype(np.int64)
    distances = np.concatenate([r[1] for r in results])
    return assignment, distances
