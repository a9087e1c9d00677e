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
import logging

import numpy as np

from unitac.exceptions import ConfigurationProblem, DataProblem
from unitac.s2u.codebook import Codebook, DEFAULT_K, FitStats, nearest_centroids
from unitac.utils.seeds import rng_for

log = logging.getLogger("unitac.s2u")

DEFAULT_MAX_ITERS = 100
DEFAULT_TOL = 1e-6


def kmeans_plusplus(frames: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """
    k-means++ seeding: each new center is drawn with probability
    proportional to the squared distance to the closest chosen center.
    Points at distance zero are never picked twice.
    """
    n = frames.shape[0]
    centers = np.empty((k, frames.shape[1]), dtype=np.float64)
    first = int(rng.integers(n))
    centers[0] = frames[first]
    closest = np.sum((frames - centers[0]) ** 2, axis=1)
    for i in range(1, k):
        total = closest.sum()
        if total <= 0:
            raise ConfigurationProblem(
                detail=f"The frames have fewer than {k} distinct values."
            )
        index = int(rng.choice(n, p=closest / total))
        centers[i] = frames[index]
        closest = np.minimum(closest, np.sum((frames - centers[i]) ** 2, axis=1))
    return centers


def fit_kmeans(
    frames: np.ndarray, k: int = DEFAULT_K, max_iters: int = DEFAULT_MAX_ITERS,
    tol: float = DEFAULT_TOL, seed: int = 0, threads: int = 1
) -> Codebook:
    """
    Fit a codebook with Lloyd's algorithm from a k-means++ initialization.

    Iterations stop when no centroid moves by `tol` or more, or after
    `max_iters` iterations. A cluster left empty by an assignment step is
    reseeded at the frame farthest from its own centroid. The objective
    (sum of squared distances to the assigned centroid) recorded at every
    assignment step is non-increasing.

    Parameters
    ----------
    frames
        (N, D) matrix of frames, N >= k.
    k
        Number of centroids.
    max_iters
        Maximum number of Lloyd iterations.
    tol
        Convergence threshold on the largest centroid displacement.
    seed
        Random seed of the k-means++ initialization.
    threads
        Threads used by the assignment step. The result does not depend on it.

    Raises
    ------
    ConfigurationProblem
        If N < k, k < 2 or there are fewer than k distinct frames.
    DataProblem
        If the frames are not a finite 2-D matrix.
    """
    frames = np.asarray(frames, dtype=np.float64)
    if frames.ndim != 2:
        raise DataProblem("Invalid frames", f"Expected a (N, D) matrix, got {frames.shape}.")
    if not np.all(np.isfinite(frames)):
        raise DataProblem("Invalid frames", "K-means input contains non-finite values.")
    if k < 2:
        raise ConfigurationProblem(detail=f"K must be at least 2, got {k}.")
    n = frames.shape[0]
    if n < k:
        raise ConfigurationProblem(detail=f"K-means needs at least K={k} frames, got {n}.")
    if max_iters < 1 or tol < 0:
        raise ConfigurationProblem(detail="max_iters must be positive and tol non-negative.")

    rng = rng_for(seed, "kmeans++")
    centroids = kmeans_plusplus(frames, k, rng)

    history = []
    iterations = 0
    for iterations in range(1, max_iters + 1):
        assignment, distances = nearest_centroids(frames, centroids, threads=threads)
        history.append(float(distances.sum()))

        counts = np.bincount(assignment, minlength=k)
        sums = np.stack([
            np.bincount(assignment, weights=frames[:, d], minlength=k)
            for d in range(frames.shape[1])
        ], axis=1)
        updated = centroids.copy()
        filled = counts > 0
        updated[filled] = sums[filled] / counts[filled, None]

        empty = np.flatnonzero(~filled)
        if empty.size > 0:
            # farthest frames first, each frame used at most once
            farthest = np.argsort(-distances, kind='stable')
            for cluster, index in zip(empty, farthest):
                updated[cluster] = frames[index]
            log.debug(f"Reseeded {empty.size} empty clusters at iteration {iterations}")

        shift = float(np.max(np.linalg.norm(updated - centroids, axis=1)))
        centroids = updated
        if shift < tol:
            break

    _, distances = nearest_centroids(frames, centroids, threads=threads)
    objective = float(distances.sum())
    history.append(objective)

    log.info(
        f"K-means fitted: K={k}, N={n}, {iterations} iterations, "
        f"objective {objective:.6g}"
    )
    return Codebook(centroids, FitStats(iterations, objective, tuple(history)))
