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

from unitac.exceptions import ConfigurationProblem, DataProblem
from unitac.s2u.kmeans import fit_kmeans


def test_objective_is_non_increasing():
    rng = np.random.default_rng(0)
    frames = rng.standard_normal((300, 4))
    for seed in range(20):
        codebook = fit_kmeans(frames, k=8, max_iters=30, seed=seed)
        history = codebook.fit_stats.history
        assert all(b <= a + 1e-9 for a, b in zip(history, history[1:]))
        assert codebook.fit_stats.objective == history[-1]


def test_blob_recovery():
    rng = np.random.default_rng(1)
    means = np.array([[0.0, 0.0], [10.0, 0.0], [0.0, 10.0]])
    frames = np.concatenate([m + 0.3 * rng.standard_normal((200, 2)) for m in means])
    codebook = fit_kmeans(frames, k=3, seed=2)
    for mean in means:
        assert np.min(np.linalg.norm(codebook.centroids - mean, axis=1)) < 0.1


def test_one_centroid_per_frame():
    frames = np.random.default_rng(4).standard_normal((6, 3))
    codebook = fit_kmeans(frames, k=6, seed=1)
    assert codebook.fit_stats.objective == pytest.approx(0.0, abs=1e-9)
    distances = np.linalg.norm(frames[:, None, :] - codebook.centroids[None, :, :], axis=2)
    # centroids are the frames, up to permutation
    assert np.all(distances.min(axis=1) < 1e-9)
    assert sorted(distances.argmin(axis=1).tolist()) == list(range(6))


def test_kmeans_is_deterministic():
    rng = np.random.default_rng(2)
    frames = rng.standard_normal((100, 3))
    assert fit_kmeans(frames, k=5, seed=3) == fit_kmeans(frames, k=5, seed=3, threads=3)


def test_kmeans_invalid_inputs():
    frames = np.random.default_rng(3).standard_normal((10, 2))
    with pytest.raises(ConfigurationProblem):
        fit_kmeans(frames, k=11)
    with pytest.raises(ConfigurationProblem):
        fit_kmeans(frames, k=1)
    with pytest.raises(ConfigurationProblem):
        fit_kmeans(np.zeros((10, 2)), k=2)
    with pytest.raises(DataProblem):
        fit_kmeans(np.full((10, 2), np.nan), k=2)
