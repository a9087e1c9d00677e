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

from unitac.utils.concurrency import map_ordered
from unitac.utils.dict import set_nested
from unitac.utils.iterables import chunks, flatten, runs
from unitac.utils.seeds import derive_seed, rng_for


def test_runs():
    assert runs([5, 5, 3, 7, 7]) == [[5, 5], [3], [7, 7]]
    assert runs([]) == []
    assert runs([1]) == [[1]]


def test_chunks():
    assert chunks([1, 2, 3, 4, 5], 2) == [[1, 2], [3, 4], [5]]
    assert chunks([], 3) == []


def test_flatten():
    assert flatten([[1], [2, 3], []]) == [1, 2, 3]


def test_set_nested():
    d = {"train": {"seed": 1}}
    set_nested(d, "train.peak_lr", 0.5)
    set_nested(d, "model.heads", 2)
    assert d == {"train": {"seed": 1, "peak_lr": 0.5}, "model": {"heads": 2}}


def test_map_ordered_does_not_depend_on_threads():
    items = list(range(20))
    assert map_ordered(lambda x: x * x, items, threads=1) == [x * x for x in items]
    assert map_ordered(lambda x: x * x, items, threads=4) == [x * x for x in items]


def test_derived_seeds():
    assert derive_seed(0, "a") == derive_seed(0, "a")
    assert derive_seed(0, "a") != derive_seed(0, "b")
    assert 0 <= derive_seed(-3, "negative") < 2 ** 63
    assert rng_for(-1, "x").random() == rng_for(-1, "x").random()
