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

from unitac.exceptions import DataProblem
from unitac.s2u.units import UnitSequence, has_adjacent_duplicates, reduce


def test_reduce():
    assert reduce(UnitSequence([5, 5, 3, 3, 3, 7])) == UnitSequence([5, 3, 7], reduced=True)
    assert reduce(UnitSequence([])) == UnitSequence([], reduced=True)
    assert reduce(UnitSequence([4])).units == (4,)


def test_reduce_laws():
    rng = np.random.default_rng(0)
    for _ in range(2000):
        length = int(rng.integers(0, 30))
        units = UnitSequence(rng.integers(0, 4, size=length))
        reduced = reduce(units)
        assert not has_adjacent_duplicates(reduced)
        assert reduce(reduced) == reduced
        assert len(reduced) <= len(units)
        assert set(reduced) == set(units)


def test_invalid_sequences():
    with pytest.raises(DataProblem):
        UnitSequence([1, -1])
    with pytest.raises(DataProblem):
        UnitSequence([1, 1], reduced=True)
    with pytest.raises(DataProblem):
        UnitSequence([1, 10], n_units=10)


def test_sequence_protocol():
    units = UnitSequence([2, 0, 1], reduced=True)
    assert str(units) == "2 0 1"
    assert units.to_list() == [2, 0, 1]
    assert units[1] == 0
    assert units != UnitSequence([2, 0, 1])
    assert len({units, UnitSequence((2, 0, 1), reduced=True)}) == 1
