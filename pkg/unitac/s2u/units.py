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

from typing import Iterable, Iterator, List, Optional, Tuple

import numpy as np

from unitac.exceptions import DataProblem


def has_adjacent_duplicates(units: Iterable[int]) -> bool:
    previous = None
    for u in units:
        if u == previous:
            return True
        previous = u
    return False


class UnitSequence:
    """
    A sequence of discrete unit ids.

    A reduced sequence has no two equal adjacent units. BOS/EOS sentinels
    are never stored here; they only exist at model boundaries.
    """
    __slots__ = ('_units', 'reduced')

    def __init__(self, units: Iterable[int], reduced: bool = False, n_units: Optional[int] = None):
        units = tuple(int(u) for u in units)
        if any(u < 0 for u in units):
            raise DataProblem("Invalid unit sequence", "Unit ids are non-negative.")
        if n_units is not None and any(u >= n_units for u in units):
            raise DataProblem(
                "Invalid unit sequence", f"Unit id {max(units)} is out of range 0..{n_units - 1}."
            )
        if reduced and has_adjacent_duplicates(units):
            raise DataProblem(
                "Invalid unit sequence", "A reduced sequence has adjacent duplicate units."
            )
        self._units: Tuple[int, ...] = units
        self.reduced = reduced

    @property
    def units(self) -> Tuple[int, ...]:
        return self._units

    def to_list(self) -> List[int]:
        return list(self._units)

    def to_array(self) -> np.ndarray:
        return np.asarray(self._units, dtype=np.int64)

    def __len__(self) -> int:
        return len(self._units)

    def __iter__(self) -> Iterator[int]:
        return iter(self._units)

    def __getitem__(self, item):
        return self._units[item]

    def __eq__(self, o: object) -> bool:
        return isinstance(o, UnitSequence) and self._units == o._units \
            and self.reduced == o.reduced

    def __hash__(self) -> int:
        return hash((self._units, self.reduced))

    def __repr__(self) -> str:
        return f"UnitSequence({list(self._units)}, reduced={self.reduced})"

    def __str__(self) -> str:
        return " ".join(str(u) for u in self._units)


def reduce(units: UnitSequence) -> UnitSequence:
    """
    Collapse every maximal run of equal adjacent units into one unit.
    """
    collapsed = []
    for u in units:
        if not collapsed or collapsed[-1] != u:
            collapsed.append(u)
    return UnitSequence(collapsed, reduced=True)
