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
from typing import Any, Iterable, List, Sequence, TypeVar

T = TypeVar('T')


def flatten(t: Iterable[Iterable[Any]]) -> List[Any]:
    return [item for sublist in t for item in sublist]


def runs(values: Sequence[T]) -> List[List[T]]:
    """
    Split a sequence into maximal runs of equal adjacent values.

    Examples
    --------
    >>> runs([5, 5, 3, 7, 7])
    [[5, 5], [3], [7, 7]]
    """
    grouped = []
    for v in values:
        if grouped and grouped[-1][0] == v:
            grouped[-1].append(v)
        else:
            grouped.append([v])
    return grouped


def chunks(values: Sequence[T], size: int) -> List[Sequence[T]]:
    return [values[i:i + size] for i in range(0, len(values), size)]
