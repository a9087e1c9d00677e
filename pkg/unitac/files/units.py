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
from pathlib import Path
from typing import Iterable, List, Optional

from unitac.exceptions import DataProblem, ParseProblem
from unitac.files.records import PathLike
from unitac.s2u.units import UnitSequence


def write_units(path: PathLike, sequences: Iterable[UnitSequence]) -> int:
    """One utterance per line, space-separated unit ids."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with open(path, "w", encoding="utf-8") as f:
        for sequence in sequences:
            f.write(f"{sequence}\n")
            count += 1
    return count


def read_units(
    path: PathLike, reduced: bool = False, n_units: Optional[int] = None
) -> List[UnitSequence]:
    """
    Read a unit file. An empty line is an empty utterance.

    Raises
    ------
    ParseProblem
        If a line holds anything else than unit ids in range, or adjacent
        duplicates while `reduced` is set.
    """
    path = Path(path)
    if not path.is_file():
        raise DataProblem("File not found", f"The file {path} does not exist.")
    sequences = []
    with open(path, "r", encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            try:
                units = [int(token) for token in line.split()]
                sequences.append(UnitSequence(units, reduced=reduced, n_units=n_units))
            except ValueError as e:
                raise ParseProblem(path, line_number, str(e))
            except DataProblem as e:
                raise ParseProblem(path, line_number, e.detail)
    return sequences
