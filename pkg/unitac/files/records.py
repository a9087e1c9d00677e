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
"""
Line-delimited JSON records and plain JSON documents, encoded with orjson.
"""
from pathlib import Path
from typing import Any, Callable, Iterable, Iterator, List, Optional, TypeVar, Union

import orjson

from unitac.exceptions import DataProblem, ParseProblem

T = TypeVar('T')

PathLike = Union[str, Path]

JSON_OPTIONS = orjson.OPT_SERIALIZE_NUMPY | orjson.OPT_NON_STR_KEYS


def dumps(content: Any, indent: bool = False) -> bytes:
    option = JSON_OPTIONS | (orjson.OPT_INDENT_2 if indent else 0)
    return orjson.dumps(content, option=option)


def write_json(path: PathLike, content: Any, indent: bool = True) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        f.write(dumps(content, indent=indent))
        f.write(b"\n")


def read_json(path: PathLike) -> Any:
    path = Path(path)
    if not path.is_file():
        raise DataProblem("File not found", f"The file {path} does not exist.")
    try:
        with open(path, "rb") as f:
            return orjson.loads(f.read())
    except orjson.JSONDecodeError as e:
        raise ParseProblem(path, e.lineno, e.msg)


def write_records(path: PathLike, records: Iterable[Any]) -> int:
    """
    Write one JSON document per line. Returns the number of written records.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with open(path, "wb") as f:
        for record in records:
            f.write(dumps(record))
            f.write(b"\n")
            count += 1
    return count


def append_record(path: PathLike, record: Any) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "ab") as f:
        f.write(dumps(record))
        f.write(b"\n")


def iter_records(
    path: PathLike, parse: Optional[Callable[[Any, int], T]] = None
) -> Iterator[T]:
    """
    Iterate over line-delimited JSON records. Blank lines are skipped.

    Parameters
    ----------
    path
        File to read.
    parse
        Optional conversion applied to every decoded document, receiving the
        document and its 1-based line number. Any `ValueError`, `KeyError` or
        `TypeError` it raises is reported as a `ParseProblem` on that line.

    Raises
    ------
    ParseProblem
        If a line is not valid JSON or cannot be converted.
    """
    path = Path(path)
    if not path.is_file():
        raise DataProblem("File not found", f"The file {path} does not exist.")

    with open(path, "rb") as f:
        for line_number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                document = orjson.loads(line)
            except orjson.JSONDecodeError as e:
                raise ParseProblem(path, line_number, e.msg)
            if parse is None:
                yield document
                continue
            try:
                yield parse(document, line_number)
            except ParseProblem:
                raise
            except (ValueError, KeyError, TypeError) as e:
                raise ParseProblem(path, line_number, str(e))


def read_records(
    path: PathLike, parse: Optional[Callable[[Any, int], T]] = None
) -> List[T]:
    return list(iter_records(path, parse))
