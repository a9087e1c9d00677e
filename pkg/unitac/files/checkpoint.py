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
Checkpoint files: named tables of 64-bit floats with a JSON header.

Layout: 4-byte magic, format version and header length as unsigned 32-bit
integers, the orjson header, then every array of every section in header
order as row-major little-endian 64-bit floats. The header lists, per
section, the `name` and `shape` of each array and carries free metadata.
"""
from pathlib import Path
from typing import Any, Dict, NamedTuple

import numpy as np
import orjson

from unitac.exceptions import BadMagicProblem, DataProblem
from unitac.files.binary import FORMAT_VERSION, read_array
from unitac.files.records import PathLike, dumps

CHECKPOINT_MAGIC = b"UCKP"
PREAMBLE_DTYPE = np.dtype([('magic', 'S4'), ('version', '<u4'), ('length', '<u4')])

Table = Dict[str, np.ndarray]


class Checkpoint(NamedTuple):
    meta: Dict[str, Any]
    sections: Dict[str, Table]


def write_checkpoint(path: PathLike, meta: Dict[str, Any], sections: Dict[str, Table]) -> None:
    layout = {
        section: [{"name": name, "shape": list(np.shape(array))} for name, array in table.items()]
        for section, table in sections.items()
    }
    header = dumps({"meta": meta, "layout": layout})
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        preamble = np.array([(CHECKPOINT_MAGIC, FORMAT_VERSION, len(header))], dtype=PREAMBLE_DTYPE)
        f.write(preamble.tobytes())
        f.write(header)
        for table in sections.values():
            for array in table.values():
                f.write(np.ascontiguousarray(array, dtype='<f8').tobytes())


def read_checkpoint(path: PathLike) -> Checkpoint:
    path = Path(path)
    if not path.is_file():
        raise DataProblem("File not found", f"The file {path} does not exist.")
    with open(path, "rb") as f:
        raw = f.read(PREAMBLE_DTYPE.itemsize)
        if len(raw) < PREAMBLE_DTYPE.itemsize:
            raise DataProblem("Truncated file", f"The file {path} is too short to be a checkpoint.")
        preamble = np.frombuffer(raw, dtype=PREAMBLE_DTYPE)[0]
        if preamble['magic'] != CHECKPOINT_MAGIC:
            raise BadMagicProblem(path, CHECKPOINT_MAGIC, bytes(preamble['magic']))
        if preamble['version'] != FORMAT_VERSION:
            raise DataProblem(
                "Unsupported version", f"The checkpoint {path} has version {preamble['version']}."
            )
        try:
            header = orjson.loads(f.read(int(preamble['length'])))
            layout = header["layout"]
        except (orjson.JSONDecodeError, KeyError, TypeError) as e:
            raise DataProblem("Invalid checkpoint", f"{path}: unreadable header ({e}).")

        sections: Dict[str, Table] = {}
        for section, entries in layout.items():
            table = {}
            for entry in entries:
                shape = tuple(entry["shape"])
                count = int(np.prod(shape, dtype=np.int64))
                table[entry["name"]] = read_array(f, path, '<f8', count).reshape(shape).copy()
            sections[section] = table
        if f.read(1):
            raise DataProblem("Invalid file", f"The file {path} has trailing bytes.")
    return Checkpoint(header.get("meta", {}), sections)
