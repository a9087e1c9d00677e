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
Versioned little-endian binary matrices.

Every file starts with a 16-byte header: a 4-byte magic, then the format
version, the number of rows and the number of columns as unsigned 32-bit
integers. The row-major matrix follows, possibly followed by a trailer
specific to the format.
"""
from pathlib import Path
from typing import BinaryIO, Tuple

import numpy as np

from unitac.exceptions import BadMagicProblem, DataProblem
from unitac.files.records import PathLike

FORMAT_VERSION = 1
HEADER_DTYPE = np.dtype([
    ('magic', 'S4'), ('version', '<u4'), ('rows', '<u4'), ('cols', '<u4')
])


def write_header(f: BinaryIO, magic: bytes, rows: int, cols: int) -> None:
    header = np.array([(magic, FORMAT_VERSION, rows, cols)], dtype=HEADER_DTYPE)
    f.write(header.tobytes())


def read_header(f: BinaryIO, path: PathLike, magic: bytes) -> Tuple[int, int]:
    raw = f.read(HEADER_DTYPE.itemsize)
    if len(raw) < HEADER_DTYPE.itemsize:
        raise DataProblem("Truncated file", f"The file {path} is too short to hold a header.")
    header = np.frombuffer(raw, dtype=HEADER_DTYPE)[0]
    if header['magic'] != magic:
        raise BadMagicProblem(path, magic, bytes(header['magic']))
    if header['version'] != FORMAT_VERSION:
        raise DataProblem(
            "Unsupported version",
            f"The file {path} has version {header['version']}, "
            f"only version {FORMAT_VERSION} is supported."
        )
    return int(header['rows']), int(header['cols'])


def read_array(f: BinaryIO, path: PathLike, dtype: str, count: int) -> np.ndarray:
    dtype = np.dtype(dtype)
    raw = f.read(dtype.itemsize * count)
    if len(raw) != dtype.itemsize * count:
        raise DataProblem(
            "Truncated file", f"The file {path} ends before its {count} values of type {dtype}."
        )
    return np.frombuffer(raw, dtype=dtype, count=count)


def write_matrix(path: PathLike, magic: bytes, matrix: np.ndarray, dtype: str = '<f4') -> None:
    matrix = np.asarray(matrix)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        write_header(f, magic, matrix.shape[0], matrix.shape[1])
        f.write(np.ascontiguousarray(matrix, dtype=dtype).tobytes())


def read_matrix(path: PathLike, magic: bytes, dtype: str = '<f4') -> np.ndarray:
    path = Path(path)
    if not path.is_file():
        raise DataProblem("File not found", f"The file {path} does not exist.")
    with open(path, "rb") as f:
        rows, cols = read_header(f, path, magic)
        values = read_array(f, path, dtype, rows * cols)
        if f.read(1):
            raise DataProblem("Invalid file", f"The file {path} has trailing bytes.")
    return values.reshape(rows, cols).astype(np.float64)
