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
Codebook and unit decoder files.

A codebook file is a (K, D) matrix of 32-bit floats. A unit decoder file
uses the same layout for the unit means, followed by K signed 32-bit
durations.
"""
from pathlib import Path

import numpy as np

from unitac.exceptions import DataProblem
from unitac.files.binary import read_array, read_header, read_matrix, write_header, write_matrix
from unitac.files.records import PathLike
from unitac.s2u.codebook import Codebook
from unitac.u2s.decoder import UnitDecoder

CODEBOOK_MAGIC = b"UCBK"
DECODER_MAGIC = b"UDEC"


def write_codebook(path: PathLike, codebook: Codebook) -> None:
    write_matrix(path, CODEBOOK_MAGIC, codebook.centroids)


def read_codebook(path: PathLike) -> Codebook:
    return Codebook(read_matrix(path, CODEBOOK_MAGIC))


def write_unit_decoder(path: PathLike, decoder: UnitDecoder) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        write_header(f, DECODER_MAGIC, decoder.n_units, decoder.dim)
        f.write(np.ascontiguousarray(decoder.unit_means, dtype='<f4').tobytes())
        f.write(np.ascontiguousarray(decoder.unit_durations, dtype='<i4').tobytes())


def read_unit_decoder(path: PathLike) -> UnitDecoder:
    path = Path(path)
    if not path.is_file():
        raise DataProblem("File not found", f"The file {path} does not exist.")
    with open(path, "rb") as f:
        k, d = read_header(f, path, DECODER_MAGIC)
        means = read_array(f, path, '<f4', k * d).reshape(k, d)
        durations = read_array(f, path, '<i4', k)
        if f.read(1):
            raise DataProblem("Invalid file", f"The file {path} has trailing bytes.")
    return UnitDecoder(means.astype(np.float64), durations.astype(np.int64))
