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
On-disk parallel corpora.

A corpus directory holds:

* `manifest.jsonl` - the sentences of the corpus,
* `features/<pair id>.feat` - the accented input of every pair,
* `targets.txt` - one reduced target unit sequence per pair, one per line,
* `index.jsonl` - one record per pair: its id, input path (relative to the
  directory), 1-based target line number and metadata.
"""
import logging
from pathlib import Path
from typing import List, Optional, Sequence

from unitac.augment.pairs import PairMeta, ParallelPair
from unitac.corpus.manifest import Manifest, Role, read_manifest, write_manifest
from unitac.exceptions import DataProblem
from unitac.files.features import read_features, write_features
from unitac.files.records import PathLike, read_records, write_records
from unitac.files.units import read_units, write_units
from unitac.synth.features import Provenance

log = logging.getLogger("unitac.augment")

MANIFEST_FILE = "manifest.jsonl"
INDEX_FILE = "index.jsonl"
TARGETS_FILE = "targets.txt"
FEATURES_DIR = "features"
FEATURES_SUFFIX = ".feat"


def write_parallel_corpus(
    directory: PathLike, pairs: Sequence[ParallelPair], role: Role = Role.TRAIN
) -> None:
    directory = Path(directory)
    (directory / FEATURES_DIR).mkdir(parents=True, exist_ok=True)

    sentences = {}
    for pair in pairs:
        if pair.sentence is not None:
            sentences.setdefault(pair.sentence.id, pair.sentence)
    write_manifest(Manifest.from_splits({role: sentences.values()}), directory / MANIFEST_FILE)

    index = []
    for line_number, pair in enumerate(pairs, start=1):
        relative = Path(FEATURES_DIR) / f"{pair.meta.pair_id}{FEATURES_SUFFIX}"
        write_features(directory / relative, pair.input)
        index.append({
            "pair_id": pair.meta.pair_id,
            "input": relative.as_posix(),
            "target_line": line_number,
            "meta": pair.meta.dict(),
        })
    write_units(directory / TARGETS_FILE, (p.target for p in pairs))
    write_records(directory / INDEX_FILE, index)
    log.info(f"Wrote {len(pairs)} pairs to [green]{directory}[/]")


def read_parallel_corpus(directory: PathLike, n_units: Optional[int] = None) -> List[ParallelPair]:
    """
    Read a corpus directory.

    Raises
    ------
    ParseProblem
        If the index or the target file is malformed.
    DataProblem
        If an index record refers to a missing target line or file.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise DataProblem("Corpus not found", f"The directory {directory} does not exist.")
    manifest_path = directory / MANIFEST_FILE
    sentences = {}
    if manifest_path.is_file():
        sentences = {s.id: s for s in read_manifest(manifest_path).sentences()}
    targets = read_units(directory / TARGETS_FILE, reduced=True, n_units=n_units)

    def parse(document: dict, line_number: int) -> ParallelPair:
        meta = PairMeta.parse_obj(document["meta"])
        target_line = int(document["target_line"])
        if not 1 <= target_line <= len(targets):
            raise ValueError(f"target line {target_line} does not exist")
        provenance = Provenance(meta.sentence_id, meta.speaker_id, meta.accent_id, meta.seed)
        features = read_features(directory / document["input"], provenance)
        return ParallelPair(features, targets[target_line - 1], meta, sentences.get(meta.sentence_id))

    pairs = read_records(directory / INDEX_FILE, parse)
    log.info(f"Read {len(pairs)} pairs from [green]{directory}[/]")
    return pairs
