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
from enum import Enum
from typing import Dict, Iterable, List, Tuple

from pydantic import BaseModel, validator

from unitac.corpus.sentences import Sentence
from unitac.exceptions import DataProblem
from unitac.files.records import PathLike, read_records, write_records


class Role(str, Enum):
    """
    The role of a sentence in an experiment.

    * `TRAIN` - Used to build training corpora.
    * `VAL` - Used for model selection (validation perplexity).
    * `TEST` - Held out for final evaluation.
    """

    TRAIN = 'train'
    VAL = 'val'
    TEST = 'test'


class ManifestRecord(BaseModel):
    sentence_id: str
    role: Role
    phonemes: Tuple[int, ...]

    class Config:
        frozen = True

    @validator('phonemes')
    def check_nonempty(cls, value):
        if len(value) == 0:
            raise ValueError("a record has at least one phoneme")
        return value

    @property
    def sentence(self) -> Sentence:
        return Sentence(id=self.sentence_id, phonemes=self.phonemes)

    def to_line(self) -> dict:
        return {
            "sentence_id": self.sentence_id,
            "role": self.role.value,
            "phonemes": " ".join(str(p) for p in self.phonemes),
        }

    @classmethod
    def from_line(cls, document: dict, line_number: int = 0) -> "ManifestRecord":
        phonemes = document["phonemes"]
        if not isinstance(phonemes, str):
            raise ValueError("field 'phonemes' must be space-separated integers")
        return cls(
            sentence_id=document["sentence_id"],
            role=Role(document["role"]),
            phonemes=tuple(int(p) for p in phonemes.split())
        )


class Manifest(BaseModel):
    records: Tuple[ManifestRecord, ...]

    class Config:
        frozen = True

    @validator('records')
    def check_unique_ids(cls, value):
        seen = set()
        for record in value:
            if record.sentence_id in seen:
                raise ValueError(f"sentence {record.sentence_id} appears more than once")
            seen.add(record.sentence_id)
        return value

    @classmethod
    def from_splits(cls, splits: Dict[Role, Iterable[Sentence]]) -> "Manifest":
        records = []
        for role in Role:
            for s in splits.get(role, []):
                records.append(ManifestRecord(
                    sentence_id=s.id, role=role, phonemes=s.phonemes
                ))
        return cls(records=tuple(records))

    def sentences(self, role: Role = None) -> List[Sentence]:
        return [r.sentence for r in self.records if role is None or r.role == role]

    def __len__(self) -> int:
        return len(self.records)


def write_manifest(manifest: Manifest, path: PathLike) -> None:
    write_records(path, (r.to_line() for r in manifest.records))


def read_manifest(path: PathLike) -> Manifest:
    """
    Read a manifest. A malformed line raises a `ParseProblem` naming the line.
    """
    records = read_records(path, ManifestRecord.from_line)
    try:
        return Manifest(records=tuple(records))
    except ValueError as e:
        raise DataProblem("Invalid manifest", f"{path}: {e}")
