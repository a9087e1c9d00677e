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
from unitac.files.binary import read_matrix, write_matrix
from unitac.files.records import PathLike
from unitac.synth.features import FeatureSequence, Provenance

FEATURES_MAGIC = b"UFEA"


def write_features(path: PathLike, features: FeatureSequence) -> None:
    """Write frames as 32-bit floats. Provenance and phoneme labels are not stored."""
    write_matrix(path, FEATURES_MAGIC, features.frames)


def read_features(path: PathLike, provenance: Provenance = None) -> FeatureSequence:
    return FeatureSequence(
        read_matrix(path, FEATURES_MAGIC), provenance=provenance, allow_empty=True
    )
