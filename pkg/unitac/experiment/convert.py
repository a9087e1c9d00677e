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
import logging
from pathlib import Path
from typing import NamedTuple, Optional

from unitac.files.features import read_features, write_features
from unitac.files.records import PathLike
from unitac.files.units import write_units
from unitac.pc.decode import DEFAULT_BEAM_SIZE, Hypothesis, beam_decode
from unitac.pc.model import PCModel
from unitac.pc.scoring import ModelScorer
from unitac.s2u.codebook import Codebook
from unitac.s2u.units import UnitSequence
from unitac.synth.features import FeatureSequence
from unitac.u2s.decoder import UnitDecoder, synthesize
from unitac.u2s.speaker import SpeakerEmbedding, speaker_embed

log = logging.getLogger("unitac.app")

UNITS_SUFFIX = ".units"


class Conversion(NamedTuple):
    features: FeatureSequence
    units: UnitSequence
    embedding: SpeakerEmbedding
    hypothesis: Hypothesis


def convert_features(
    features: FeatureSequence, model: PCModel, codebook: Codebook, decoder: UnitDecoder,
    beam_size: int = DEFAULT_BEAM_SIZE, length_norm: bool = False,
    max_len: Optional[int] = None
) -> Conversion:
    """
    Accent conversion of one utterance: the source speaker embedding is
    extracted, native units are beam-decoded by the corrector and decoded
    back into features carrying the source embedding.
    """
    model.check_features(features.dim)
    embedding = speaker_embed(features, codebook)
    hypothesis = beam_decode(
        ModelScorer(model), features.frames, beam_size=beam_size,
        length_norm=length_norm, max_len=max_len
    )[0]
    units = hypothesis.reduced_units
    if hypothesis.has_adjacent_duplicates:
        log.warning("The decoded units hold adjacent duplicates; they are collapsed")
    converted = synthesize(units, embedding, decoder)
    return Conversion(converted, units, embedding, hypothesis)


def convert(
    input_path: PathLike, model: PCModel, codebook: Codebook, decoder: UnitDecoder,
    out_path: PathLike, beam_size: int = DEFAULT_BEAM_SIZE, length_norm: bool = False
) -> Conversion:
    """
    Convert a feature file. The converted features are written to
    `out_path` and the decoded units next to it with a `.units` suffix.
    """
    out_path = Path(out_path)
    conversion = convert_features(
        read_features(input_path), model, codebook, decoder,
        beam_size=beam_size, length_norm=length_norm
    )
    write_features(out_path, conversion.features)
    write_units(out_path.with_suffix(UNITS_SUFFIX), [conversion.units])
    log.info(
        f"Converted {input_path} -> [green]{out_path}[/] "
        f"({len(conversion.units)} units, {conversion.features.n_frames} frames)"
    )
    return conversion
