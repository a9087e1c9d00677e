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

from unitac.commands.common import CODEBOOK, DECODER, OUT, read_feature_files, required
from unitac.commands.router import CommandRouter, argument
from unitac.files.features import read_features, write_features
from unitac.files.models import read_codebook, read_unit_decoder, write_unit_decoder
from unitac.files.units import read_units
from unitac.s2u.quantize import quantize
from unitac.u2s.decoder import fit_unit_decoder, synthesize
from unitac.u2s.speaker import speaker_embed

log = logging.getLogger("unitac.cli")

router = CommandRouter("u2s", help="Unit-to-speech decoding.")


@router.command(
    "fit",
    CODEBOOK,
    argument('--features', help="Native feature file or directory."),
    OUT,
)
def fit(args, context):
    """Estimate unit means and durations on native features."""
    required(args, 'codebook', 'features')
    codebook = read_codebook(args.codebook)
    natives = read_feature_files(args.features)
    decoder = fit_unit_decoder([(f, quantize(f, codebook)) for f in natives], codebook)
    path = context.path(args.out, "decoder.bin")
    write_unit_decoder(path, decoder)
    log.info(f"Unit decoder written to [green]{path}[/]")


@router.command(
    "synth",
    DECODER, CODEBOOK,
    argument('--units', help="Unit file, one utterance per line."),
    argument('--speaker-from', help="Feature file whose speaker embedding is used."),
    OUT,
)
def synth(args, context):
    """Decode every line of a unit file into a feature file."""
    required(args, 'decoder', 'codebook', 'units', 'speaker_from')
    decoder = read_unit_decoder(args.decoder)
    embedding = speaker_embed(read_features(args.speaker_from), read_codebook(args.codebook))
    sequences = read_units(args.units, reduced=True, n_units=decoder.n_units)
    directory = context.path(args.out, "synthesized")
    directory.mkdir(parents=True, exist_ok=True)
    width = len(str(max(len(sequences) - 1, 0)))
    for i, units in enumerate(sequences):
        write_features(directory / f"{Path(args.units).stem}-{i:0{width}d}.feat",
                       synthesize(units, embedding, decoder))
    log.info(f"Synthesized {len(sequences)} utterance(s) to [green]{directory}[/]")
