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
from unitac.commands.common import CODEBOOK, DECODER, required
from unitac.commands.router import CommandRouter, argument
from unitac.experiment.convert import convert
from unitac.files.models import read_codebook, read_unit_decoder
from unitac.pc.checkpoint import load_model
from unitac.pc.decode import DEFAULT_BEAM_SIZE

router = CommandRouter("convert", help="Convert one accented utterance to the native accent.")


@router.command(
    None,
    argument('--input', help="Accented feature file."),
    argument('--model', help="Corrector checkpoint."),
    CODEBOOK, DECODER,
    argument('--beam', type=int, default=DEFAULT_BEAM_SIZE),
    argument('--length-norm', action='store_true'),
    argument('--out', help="Converted feature file; the units are written next to it."),
)
def convert_input(args, context):
    """Convert one accented utterance to the native accent."""
    required(args, 'input', 'model', 'codebook', 'decoder')
    model, _, _ = load_model(args.model)
    convert(
        args.input, model, read_codebook(args.codebook), read_unit_decoder(args.decoder),
        context.path(args.out, "converted.feat"), beam_size=args.beam,
        length_norm=args.length_norm
    )
