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

import numpy as np
from rich.console import Console

from unitac.augment.storage import MANIFEST_FILE, read_parallel_corpus
from unitac.commands.common import CODEBOOK, DECODER, MANIFEST, WORLD, required
from unitac.commands.router import CommandRouter, argument
from unitac.corpus.manifest import Role, read_manifest
from unitac.evaluation.report import render_report, run_eval
from unitac.evaluation.smoke import disfluent_smoke_set, native_smoke_set
from unitac.files.models import read_codebook, read_unit_decoder
from unitac.files.records import read_json
from unitac.pc.checkpoint import load_model
from unitac.s2u.quantize import unit_phoneme_map
from unitac.synth.world import read_world

log = logging.getLogger("unitac.cli")

router = CommandRouter("eval", help="Test-set evaluation of a trained corrector.")

NATIVE = "native"
DISFLUENT = "disfluent"

MODEL = argument('--model', help="Corrector checkpoint.")
BEAM = argument('--beam', type=int, help="Beam size (default: the eval_beam_size setting).")
LENGTH_NORM = argument('--length-norm', action='store_true')
REPORT = argument('--report', help="Report path; a .jsonl twin is written next to it.")


def _corpus_directory(value) -> Path:
    path = Path(value)
    return path.parent if path.name == MANIFEST_FILE else path


def _show(report) -> None:
    Console().out(render_report(report))


@router.command(
    "run",
    MODEL, CODEBOOK, DECODER,
    argument('--test-manifest', help="Test corpus directory, or its manifest file."),
    argument('--unit-phonemes', help="JSON list mapping every unit to a phoneme."),
    argument('--world', help="World file; its filler phoneme is ignored by phoneme accuracy."),
    BEAM, LENGTH_NORM, REPORT,
)
def run(args, context):
    """Decode a test corpus and report perplexity, unit and speaker metrics."""
    required(args, 'model', 'codebook', 'decoder', 'test_manifest')
    model, _, _ = load_model(args.model)
    codebook = read_codebook(args.codebook)
    pairs = read_parallel_corpus(_corpus_directory(args.test_manifest), n_units=codebook.n_units)
    unit_phonemes = np.asarray(read_json(args.unit_phonemes)) if args.unit_phonemes else None
    filler = read_world(args.world).inventory.filler if args.world else None
    report = run_eval(
        model, pairs, codebook, read_unit_decoder(args.decoder),
        report_path=context.path(args.report, "eval.txt"), unit_phonemes=unit_phonemes,
        filler=filler, beam_size=args.beam or context.settings.eval_beam_size,
        length_norm=args.length_norm, threads=context.threads
    )
    _show(report)


@router.command(
    "smoke",
    MODEL, WORLD, MANIFEST, CODEBOOK, DECODER,
    argument('--kind', default=NATIVE, choices=[NATIVE, DISFLUENT]),
    argument('--n', type=int, default=100, help="Number of test sentences."),
    BEAM, LENGTH_NORM, REPORT,
)
def smoke(args, context):
    """Evaluate on native or disfluent renders of test sentences."""
    required(args, 'model', 'world', 'manifest', 'codebook', 'decoder')
    model, _, _ = load_model(args.model)
    world = read_world(args.world)
    renderer = world.renderer()
    codebook = read_codebook(args.codebook)
    sentences = read_manifest(args.manifest).sentences(Role.TEST)[:args.n]
    if args.kind == NATIVE:
        pairs = native_smoke_set(sentences, renderer, codebook, seed=context.seed)
    else:
        pairs = disfluent_smoke_set(
            sentences, renderer, codebook, world.test_speakers, seed=context.seed
        )
    unit_phonemes = unit_phoneme_map(
        codebook, world.prototype_matrix, [renderer.native_render(s) for s in sentences]
    )
    report = run_eval(
        model, pairs, codebook, read_unit_decoder(args.decoder),
        report_path=context.path(args.report, f"smoke-{args.kind}.txt"),
        unit_phonemes=unit_phonemes, filler=world.inventory.filler,
        beam_size=args.beam or context.settings.eval_beam_size,
        length_norm=args.length_norm, threads=context.threads
    )
    _show(report)
