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
import math

import numpy as np

from unitac.augment.storage import read_parallel_corpus
from unitac.commands.common import (
    CODEBOOK, MANIFEST, MODEL_ARGUMENTS, OUT, TRAIN_ARGUMENTS, WORLD, model_config,
    read_feature_files, required, split_list, train_config
)
from unitac.commands.router import CommandRouter, argument
from unitac.corpus.manifest import Role, read_manifest
from unitac.exceptions import EmptyInputProblem
from unitac.files.models import read_codebook
from unitac.files.units import write_units
from unitac.pc.checkpoint import init_from, load_model, save_model
from unitac.pc.decode import DEFAULT_BEAM_SIZE, beam_decode
from unitac.pc.model import DEFAULT_MAX_DECODE_LEN, PCModel
from unitac.pc.pretrain import pretrain_decoder_lm, pretrain_encoder_masked
from unitac.pc.scoring import ModelScorer
from unitac.pc.train import train as train_model
from unitac.s2u.quantize import speech_to_units
from unitac.synth.world import read_world
from unitac.utils.concurrency import map_ordered

log = logging.getLogger("unitac.cli")

router = CommandRouter("pc", help="Pronunciation corrector pretraining, training and decoding.")

N_SENTENCES = argument(
    '--n-sentences', type=int, default=1000, help="Native train sentences used for pretraining."
)
MASK_ARGUMENTS = (
    argument('--mask-prob', type=float, default=0.1, help="Probability that a frame starts a masked span."),
    argument('--mask-span', type=int, default=4),
)


def _native_renders(args, context, role: Role):
    world = read_world(args.world)
    renderer = world.renderer()
    sentences = read_manifest(args.manifest).sentences(role)
    if role == Role.TRAIN:
        sentences = sentences[:args.n_sentences]
    return world, map_ordered(renderer.native_render, sentences, threads=context.threads)


@router.command(
    "pretrain-enc",
    WORLD, MANIFEST, CODEBOOK, N_SENTENCES, *MASK_ARGUMENTS, *MODEL_ARGUMENTS, *TRAIN_ARGUMENTS,
    OUT,
)
def pretrain_enc(args, context):
    """Pretrain the encoder by predicting the units of masked native frames."""
    required(args, 'world', 'manifest', 'codebook')
    codebook = read_codebook(args.codebook)
    world, natives = _native_renders(args, context, Role.TRAIN)
    model = PCModel(model_config(args, world.dim, codebook.n_units, context.seed))
    config = train_config(args, context.seed).copy(
        update={"mask_start_prob": args.mask_prob, "mask_span": args.mask_span}
    )
    result = pretrain_encoder_masked(model, natives, codebook, config, log_path=args.log)
    save_model(context.path(args.out, "pretrain-enc.ckpt"), model, meta={
        "stage": "pretrain-enc", "final_loss": result.final_loss
    })


@router.command(
    "pretrain-dec",
    WORLD, MANIFEST, CODEBOOK, N_SENTENCES, *MODEL_ARGUMENTS, *TRAIN_ARGUMENTS,
    OUT,
)
def pretrain_dec(args, context):
    """Pretrain the decoder as a language model over native unit sequences."""
    required(args, 'world', 'manifest', 'codebook')
    codebook = read_codebook(args.codebook)
    world, natives = _native_renders(args, context, Role.TRAIN)
    _, val_natives = _native_renders(args, context, Role.VAL)
    model = PCModel(model_config(args, world.dim, codebook.n_units, context.seed))
    result = pretrain_decoder_lm(
        model, [speech_to_units(f, codebook) for f in natives], train_config(args, context.seed),
        val=[speech_to_units(f, codebook) for f in val_natives], log_path=args.log
    )
    save_model(context.path(args.out, "pretrain-dec.ckpt"), model, meta={
        "stage": "pretrain-dec", "best_val_ppl": result.best_val_ppl
    })


@router.command(
    "train",
    argument('--corpus', help="Parallel corpus directory written by `augment build`."),
    argument('--val', help="Validation corpus directory."),
    CODEBOOK,
    argument('--init-from', help="Comma-separated checkpoints whose matching parameters initialize the model."),
    *MODEL_ARGUMENTS, *TRAIN_ARGUMENTS,
    OUT,
)
def train(args, context):
    """Train the corrector on a parallel corpus."""
    required(args, 'corpus', 'codebook')
    n_units = read_codebook(args.codebook).n_units
    corpus = read_parallel_corpus(args.corpus, n_units=n_units)
    if not corpus:
        raise EmptyInputProblem(f"The corpus {args.corpus}")
    val = read_parallel_corpus(args.val, n_units=n_units) if args.val else []

    model = PCModel(model_config(args, corpus[0].input.dim, n_units, context.seed))
    for path in split_list(args.init_from):
        init_from(model, path)
    result = train_model(model, corpus, val, train_config(args, context.seed), log_path=args.log)
    save_model(context.path(args.out, "pc.ckpt"), model, optimizer=result.optimizer, meta={
        "stage": "train", "best_update": result.best_update, "best_val_ppl": result.best_val_ppl
    })


@router.command(
    "decode",
    argument('--model', help="Corrector checkpoint."),
    argument('--features', help="Feature file or directory."),
    argument('--beam', type=int, default=DEFAULT_BEAM_SIZE, help="Beam size (1 is greedy)."),
    argument('--length-norm', action='store_true', help="Rank hypotheses by per-token score."),
    argument('--max-len-mult', type=float, default=4.0,
             help="Decoding stops after this many times the median training target length."),
    argument('--float32', action='store_true', help="Decode with 32-bit parameters."),
    OUT,
)
def decode(args, context):
    """Beam-decode native unit sequences from accented features."""
    required(args, 'model', 'features')
    model, _, _ = load_model(args.model)
    if args.float32:
        model.to_dtype(np.float32)
    median = model.median_target_length
    max_len = max(1, math.ceil(args.max_len_mult * median)) if median else DEFAULT_MAX_DECODE_LEN
    scorer = ModelScorer(model)

    def decode_one(features):
        model.check_features(features.dim)
        return beam_decode(
            scorer, features.frames, beam_size=args.beam, length_norm=args.length_norm,
            max_len=max_len
        )[0].reduced_units

    sequences = map_ordered(decode_one, read_feature_files(args.features), threads=context.threads)
    path = context.path(args.out, "decoded.txt")
    write_units(path, sequences)
    log.info(f"Decoded {len(sequences)} input(s) to [green]{path}[/]")
