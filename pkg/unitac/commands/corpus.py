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

from unitac.commands.common import OUT, WORLD, required
from unitac.commands.router import CommandRouter, argument
from unitac.corpus.manifest import Manifest, Role, read_manifest, write_manifest
from unitac.corpus.sentences import DEFAULT_LEN_RANGE, sample_sentences, split_train_val
from unitac.exceptions import ConfigurationProblem
from unitac.synth.world import read_world
from unitac.utils.types import parse_ratio

log = logging.getLogger("unitac.cli")

router = CommandRouter("corpus", help="Sample and split synthetic sentences.")


@router.command(
    "sample",
    argument('--n', type=int, default=1000, help="Number of sentences."),
    argument('--len-min', type=int, default=DEFAULT_LEN_RANGE[0]),
    argument('--len-max', type=int, default=DEFAULT_LEN_RANGE[1]),
    WORLD,
    OUT,
)
def sample(args, context):
    """Sample sentences over the content phonemes of the world inventory."""
    inventory = read_world(args.world).inventory if args.world else None
    sentences = sample_sentences(
        args.n, (args.len_min, args.len_max), inventory, seed=context.seed
    )
    path = context.path(args.out, "sentences.jsonl")
    write_manifest(Manifest.from_splits({Role.TRAIN: sentences}), path)
    log.info(f"Sampled {len(sentences)} sentences to [green]{path}[/]")


@router.command(
    "split",
    argument('--manifest', help="Manifest whose train sentences are split."),
    argument('--ratio', default="1000:1", help="train:val proportion, e.g. 1000:1."),
    argument('--n-test', type=int, default=0,
             help="Last train sentences moved to the test split before the train:val split."),
    OUT,
)
def split(args, context):
    """Move a share of the train sentences of a manifest to validation, and optionally to test."""
    required(args, 'manifest')
    ratio = parse_ratio(args.ratio)
    if ratio is None:
        raise ConfigurationProblem(detail=f"Invalid ratio {args.ratio!r}, expected e.g. 1000:1.")
    manifest = read_manifest(args.manifest)
    pool = manifest.sentences(Role.TRAIN)
    if not 0 <= args.n_test < len(pool):
        raise ConfigurationProblem(
            detail=f"Cannot move {args.n_test} of {len(pool)} train sentences to test."
        )
    test = pool[len(pool) - args.n_test:] if args.n_test else []
    train, val = split_train_val(pool[:len(pool) - args.n_test], ratio, seed=context.seed)
    splits = {
        Role.TRAIN: train,
        Role.VAL: manifest.sentences(Role.VAL) + val,
        Role.TEST: manifest.sentences(Role.TEST) + test,
    }
    path = context.path(args.out, "manifest.jsonl")
    write_manifest(Manifest.from_splits(splits), path)
    log.info(
        f"Split into {len(train)} train, {len(val)} validation and {len(test)} test "
        f"sentences: [green]{path}[/]"
    )
