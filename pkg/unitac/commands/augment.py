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

from pydantic import ValidationError

from unitac.augment.corpus import build_parallel_corpus, corpus_stats
from unitac.augment.storage import write_parallel_corpus
from unitac.augment.strategy import DEFAULT_ACCENTS_PER_SENTENCE, AugmentStrategy, StrategyKind
from unitac.commands.common import CODEBOOK, MANIFEST, OUT, WORLD, required, split_list
from unitac.commands.router import CommandRouter, argument
from unitac.corpus.manifest import Role, read_manifest
from unitac.exceptions import ConfigurationProblem
from unitac.files.models import read_codebook
from unitac.synth.world import read_world

log = logging.getLogger("unitac.cli")

router = CommandRouter("augment", help="Parallel corpus construction.")

TRAIN_POOL = "train"
TEST_POOL = "test"


def _speakers(world, value):
    ids = split_list(value) or [TRAIN_POOL]
    if ids == [TRAIN_POOL]:
        return list(world.train_speakers)
    if ids == [TEST_POOL]:
        return list(world.test_speakers)
    return [world.speaker(i) for i in ids]


@router.command(
    "build",
    WORLD, MANIFEST, CODEBOOK,
    argument('--role', default=Role.TRAIN.value, choices=[r.value for r in Role],
             help="Role of the manifest sentences to use."),
    argument('--strategy', default=StrategyKind.OVERLAPPED.value,
             choices=[k.value for k in StrategyKind]),
    argument('--accents-per-sentence', type=int, default=DEFAULT_ACCENTS_PER_SENTENCE),
    argument('--budget', type=int, help="Number of pairs."),
    argument('--accents', help="Comma-separated accent ids (default: all training accents)."),
    argument('--speakers', help="Comma-separated speaker ids, or the 'train' or 'test' pool."),
    OUT,
)
def build(args, context):
    """Render a parallel corpus of accented inputs and native unit targets."""
    required(args, 'world', 'manifest', 'codebook', 'budget')
    try:
        strategy = AugmentStrategy(kind=args.strategy, accents_per_sentence=args.accents_per_sentence)
    except ValidationError as e:
        raise ConfigurationProblem(detail=f"Invalid strategy: {e}")
    world = read_world(args.world)
    sentences = read_manifest(args.manifest).sentences(Role(args.role))
    pairs = build_parallel_corpus(
        sentences, strategy, world.select_accents(split_list(args.accents)),
        _speakers(world, args.speakers), args.budget, world.renderer(),
        read_codebook(args.codebook), seed=context.seed, threads=context.threads
    )
    directory = context.path(args.out, f"corpus-{strategy.kind.value}-{args.budget}")
    write_parallel_corpus(directory, pairs, Role(args.role))
    log.info(str(corpus_stats(pairs)))
