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

from unitac.commands.common import MANIFEST, OUT, WORLD, required, write_feature_files
from unitac.commands.router import CommandRouter, argument
from unitac.corpus.manifest import Role, read_manifest
from unitac.exceptions import ConfigurationProblem
from unitac.synth.specs import NATIVE_ID
from unitac.synth.world import World, WorldParameters, read_world, write_world
from unitac.utils.concurrency import map_ordered
from unitac.utils.seeds import derive_seed

log = logging.getLogger("unitac.cli")

router = CommandRouter("synth", help="Synthetic worlds and feature rendering.")

ROLE = argument('--role', choices=[r.value for r in Role], help="Only render sentences of this role.")
WORLD_FLAGS = ('inventory_size', 'dim', 'n_accents', 'n_unseen_accents', 'n_train_speakers', 'n_test_speakers')


def _sentences(args):
    manifest = read_manifest(args.manifest)
    sentences = manifest.sentences(Role(args.role) if args.role else None)
    if args.sentence:
        sentences = [s for s in sentences if s.id == args.sentence]
        if not sentences:
            raise ConfigurationProblem(detail=f"Unknown sentence '{args.sentence}'.")
    return sentences


@router.command(
    "world",
    argument('--inventory-size', type=int),
    argument('--dim', type=int, help="Feature dimension."),
    argument('--n-accents', type=int),
    argument('--n-unseen-accents', type=int),
    argument('--n-train-speakers', type=int),
    argument('--n-test-speakers', type=int),
    OUT,
)
def world(args, context):
    """Create a world: inventory, prototypes, accents and speakers."""
    document = dict(context.config.get('world') or {})
    document.update({k: getattr(args, k) for k in WORLD_FLAGS if getattr(args, k) is not None})
    document['seed'] = context.seed
    try:
        parameters = WorldParameters.parse_obj(document)
    except ValidationError as e:
        raise ConfigurationProblem(detail=f"Invalid world parameters: {e}")
    path = context.path(args.out, "world.json")
    write_world(World.create(parameters), path)
    log.info(f"World written to [green]{path}[/]")


@router.command(
    "render",
    WORLD, MANIFEST, ROLE,
    argument('--sentence', help="Only render this sentence id."),
    argument('--accent', default=NATIVE_ID, help="Accent id."),
    argument('--speaker', default=NATIVE_ID, help="Speaker id."),
    OUT,
)
def render(args, context):
    """Render sentences with an accent and a speaker, one feature file per sentence."""
    required(args, 'world', 'manifest')
    w = read_world(args.world)
    accent, speaker = w.accent(args.accent), w.speaker(args.speaker)
    renderer = w.renderer()
    sequences = map_ordered(
        lambda s: renderer.render(s, speaker, accent, derive_seed(context.seed, s.id)),
        _sentences(args), threads=context.threads
    )
    write_feature_files(context.path(args.out, f"features-{accent.id}-{speaker.id}"), sequences)


@router.command(
    "native",
    WORLD, MANIFEST, ROLE,
    argument('--sentence', help="Only render this sentence id."),
    OUT,
)
def native(args, context):
    """Render sentences with the native voice, one feature file per sentence."""
    required(args, 'world', 'manifest')
    renderer = read_world(args.world).renderer()
    sequences = map_ordered(renderer.native_render, _sentences(args), threads=context.threads)
    write_feature_files(context.path(args.out, "native"), sequences)
