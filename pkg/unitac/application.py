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
import argparse
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from unitac import __version__
from unitac.commands import augment, convert, corpus, evaluation, experiment, pc, s2u, synth, u2s
from unitac.commands.context import Context
from unitac.commands.router import Command, CommandRouter
from unitac.config import get_settings
from unitac.exceptions import UsageProblem
from unitac.experiment.config import read_config_file
from unitac.nn.tensor import set_check_finite

logger = logging.getLogger("unitac.app")

ROUTERS: List[CommandRouter] = [
    corpus.router,
    synth.router,
    s2u.router,
    u2s.router,
    augment.router,
    pc.router,
    evaluation.router,
    experiment.router,
    convert.router,
]


class ArgumentParser(argparse.ArgumentParser):
    """Parser reporting usage errors as `UsageProblem` (exit code 1)."""

    def error(self, message: str):
        raise UsageProblem(detail=f"{self.prog}: {message}")


def _add_global_arguments(parser: argparse.ArgumentParser, default: Any) -> None:
    parser.add_argument(
        '--config', default=default,
        help="Structured configuration file (JSON or YAML); command-line flags take precedence."
    )
    parser.add_argument('--seed', type=int, default=default, help="Global random seed.")
    parser.add_argument('--out-dir', default=default, help="Output directory.")
    parser.add_argument('--threads', type=int, default=default, help="Worker threads.")


def _mount(subparsers, name: Optional[str], command: Command, section: List[str], parent) -> None:
    parser = subparsers.add_parser(
        name, help=command.help, description=command.help, parents=[parent]
    )
    defaults = {}
    for arg in command.arguments:
        options = dict(arg.options)
        default = options.pop('default', None)
        if options.get('action') in ('store_true', 'store_false'):
            if default is None:
                default = options['action'] == 'store_false'
        action = parser.add_argument(*arg.flags, default=None, **options)
        defaults[action.dest] = default
    parser.set_defaults(_command=command, _section=section, _defaults=defaults)


def create_parser(routers: Sequence[CommandRouter] = None) -> ArgumentParser:
    routers = ROUTERS if routers is None else routers
    parser = ArgumentParser(
        prog="unitac", description="Many-to-one accent conversion through discrete units."
    )
    parser.add_argument('--version', action='version', version=f"%(prog)s {__version__}")
    _add_global_arguments(parser, None)
    parent = ArgumentParser(add_help=False)
    _add_global_arguments(parent, argparse.SUPPRESS)

    stages = parser.add_subparsers(dest="stage", metavar="STAGE", parser_class=ArgumentParser)
    stages.required = True
    for router in routers:
        if router.is_leaf:
            _mount(stages, router.name, router.commands[0], [router.name], parent)
            continue
        stage = stages.add_parser(router.name, help=router.help, description=router.help)
        commands = stage.add_subparsers(dest="command", metavar="COMMAND", parser_class=ArgumentParser)
        commands.required = True
        for command in router.commands:
            _mount(commands, command.name, command, [router.name, command.name], parent)
    return parser


def _config_section(config: Dict[str, Any], section: List[str]) -> Dict[str, Any]:
    for key in section:
        value = config.get(key) if isinstance(config, dict) else None
        if not isinstance(value, dict):
            return dict()
        config = value
    return {k.replace('-', '_'): v for k, v in config.items()}


def resolve(args: argparse.Namespace) -> Context:
    """
    Fill unset command flags from the configuration file section of the
    command (`<stage>.<command>`), then from their defaults, and build the
    global context. Global flags fall back to the settings.
    """
    settings = get_settings()
    config_path = Path(args.config) if args.config else None
    config = read_config_file(config_path) if config_path else dict()

    section = _config_section(config, args._section)
    for dest, default in args._defaults.items():
        if getattr(args, dest) is None:
            setattr(args, dest, section.get(dest, default))

    return Context(
        settings=settings,
        seed=args.seed if args.seed is not None else config.get('seed', settings.default_seed),
        threads=args.threads if args.threads is not None else config.get('threads', settings.threads),
        out_dir=Path(args.out_dir if args.out_dir is not None else config.get('out_dir', settings.out_dir)),
        config_path=config_path,
        config=config,
    )


def run(argv: Optional[Sequence[str]] = None) -> int:
    args = create_parser().parse_args(argv)
    context = resolve(args)
    set_check_finite(context.settings.check_finite)
    logger.debug(f"Running [blue]{' '.join(args._section)}[/] (seed {context.seed})")
    status = args._command.handler(args, context)
    return 0 if status is None else int(status)
