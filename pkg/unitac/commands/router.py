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
"""
Command routers: every pipeline stage declares its subcommands on a
router, and the application mounts all routers on one parser.
"""
from typing import Any, Callable, Dict, List, NamedTuple, Optional, Tuple


class Argument(NamedTuple):
    flags: Tuple[str, ...]
    options: Dict[str, Any]


def argument(*flags: str, **options: Any) -> Argument:
    """Same signature as `ArgumentParser.add_argument`."""
    return Argument(flags, options)


class Command(NamedTuple):
    name: Optional[str]
    handler: Callable
    help: Optional[str]
    arguments: Tuple[Argument, ...]


class CommandRouter:
    """
    The subcommands of one stage. A router with a single unnamed command is
    itself the command (e.g. `unitac convert ...`).
    """

    def __init__(self, name: str, help: str):
        self.name = name
        self.help = help
        self.commands: List[Command] = []

    def command(self, name: Optional[str] = None, *arguments: Argument, help: Optional[str] = None):
        def decorator(func: Callable) -> Callable:
            description = help
            if description is None and func.__doc__:
                description = func.__doc__.strip().splitlines()[0]
            self.commands.append(Command(name, func, description, tuple(arguments)))
            return func
        return decorator

    @property
    def is_leaf(self) -> bool:
        return len(self.commands) == 1 and self.commands[0].name is None
