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
from pathlib import Path
from typing import Any, Dict, NamedTuple, Optional

from unitac.config import Settings


class Context(NamedTuple):
    """Resolved global options of a command-line invocation."""
    settings: Settings
    seed: int
    threads: int
    out_dir: Path
    config_path: Optional[Path] = None
    config: Dict[str, Any] = dict()

    def path(self, value: Optional[str], default_name: str) -> Path:
        """`value` if given, else `default_name` under the output directory."""
        return Path(value) if value else self.out_dir / default_name
