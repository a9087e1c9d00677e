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
from typing import Any, Optional, Tuple

TRUE_VALUES = frozenset(('yes', 'true', 't', 'y', '1', 'on'))
FALSE_VALUES = frozenset(('no', 'false', 'f', 'n', '0', 'off'))


def parse_boolean(value: Any, raise_exc: bool = False) -> Optional[bool]:
    """Booleans pass through; strings are matched case-insensitively."""
    if isinstance(value, bool):
        return value
    if isinstance(value, str):
        lowered = value.strip().lower()
        if lowered in TRUE_VALUES:
            return True
        if lowered in FALSE_VALUES:
            return False
    if raise_exc:
        raise ValueError(f"Expected one of {sorted(TRUE_VALUES | FALSE_VALUES)}, got {value!r}")
    return None


def parse_int(value: Any, raise_exc: bool = False) -> Optional[int]:
    try:
        return int(value)
    except (TypeError, ValueError):
        if raise_exc:
            raise
        return None


def parse_ratio(value: Any, raise_exc: bool = False) -> Optional[Tuple[int, int]]:
    """
    Parse a ratio such as "1000:1" or "1000/1" into a pair of integers.
    """
    if isinstance(value, (tuple, list)) and len(value) == 2:
        parts = value
    elif isinstance(value, str):
        parts = value.replace("/", ":").split(":")
    else:
        parts = None

    if parts is not None and len(parts) == 2:
        left, right = parse_int(parts[0]), parse_int(parts[1])
        if left is not None and right is not None:
            return left, right

    if raise_exc:
        raise ValueError(f'Expected a ratio "a:b", got {value!r}')
    return None
