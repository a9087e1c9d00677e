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
from typing import Any


def set_nested(d: dict, dotted_key: str, value: Any, sep='.') -> dict:
    """
    Set a value in a nested dictionary from a dotted key, creating
    intermediate dictionaries when needed.
    """
    keys = dotted_key.split(sep)
    current = d
    for k in keys[:-1]:
        current = current.setdefault(k, dict())
    current[keys[-1]] = value
    return d
