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

import hashlib
from typing import Any

import numpy as np

SEED_BITS = 63


def derive_seed(*keys: Any) -> int:
    """
    Derive a stable 63-bit seed from arbitrary printable keys.

    Python's `hash` is salted per process, so a cryptographic digest is used
    instead: the same keys give the same seed in every process.
    """
    material = "\x1f".join(str(k) for k in keys).encode("utf-8")
    digest = hashlib.sha256(material).digest()
    return int.from_bytes(digest[:8], "little") & ((1 << SEED_BITS) - 1)


def rng_for(*keys: Any) -> np.random.Generator:
    return np.random.default_rng(derive_seed(*keys))
