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
import os
from functools import lru_cache

from pydantic import BaseSettings, Extra, conint

logger = logging.getLogger("unitac.app")


class Settings(BaseSettings):
    out_dir: str = "runs"
    threads: conint(ge=1) = 1
    default_seed: int = 0

    # Trip a NumericProblem as soon as an nn operation yields NaN/Inf.
    check_finite: bool = False

    eval_beam_size: conint(ge=1) = 8

    class Config:
        env_prefix = "UNITAC_"
        env_file = "unitac-config.env"
        env_file_encoding = "utf-8"
        extra = Extra.ignore


@lru_cache()
def get_settings() -> Settings:
    env_file = os.getenv("CONFIG_FILE", "unitac-config.env")
    logger.debug(f"[green]Loading config from {env_file}")
    return Settings(_env_file=env_file)
