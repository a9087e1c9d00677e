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
Experiment configuration: one structured file (JSON or YAML) with
command-line overrides. Precedence: overrides > file > defaults.
"""
import logging
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import orjson
import yaml
from pydantic import BaseModel, ValidationError, conint, validator

from unitac.augment.strategy import AugmentConfig, AugmentStrategy, StrategyKind
from unitac.corpus.sentences import DEFAULT_LEN_RANGE
from unitac.exceptions import ConfigurationProblem, ParseProblem
from unitac.files.records import PathLike
from unitac.nn.attention import DEFAULT_REL_WINDOW
from unitac.pc.decode import DEFAULT_BEAM_SIZE
from unitac.pc.train import TrainConfig
from unitac.synth.world import WorldParameters
from unitac.utils.dict import set_nested

log = logging.getLogger("unitac.experiment")


class Init(str, Enum):
    """
    Initialization of a corrector before training.

    * `RANDOM` - Fresh random weights.
    * `ENC_PRETRAIN` - Encoder pretrained on masked native frames.
    * `DEC_PRETRAIN` - Decoder pretrained as a native unit language model.
    * `BOTH` - Both pretrainings.
    """

    RANDOM = 'random'
    ENC_PRETRAIN = 'enc-pretrain'
    DEC_PRETRAIN = 'dec-pretrain'
    BOTH = 'both'

    @property
    def pretrains_encoder(self) -> bool:
        return self in (Init.ENC_PRETRAIN, Init.BOTH)

    @property
    def pretrains_decoder(self) -> bool:
        return self in (Init.DEC_PRETRAIN, Init.BOTH)


class ModelParameters(BaseModel):
    """Corrector hyper-parameters; input and vocabulary sizes come from the data."""
    model_dim: conint(ge=1) = 64
    heads: conint(ge=1) = 4
    encoder_layers: conint(ge=0) = 2
    decoder_layers: conint(ge=0) = 2
    ff_dim: conint(ge=1) = 256
    rel_window: conint(ge=0) = DEFAULT_REL_WINDOW
    subsample: conint(ge=1) = 1


class DataParameters(BaseModel):
    n_sentences: conint(ge=2) = 20000
    len_range: Tuple[conint(ge=1), conint(ge=1)] = DEFAULT_LEN_RANGE
    val_ratio: Tuple[conint(ge=1), conint(ge=1)] = (50, 1)
    n_test_sentences: conint(ge=1) = 200
    unseen_accents: bool = False


class UnitParameters(BaseModel):
    n_units: conint(ge=2) = 100
    max_iters: conint(ge=1) = 100
    tol: float = 1e-6
    # Native sentences rendered to fit the codebook and the unit decoder.
    n_fit_sentences: conint(ge=1) = 1000


def default_strategies() -> List[AugmentStrategy]:
    return [
        AugmentStrategy(kind=StrategyKind.OVERLAPPED),
        AugmentStrategy(kind=StrategyKind.NON_OVERLAPPED),
    ]


class ExperimentConfig(BaseModel):
    world: WorldParameters = WorldParameters()
    data: DataParameters = DataParameters()
    units: UnitParameters = UnitParameters()
    augment: AugmentConfig = AugmentConfig()
    budgets: List[conint(ge=1)] = [6000]
    strategies: List[AugmentStrategy] = default_strategies()
    inits: List[Init] = [Init.RANDOM, Init.DEC_PRETRAIN]
    model: ModelParameters = ModelParameters()
    train: TrainConfig = TrainConfig()
    pretrain: TrainConfig = TrainConfig(total_updates=1000)
    seeds: List[int] = [0, 1, 2]
    eval_beam_size: conint(ge=1) = DEFAULT_BEAM_SIZE
    decode_test: bool = False
    threads: conint(ge=1) = 1
    workers: conint(ge=1) = 1
    out_dir: str = "runs/experiment"

    @validator('seeds')
    def check_seeds(cls, value):
        if not value:
            raise ValueError("at least one seed is required")
        if len(set(value)) != len(value):
            raise ValueError("seeds must be distinct")
        return value

    @validator('budgets', 'strategies', 'inits')
    def check_nonempty(cls, value):
        if not value:
            raise ValueError("the grid has no cell")
        return value


def read_config_file(path: PathLike) -> Dict[str, Any]:
    """Parse a JSON or YAML file, depending on its suffix, into a dict."""
    path = Path(path)
    if not path.is_file():
        raise ConfigurationProblem(detail=f"The configuration file {path} does not exist.")
    content = path.read_bytes()
    try:
        if path.suffix.lower() in (".yml", ".yaml"):
            document = yaml.safe_load(content)
        else:
            document = orjson.loads(content)
    except orjson.JSONDecodeError as e:
        raise ParseProblem(path, e.lineno, e.msg)
    except yaml.YAMLError as e:
        mark = getattr(e, 'problem_mark', None)
        raise ParseProblem(path, mark.line + 1 if mark else 0, str(e))
    if document is None:
        return dict()
    if not isinstance(document, dict):
        raise ConfigurationProblem(detail=f"The configuration file {path} is not a mapping.")
    return document


def load_experiment_config(
    path: Optional[PathLike] = None, overrides: Optional[Dict[str, Any]] = None
) -> ExperimentConfig:
    """
    Build the experiment configuration from defaults, then the file at
    `path`, then `overrides` whose keys are dotted paths (e.g.
    `train.peak_lr`).

    Raises
    ------
    ConfigurationProblem
        If the merged configuration is invalid.
    """
    document = read_config_file(path) if path is not None else dict()
    for key, value in (overrides or {}).items():
        if value is not None:
            set_nested(document, key, value)
    try:
        return ExperimentConfig.parse_obj(document)
    except ValidationError as e:
        raise ConfigurationProblem(detail=f"Invalid experiment configuration: {e}")
