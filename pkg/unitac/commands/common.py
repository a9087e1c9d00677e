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
"""Arguments and helpers shared by several stages."""
import logging
from pathlib import Path
from typing import List

from pydantic import ValidationError

from unitac.commands.router import argument
from unitac.exceptions import ConfigurationProblem, EmptyInputProblem
from unitac.experiment.config import ModelParameters
from unitac.files.features import read_features, write_features
from unitac.files.records import PathLike
from unitac.pc.model import PCConfig
from unitac.pc.train import TrainConfig
from unitac.synth.features import FeatureSequence, Provenance

log = logging.getLogger("unitac.cli")

FEATURES_GLOB = "*.feat"

WORLD = argument('--world', help="World file written by `synth world`.")
MANIFEST = argument('--manifest', help="Sentence manifest (line-delimited JSON).")
CODEBOOK = argument('--codebook', help="Codebook file written by `s2u fit`.")
DECODER = argument('--decoder', help="Unit decoder file written by `u2s fit`.")
OUT = argument('--out', help="Output path.")

MODEL_ARGUMENTS = (
    argument('--model-dim', type=int, default=ModelParameters.__fields__['model_dim'].default),
    argument('--heads', type=int, default=ModelParameters.__fields__['heads'].default),
    argument('--encoder-layers', type=int, default=ModelParameters.__fields__['encoder_layers'].default),
    argument('--decoder-layers', type=int, default=ModelParameters.__fields__['decoder_layers'].default),
    argument('--ff-dim', type=int, default=ModelParameters.__fields__['ff_dim'].default),
    argument('--subsample', type=int, default=1, help="Frames stacked by the encoder input."),
)

TRAIN_ARGUMENTS = (
    argument('--updates', type=int, default=TrainConfig.__fields__['total_updates'].default),
    argument('--lr', type=float, default=TrainConfig.__fields__['peak_lr'].default),
    argument('--micro-batch', type=int, default=TrainConfig.__fields__['micro_batch'].default),
    argument('--accumulation', type=int, default=1),
    argument('--eval-interval', type=int, default=TrainConfig.__fields__['eval_interval'].default),
    argument('--log', help="Training log (line-delimited JSON)."),
)


def required(args, *names: str) -> None:
    missing = [n for n in names if getattr(args, n, None) in (None, "")]
    if missing:
        flags = ", ".join("--" + n.replace('_', '-') for n in missing)
        raise ConfigurationProblem(detail=f"Missing required option(s): {flags}.")


def split_list(value) -> List[str]:
    """Comma-separated values, or a list coming from a configuration file."""
    if value is None:
        return []
    if isinstance(value, (list, tuple)):
        return [str(v) for v in value]
    return [v.strip() for v in str(value).split(",") if v.strip()]


def feature_paths(path: PathLike) -> List[Path]:
    """A feature file, or the feature files of a directory sorted by name."""
    path = Path(path)
    if path.is_dir():
        paths = sorted(path.glob(FEATURES_GLOB))
        if not paths:
            raise EmptyInputProblem(f"The feature directory {path}")
        return paths
    return [path]


def read_feature_files(path: PathLike) -> List[FeatureSequence]:
    return [
        read_features(p, provenance=Provenance(sentence_id=p.stem))
        for p in feature_paths(path)
    ]


def write_feature_files(directory: PathLike, sequences: List[FeatureSequence]) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for features in sequences:
        write_features(directory / f"{features.provenance.sentence_id}.feat", features)
    log.info(f"Wrote {len(sequences)} feature file(s) to [green]{directory}[/]")


def model_config(args, feature_dim: int, n_units: int, seed: int) -> PCConfig:
    try:
        return PCConfig(
            feature_dim=feature_dim, n_units=n_units, seed=seed,
            model_dim=args.model_dim, heads=args.heads, encoder_layers=args.encoder_layers,
            decoder_layers=args.decoder_layers, ff_dim=args.ff_dim, subsample=args.subsample,
        )
    except ValidationError as e:
        raise ConfigurationProblem(detail=f"Invalid model options: {e}")


def train_config(args, seed: int) -> TrainConfig:
    try:
        return TrainConfig(
            total_updates=args.updates, peak_lr=args.lr, micro_batch=args.micro_batch,
            accumulation=args.accumulation, eval_interval=args.eval_interval, seed=seed,
        )
    except ValidationError as e:
        raise ConfigurationProblem(detail=f"Invalid training options: {e}")
