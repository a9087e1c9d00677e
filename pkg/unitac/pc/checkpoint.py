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
from typing import Any, Dict, Optional, Tuple

from unitac.exceptions import DataProblem
from unitac.files.checkpoint import read_checkpoint, write_checkpoint
from unitac.files.records import PathLike
from unitac.pc.model import PCConfig, PCModel
from unitac.pc.optim import Adam

log = logging.getLogger("unitac.pc")

PARAMETERS = "parameters"
OPTIMIZER = "optimizer"


def save_model(
    path: PathLike, model: PCModel, optimizer: Optional[Adam] = None,
    meta: Optional[Dict[str, Any]] = None
) -> None:
    """Write the model parameters, its config and optionally the optimizer state."""
    header = {
        "config": model.config.dict(),
        "median_target_length": model.median_target_length,
        **(meta or {}),
    }
    sections = {PARAMETERS: model.state_dict()}
    if optimizer is not None:
        sections[OPTIMIZER] = optimizer.state_dict()
    write_checkpoint(path, header, sections)
    log.info(f"Saved checkpoint [green]{path}[/] ({model.n_parameters()} parameters)")


def load_model(path: PathLike) -> Tuple[PCModel, Dict[str, Any], Dict]:
    """
    Rebuild a model from a checkpoint.

    Returns
    -------
    model
        The model, holding the stored parameters.
    meta
        The checkpoint metadata.
    optimizer_state
        The stored optimizer state, empty if none was saved.
    """
    checkpoint = read_checkpoint(path)
    try:
        config = PCConfig.parse_obj(checkpoint.meta["config"])
    except (KeyError, ValueError) as e:
        raise DataProblem("Invalid checkpoint", f"{path}: no valid model config ({e}).")
    if PARAMETERS not in checkpoint.sections:
        raise DataProblem("Invalid checkpoint", f"{path} holds no parameters.")
    model = PCModel(config)
    model.load_state_dict(checkpoint.sections[PARAMETERS])
    model.median_target_length = checkpoint.meta.get("median_target_length")
    return model, checkpoint.meta, checkpoint.sections.get(OPTIMIZER, {})


def init_from(model: PCModel, path: PathLike) -> None:
    """
    Copy the parameters of a checkpoint that exist in `model` with the same
    name, e.g. a pretrained encoder or decoder.
    """
    checkpoint = read_checkpoint(path)
    state = checkpoint.sections.get(PARAMETERS, {})
    own = dict(model.named_parameters())
    shared = {name: value for name, value in state.items() if name in own}
    if not shared:
        raise DataProblem("Incompatible checkpoint", f"{path} shares no parameter with the model.")
    model.load_state_dict(shared, strict=False)
    log.info(f"Initialized {len(shared)}/{len(own)} parameter tensors from {path}")
