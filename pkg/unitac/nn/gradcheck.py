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
from typing import Callable, Dict, Optional

import numpy as np

from unitac.exceptions import NumericProblem
from unitac.nn.modules import Module
from unitac.nn.tensor import Tensor, no_grad

log = logging.getLogger("unitac.nn")

RELATIVE_ERROR_FLOOR = 1e-8


def _scalar(loss: Tensor) -> float:
    value = loss.item()
    if not np.isfinite(value):
        raise NumericProblem(detail=f"The checked loss is not finite ({value}).")
    return value


def relative_error(analytic: np.ndarray, numeric: np.ndarray) -> float:
    """`‖a - n‖ / max(1e-8, ‖a‖ + ‖n‖)`."""
    difference = np.linalg.norm(analytic - numeric)
    return float(difference / max(RELATIVE_ERROR_FLOOR, np.linalg.norm(analytic) + np.linalg.norm(numeric)))


def grad_check(
    module: Module, loss_fn: Callable[[], Tensor], eps: float = 1e-5,
    max_entries_per_param: Optional[int] = None, seed: int = 0,
    errors: Optional[Dict[str, float]] = None
) -> float:
    """
    Compare the analytic gradient of a scalar loss with central finite
    differences, parameter tensor by parameter tensor.

    Parameters
    ----------
    module
        Module whose parameters are checked.
    loss_fn
        Computes the scalar loss from the current parameter values.
    eps
        Finite-difference step.
    max_entries_per_param
        Check at most this many randomly chosen entries of every parameter
        tensor (all entries when None).
    seed
        Seed of the entry selection.
    errors
        Optional dictionary receiving the error of every parameter tensor.

    Returns
    -------
    max_error
        Largest per-tensor relative error (see `relative_error`).

    Raises
    ------
    NumericProblem
        If the loss is not finite.
    """
    module.zero_grad()
    loss = loss_fn()
    _scalar(loss)
    if loss.requires_grad:
        loss.backward()

    rng = np.random.default_rng(seed)
    worst = 0.0
    for name, p in module.named_parameters():
        analytic_full = p.grad if p.grad is not None else np.zeros_like(p.data)
        flat = p.data.reshape(-1)
        indices = np.arange(flat.size)
        if max_entries_per_param is not None and flat.size > max_entries_per_param:
            indices = np.sort(rng.choice(flat.size, size=max_entries_per_param, replace=False))

        numeric = np.zeros(indices.size)
        with no_grad():
            for n, i in enumerate(indices):
                original = flat[i]
                flat[i] = original + eps
                plus = _scalar(loss_fn())
                flat[i] = original - eps
                minus = _scalar(loss_fn())
                flat[i] = original
                numeric[n] = (plus - minus) / (2 * eps)

        error = relative_error(analytic_full.reshape(-1)[indices], numeric)
        if errors is not None:
            errors[name] = error
        log.debug(f"grad check {name}: {error:.3e}")
        worst = max(worst, error)
    module.zero_grad()
    return worst
