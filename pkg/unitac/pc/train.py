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
import math
from typing import Callable, Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, confloat, conint

from unitac.augment.pairs import ParallelPair
from unitac.exceptions import EmptyInputProblem, NumericProblem
from unitac.files.records import PathLike, append_record
from unitac.nn.modules import Module
from unitac.nn.tensor import Tensor
from unitac.pc.batching import collate_features, collate_targets
from unitac.pc.model import PCModel
from unitac.pc.optim import Adam, LinearDecay, clip_grad_norm
from unitac.pc.scoring import ModelScorer, corpus_nll, perplexity_from_nll
from unitac.synth.specs import FRAME_PERIOD_MS
from unitac.utils import UNIT_REGISTRY
from unitac.utils.seeds import rng_for

log = logging.getLogger("unitac.train")


class TrainConfig(BaseModel):
    """
    Optimization settings. The effective batch is `micro_batch * accumulation`
    sequences; the learning rate decays linearly from `peak_lr` to 0 over
    `total_updates`.
    """
    peak_lr: confloat(ge=0) = 1e-3
    total_updates: conint(ge=1) = 5000
    micro_batch: conint(ge=1) = 16
    accumulation: conint(ge=1) = 1
    clip_norm: confloat(gt=0) = 1.0
    eval_interval: conint(ge=1) = 250
    log_interval: conint(ge=1) = 50
    betas: Tuple[confloat(ge=0, lt=1), confloat(ge=0, lt=1)] = (0.9, 0.999)
    adam_eps: confloat(gt=0) = 1e-8
    mask_start_prob: confloat(ge=0, le=1) = 0.1
    mask_span: conint(ge=1) = 4
    seed: int = 0

    class Config:
        frozen = True


class TrainResult(NamedTuple):
    best_state: Dict[str, np.ndarray]
    best_update: int
    best_val_ppl: Optional[float]
    final_loss: float
    records: List[dict]
    optimizer: Adam


def micro_batches(n_items: int, config: TrainConfig) -> Iterator[np.ndarray]:
    """
    Endless stream of micro-batch indices drawn from per-epoch seeded
    permutations.
    """
    rng = rng_for(config.seed, "batches")
    while True:
        permutation = rng.permutation(n_items)
        for start in range(0, n_items, config.micro_batch):
            yield permutation[start:start + config.micro_batch]


def run_updates(
    module: Module, n_items: int,
    batch_loss: Callable[[np.ndarray], Tuple[Tensor, int, float]],
    config: TrainConfig, log_path: Optional[PathLike] = None,
    evaluate: Optional[Callable[[], float]] = None, name: str = "train"
) -> TrainResult:
    """
    Generic optimization loop.

    `batch_loss(indices)` returns the summed token loss of a micro-batch,
    its token count and its audio duration in seconds. Every update
    accumulates `config.accumulation` micro-batches and normalizes by the
    total token count of the group. `evaluate()` returns a validation
    perplexity; the parameters with the lowest one are kept.

    Raises
    ------
    NumericProblem
        If a loss is not finite.
    """
    if n_items == 0:
        raise EmptyInputProblem(f"The {name} corpus")
    named = list(module.named_parameters())
    parameters = [p for _, p in named]
    optimizer = Adam(named, betas=config.betas, eps=config.adam_eps)
    schedule = LinearDecay(config.peak_lr, config.total_updates)
    stream = micro_batches(n_items, config)

    best_state, best_update, best_ppl = module.state_dict(), 0, None
    records: List[dict] = []
    loss_value = math.nan
    for update in range(config.total_updates):
        lr = schedule(update)
        groups = [next(stream) for _ in range(config.accumulation)]
        module.zero_grad()

        computed = []
        n_tokens = 0
        for indices in groups:
            loss, tokens, seconds = batch_loss(indices)
            computed.append((loss, seconds))
            n_tokens += tokens
        if n_tokens == 0:
            raise EmptyInputProblem(f"The {name} micro-batch targets")

        total_loss, audio_seconds = 0.0, 0.0
        for loss, seconds in computed:
            value = loss.item()
            if not math.isfinite(value):
                raise NumericProblem(
                    detail=f"{name}: non-finite loss at update {update + 1} (lr {lr:.3g}).",
                    update=update + 1
                )
            (loss * (1.0 / n_tokens)).backward()
            total_loss += value
            audio_seconds += seconds
        loss_value = total_loss / n_tokens

        grad_norm = clip_grad_norm(parameters, config.clip_norm)
        optimizer.step(lr)

        record = {
            "update": update + 1,
            "loss": loss_value,
            "lr": lr,
            "grad_norm": grad_norm,
            "audio_seconds": audio_seconds,
            "val_ppl": None,
        }
        is_last = update + 1 == config.total_updates
        if evaluate is not None and ((update + 1) % config.eval_interval == 0 or is_last):
            val_ppl = evaluate()
            record["val_ppl"] = val_ppl
            if best_ppl is None or val_ppl < best_ppl:
                best_ppl, best_update = val_ppl, update + 1
                best_state = module.state_dict()
            log.info(f"[{name}] update {update + 1}: val ppl [green]{val_ppl:.4f}[/]")
        if (update + 1) % config.log_interval == 0 or is_last:
            log.info(f"[{name}] update {update + 1}: loss {loss_value:.4f}, lr {lr:.2e}")
        records.append(record)
        if log_path is not None:
            append_record(log_path, record)

    if evaluate is None:
        best_state, best_update = module.state_dict(), config.total_updates
    return TrainResult(best_state, best_update, best_ppl, loss_value, records, optimizer)


def pair_batch_loss(model: PCModel, pairs: Sequence[ParallelPair]):
    vocabulary = model.vocabulary
    frame_seconds = (FRAME_PERIOD_MS * UNIT_REGISTRY.millisecond).to('second').magnitude

    def batch_loss(indices: np.ndarray) -> Tuple[Tensor, int, float]:
        batch = [pairs[i] for i in indices]
        features = collate_features([p.input.frames for p in batch])
        targets = collate_targets(
            [p.target.units for p in batch], vocabulary.bos, vocabulary.eos, vocabulary.pad
        )
        seconds = sum(p.input.n_frames for p in batch) * frame_seconds
        return model.loss(features, targets, reduction='sum'), targets.n_tokens, seconds
    return batch_loss


def validation_perplexity(model: PCModel, pairs: Sequence[ParallelPair]) -> float:
    return perplexity_from_nll(*corpus_nll(ModelScorer(model), pairs))


def train(
    model: PCModel, corpus: Sequence[ParallelPair], val: Sequence[ParallelPair],
    config: TrainConfig, log_path: Optional[PathLike] = None
) -> TrainResult:
    """
    Teacher-forced training of the corrector on parallel pairs.

    The model ends up holding the parameters with the best validation
    perplexity (the last ones when `val` is empty), and remembers the
    median target length of the corpus for decoding.

    Raises
    ------
    EmptyInputProblem
        If the corpus is empty.
    NumericProblem
        If the loss diverges.
    """
    if len(corpus) == 0:
        raise EmptyInputProblem("The training corpus")
    for pair in corpus[:1]:
        model.check_features(pair.input.dim)
    model.set_target_lengths([len(p.target) for p in corpus])

    evaluate = (lambda: validation_perplexity(model, val)) if len(val) > 0 else None
    log.info(
        f"Training on {len(corpus)} pairs ({model.n_parameters()} parameters, "
        f"{config.total_updates} updates, effective batch "
        f"{config.micro_batch * config.accumulation})"
    )
    result = run_updates(
        model, len(corpus), pair_batch_loss(model, corpus), config,
        log_path=log_path, evaluate=evaluate, name="train"
    )
    model.load_state_dict(result.best_state)
    return result
