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
Self-supervised initializations of the corrector: a causal unit language
model for the decoder and masked-frame unit prediction for the encoder.
"""
import logging
from typing import Optional, Sequence, Tuple

import numpy as np

from unitac.exceptions import EmptyInputProblem
from unitac.files.records import PathLike
from unitac.nn.functional import cross_entropy
from unitac.nn.modules import Linear, Module
from unitac.nn.tensor import Tensor, no_grad
from unitac.pc.batching import FeatureBatch, collate_features, collate_targets
from unitac.pc.model import PCModel, SpeechEncoder, UnitLanguageDecoder, stack_frames
from unitac.pc.scoring import perplexity_from_nll
from unitac.pc.train import TrainConfig, TrainResult, run_updates
from unitac.s2u.codebook import Codebook
from unitac.s2u.units import UnitSequence
from unitac.synth.features import FeatureSequence
from unitac.utils.iterables import chunks
from unitac.utils.seeds import rng_for

log = logging.getLogger("unitac.train")


def _unit_lm_loss(decoder: UnitLanguageDecoder, model: PCModel, units: Sequence[Sequence[int]]):
    vocabulary = model.vocabulary
    targets = collate_targets(units, vocabulary.bos, vocabulary.eos, vocabulary.pad)
    logits = decoder(targets.inputs, memory=None, padding=targets.padding)
    loss = cross_entropy(logits, targets.outputs, weights=targets.weights, reduction='sum')
    return loss, targets.n_tokens


def unit_lm_perplexity(model: PCModel, corpus: Sequence[UnitSequence], batch_size: int = 32) -> float:
    """Perplexity of the decoder used as an unconditional unit language model."""
    if len(corpus) == 0:
        raise EmptyInputProblem("The unit corpus")
    total, count = 0.0, 0
    with no_grad():
        for index in chunks(range(len(corpus)), batch_size):
            loss, tokens = _unit_lm_loss(
                model.decoder, model, [corpus[i].units for i in index]
            )
            total += loss.item()
            count += tokens
    return perplexity_from_nll(total, count)


def pretrain_decoder_lm(
    model: PCModel, corpus: Sequence[UnitSequence], config: TrainConfig,
    val: Sequence[UnitSequence] = (), log_path: Optional[PathLike] = None
) -> TrainResult:
    """
    Train the decoder of `model` as a causal language model over native
    reduced unit sequences.

    Cross-attention never runs without an encoder memory, so its weights
    keep their fresh initialization; the embedding, self-attention,
    feed-forward and output weights are trained.
    """
    if len(corpus) == 0:
        raise EmptyInputProblem("The unit corpus")
    decoder = model.decoder

    def batch_loss(indices: np.ndarray) -> Tuple[Tensor, int, float]:
        loss, tokens = _unit_lm_loss(decoder, model, [corpus[i].units for i in indices])
        return loss, tokens, 0.0

    evaluate = (lambda: unit_lm_perplexity(model, val)) if len(val) > 0 else None
    log.info(f"Pretraining the decoder as a unit language model on {len(corpus)} sequences")
    result = run_updates(
        decoder, len(corpus), batch_loss, config,
        log_path=log_path, evaluate=evaluate, name="pretrain-dec"
    )
    decoder.load_state_dict(result.best_state)
    return result


def span_mask(n_frames: int, start_prob: float, span: int, rng: np.random.Generator) -> np.ndarray:
    """
    Every frame starts a masked span of `span` frames with probability
    `start_prob`. At least one span is masked.
    """
    starts = np.flatnonzero(rng.random(n_frames) < start_prob)
    if starts.size == 0:
        starts = np.array([rng.integers(n_frames)])
    mask = np.zeros(n_frames, dtype=bool)
    for start in starts:
        mask[start:start + span] = True
    return mask


class MaskedFramePredictor(Module):
    """An encoder with a linear probe classifying every position into a unit."""

    def __init__(self, encoder: SpeechEncoder, n_units: int, rng: np.random.Generator):
        self.encoder = encoder
        self.probe = Linear(encoder.model_dim, n_units, rng)

    def forward(self, batch: FeatureBatch, masked: np.ndarray) -> Tensor:
        hidden, _ = self.encoder(batch, masked=masked)
        return self.probe(hidden)


def pretrain_encoder_masked(
    model: PCModel, corpus: Sequence[FeatureSequence], codebook: Codebook,
    config: TrainConfig, log_path: Optional[PathLike] = None
) -> TrainResult:
    """
    Train the encoder of `model` to predict the unit of masked frames.

    Spans of `config.mask_span` (stacked) frames are zeroed, each position
    starting a span with probability `config.mask_start_prob`; the loss
    only covers masked, non-padded positions. With frame stacking the
    target of a stacked frame is the unit of its first frame. The probe is
    discarded afterwards.

    Raises
    ------
    DimensionMismatchProblem
        If the features do not match the model or the codebook.
    """
    if len(corpus) == 0:
        raise EmptyInputProblem("The native feature corpus")
    model.check_features(corpus[0].dim)
    subsample = model.config.subsample
    units = [codebook.assign(f.frames)[0][::subsample] for f in corpus]

    predictor = MaskedFramePredictor(
        model.encoder, codebook.n_units, rng_for(config.seed, "probe")
    )
    mask_rng = rng_for(config.seed, "mask")
    frame_seconds = corpus[0].duration.magnitude / corpus[0].n_frames

    def batch_loss(indices: np.ndarray) -> Tuple[Tensor, int, float]:
        batch = collate_features([corpus[i].frames for i in indices])
        stacked_padding = stack_frames(batch, subsample).padding
        b, t = stacked_padding.shape
        masked = np.zeros((b, t), dtype=bool)
        targets = np.zeros((b, t), dtype=np.int64)
        for row, i in enumerate(indices):
            n = units[i].shape[0]
            masked[row, :n] = span_mask(n, config.mask_start_prob, config.mask_span, mask_rng)
            targets[row, :n] = units[i]
        weights = (masked & ~stacked_padding).astype(np.float64)
        logits = predictor(batch, masked)
        loss = cross_entropy(logits, targets, weights=weights, reduction='sum')
        seconds = sum(corpus[i].n_frames for i in indices) * frame_seconds
        return loss, int(weights.sum()), seconds

    log.info(f"Pretraining the encoder on masked frames of {len(corpus)} native sequences")
    result = run_updates(
        predictor, len(corpus), batch_loss, config, log_path=log_path, name="pretrain-enc"
    )
    predictor.load_state_dict(result.best_state)
    return result
