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
from collections import defaultdict
from pathlib import Path
from typing import Dict, List, NamedTuple, Optional, Sequence

import numpy as np
from pydantic import BaseModel, root_validator
from rich.console import Console
from rich.table import Table

from unitac.augment.pairs import ParallelPair
from unitac.evaluation.metrics import (
    edit_distance, fluency_ratio, phoneme_recovery, speaker_similarity
)
from unitac.exceptions import EmptyInputProblem
from unitac.files.records import PathLike, write_records
from unitac.pc.decode import DEFAULT_BEAM_SIZE, beam_decode
from unitac.pc.model import PCModel
from unitac.pc.scoring import ModelScorer, perplexity_from_nll
from unitac.s2u.codebook import Codebook
from unitac.s2u.quantize import speech_to_units
from unitac.s2u.units import UnitSequence
from unitac.u2s.decoder import UnitDecoder, synthesize
from unitac.u2s.speaker import speaker_embed
from unitac.utils.concurrency import map_ordered

log = logging.getLogger("unitac.evaluation")

ALL_ACCENTS = "all"


class MetricRow(BaseModel):
    """
    Metrics over a set of pairs. `input_*` metrics compare the units of the
    uncorrected input to the ground truth.
    """
    n_pairs: int
    ppl: float
    uer: float
    # Share of pairs whose decoded units equal the target.
    exact_match: float
    phoneme_accuracy: Optional[float] = None
    speaker_cosine: float
    fluency_ratio: float
    input_uer: float
    input_phoneme_accuracy: Optional[float] = None
    input_fluency_ratio: float

    @root_validator(skip_on_failure=True)
    def check_values(cls, values):
        for name, value in values.items():
            if isinstance(value, float) and not math.isfinite(value):
                raise ValueError(f"{name} is not finite")
        if values["ppl"] < 1.0 - 1e-9:
            raise ValueError(f"perplexity {values['ppl']} is below 1")
        return values


class EvalReport(MetricRow):
    beam_size: int
    length_norm: bool
    per_accent: Dict[str, MetricRow]


class PairResult(NamedTuple):
    accent_id: str
    nll: float
    n_tokens: int
    units: UnitSequence
    distance: int
    ref_length: int
    phoneme_accuracy: Optional[float]
    speaker_cosine: float
    fluency_ratio: float
    input_distance: int
    input_phoneme_accuracy: Optional[float]
    input_fluency_ratio: float


def _mean(values: List[Optional[float]]) -> Optional[float]:
    if not values or any(v is None for v in values):
        return None
    return float(np.mean(values))


def aggregate(results: Sequence[PairResult]) -> MetricRow:
    """Pool token likelihoods and edit distances; average the other metrics."""
    ref_length = sum(r.ref_length for r in results)
    return MetricRow(
        n_pairs=len(results),
        ppl=perplexity_from_nll(sum(r.nll for r in results), sum(r.n_tokens for r in results)),
        uer=sum(r.distance for r in results) / ref_length,
        exact_match=float(np.mean([r.distance == 0 for r in results])),
        phoneme_accuracy=_mean([r.phoneme_accuracy for r in results]),
        speaker_cosine=float(np.mean([r.speaker_cosine for r in results])),
        fluency_ratio=float(np.mean([r.fluency_ratio for r in results])),
        input_uer=sum(r.input_distance for r in results) / ref_length,
        input_phoneme_accuracy=_mean([r.input_phoneme_accuracy for r in results]),
        input_fluency_ratio=float(np.mean([r.input_fluency_ratio for r in results])),
    )


def evaluate_pairs(
    model: PCModel, pairs: Sequence[ParallelPair], codebook: Codebook, decoder: UnitDecoder,
    unit_phonemes: Optional[np.ndarray] = None, filler: Optional[int] = None,
    beam_size: int = DEFAULT_BEAM_SIZE, length_norm: bool = False, threads: int = 1
) -> List[PairResult]:
    scorer = ModelScorer(model)
    log_probs = scorer.token_log_probs(
        [p.input.frames for p in pairs], [p.target.units for p in pairs]
    )

    def evaluate(item) -> PairResult:
        pair, token_log_probs = item
        best = beam_decode(scorer, pair.input.frames, beam_size=beam_size, length_norm=length_norm)[0]
        units = best.reduced_units
        converted = synthesize(units, speaker_embed(pair.input, codebook), decoder)
        cosine = speaker_similarity(converted, pair.input, codebook) if converted.n_frames else 0.0
        input_units = speech_to_units(pair.input, codebook)

        def accuracy(hyp):
            if unit_phonemes is None or pair.sentence is None:
                return None
            return phoneme_recovery(hyp, unit_phonemes, pair.sentence, filler)

        return PairResult(
            accent_id=pair.accent_id,
            nll=-float(token_log_probs.sum()),
            n_tokens=int(token_log_probs.shape[0]),
            units=units,
            distance=edit_distance(units, pair.target),
            ref_length=len(pair.target),
            phoneme_accuracy=accuracy(units),
            speaker_cosine=cosine,
            fluency_ratio=fluency_ratio(units, pair.target),
            input_distance=edit_distance(input_units, pair.target),
            input_phoneme_accuracy=accuracy(input_units),
            input_fluency_ratio=fluency_ratio(input_units, pair.target),
        )

    return map_ordered(evaluate, list(zip(pairs, log_probs)), threads=threads)


def run_eval(
    model: PCModel, pairs: Sequence[ParallelPair], codebook: Codebook, decoder: UnitDecoder,
    report_path: Optional[PathLike] = None, unit_phonemes: Optional[np.ndarray] = None,
    filler: Optional[int] = None, beam_size: int = DEFAULT_BEAM_SIZE,
    length_norm: bool = False, threads: int = 1
) -> EvalReport:
    """
    Decode every test pair with beam search and compute all metrics,
    overall and per accent.

    When `report_path` is given, a text table is written there and the
    same rows as line-delimited JSON next to it (`.jsonl` suffix).

    Raises
    ------
    EmptyInputProblem
        If there is no pair.
    """
    if len(pairs) == 0:
        raise EmptyInputProblem("The test set")
    log.info(f"Evaluating {len(pairs)} pairs (beam {beam_size})")
    results = evaluate_pairs(
        model, pairs, codebook, decoder, unit_phonemes=unit_phonemes, filler=filler,
        beam_size=beam_size, length_norm=length_norm, threads=threads
    )
    by_accent = defaultdict(list)
    for result in results:
        by_accent[result.accent_id].append(result)

    overall = aggregate(results)
    report = EvalReport(
        **overall.dict(), beam_size=beam_size, length_norm=length_norm,
        per_accent={a: aggregate(by_accent[a]) for a in sorted(by_accent)}
    )
    log.info(
        f"Test perplexity [green]{report.ppl:.4f}[/], UER {report.uer:.4f} "
        f"(input {report.input_uer:.4f})"
    )
    if report_path is not None:
        write_report(report, report_path)
    return report


def _format(value: Optional[float]) -> str:
    return "-" if value is None else f"{value:.4f}"


def report_rows(report: EvalReport) -> List[dict]:
    rows = [{"accent": ALL_ACCENTS, **report.dict(include=set(MetricRow.__fields__))}]
    rows += [{"accent": accent, **row.dict()} for accent, row in report.per_accent.items()]
    return rows


def render_report(report: EvalReport) -> str:
    table = Table(title=f"Evaluation (beam {report.beam_size})")
    columns = [
        ("accent", "Accent"), ("n_pairs", "Pairs"), ("ppl", "PPL"), ("uer", "UER"),
        ("exact_match", "Exact"), ("phoneme_accuracy", "Phoneme acc."),
        ("speaker_cosine", "Speaker cos."), ("fluency_ratio", "Fluency"), ("input_uer", "Input UER"),
        ("input_phoneme_accuracy", "Input phoneme acc."), ("input_fluency_ratio", "Input fluency"),
    ]
    for _, header in columns:
        table.add_column(header, justify="left" if header == "Accent" else "right")
    for row in report_rows(report):
        table.add_row(*(
            str(row[key]) if isinstance(row[key], (str, int)) else _format(row[key])
            for key, _ in columns
        ))
    console = Console(width=160, color_system=None)
    with console.capture() as capture:
        console.print(table)
    return capture.get()


def write_report(report: EvalReport, path: PathLike) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_report(report), encoding="utf-8")
    write_records(path.with_suffix(".jsonl"), report_rows(report))
    log.info(f"Wrote evaluation report [green]{path}[/]")
