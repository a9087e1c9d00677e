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
Initialization x strategy comparison grid.

Artifacts shared by every cell (world, sentences, codebook, unit decoder,
validation and test sets) are prepared once under `<out>/shared`. Each
cell (budget, strategy, initialization, seed) then builds its training
corpus, optionally pretrains, trains and evaluates under
`<out>/cells/<cell name>`. A cell whose result file reports success is
not run again; deleting its directory reproduces it exactly.
"""
import logging
from functools import partial
from pathlib import Path
from typing import Dict, List, NamedTuple, Optional

import numpy as np
from pydantic import BaseModel
from rich.console import Console
from rich.table import Table

from unitac.augment.corpus import build_parallel_corpus, corpus_stats
from unitac.augment.pairs import ParallelPair
from unitac.augment.storage import read_parallel_corpus, write_parallel_corpus
from unitac.augment.strategy import AugmentStrategy, StrategyKind
from unitac.corpus.manifest import Manifest, Role, read_manifest, write_manifest
from unitac.corpus.sentences import Sentence, sample_sentences, split_train_val
from unitac.evaluation.metrics import perplexity, unigram_perplexity
from unitac.evaluation.report import run_eval
from unitac.exceptions import ProblemException
from unitac.experiment.config import ExperimentConfig, Init
from unitac.files.models import read_codebook, read_unit_decoder, write_codebook, write_unit_decoder
from unitac.files.records import PathLike, read_json, write_json
from unitac.pc.model import PCConfig, PCModel
from unitac.pc.pretrain import pretrain_decoder_lm, pretrain_encoder_masked
from unitac.pc.train import train
from unitac.s2u.codebook import Codebook
from unitac.s2u.kmeans import fit_kmeans
from unitac.s2u.quantize import quantize, speech_to_units, unit_phoneme_map
from unitac.synth.world import World, read_world, write_world
from unitac.u2s.decoder import UnitDecoder, fit_unit_decoder
from unitac.utils.concurrency import map_ordered
from unitac.utils.seeds import derive_seed

log = logging.getLogger("unitac.experiment")

SHARED_DIR = "shared"
CELLS_DIR = "cells"
RESULT_FILE = "result.json"
GRID_FILE = "grid.json"
GRID_TEXT_FILE = "grid.txt"
STATUS_OK = "ok"
STATUS_FAILED = "failed"


class Shared(NamedTuple):
    world: World
    manifest: Manifest
    codebook: Codebook
    decoder: UnitDecoder
    unit_phonemes: np.ndarray
    val: List[ParallelPair]
    test: List[ParallelPair]

    @property
    def fit_sentences(self) -> List[Sentence]:
        return self.manifest.sentences(Role.TRAIN)


def split_sentences(config: ExperimentConfig, world: World) -> Manifest:
    """Train, validation and test sentences of the experiment."""
    data = config.data
    sentences = sample_sentences(
        data.n_sentences + data.n_test_sentences, data.len_range, world.inventory,
        seed=derive_seed(config.world.seed, "sentences")
    )
    test = sentences[data.n_sentences:]
    train_sentences, val = split_train_val(
        sentences[:data.n_sentences], data.val_ratio, seed=derive_seed(config.world.seed, "split")
    )
    return Manifest.from_splits({Role.TRAIN: train_sentences, Role.VAL: val, Role.TEST: test})


def prepare_shared(config: ExperimentConfig, directory: PathLike) -> Shared:
    """Build, or read back when already built, the artifacts shared by all cells."""
    directory = Path(directory)
    if (directory / "summary.json").is_file():
        return load_shared(directory)

    world = World.create(config.world)
    manifest = split_sentences(config, world)
    renderer = world.renderer()
    threads = config.threads

    fit_sentences = manifest.sentences(Role.TRAIN)[:config.units.n_fit_sentences]
    natives = map_ordered(renderer.native_render, fit_sentences, threads=threads)
    frames = np.concatenate([f.frames for f in natives])
    log.info(f"Fitting {config.units.n_units} units on {frames.shape[0]} native frames")
    codebook = fit_kmeans(
        frames, config.units.n_units, max_iters=config.units.max_iters, tol=config.units.tol,
        seed=derive_seed(config.world.seed, "kmeans"), threads=threads
    )
    decoder = fit_unit_decoder([(f, quantize(f, codebook)) for f in natives], codebook)
    mapping = unit_phoneme_map(codebook, world.prototype_matrix, natives)

    accents = list(world.accents)
    if config.data.unseen_accents:
        accents += list(world.unseen_accents)
    non_overlapped = AugmentStrategy(kind=StrategyKind.NON_OVERLAPPED)
    val_sentences = manifest.sentences(Role.VAL)
    test_sentences = manifest.sentences(Role.TEST)
    val = build_parallel_corpus(
        val_sentences, non_overlapped, world.accents, world.train_speakers, len(val_sentences),
        renderer, codebook, seed=derive_seed(config.world.seed, "val"),
        config=config.augment, threads=threads
    )
    test = build_parallel_corpus(
        test_sentences, non_overlapped, accents, world.test_speakers, len(test_sentences),
        renderer, codebook, seed=derive_seed(config.world.seed, "test"),
        config=config.augment, threads=threads
    )

    write_world(world, directory / "world.json")
    write_manifest(manifest, directory / "manifest.jsonl")
    write_codebook(directory / "codebook.bin", codebook)
    write_unit_decoder(directory / "decoder.bin", decoder)
    write_json(directory / "unit_phonemes.json", mapping.tolist())
    write_parallel_corpus(directory / "val", val, Role.VAL)
    write_parallel_corpus(directory / "test", test, Role.TEST)
    write_json(directory / "summary.json", {
        "val": corpus_stats(val).dict(), "test": corpus_stats(test).dict(),
        "kmeans_iterations": codebook.fit_stats.iterations,
        "kmeans_objective": codebook.fit_stats.objective,
    })
    return load_shared(directory)


def load_shared(directory: PathLike) -> Shared:
    directory = Path(directory)
    codebook = read_codebook(directory / "codebook.bin")
    return Shared(
        world=read_world(directory / "world.json"),
        manifest=read_manifest(directory / "manifest.jsonl"),
        codebook=codebook,
        decoder=read_unit_decoder(directory / "decoder.bin"),
        unit_phonemes=np.asarray(read_json(directory / "unit_phonemes.json"), dtype=np.int64),
        val=read_parallel_corpus(directory / "val", n_units=codebook.n_units),
        test=read_parallel_corpus(directory / "test", n_units=codebook.n_units),
    )


class Cell(BaseModel):
    budget: int
    strategy: AugmentStrategy
    init: Init
    seed: int

    class Config:
        frozen = True

    @property
    def name(self) -> str:
        return f"b{self.budget}-{self.strategy}-{self.init.value}-seed{self.seed}" \
            .replace("(", "").replace(")", "")


class CellResult(BaseModel):
    cell: Cell
    status: str
    val_ppl: Optional[float] = None
    test_ppl: Optional[float] = None
    unigram_val_ppl: Optional[float] = None
    best_update: Optional[int] = None
    final_loss: Optional[float] = None
    train_hours: Optional[float] = None
    evaluation: Optional[dict] = None
    diagnostic: Optional[dict] = None

    @property
    def ok(self) -> bool:
        return self.status == STATUS_OK


def grid_cells(config: ExperimentConfig) -> List[Cell]:
    return [
        Cell(budget=budget, strategy=strategy, init=init, seed=seed)
        for budget in config.budgets
        for strategy in config.strategies
        for init in config.inits
        for seed in config.seeds
    ]


def _train_cell(cell: Cell, config: ExperimentConfig, shared: Shared, directory: Path) -> CellResult:
    world = shared.world
    renderer = world.renderer()
    corpus = build_parallel_corpus(
        shared.manifest.sentences(Role.TRAIN), cell.strategy, world.accents,
        world.train_speakers, cell.budget, renderer, shared.codebook,
        seed=derive_seed(cell.seed, "corpus"), config=config.augment, threads=config.threads
    )
    stats = corpus_stats(corpus)

    model = PCModel(PCConfig(
        feature_dim=world.dim, n_units=shared.codebook.n_units, seed=cell.seed,
        **config.model.dict()
    ))
    pretrain_config = config.pretrain.copy(update={"seed": cell.seed})
    fit_sentences = shared.fit_sentences[:config.units.n_fit_sentences]
    if cell.init.pretrains_encoder:
        natives = map_ordered(renderer.native_render, fit_sentences, threads=config.threads)
        pretrain_encoder_masked(
            model, natives, shared.codebook, pretrain_config,
            log_path=directory / "pretrain-enc.jsonl"
        )
    if cell.init.pretrains_decoder:
        native_units = map_ordered(
            lambda s: speech_to_units(renderer.native_render(s), shared.codebook),
            fit_sentences, threads=config.threads
        )
        pretrain_decoder_lm(
            model, native_units, pretrain_config, log_path=directory / "pretrain-dec.jsonl"
        )

    result = train(
        model, corpus, shared.val, config.train.copy(update={"seed": cell.seed}),
        log_path=directory / "train.jsonl"
    )
    val_ppl = result.best_val_ppl if result.best_val_ppl is not None \
        else perplexity(model, shared.val)
    evaluation = None
    if config.decode_test:
        evaluation = run_eval(
            model, shared.test, shared.codebook, shared.decoder,
            report_path=directory / "eval.txt", unit_phonemes=shared.unit_phonemes,
            filler=world.inventory.filler, beam_size=config.eval_beam_size,
            threads=config.threads
        ).dict()
    return CellResult(
        cell=cell, status=STATUS_OK, val_ppl=val_ppl,
        test_ppl=perplexity(model, shared.test),
        unigram_val_ppl=unigram_perplexity(
            [p.target for p in corpus], [p.target for p in shared.val],
            n_units=shared.codebook.n_units, smoothing=1.0
        ),
        best_update=result.best_update, final_loss=result.final_loss,
        train_hours=stats.audio_hours, evaluation=evaluation,
    )


def run_cell(cell: Cell, config: ExperimentConfig, out_dir: PathLike) -> CellResult:
    """
    Run one cell, or read its result back if it already succeeded. A
    `ProblemException` fails the cell with a recorded diagnostic; any other
    error fails it too, with the exception type as title.
    """
    out_dir = Path(out_dir)
    directory = out_dir / CELLS_DIR / cell.name
    result_path = directory / RESULT_FILE
    if result_path.is_file():
        previous = CellResult.parse_obj(read_json(result_path))
        if previous.ok:
            log.info(f"Cell {cell.name} already done")
            return previous

    directory.mkdir(parents=True, exist_ok=True)
    for stale in directory.glob("*.jsonl"):
        stale.unlink()
    log.info(f"Running cell [green]{cell.name}[/]")
    try:
        shared = load_shared(out_dir / SHARED_DIR)
        result = _train_cell(cell, config, shared, directory)
    except ProblemException as e:
        log.error(f"Cell {cell.name} failed: {e.message}")
        result = CellResult(cell=cell, status=STATUS_FAILED, diagnostic=e.as_dict())
    except Exception as e:
        log.exception(f"Cell {cell.name} crashed: {e}")
        result = CellResult(
            cell=cell, status=STATUS_FAILED,
            diagnostic={"title": type(e).__name__, "detail": str(e)}
        )
    write_json(result_path, result.dict())
    return result


class GridRow(BaseModel):
    budget: int
    strategy: str
    init: Init
    n_ok: int
    n_failed: int
    val_ppl_mean: Optional[float] = None
    val_ppl_spread: Optional[float] = None
    test_ppl_mean: Optional[float] = None
    test_ppl_spread: Optional[float] = None


class GridReport(BaseModel):
    rows: List[GridRow]
    # "<budget>/<init>" -> mean val PPL of overlapped < non-overlapped
    strategy_ordering: Dict[str, bool]
    # "<budget>/<strategy>" -> mean val PPL of dec-pretrain <= random
    pretrain_ordering: Dict[str, bool]
    n_failed: int


def _mean_spread(values: List[float]):
    if not values:
        return None, None
    return float(np.mean(values)), float(np.std(values))


def summarize(results: List[CellResult]) -> GridReport:
    groups: Dict[tuple, List[CellResult]] = {}
    for r in results:
        key = (r.cell.budget, str(r.cell.strategy), r.cell.init)
        groups.setdefault(key, []).append(r)

    rows = []
    for (budget, strategy, init), group in groups.items():
        ok = [r for r in group if r.ok]
        val_mean, val_spread = _mean_spread([r.val_ppl for r in ok])
        test_mean, test_spread = _mean_spread([r.test_ppl for r in ok])
        rows.append(GridRow(
            budget=budget, strategy=strategy, init=init, n_ok=len(ok),
            n_failed=len(group) - len(ok), val_ppl_mean=val_mean, val_ppl_spread=val_spread,
            test_ppl_mean=test_mean, test_ppl_spread=test_spread,
        ))

    def val_mean(budget, init=None, kind=None, strategy=None) -> Optional[float]:
        for row in rows:
            if row.budget != budget or row.val_ppl_mean is None:
                continue
            if init is not None and row.init != init:
                continue
            if strategy is not None and row.strategy != strategy:
                continue
            if kind is not None and not row.strategy.startswith(kind.value):
                continue
            return row.val_ppl_mean
        return None

    strategy_ordering, pretrain_ordering = {}, {}
    for row in rows:
        overlapped = val_mean(row.budget, init=row.init, kind=StrategyKind.OVERLAPPED)
        non_overlapped = val_mean(row.budget, init=row.init, kind=StrategyKind.NON_OVERLAPPED)
        if overlapped is not None and non_overlapped is not None:
            strategy_ordering[f"{row.budget}/{row.init.value}"] = overlapped < non_overlapped
        random = val_mean(row.budget, init=Init.RANDOM, strategy=row.strategy)
        pretrained = val_mean(row.budget, init=Init.DEC_PRETRAIN, strategy=row.strategy)
        if random is not None and pretrained is not None:
            pretrain_ordering[f"{row.budget}/{row.strategy}"] = pretrained <= random

    return GridReport(
        rows=rows, strategy_ordering=strategy_ordering, pretrain_ordering=pretrain_ordering,
        n_failed=sum(row.n_failed for row in rows),
    )


def render_grid(report: GridReport) -> str:
    table = Table(title="Validation / test perplexity (mean ± spread over seeds)")
    for header in ("Budget", "Strategy", "Init", "Seeds", "Val PPL", "Test PPL"):
        table.add_column(header)

    def cell_text(mean, spread):
        return "-" if mean is None else f"{mean:.4f} ± {spread:.4f}"

    for row in report.rows:
        table.add_row(
            str(row.budget), row.strategy, row.init.value,
            f"{row.n_ok}" + (f" ({row.n_failed} failed)" if row.n_failed else ""),
            cell_text(row.val_ppl_mean, row.val_ppl_spread),
            cell_text(row.test_ppl_mean, row.test_ppl_spread),
        )
    console = Console(width=160, color_system=None)
    with console.capture() as capture:
        console.print(table)
        for key, holds in report.strategy_ordering.items():
            console.print(f"overlapped < non-overlapped at {key}: {'yes' if holds else 'no'}")
        for key, holds in report.pretrain_ordering.items():
            console.print(f"dec-pretrain <= random at {key}: {'yes' if holds else 'no'}")
    return capture.get()


def read_results(out_dir: PathLike) -> List[CellResult]:
    """Results of every cell run so far under `out_dir`, in cell name order."""
    paths = sorted(Path(out_dir, CELLS_DIR).glob(f"*/{RESULT_FILE}"))
    return [CellResult.parse_obj(read_json(path)) for path in paths]


def run_experiment(config: ExperimentConfig, out_dir: Optional[PathLike] = None) -> GridReport:
    """
    Run every cell of the grid and summarize it. Cells run in `config.workers`
    processes; their results do not depend on it.
    """
    out_dir = Path(out_dir if out_dir is not None else config.out_dir)
    write_json(out_dir / "config.json", config.dict())
    prepare_shared(config, out_dir / SHARED_DIR)

    cells = grid_cells(config)
    log.info(f"Running {len(cells)} cells with {config.workers} worker(s)")
    results = map_ordered(
        partial(run_cell, config=config, out_dir=out_dir), cells,
        threads=config.workers, processes=True
    )
    report = summarize(results)
    write_json(out_dir / GRID_FILE, report.dict())
    (out_dir / GRID_TEXT_FILE).write_text(render_grid(report), encoding="utf-8")
    if report.n_failed:
        log.warning(f"[red]{report.n_failed} cell(s) failed[/], see their {RESULT_FILE}")
    for key, holds in report.strategy_ordering.items():
        log.info(f"overlapped < non-overlapped at {key}: {holds}")
    for key, holds in report.pretrain_ordering.items():
        log.info(f"dec-pretrain <= random at {key}: {holds}")
    return report
