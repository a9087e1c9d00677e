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

import math

import pytest

from tests.conftest import tiny_world_parameters
from unitac.augment.strategy import AugmentStrategy, StrategyKind
from unitac.exceptions import EXIT_NUMERIC
from unitac.experiment import grid
from unitac.experiment.config import ExperimentConfig, Init
from unitac.experiment.grid import (
    CELLS_DIR, GRID_TEXT_FILE, RESULT_FILE, STATUS_FAILED, STATUS_OK, Cell, CellResult,
    grid_cells, read_results, render_grid, run_experiment, summarize
)

OVERLAPPED = AugmentStrategy(kind=StrategyKind.OVERLAPPED, accents_per_sentence=3)
NON_OVERLAPPED = AugmentStrategy(kind=StrategyKind.NON_OVERLAPPED)


def tiny_experiment(**kwargs) -> ExperimentConfig:
    document = dict(
        world=tiny_world_parameters().dict(),
        data=dict(n_sentences=30, len_range=(3, 5), val_ratio=(5, 1), n_test_sentences=4),
        units=dict(n_units=6, max_iters=20, n_fit_sentences=10),
        budgets=[6],
        strategies=[OVERLAPPED.dict(), NON_OVERLAPPED.dict()],
        inits=["random", "dec-pretrain"],
        model=dict(model_dim=16, heads=2, encoder_layers=1, decoder_layers=1, ff_dim=32, rel_window=2),
        train=dict(total_updates=4, micro_batch=3, eval_interval=2),
        pretrain=dict(total_updates=3, micro_batch=4),
        seeds=[0],
    )
    document.update(kwargs)
    return ExperimentConfig.parse_obj(document)


def result(budget, strategy, init, seed, val_ppl, status=STATUS_OK):
    return CellResult(
        cell=Cell(budget=budget, strategy=strategy, init=init, seed=seed), status=status,
        val_ppl=val_ppl if status == STATUS_OK else None,
        test_ppl=val_ppl if status == STATUS_OK else None,
    )


def test_grid_cells():
    cells = grid_cells(tiny_experiment(seeds=[0, 1], budgets=[6, 12]))
    assert len(cells) == 2 * 2 * 2 * 2
    assert len({c.name for c in cells}) == len(cells)
    assert Cell(budget=6, strategy=OVERLAPPED, init=Init.RANDOM, seed=1).name \
        == "b6-overlapped3-random-seed1"


def test_summarize():
    results = [
        result(6, OVERLAPPED, Init.RANDOM, 0, 4.0),
        result(6, OVERLAPPED, Init.RANDOM, 1, 6.0),
        result(6, NON_OVERLAPPED, Init.RANDOM, 0, 7.0),
        result(6, NON_OVERLAPPED, Init.RANDOM, 1, 0.0, status=STATUS_FAILED),
        result(6, OVERLAPPED, Init.DEC_PRETRAIN, 0, 3.0),
        result(6, NON_OVERLAPPED, Init.DEC_PRETRAIN, 0, 2.0),
    ]
    report = summarize(results)
    assert report.n_failed == 1
    rows = {(r.strategy, r.init): r for r in report.rows}
    row = rows[("overlapped(3)", Init.RANDOM)]
    assert row.n_ok == 2
    assert row.val_ppl_mean == pytest.approx(5.0)
    assert row.val_ppl_spread == pytest.approx(1.0)
    assert rows[("non-overlapped", Init.RANDOM)].n_failed == 1

    assert report.strategy_ordering == {"6/random": True, "6/dec-pretrain": False}
    assert report.pretrain_ordering == {"6/overlapped(3)": True, "6/non-overlapped": True}

    text = render_grid(report)
    assert "1 failed" in text
    assert "overlapped < non-overlapped at 6/random: yes" in text


def test_tiny_experiment(tmp_path):
    config = tiny_experiment()
    report = run_experiment(config, tmp_path)

    assert report.n_failed == 0
    assert len(report.rows) == 4
    for row in report.rows:
        assert row.n_ok == 1
        assert math.isfinite(row.val_ppl_mean) and row.val_ppl_mean >= 1.0
    assert set(report.strategy_ordering) == {"6/random", "6/dec-pretrain"}
    assert (tmp_path / GRID_TEXT_FILE).is_file()

    results = read_results(tmp_path)
    assert len(results) == 4
    assert all(r.ok and r.train_hours > 0 for r in results)
    cell = results[0].cell
    assert (tmp_path / CELLS_DIR / cell.name / "train.jsonl").is_file()

    # Done cells are read back, not run again.
    result_path = tmp_path / CELLS_DIR / cell.name / RESULT_FILE
    stamp = result_path.stat().st_mtime_ns
    assert run_experiment(config, tmp_path) == report
    assert result_path.stat().st_mtime_ns == stamp


def test_diverging_cells_are_recorded(tmp_path):
    config = tiny_experiment(
        train=dict(total_updates=6, micro_batch=3, eval_interval=2, peak_lr=1e4, clip_norm=1e6)
    )
    report = run_experiment(config, tmp_path)

    assert report.n_failed >= 1
    assert sum(row.n_ok + row.n_failed for row in report.rows) == 4
    results = read_results(tmp_path)
    assert len(results) == 4
    for r in results:
        if not r.ok:
            assert r.val_ppl is None
            assert r.diagnostic["exit_code"] == EXIT_NUMERIC


def test_crashing_cell_does_not_stop_the_grid(tmp_path, monkeypatch):
    train_cell = grid._train_cell

    def crash_random(cell, *args):
        if cell.init == Init.RANDOM:
            raise RuntimeError("boom")
        return train_cell(cell, *args)

    monkeypatch.setattr(grid, "_train_cell", crash_random)
    report = run_experiment(tiny_experiment(), tmp_path)

    assert report.n_failed == 2
    results = {r.cell.name: r for r in read_results(tmp_path)}
    assert len(results) == 4
    for r in results.values():
        if r.cell.init == Init.RANDOM:
            assert r.status == STATUS_FAILED
            assert r.diagnostic == {"title": "RuntimeError", "detail": "boom"}
        else:
            assert r.ok


@pytest.mark.slow
def test_desk_scale_orderings(tmp_path):
    # budget 6000, three seeds, overlapped(6) and non-overlapped, random and dec-pretrain
    report = run_experiment(ExperimentConfig(workers=4), tmp_path)

    assert report.n_failed == 0
    assert report.strategy_ordering == {"6000/random": True, "6000/dec-pretrain": True}
    assert report.pretrain_ordering == {
        "6000/overlapped(6)": True, "6000/non-overlapped": True
    }
