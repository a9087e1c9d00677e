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
from rich.console import Console

from unitac.commands.common import split_list
from unitac.commands.router import CommandRouter, argument
from unitac.experiment.config import load_experiment_config
from unitac.experiment.grid import read_results, render_grid, run_experiment, summarize

router = CommandRouter("experiment", help="Initialization x strategy comparison grid.")


@router.command(
    "run",
    argument('--budgets', help="Comma-separated pair budgets."),
    argument('--seeds', help="Comma-separated cell seeds."),
    argument('--workers', type=int, help="Cells run in parallel processes."),
    argument('--decode-test', action='store_true', help="Also beam-decode the test set of every cell."),
)
def run(args, context):
    """Run every cell of the grid described by the configuration file."""
    overrides = {
        "threads": context.threads,
        "workers": args.workers,
        "decode_test": args.decode_test or None,
        "budgets": [int(b) for b in split_list(args.budgets)] or None,
        "seeds": [int(s) for s in split_list(args.seeds)] or None,
    }
    config = load_experiment_config(context.config_path, overrides)
    report = run_experiment(config, context.out_dir)
    Console().out(render_grid(report))


@router.command("summarize")
def summarize_grid(args, context):
    """Summarize the cells already run under the output directory."""
    report = summarize(read_results(context.out_dir))
    Console().out(render_grid(report))
