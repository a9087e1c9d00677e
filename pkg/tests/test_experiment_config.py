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

import pytest
import yaml

from tests.conftest import not_raises
from unitac.augment.strategy import StrategyKind
from unitac.exceptions import ConfigurationProblem, ParseProblem
from unitac.experiment.config import Init, load_experiment_config, read_config_file


def test_defaults():
    config = load_experiment_config()
    assert config.budgets == [6000]
    assert [s.kind for s in config.strategies] == [StrategyKind.OVERLAPPED, StrategyKind.NON_OVERLAPPED]
    assert config.inits == [Init.RANDOM, Init.DEC_PRETRAIN]
    assert config.seeds == [0, 1, 2]


def test_file_then_overrides(tmp_path):
    path = tmp_path / "experiment.yml"
    path.write_text(yaml.safe_dump({
        "budgets": [60, 120],
        "train": {"peak_lr": 0.01, "total_updates": 10},
        "inits": ["both"],
        "seeds": [4],
    }))
    config = load_experiment_config(path, {"train.peak_lr": 0.5, "seeds": None, "workers": 2})
    assert config.budgets == [60, 120]
    assert config.train.total_updates == 10
    assert config.train.peak_lr == 0.5
    assert config.seeds == [4]
    assert config.workers == 2
    assert config.inits == [Init.BOTH]
    assert Init.BOTH.pretrains_encoder and Init.BOTH.pretrains_decoder
    assert not Init.DEC_PRETRAIN.pretrains_encoder


def test_json_file(tmp_path):
    path = tmp_path / "experiment.json"
    path.write_text('{"eval_beam_size": 3}')
    assert load_experiment_config(path).eval_beam_size == 3


@pytest.mark.parametrize("document", [
    {"seeds": []},
    {"seeds": [1, 1]},
    {"budgets": []},
    {"inits": ["nope"]},
    {"train": {"peak_lr": -1}},
])
def test_invalid_config(tmp_path, document):
    path = tmp_path / "experiment.yml"
    path.write_text(yaml.safe_dump(document))
    with pytest.raises(ConfigurationProblem):
        load_experiment_config(path)


def test_config_file_problems(tmp_path):
    with pytest.raises(ConfigurationProblem):
        read_config_file(tmp_path / "missing.yml")

    path = tmp_path / "list.yml"
    path.write_text("- 1\n- 2\n")
    with pytest.raises(ConfigurationProblem):
        read_config_file(path)

    path = tmp_path / "broken.yml"
    path.write_text("a: 1\nb: [2\n")
    with pytest.raises(ParseProblem):
        read_config_file(path)

    path = tmp_path / "broken.json"
    path.write_text("{\n")
    with pytest.raises(ParseProblem):
        read_config_file(path)

    path = tmp_path / "empty.yml"
    path.write_text("")
    assert read_config_file(path) == {}


def test_valid_grids(tmp_path):
    path = tmp_path / "experiment.yml"
    for document in ({"inits": ["enc-pretrain", "both"]}, {"seeds": [3, 1]}, {"budgets": [1]}):
        path.write_text(yaml.safe_dump(document))
        with not_raises(ConfigurationProblem):
            load_experiment_config(path)
