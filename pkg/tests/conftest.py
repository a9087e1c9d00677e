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

import os
from contextlib import contextmanager

import pytest

from unitac import config
from unitac.corpus.manifest import Manifest, Role
from unitac.corpus.sentences import sample_sentences
from unitac.synth.world import World, WorldParameters

os.environ['CONFIG_FILE'] = "./unitac-config.env"


def pytest_addoption(parser):
    parser.addoption(
        "--slow", action="store_true", default=False,
        help="also run the long training and acceptance tests"
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("--slow"):
        return
    skip_slow = pytest.mark.skip(reason="long training test, run with --slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


def get_settings():
    return config.Settings(
        _env_file=os.getenv("CONFIG_FILE")
    )


@pytest.fixture
def settings():
    return get_settings()


def tiny_world_parameters(**kwargs) -> WorldParameters:
    parameters = dict(
        seed=11, inventory_size=8, n_confusables=1, dim=4, separation=2.0,
        n_accents=3, n_unseen_accents=1, n_train_speakers=4, n_test_speakers=2,
        duration_range=(2, 3), inference_noise_scale=0.02,
    )
    parameters.update(kwargs)
    return WorldParameters(**parameters)


@pytest.fixture(scope="session")
def tiny_world():
    return World.create(tiny_world_parameters())


@pytest.fixture(scope="session")
def tiny_sentences(tiny_world):
    return sample_sentences(30, (3, 6), tiny_world.inventory, seed=5)


@pytest.fixture
def tiny_manifest(tiny_sentences):
    return Manifest.from_splits({
        Role.TRAIN: tiny_sentences[:20],
        Role.VAL: tiny_sentences[20:25],
        Role.TEST: tiny_sentences[25:],
    })


@contextmanager
def not_raises(expected_exc):
    try:
        yield
    except expected_exc as err:
        raise AssertionError(f"Did raise {err!r} when it should not!")
    except Exception as err:
        raise AssertionError(f"An unexpected exception {err!r} raised.")
