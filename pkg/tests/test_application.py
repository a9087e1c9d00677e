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

import importlib
import re
from pathlib import Path

import orjson
import pytest
import yaml

from tests.conftest import tiny_world_parameters
from unitac.augment.storage import read_parallel_corpus
from unitac.corpus.manifest import Role, read_manifest
from unitac.corpus.sentences import sample_sentences
from unitac.exceptions import EXIT_DATA, EXIT_SUCCESS, EXIT_USAGE
from unitac.files.features import read_features
from unitac.files.models import read_codebook
from unitac.files.records import read_records
from unitac.files.units import read_units
from unitac.main import main
from unitac.synth.world import read_world


def write_yaml(path, document):
    path.write_text(yaml.safe_dump(document))
    return str(path)


def test_console_entry_point():
    setup = (Path(__file__).parents[1] / "setup.py").read_text()
    module, function = re.search(r"'unitac=([\w.]+):(\w+)'", setup).groups()
    assert getattr(importlib.import_module(module), function) is main


def test_flags_over_config_over_defaults(tmp_path):
    config = write_yaml(tmp_path / "config.yml", {
        "seed": 3,
        "corpus": {"sample": {"n": 7, "len_max": 4}},
    })
    out = tmp_path / "sentences.jsonl"
    assert main(["--config", config, "corpus", "sample", "--len-min", "2", "--out", str(out)]) \
        == EXIT_SUCCESS
    assert read_manifest(out).sentences() == sample_sentences(7, (2, 4), seed=3)

    assert main([
        "--config", config, "corpus", "sample", "--n", "2", "--len-min", "2",
        "--seed", "5", "--out", str(out)
    ]) == EXIT_SUCCESS
    assert read_manifest(out).sentences() == sample_sentences(2, (2, 4), seed=5)


@pytest.mark.parametrize("argv", [
    ["nope"],
    ["corpus"],
    ["corpus", "sample", "--n", "many"],
    ["corpus", "split"],
    ["--config", "missing.yml", "corpus", "sample"],
    ["corpus", "sample", "--n", "0"],
])
def test_usage_errors(tmp_path, argv):
    assert main(argv) == EXIT_USAGE


def test_invalid_ratio(tmp_path):
    manifest = tmp_path / "sentences.jsonl"
    assert main(["corpus", "sample", "--n", "4", "--out", str(manifest)]) == EXIT_SUCCESS
    assert main(["corpus", "split", "--manifest", str(manifest), "--ratio", "x"]) == EXIT_USAGE


def test_data_errors(tmp_path):
    assert main(["corpus", "split", "--manifest", str(tmp_path / "missing.jsonl")]) == EXIT_DATA
    broken = tmp_path / "broken.jsonl"
    broken.write_text("{\n")
    assert main(["corpus", "split", "--manifest", str(broken)]) == EXIT_DATA


def test_split_with_test_sentences(tmp_path):
    sentences = tmp_path / "sentences.jsonl"
    manifest = tmp_path / "manifest.jsonl"
    assert main(["corpus", "sample", "--n", "16", "--out", str(sentences)]) == EXIT_SUCCESS
    assert main([
        "corpus", "split", "--manifest", str(sentences), "--ratio", "5:1", "--n-test", "4",
        "--out", str(manifest)
    ]) == EXIT_SUCCESS
    split = read_manifest(manifest)
    assert [len(split.sentences(r)) for r in (Role.TRAIN, Role.VAL, Role.TEST)] == [10, 2, 4]
    assert split.sentences(Role.TEST) == read_manifest(sentences).sentences()[12:]

    assert main([
        "corpus", "split", "--manifest", str(sentences), "--n-test", "16", "--out", str(manifest)
    ]) == EXIT_USAGE


MODEL_FLAGS = [
    "--model-dim", "16", "--heads", "2", "--encoder-layers", "1", "--decoder-layers", "1",
    "--ff-dim", "32",
]


def test_pipeline(tmp_path):
    config = tmp_path / "config.json"
    config.write_bytes(orjson.dumps({"world": tiny_world_parameters().dict()}))
    files = {name: str(tmp_path / name) for name in (
        "world.json", "sentences.jsonl", "manifest.jsonl", "native", "codebook.bin",
        "units.txt", "decoder.bin", "corpus", "val", "test", "dec.ckpt", "pc.ckpt",
        "train.jsonl", "decoded.txt", "eval.txt", "smoke.txt", "converted.feat",
    )}
    common = ["--world", files["world.json"], "--manifest", files["manifest.jsonl"],
              "--codebook", files["codebook.bin"]]

    steps = [
        ["--config", str(config), "--seed", "4", "synth", "world", "--out", files["world.json"]],
        ["corpus", "sample", "--world", files["world.json"], "--n", "16", "--len-min", "3",
         "--len-max", "5", "--out", files["sentences.jsonl"]],
        ["corpus", "split", "--manifest", files["sentences.jsonl"], "--ratio", "5:1",
         "--n-test", "4", "--out", files["manifest.jsonl"]],
        ["synth", "native", "--world", files["world.json"], "--manifest", files["manifest.jsonl"],
         "--role", "train", "--out", files["native"]],
        ["s2u", "fit", "--features", files["native"], "--k", "6", "--out", files["codebook.bin"]],
        ["s2u", "quantize", "--codebook", files["codebook.bin"], "--features", files["native"],
         "--out", files["units.txt"]],
        ["u2s", "fit", "--codebook", files["codebook.bin"], "--features", files["native"],
         "--out", files["decoder.bin"]],
        ["augment", "build", *common, "--strategy", "overlapped", "--accents-per-sentence", "3",
         "--budget", "6", "--out", files["corpus"]],
        ["augment", "build", *common, "--role", "val", "--strategy", "non-overlapped",
         "--budget", "2", "--out", files["val"]],
        ["augment", "build", *common, "--role", "test", "--strategy", "non-overlapped",
         "--budget", "4", "--speakers", "test", "--out", files["test"]],
        ["pc", "pretrain-dec", *common, "--n-sentences", "10", *MODEL_FLAGS,
         "--updates", "3", "--micro-batch", "4", "--out", files["dec.ckpt"]],
        ["pc", "train", "--corpus", files["corpus"], "--val", files["val"],
         "--codebook", files["codebook.bin"], "--init-from", files["dec.ckpt"], *MODEL_FLAGS,
         "--updates", "3", "--micro-batch", "3", "--eval-interval", "2",
         "--log", files["train.jsonl"], "--out", files["pc.ckpt"]],
        ["pc", "decode", "--model", files["pc.ckpt"], "--features", f"{files['test']}/features",
         "--beam", "2", "--out", files["decoded.txt"]],
        ["eval", "run", "--model", files["pc.ckpt"], "--codebook", files["codebook.bin"],
         "--decoder", files["decoder.bin"], "--test-manifest", files["test"], "--beam", "2",
         "--report", files["eval.txt"]],
        ["eval", "smoke", "--model", files["pc.ckpt"], *common, "--decoder", files["decoder.bin"],
         "--kind", "disfluent", "--n", "2", "--beam", "1", "--report", files["smoke.txt"]],
    ]
    for argv in steps:
        assert main(argv) == EXIT_SUCCESS, argv

    assert read_world(files["world.json"]).parameters.seed == 4
    assert read_world(files["world.json"]).inventory.size == 8
    assert len(list((tmp_path / "native").glob("*.feat"))) == 10
    assert read_codebook(files["codebook.bin"]).n_units == 6
    assert len(read_units(files["units.txt"], reduced=True, n_units=6)) == 10
    assert len(read_parallel_corpus(files["corpus"], n_units=6)) == 6
    assert len(read_records(files["train.jsonl"])) == 3
    assert len(read_units(files["decoded.txt"], reduced=True, n_units=6)) == 4
    assert read_records(tmp_path / "eval.jsonl")[0]["n_pairs"] == 4
    assert read_records(tmp_path / "smoke.jsonl")[0]["n_pairs"] == 2

    source = sorted((tmp_path / "test" / "features").glob("*.feat"))[0]
    assert main([
        "convert", "--input", str(source), "--model", files["pc.ckpt"],
        "--codebook", files["codebook.bin"], "--decoder", files["decoder.bin"],
        "--beam", "2", "--out", files["converted.feat"],
    ]) == EXIT_SUCCESS
    assert (tmp_path / "converted.units").is_file()
    assert read_features(files["converted.feat"]).dim == 4

    # A checkpoint is not a codebook.
    assert main([
        "s2u", "quantize", "--codebook", files["pc.ckpt"], "--features", files["native"],
        "--out", files["units.txt"]
    ]) == EXIT_DATA
