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

from unitac.config import Settings


def test_default_settings(settings):
    assert settings.threads >= 1
    assert settings.eval_beam_size >= 1


def test_env_settings(monkeypatch, tmp_path):
    monkeypatch.setenv("UNITAC_THREADS", "3")
    monkeypatch.setenv("UNITAC_CHECK_FINITE", "true")
    env_file = tmp_path / "unitac-config.env"
    env_file.write_text("UNITAC_DEFAULT_SEED=9\nUNITAC_OUT_DIR=elsewhere\n")

    settings = Settings(_env_file=str(env_file))
    assert settings.threads == 3
    assert settings.check_finite is True
    assert settings.default_seed == 9
    assert settings.out_dir == "elsewhere"
