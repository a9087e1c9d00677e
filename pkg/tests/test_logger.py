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

from unitac.logger import StdoutFormatter, setup_logging, strip_markup


def test_strip_markup():
    assert strip_markup("Wrote [green]run/x.bin[/] (3 units)") == "Wrote run/x.bin (3 units)"
    assert strip_markup("[red]Data problem[/]") == "Data problem"
    assert strip_markup("list [1, 2]") == "list [1, 2]"


def test_stdout_formatter():
    formatter = StdoutFormatter("[%(levelname)s][%(name)s] %(message)s")
    record = logging.LogRecord(
        "unitac.app", logging.INFO, __file__, 1, "loss [green]%s[/]", (0.5,), None
    )
    assert formatter.format(record) == "[INFO][unitac.app] loss 0.5"
    assert record.msg == "loss [green]%s[/]"
    assert record.args == (0.5,)


def test_setup_logging_fallback(tmp_path):
    missing = str(tmp_path / "missing.yml")
    assert setup_logging(missing) == missing
