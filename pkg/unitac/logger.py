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
import logging.config
import os
import re
from logging import LogRecord
from typing import Optional

import yaml
from rich.console import ConsoleRenderable
from rich.logging import RichHandler
from rich.text import Text

from unitac.utils.types import parse_boolean

RICH_FORMAT_REGEX = re.compile(r"\[/?[a-z0-9 #_.]*\]")


class UnitacHandler(RichHandler):
    def render_message(self, record: LogRecord, message: str) -> "ConsoleRenderable":
        """Markup and highlighting can be turned off per record with `extra`."""
        use_markup = getattr(record, "markup", self.markup)
        use_highlighter = getattr(record, "highlight", self.highlighter)
        message_text = Text.from_markup(message) if use_markup else Text(message)
        if use_highlighter:
            message_text = self.highlighter(message_text)
        if self.KEYWORDS:
            message_text.highlight_words(self.KEYWORDS, "logging.keyword")
        return message_text


class StdoutFormatter(logging.Formatter):
    """Plain formatter removing rich markup tags from messages."""

    def format(self, record: LogRecord) -> str:
        msg, args = record.msg, record.args
        record.msg, record.args = strip_markup(record.getMessage()), None
        try:
            return super().format(record)
        finally:
            record.msg, record.args = msg, args


def strip_markup(message: str) -> str:
    return re.sub(RICH_FORMAT_REGEX, "", message)


def setup_logging(log_config: Optional[str] = None) -> str:
    """
    Configure logging from a YAML dict config.

    The file is taken from `log_config`, then `LOG_CONFIG_FILE`, then
    `logging-debug.yml` when `DEBUG` is set, `logging.yml` otherwise.
    Falls back to `basicConfig` when the file does not exist.

    Returns
    -------
    path
        The logging configuration path that was looked up.
    """
    if log_config is None:
        debug = bool(parse_boolean(os.getenv("DEBUG", "false")))
        log_config = "logging-debug.yml" if debug else "logging.yml"
        log_config = os.getenv('LOG_CONFIG_FILE', log_config)

    if os.path.isfile(log_config):
        with open(log_config, "r") as f:
            logging.config.dictConfig(yaml.safe_load(f))
    else:
        logging.basicConfig(level=logging.INFO)
    return log_config
