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

log = logging.getLogger("unitac.app")

EXIT_SUCCESS = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3


class ProblemException(Exception):
    exit_code: int = EXIT_USAGE

    def __init__(self, title=None, detail=None, **ext):
        self.title: str = title
        self.detail = detail
        self.ext = ext
        super().__init__(self.message)

    @property
    def message(self) -> str:
        if self.detail:
            return f"{self.title}: {self.detail}"
        return str(self.title)

    def as_dict(self) -> dict:
        content = {
            "title": self.title,
            "detail": self.detail,
            "exit_code": self.exit_code,
        }
        if self.ext:
            content.update(self.ext)
        return content


class UsageProblem(ProblemException):
    exit_code = EXIT_USAGE

    def __init__(self, title="Usage error", detail=None, **ext):
        super().__init__(title, detail, **ext)


class ConfigurationProblem(ProblemException):
    exit_code = EXIT_USAGE

    def __init__(self, title="Configuration error", detail=None, **ext):
        super().__init__(title, detail, **ext)


class DataProblem(ProblemException):
    exit_code = EXIT_DATA

    def __init__(self, title="Data error", detail=None, **ext):
        super().__init__(title, detail, **ext)


class NumericProblem(ProblemException):
    exit_code = EXIT_NUMERIC

    def __init__(self, title="Numeric failure", detail=None, **ext):
        super().__init__(title, detail, **ext)


class ParseProblem(DataProblem):
    def __init__(self, path, line_number: int, detail=None):
        title = "File cannot be parsed"
        detail = f"{path}, line {line_number}: {detail}" if detail \
            else f"{path}, line {line_number}"
        super().__init__(title, detail, path=str(path), line_number=line_number)
        self.line_number = line_number


class BadMagicProblem(DataProblem):
    def __init__(self, path, expected: bytes, found: bytes):
        title = "Unrecognized file format"
        detail = f"The file {path} starts with {found!r} while {expected!r} is expected."
        super().__init__(title, detail, path=str(path))


class DimensionMismatchProblem(DataProblem):
    def __init__(self, what: str, expected: int, found: int):
        title = "Dimension mismatch"
        detail = f"{what} has dimension {found} while {expected} is expected."
        super().__init__(title, detail, expected=expected, found=found)


class EmptyInputProblem(DataProblem):
    def __init__(self, what: str):
        title = "Empty input"
        detail = f"{what} is empty."
        super().__init__(title, detail)


def handle_problem(exc: ProblemException) -> int:
    """Log a problem and return the process exit code associated to it."""
    log.error(f"[red]{exc.title}[/]")
    if exc.detail:
        log.error(f"{exc.detail}", extra={"highlight": False})
    return exc.exit_code
