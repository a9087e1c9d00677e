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
import sys
from typing import Optional, Sequence

from unitac.exceptions import ProblemException, handle_problem
from unitac.logger import setup_logging


def main(argv: Optional[Sequence[str]] = None) -> int:
    setup_logging()
    from unitac.application import run
    try:
        return run(argv)
    except ProblemException as e:
        return handle_problem(e)


if __name__ == "__main__":
    sys.exit(main())
