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

from concurrent.futures import Executor, ProcessPoolExecutor, ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

T = TypeVar('T')
R = TypeVar('R')


def map_ordered(
    func: Callable[[T], R], items: Iterable[T], threads: Optional[int] = 1,
    processes: bool = False
) -> List[R]:
    """
    Apply `func` to every item and return results in input order.

    With `threads` <= 1 the work runs sequentially in the calling thread.
    Otherwise a thread pool (or a process pool if `processes` is set) is used.
    Callers must ensure `func` is a pure function of its item so that results
    do not depend on the degree of parallelism.
    """
    items = list(items)
    if threads is None or threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]

    executor_class = ProcessPoolExecutor if processes else ThreadPoolExecutor
    executor: Executor
    with executor_class(max_workers=min(threads, len(items))) as executor:
        return list(executor.map(func, items))
