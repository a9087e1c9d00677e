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
from .corpus import CorpusStats, LengthSummary, build_parallel_corpus, corpus_stats
from .pairs import PairMeta, ParallelPair
from .storage import read_parallel_corpus, write_parallel_corpus
from .strategy import AugmentConfig, AugmentStrategy, StrategyKind
