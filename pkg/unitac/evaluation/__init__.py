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
from .metrics import (
    edit_distance, fluency_ratio, perplexity, phoneme_recovery, speaker_similarity,
    unigram_perplexity, unit_error_rate
)
from .report import EvalReport, MetricRow, run_eval, write_report
from .smoke import disfluent_accent, disfluent_smoke_set, native_smoke_set
