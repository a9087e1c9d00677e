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
from .decode import DEFAULT_BEAM_SIZE, Hypothesis, beam_decode, decode_greedy
from .model import DEFAULT_MAX_DECODE_LEN, PCConfig, PCModel, Vocabulary
from .optim import Adam, LinearDecay, clip_grad_norm
from .pretrain import pretrain_decoder_lm, pretrain_encoder_masked, unit_lm_perplexity
from .scoring import ModelScorer, corpus_nll
from .train import TrainConfig, TrainResult, train
