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
from .attention import AttentionConfig, MultiHeadAttention, scaled_dot_product_attention
from .functional import cross_entropy, gelu, layer_norm, log_softmax, softmax, softmax_cross_entropy
from .gradcheck import grad_check
from .modules import Embedding, FeedForward, LayerNorm, Linear, Module, Parameter
from .tensor import Tensor, check_finite, no_grad, set_check_finite, tensor
from .transformer import DecoderLayer, EncoderLayer, sinusoidal_positions
