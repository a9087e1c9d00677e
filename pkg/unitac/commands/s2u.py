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

import numpy as np

from unitac.commands.common import CODEBOOK, OUT, read_feature_files, required
from unitac.commands.router import CommandRouter, argument
from unitac.files.models import read_codebook, write_codebook
from unitac.files.units import write_units
from unitac.s2u.codebook import DEFAULT_K
from unitac.s2u.kmeans import DEFAULT_MAX_ITERS, DEFAULT_TOL, fit_kmeans
from unitac.s2u.quantize import quantize, speech_to_units

log = logging.getLogger("unitac.cli")

router = CommandRouter("s2u", help="Speech-to-unit codebooks and quantization.")

FEATURES = argument('--features', help="Feature file or directory of feature files.")


@router.command(
    "fit",
    FEATURES,
    argument('--k', type=int, default=DEFAULT_K, help="Number of units."),
    argument('--max-iters', type=int, default=DEFAULT_MAX_ITERS),
    argument('--tol', type=float, default=DEFAULT_TOL),
    OUT,
)
def fit(args, context):
    """Fit a K-means codebook on the frames of native features."""
    required(args, 'features')
    frames = np.concatenate([f.frames for f in read_feature_files(args.features)])
    codebook = fit_kmeans(
        frames, args.k, max_iters=args.max_iters, tol=args.tol, seed=context.seed,
        threads=context.threads
    )
    path = context.path(args.out, "codebook.bin")
    write_codebook(path, codebook)
    log.info(
        f"Codebook of {codebook.n_units} units written to [green]{path}[/] "
        f"({codebook.fit_stats.iterations} iterations)"
    )


@router.command(
    "quantize",
    CODEBOOK, FEATURES,
    argument('--no-reduce', action='store_true', help="Keep one unit per frame."),
    OUT,
)
def quantize_features(args, context):
    """Quantize feature files into a unit file, one line per file in name order."""
    required(args, 'codebook', 'features')
    codebook = read_codebook(args.codebook)
    to_units = quantize if args.no_reduce else speech_to_units
    sequences = [to_units(f, codebook) for f in read_feature_files(args.features)]
    path = context.path(args.out, "units.txt")
    write_units(path, sequences)
    log.info(f"Wrote {len(sequences)} unit sequence(s) to [green]{path}[/]")
