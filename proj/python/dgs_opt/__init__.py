# Copyright (c) 2026 The dgs-opt Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Gauss-Hermite directional Gaussian smoothing for noisy black-box minimization."""

from ._core import (
    BandlimitedNoise,
    ConfigError,
    EvaluationError,
    GHRule,
    InvalidArgument,
    IoError,
    build_gh_rule,
    closed_form_smoothed_sine_derivative,
    dgs_gradient,
    diminishing_noise,
    directional_derivative,
    gs_gradient_mc,
    periodic_noise,
    random_orthonormal_basis,
    run_config,
    theory,
)

__all__ = [
    "BandlimitedNoise",
    "ConfigError",
    "EvaluationError",
    "GHRule",
    "InvalidArgument",
    "IoError",
    "build_gh_rule",
    "closed_form_smoothed_sine_derivative",
    "dgs_gradient",
    "diminishing_noise",
    "directional_derivative",
    "gs_gradient_mc",
    "periodic_noise",
    "random_orthonormal_basis",
    "run_config",
    "theory",
]
