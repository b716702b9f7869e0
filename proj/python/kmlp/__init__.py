# Copyright 2026 The kmlp Authors
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
"""LP relaxation bounds and certificates for K-means."""

from kmlp._kmlp import (
    InputError,
    certify,
    generate,
    kmeans_bruteforce,
    kmeans_cost,
    recovery_threshold,
    solve,
    solve_full_lp,
)

__all__ = [
    "InputError",
    "certify",
    "generate",
    "kmeans_bruteforce",
    "kmeans_cost",
    "recovery_threshold",
    "solve",
    "solve_full_lp",
]
