# Copyright 2026 The termforge Authors
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

"""Bindings to the termforge C++ core.

Submodules mirror the library: ``term``, ``tszx``, ``frjt``, ``maze``,
``tok`` and ``scaling``. Byte payloads are ``bytes``; decoded frames are
numpy arrays.
"""

from ._termforge import (
    AssertionFailure,
    DataError,
    Error,
    InvalidArgument,
    derive_seed,
    frjt,
    maze,
    scaling,
    term,
    tok,
    tszx,
)
from .datasets import read_frjt, read_maze, read_tszx

__all__ = [
    "AssertionFailure",
    "DataError",
    "Error",
    "InvalidArgument",
    "derive_seed",
    "frjt",
    "maze",
    "read_frjt",
    "read_maze",
    "read_tszx",
    "scaling",
    "term",
    "tok",
    "tszx",
]
