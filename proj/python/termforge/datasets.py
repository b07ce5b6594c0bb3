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

"""Readers for the dataset files the CLI emits."""

from __future__ import annotations

import os
from dataclasses import dataclass

from ._termforge import maze, tszx


@dataclass(frozen=True)
class FrjtExample:
    label: str
    tokens: str


@dataclass(frozen=True)
class MazeRecord:
    final: tuple[int, int]
    steps: list[tuple[str, str]]
    positions: list[tuple[int, int]]
    seed: int


def read_frjt(path: str | os.PathLike) -> list[FrjtExample]:
    """Reads ``label<TAB>tokens`` lines."""
    out = []
    with open(path, encoding="utf-8") as f:
        for n, line in enumerate(f, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            label, sep, tokens = line.partition("\t")
            if not sep or label not in ("A", "B"):
                raise ValueError(f"{path}:{n}: malformed record")
            out.append(FrjtExample(label, tokens))
    return out


def _xy(text: str, sep: str) -> tuple[int, int]:
    x, y = text.split(sep)
    return int(x), int(y)


def read_maze(path: str | os.PathLike) -> list[MazeRecord]:
    """Reads ``x y<TAB>steps<TAB>positions<TAB>seed`` lines."""
    out = []
    with open(path, encoding="utf-8") as f:
        for n, line in enumerate(f, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 4:
                raise ValueError(f"{path}:{n}: expected 4 fields")
            positions = [_xy(p, ",") for p in fields[2].split()]
            out.append(MazeRecord(_xy(fields[0], " "), maze.parse_steps(fields[1]), positions, int(fields[3])))
    return out


def read_tszx(path: str | os.PathLike) -> dict:
    """Decodes a stream file into numpy arrays (see ``tszx.decode``)."""
    with open(path, "rb") as f:
        return tszx.decode(f.read())
