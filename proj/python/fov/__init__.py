# Copyright (c) 2026, The fov authors
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
"""Bounded verifier for fail-operational arbitration logic."""

from __future__ import annotations

import fnmatch
import json
from typing import Optional

from ._fov import (
    ConfigError,
    MatrixError,
    ModelError,
    MutationError,
    NoStationaryState,
    print_model,
)
from ._fov import Project as _Project

__all__ = [
    "ConfigError",
    "MatrixError",
    "ModelError",
    "MutationError",
    "NoStationaryState",
    "Project",
    "print_model",
]


class Project:
    """A model with its failure matrix and requirement library."""

    def __init__(self, model: str, specs: str, matrix: Optional[str] = None,
                 horizon: Optional[int] = None, max_depth: Optional[int] = None):
        self._p = _Project(str(model), str(specs), None if matrix is None else str(matrix),
                           horizon, max_depth)

    @property
    def failures(self) -> list[str]:
        return self._p.failures

    @property
    def horizon(self) -> int:
        return self._p.horizon

    def cases(self, order: int = 1, pattern: Optional[str] = None) -> list[str]:
        ids = self._p.cases(order)
        return [i for i in ids if pattern is None or fnmatch.fnmatchcase(i, pattern)]

    def check(self, case: str, phasing: Optional[str] = None) -> dict:
        return json.loads(self._p.check_json(case, phasing))

    def sweep(self, order: int = 1, pattern: Optional[str] = None, workers: int = 1) -> dict:
        return json.loads(self._p.sweep_json(self.cases(order, pattern), workers))

    def trace(self, case: str, phasing: str = "late", t1: int = 0, t2: Optional[int] = None) -> dict:
        return json.loads(self._p.trace_json(case, phasing, t1, t2))

    def holds(self, formula: str, case: str, phasing: str = "late", t1: int = 0,
              t2: Optional[int] = None) -> bool:
        return self._p.holds(formula, case, phasing, t1, t2)

    def validate(self, workers: int = 1) -> dict:
        return json.loads(self._p.validate_json(workers))

    def qualify(self, suite: str, workers: int = 1) -> dict:
        return json.loads(self._p.qualify_json(str(suite), workers))
