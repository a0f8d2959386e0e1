# Copyright 2026 The qdouble Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Quantum double models for finite abelian groups on small lattices."""

import json as _json

from ._core import (
    DimensionCapError,
    Group,
    Region,
    braid_table,
    check_ids,
    cli,
    ground_dim,
    run_check,
    sector_dims,
    spectrum,
)

__all__ = [
    "DimensionCapError",
    "Group",
    "Region",
    "braid_table",
    "check_ids",
    "cli",
    "ground_dim",
    "run_check",
    "sector_dims",
    "spectrum",
    "verify",
]

__version__ = "0.1.0"


def verify(group, region="free:3x3", seed=7):
    """Runs the full check battery and returns the report as a dict."""
    from ._core import verify_json

    return _json.loads(verify_json(group, region, seed))
