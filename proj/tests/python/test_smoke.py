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

import json

import pytest

import qdouble


def test_group_parse():
    g = qdouble.Group.parse("z2xZ4")
    assert g.orders == [2, 4]
    assert g.size == 8
    assert g.exponent == 4
    with pytest.raises(ValueError):
        qdouble.Group.parse("Z0")


def test_phase_strings():
    g = qdouble.Group.parse("Z4")
    assert g.phase(1, 1) == "1/4"
    assert g.phase(2, 2) == "0"


def test_region_parse():
    r = qdouble.Region.parse("lambda:2")
    assert (r.width, r.height, r.num_edges) == (5, 5, 40)
    assert qdouble.Region.parse("torus:2x2").is_torus


def test_torus_spectrum():
    values = [v for v, _ in qdouble.spectrum("Z2", "torus:2x2", k=6)]
    assert values[:4] == pytest.approx([0.0] * 4, abs=1e-10)
    assert values[4:] == pytest.approx([2.0, 2.0], abs=1e-10)


def test_torus_ground_dim():
    assert qdouble.ground_dim("Z2", "torus:2x2") == 4


def test_dimension_cap():
    with pytest.raises(qdouble.DimensionCapError):
        qdouble.spectrum("Z2", "lambda:2")


def test_sector_dims_sum():
    rows, total = qdouble.sector_dims("Z2", "free:3x3")
    assert len(rows) == 4
    assert sum(d for _, _, d in rows) == total == 1280


def test_braid_z2():
    table = qdouble.braid_table("Z2")
    assert len(table) == 16
    for chi, c, xi, d, measured, predicted in table:
        assert measured == predicted
    assert (1, 0, 0, 1, "1/2", "1/2") in table


def test_run_check():
    r = qdouble.run_check("rel", "Z2", "free:3x3")
    assert r["pass"] and r["residual"] < 1e-12


def test_verify_report():
    rep = qdouble.verify("Z2", "free:3x3")
    assert rep["summary"]["failed"] == 0
    ids = [r["id"] for r in rep["results"]]
    assert ids == sorted(ids) == qdouble.check_ids()


def test_cli_exit_codes():
    assert qdouble.cli(["verify", "--group", "Z2", "--region", "lambda:2"])[0] == 3
    assert qdouble.cli(["verify", "--group", "Z0"])[0] == 2
    code, out, _ = qdouble.cli(["spectrum", "--group", "Z2", "--region", "torus:2x2", "-k", "2", "--json"])
    assert code == 0
    assert [p["eigenvalue"] for p in json.loads(out)["eigenpairs"]] == [0.0, 0.0]
