import os
import pathlib

import pytest

import opbac

DATA = pathlib.Path(
    os.environ.get(
        "OPBAC_TEST_DATA_DIR",
        pathlib.Path(__file__).resolve().parents[1] / "data",
    )
)

TRIANGLE = """NAME : triangle
TYPE : OP
DIMENSION : 3
COST_LIMIT : 100
EDGE_WEIGHT_TYPE : EUC_2D
NODE_COORD_SECTION
1 0 0
2 0 10
3 10 0
NODE_SCORE_SECTION
1 0
2 5
3 7
EOF
"""


def test_parse_and_solve_triangle():
    inst = opbac.parse(TRIANGLE)
    assert inst.n == 3
    assert inst.d0 == 100
    rep = opbac.solve(inst, time_limit_s=60, seed=1)
    assert rep["status"] == "OPTIMAL"
    assert rep["LB"] == 12
    assert rep["UB"] == pytest.approx(12.0)
    assert sorted(rep["tour"]) == [1, 2, 3]


def test_load_solve_validate_att48():
    inst = opbac.load(str(DATA / "oplib" / "att48-gen1-50.oplib"))
    assert inst.n == 48
    rep = opbac.solve(inst, time_limit_s=120, seed=0)
    assert rep["status"] == "OPTIMAL"
    assert rep["LB"] == 31
    check = opbac.validate(inst, rep["tour"])
    assert check["verdict"] == "FEASIBLE"
    assert check["score"] == rep["LB"]
    assert check["length"] <= inst.d0


def test_validate_rejects_bad_tours():
    inst = opbac.parse(TRIANGLE)
    assert opbac.validate(inst, [])["verdict"] == "INVALID"
    assert opbac.validate(inst, [1, 2, 2])["verdict"] == "INVALID"
    assert opbac.validate(inst, [2, 3])["verdict"] == "INVALID"
    assert opbac.validate(inst, [1, 2, 99])["verdict"] == "INVALID"


def test_parse_error_is_python_exception():
    with pytest.raises(ValueError):
        opbac.parse("NOT AN INSTANCE")
