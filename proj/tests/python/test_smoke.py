import json

import pytest

import albert

FIRST = "first_tits(matrix3(Q), lambda=2)"

SCENARIO = """
D = matrix3(Q)
J = first_tits(D, lambda=2)
run axioms(J, samples=2, seed=1)
run certify(homothety(J, 2), nu=8)
"""


def test_construction_basics():
    j = albert.construction(FIRST)
    assert j.dim == 27
    assert j.describe() == FIRST
    assert j.norm(j.unit()) == "1"
    assert j.sharp(j.unit()) == j.unit()
    assert j.trace(j.unit()) == "3"
    assert FIRST in repr(j)


def test_norm_of_first_summand_is_determinant():
    j = albert.construction(FIRST)
    x = ["0"] * 27
    x[0], x[4], x[8] = "1", "2", "1/2"
    assert j.norm(x) == "1"


def test_axiom_suite():
    checks = albert.construction(FIRST).axioms(samples=2, seed=4)
    assert checks and all(c["pass"] for c in checks)
    assert {"axiom-4", "axiom-5"} <= {c["id"] for c in checks}


def test_run_scenario_reports():
    r = albert.run_scenario(SCENARIO, command="verify-map")
    assert r["pass"]
    machine = json.loads(r["machine"])
    assert machine["summary"]["verdict"] == "pass"
    assert albert.run_scenario(SCENARIO)["pass"]


def test_certificate_round_trip():
    text = "D = matrix3(Q)\nJ = first_tits(D, lambda=2)\nrun cert_stab(J, a=diag(1,2,3), b=diag(6,1,1))\n"
    r = albert.run_scenario(text, command="build-cert")
    assert r["pass"] and len(r["certificates"]) == 1
    assert albert.check_certificate(r["certificates"][0])["pass"]


def test_errors_carry_code_and_exit_status():
    with pytest.raises(albert.AlbertError) as info:
        albert.construction("first_tits(matrix3(Q), lambda=0)")
    assert info.value.code == "zero-lambda"
    assert info.value.exit_status == 4
    with pytest.raises(albert.AlbertError) as info:
        albert.run_scenario("J = first_tits(E, lambda=2)\n")
    assert info.value.exit_status == 3
