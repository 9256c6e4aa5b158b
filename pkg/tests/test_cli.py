import json
import math

import pytest

from tetratrig import cli, tetra as tt

RIGHT = [str(math.pi / 2)] * 6
HYPER = ["1", "1.2", "1.4", "1.1", "1.3", "1.5"]


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out else None), out


def test_solve_all_right(capsys):
    code, body, _ = run(capsys, "solve", "--geometry", "spherical", *RIGHT)
    assert code == 0
    assert all(abs(a - math.pi / 2) < 1e-9 for a in body["angles"].values())
    assert body["generic"] is False
    assert set(body["psi"][0][0]) == {"re", "im"}


def test_solve_hyperbolic_matches_oracle(capsys):
    code, body, _ = run(capsys, "solve", *HYPER)
    assert code == 0
    want = tt.metric_angles_oracle(tt.MetricSpec.from_tuple("hyperbolic", [float(x) for x in HYPER]))
    for k, v in want.items():
        assert body["angles"][k] == pytest.approx(v, abs=1e-7)


def test_solve_json_input(capsys, tmp_path):
    path = tmp_path / "spec.json"
    path.write_text(json.dumps({"geometry": "hyperbolic", "lengths": [float(x) for x in HYPER]}))
    code, body, _ = run(capsys, "solve", "--json", str(path))
    assert code == 0 and len(body["angles"]) == 6


def test_solve_unrealizable(capsys):
    code, body, _ = run(capsys, "solve", "--geometry", "spherical", "3", "3", "3", "3", "3", "3")
    assert code == 2 and body is None


def test_solve_bad_json(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{")
    assert run(capsys, "solve", "--json", str(path))[0] == 2


def test_solve_output_is_deterministic(capsys):
    first = run(capsys, "solve", *HYPER)[2]
    second = run(capsys, "solve", *HYPER)[2]
    assert first == second


def test_verify_jobs_do_not_change_output(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert cli.main(["verify", "cross-ratio", "--trials", "4", "--out", str(a)]) == 0
    assert cli.main(["verify", "cross-ratio", "--trials", "4", "--jobs", "2", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    body = json.loads(a.read_text())
    assert body["passed"] and len(body["suites"][0]["trials"]) == 8


def test_verify_failure_exit_code(capsys):
    code, body, _ = run(capsys, "verify", "equivalence", "--trials", "2", "--tol", "1e-30")
    assert code == 1 and body["passed"] is False


def test_regge(capsys):
    code, body, _ = run(capsys, "regge", "1", "2", "3", "4", "5", "6")
    assert code == 0 and body["output"] == [1, 5, 4, 3, 2, 6]


def test_regge_check(capsys):
    code, body, _ = run(capsys, "regge", "--check", *HYPER)
    assert code == 0 and body["check"]["passed"]


def test_regge_check_unrealizable(capsys):
    assert run(capsys, "regge", "--check", "0.1", "5", "5", "0.1", "0.1", "0.1")[0] == 2


def test_lattice_queries(capsys):
    assert run(capsys, "lattice", "roots")[1]["count"] == 240
    assert run(capsys, "lattice", "roots", "--subsystem", "D6")[1]["count"] == 60
    assert run(capsys, "lattice", "planes")[1]["count"] == 14
    assert run(capsys, "lattice", "weyl-order")[1]["order"] == 23040
    body = run(capsys, "lattice", "reflect", "--root", "regge", "--vector", "e13")[1]
    assert body["image"] == [0, 0, 1, -1, -1, -1, 0, 0]
    body = run(capsys, "lattice", "project", "--class", "l+r-u14-u41-u24-u42")[1]
    assert body["image"] == [0, 0, 0, 0, 0, 0, 0, 2]


@pytest.mark.parametrize(
    "argv",
    [
        ["lattice", "reflect", "--root", "1,2", "--vector", "13"],
        ["lattice", "reflect", "--root", "0,0,0,0,0,0,0,4", "--vector", "13"],
        ["lattice", "project", "--class", "u13"],
        ["lattice", "project", "--class", "q7"],
    ],
)
def test_lattice_bad_input(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_surface_reports(capsys):
    code, body, _ = run(capsys, "surface", "identities")
    assert code == 0 and not body["failed"]
    code, body, _ = run(capsys, "surface", "marking")
    assert code == 0 and body["picard_gram"] == body["e8_gram"] and len(body["e8_gram"]) == 8
    code, body, _ = run(capsys, "surface", "2B")
    assert code == 0 and body["solutions"] == [["l-u13", "l-u31", "u24", "u42"]]
    code, body, _ = run(capsys, "surface", "pairing")
    assert body["signature"] == [1, 9]


def test_reconstruct(capsys):
    code, body, _ = run(capsys, "reconstruct", "1", "1.2", "1.4", "1.15", "1.3", "1.6")
    assert code == 0 and body["basis_residual"] < 1e-8
    assert run(capsys, "reconstruct", "--convention", "verbatim", "1", "1.2", "1.4", "1.15", "1.3", "1.6")[0] == 4
    # equal opposite-edge sums make the length function non-generic
    assert run(capsys, "reconstruct", *HYPER)[0] == 3


def test_encode():
    assert cli.encode(1 + 2j) == {"re": 1.0, "im": 2.0}
    assert cli.encode(cli.INF) == {"inf": True}
    assert cli.decode_number({"re": 1.0, "im": 2.0}) == 1 + 2j
    assert cli.decode_number({"inf": True}) is cli.INF


def test_tol_flag_leaves_global_tolerance_alone(capsys):
    from tetratrig.config import get_tol

    before = get_tol()
    run(capsys, "verify", "cross-ratio", "--trials", "1", "--tol", "1e-30")
    assert get_tol() == before
