import json

import pytest

from ncgraph.cli import EXIT_CAP, EXIT_FAILED, EXIT_OK, EXIT_PARSE, EXIT_UNSUPPORTED, main, strip_timing
from ncgraph.golden import GOLDEN, rows

DESK = {"alt:5", "alt:6", "alt:7", "alt:8", "alt:9", "sym:5", "sym:7", "pgl:2:7",
        "psl:2:4", "psl:2:5", "psl:2:7", "psl:2:8", "psl:2:9", "psl:2:11", "psl:2:13",
        "psl:3:3", "psl:3:4", "psl:4:2", "psu:3:3", "psu:3:4", "psu:4:2", "mathieu:11", "mathieu:12"}


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_diam_psl_2_11(capsys):
    code, out, _ = run(capsys, "diam", "--group", "psl:2:11", "--graph", "nc")
    report = json.loads(out)
    assert code == EXIT_OK and report["schema"] == 1
    assert report["result"]["diameter"] == 3


def test_diam_alt5_csv(capsys, tmp_path):
    path = tmp_path / "r.csv"
    code, _, _ = run(capsys, "diam", "--group", "alt:5", "--format", "csv", "--out", str(path))
    lines = path.read_text().splitlines()
    assert code == EXIT_OK
    assert lines[0].startswith("group,order,graph,diameter")
    assert lines[1].split(",")[3] == "2"


def test_output_is_deterministic_without_timing(capsys):
    args = ("diam", "--group", "alt:5", "--graph", "nongen", "--no-timing")
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert a == b
    assert "timings" not in a


def test_strip_timing_removes_nested_fields():
    assert strip_timing({"a": 1, "timings": {}, "rows": [{"seconds": 2, "b": 3}]}) == {"a": 1, "rows": [{"b": 3}]}


def test_dist(capsys):
    code, out, _ = run(capsys, "dist", "--group", "alt:5", "(0 1 2)", "(0 2 1)")
    res = json.loads(out)["result"]
    assert code == EXIT_OK and res["distance"] == 2 and len(res["path"]) == 3


def test_intersection_graph(capsys):
    code, out, _ = run(capsys, "diam", "--group", "alt:5", "--graph", "intersection")
    assert code == EXIT_OK and json.loads(out)["result"]["graph"] == "intersection"


def test_verify_binomial(capsys):
    code, out, err = run(capsys, "verify", "--suite", "binomial", "--q", "7")
    assert code == EXIT_OK and json.loads(out)["passed"]
    assert "PASS binomial(q=7)" in err


def test_verify_failure_exit_code(capsys):
    # the diagonal construction is scalar over GF(4), so q = 2 fails
    code, out, _ = run(capsys, "verify", "--suite", "diagonal-triple", "--q", "2")
    assert code == EXIT_FAILED and not json.loads(out)["passed"]


@pytest.mark.parametrize("argv,code", [
    (["diam", "--group", "psl:2:6"], EXIT_UNSUPPORTED),
    (["diam", "--group", "foo:1"], EXIT_UNSUPPORTED),
    (["diam", "--group", "psl"], EXIT_PARSE),
    (["diam", "--group", "alt:12"], EXIT_CAP),
    (["diam", "--group", "alt:6", "--max-vertices", "5"], EXIT_CAP),
    (["diam", "--bogus"], EXIT_PARSE),
    (["dist", "--group", "alt:5", "(0 1", "(0 1 2)"], EXIT_PARSE),
    (["verify", "--suite", "line-stabilizers", "--n", "2"], EXIT_PARSE),
])
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_golden_table_shape():
    desk = {r.group for r in GOLDEN if r.scale == "desk"}
    assert desk == DESK
    assert all(r.provenance for r in GOLDEN)
    assert not [r for r in rows() if r.scale == "long"]
    assert {r.group for r in rows(include_long=True) if r.scale == "long"} >= {"mathieu:22", "mathieu:23", "psl:4:3"}
    excluded = {r.group for r in GOLDEN if r.scale == "excluded"}
    assert excluded == {"baby-monster", "psu:7:2", "thompson", "monster"}
    psl34 = [r for r in GOLDEN if r.group == "psl:3:4" and r.relation == "eq"]
    assert psl34[0].expected == 2
