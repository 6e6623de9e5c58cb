import json
import logging

import pytest

from app.cli import main
from app.services.config import get_settings
from app.services.database import list_bench_runs, session_factory


@pytest.fixture(autouse=True)
def detach_log_handler():
    yield
    root = logging.getLogger()
    for handler in [h for h in root.handlers if getattr(h, "_secinv", False)]:
        root.removeHandler(handler)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_secondary_a3_json(capsys):
    code, out, _ = run(capsys, "secondary", "--group", "A3", "--json")
    assert code == 0
    payload = json.loads(out)
    assert list(payload) == ["n", "group_order", "t", "epsilon", "numerator", "points",
                             "irreducibles", "secondaries"]
    assert payload["t"] == 2
    assert payload["epsilon"] == 1
    assert payload["numerator"] == [1, 0, 0, 1]
    assert payload["points"] == [[0, 1, 2], [0, 2, 1]]
    [irr] = payload["irreducibles"]
    assert irr["monomial"] == [2, 1, 0]
    assert irr["phi"] == [{"coeffs": ["0/1", "3/1"]}, {"coeffs": ["-3/1", "-3/1"]}]
    assert [s["degree"] for s in payload["secondaries"]] == [0, 3]


def test_json_is_the_default(capsys):
    _, default, _ = run(capsys, "secondary", "--group", "S3")
    _, explicit, _ = run(capsys, "secondary", "--group", "S3", "--json")
    assert default == explicit


def test_hilbert_s4(capsys):
    code, out, _ = run(capsys, "hilbert", "--group", "S4")
    assert code == 0
    payload = json.loads(out)
    assert payload["hilbert_prefix"] == [1, 1, 2, 3, 5, 6, 9]
    assert payload["secondary_numerator"] == [1]
    assert payload["t"] == 1
    assert payload["degree_bound"] == 6


def test_hilbert_degree_option(capsys):
    _, out, _ = run(capsys, "hilbert", "--group", "S3", "--degree", "4")
    assert json.loads(out)["hilbert_prefix"] == [1, 1, 2, 3, 4]


def test_secondary_trivial3(capsys):
    _, out, _ = run(capsys, "secondary", "--group", "trivial3")
    payload = json.loads(out)
    assert payload["t"] == 6
    assert len(payload["secondaries"]) == 6


@pytest.mark.parametrize("group", ["S1", "S2", "S3", "A3", "trivial3", "S4", "A4", "C4", "D4", "4: (1 2)(3 4), (1 3)(2 4)"])
def test_output_is_byte_identical(capsys, group):
    _, first, _ = run(capsys, "secondary", "--group", group)
    _, second, _ = run(capsys, "secondary", "--group", group)
    assert first == second


def test_group_file(capsys, tmp_path):
    path = tmp_path / "group.json"
    path.write_text(json.dumps({"degree": 3, "generators": [[[1, 2, 3]]]}))
    _, out, _ = run(capsys, "secondary", "--group-file", str(path))
    assert json.loads(out)["numerator"] == [1, 0, 0, 1]


def test_unknown_flag_exits_with_usage(capsys):
    with pytest.raises(SystemExit) as info:
        main(["secondary", "--group", "A3", "--bogus"])
    assert info.value.code == 2


def test_group_is_required(capsys):
    with pytest.raises(SystemExit) as info:
        main(["secondary"])
    assert info.value.code == 2


def test_help_lists_flags(capsys):
    with pytest.raises(SystemExit) as info:
        main(["secondary", "--help"])
    assert info.value.code == 0
    out = capsys.readouterr().out
    for flag in ("--group", "--group-file", "--json", "--text", "--exclude-partitions",
                 "--parallel", "--max-n-cap", "--verify"):
        assert flag in out


def test_bad_group_exits_2(capsys):
    code, out, err = run(capsys, "secondary", "--group", "Q3")
    assert code == 2
    assert out == ""
    assert "error: unknown group name 'Q3'" in err


def test_parse_error_exits_2(capsys):
    code, _, err = run(capsys, "points", "--group", "3: (1 4)")
    assert code == 2
    assert "(at position 6)" in err


def test_point_cap_exits_3(capsys):
    code, _, err = run(capsys, "points", "--group", "S4", "--max-n-cap", "3")
    assert code == 3
    assert "error:" in err


def test_points_text(capsys):
    code, out, _ = run(capsys, "points", "--group", "A3", "--text")
    assert code == 0
    assert out == "0 1 2\n0 2 1\n"


def test_canonical_monomials_s4(capsys):
    _, out, _ = run(capsys, "canonical-monomials", "--group", "S4")
    payload = json.loads(out)
    assert payload["C"] == 14
    assert payload["C_prime"] == 1
    assert payload["catalan"] == 14
    assert payload["counts_by_degree"] == [1, 1, 2, 3, 3, 3, 1]


def test_verify_command(capsys):
    code, out, _ = run(capsys, "verify", "--group", "D4")
    assert code == 0
    payload = json.loads(out)
    assert payload["ok"] is True
    assert [c["clause"] for c in payload["clauses"]] == ["a", "b", "c", "d", "e"]


def test_secondary_with_verify_text(capsys):
    code, out, err = run(capsys, "secondary", "--group", "A3", "--text", "--verify")
    assert code == 0
    assert "t = 2" in out
    assert "(1 + z^3)/((1-z)(1-z^2)(1-z^3))" in out
    assert "verification passed" in err


def test_bench_csv_and_store(capsys, temp_database):
    code, out, _ = run(capsys, "bench", "--max-n", "3", "--max-t", "2", "--store")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "name,n,order,t,seconds,peak_candidates"
    assert [line.split(",")[0] for line in lines[1:]] == ["S1", "S2", "A2", "S3", "A3"]
    db = session_factory()()
    try:
        stored = list_bench_runs(db)
    finally:
        db.close()
    assert sorted(row.name for row in stored) == ["A2", "A3", "S1", "S2", "S3"]


def test_bench_from_list(capsys, tmp_path):
    path = tmp_path / "groups.txt"
    path.write_text("C4\n# comment\nA3\n")
    _, out, _ = run(capsys, "bench", "--list", str(path))
    rows = [line.split(",") for line in out.splitlines()[1:]]
    assert [(r[0], r[3]) for r in rows] == [("C4", "6"), ("A3", "2")]


@pytest.mark.parametrize("command", ["hilbert", "canonical-monomials", "bench"])
def test_point_cap_only_where_points_are_built(capsys, command):
    argv = [command] + (["--group", "A3"] if command != "bench" else []) + ["--max-n-cap", "3"]
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2
    assert "--max-n-cap" in capsys.readouterr().err


def test_bad_environment_integer_exits_2(capsys, monkeypatch):
    monkeypatch.setenv("SECINV_CLOSURE_CAP", "lots")
    get_settings.cache_clear()
    try:
        code, out, err = run(capsys, "hilbert", "--group", "A3")
    finally:
        monkeypatch.delenv("SECINV_CLOSURE_CAP")
        get_settings.cache_clear()
    assert code == 2
    assert out == ""
    assert "SECINV_CLOSURE_CAP must be an integer" in err
