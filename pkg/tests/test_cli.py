import json

import pytest

from loghh.cli import SCHEMA_VERSION, main, run
from loghh.parallel import get_threads, set_threads
from loghh.problem import fixture_text


def _write(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(data if isinstance(data, str) else json.dumps(data), encoding="utf-8")
    return str(p)


def _strip_timings(rep):
    rep = json.loads(json.dumps(rep))
    rep.pop("timings", None)
    for t in rep.get("tasks", []):
        t.pop("seconds", None)
    return rep


def test_logpoint_report(tmp_path, capsys):
    src = _write(tmp_path, "logpoint.json", fixture_text("logpoint"))
    out = tmp_path / "report.json"
    assert main(["run", src, "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["schema_version"] == SCHEMA_VERSION
    assert rep["status"] == "ok" and rep["exit_code"] == 0
    hh = [t for t in rep["tasks"] if t["task"] == "hh"]
    for t in hh:
        assert [t["results"]["HH"][str(n)]["0"] for n in range(4)] == [1, 1, 0, 0]
    hkr = next(t for t in rep["tasks"] if t["task"] == "hkr")
    assert hkr["results"]["iso"] is True
    hc = next(t for t in rep["tasks"] if t["task"] == "hc")
    assert [hc["results"]["HC"][str(m)]["0"] for m in range(6)] == [1] * 6
    assert isinstance(rep["timings"]["total_seconds"], float)
    assert "status: ok" in capsys.readouterr().out


def test_stdout_report(tmp_path, capsys):
    src = _write(tmp_path, "p.json", fixture_text("kummer2_q"))
    assert main(["run", src]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["problem"] == "kummer2_q"


def test_input_errors(tmp_path, capsys):
    assert main(["run", str(tmp_path / "missing.json")]) == 1
    bad = _write(tmp_path, "bad.json", "{not json")
    assert main(["run", bad]) == 1
    data = json.loads(fixture_text("node"))
    data["total"]["ring"]["relations"] = ["x^^2"]
    src = _write(tmp_path, "caret.json", data)
    out = tmp_path / "r.json"
    assert main(["run", src, "--out", str(out)]) == 1
    rep = json.loads(out.read_text())
    assert rep["status"] == "input_error"
    assert rep["error_position"]["column"] == 3
    assert main(["run", src, "--budget", "max_spairs"]) == 1
    assert main(["run", src, "--budget", "max_spairs=x"]) == 1
    with pytest.raises(SystemExit) as ei:
        main(["run"])
    assert ei.value.code == 1


def test_invalid_chart_square_is_input_error():
    data = json.loads(fixture_text("node"))
    data["total"]["ring"]["relations"] = ["x*y - 1"]
    data.pop("grading")
    rep, code = run(json.dumps(data))
    assert code == 1
    assert any("chart square" in v for v in rep["violations"])


def test_budget_exit_code():
    rep, code = run(fixture_text("dual_numbers"), {"max_dim": 3})
    assert code == 2
    assert rep["status"] == "budget"
    assert any(t["status"] == "budget" for t in rep["tasks"])
    assert not any(t["status"] == "failed" for t in rep["tasks"])


def test_budget_during_validation():
    prob = {"total": {"monoid": {"ambient_rank": 0},
                      "ring": {"variables": ["x", "y"], "relations": ["x^3 - y^2", "x^2*y - x", "y^3"]},
                      "chart": []},
            "tasks": [{"task": "omega", "n": 1}]}
    rep, code = run(json.dumps(prob), {"max_spairs": 1})
    assert code == 2 and rep["status"] == "budget"


def test_unknown_budget_key():
    rep, code = run(fixture_text("point"), {"max_bananas": 1})
    assert code == 1


def test_failed_check_exit_code():
    data = json.loads(fixture_text("logpoint"))
    # generates the diagonal ideal but is not regular: the cross-check must object
    data["tasks"] = [{"task": "hh", "backend": "koszul", "N": 2, "regular_sequence": ["u0__1 - 1", "u0__1 - 1"],
                      "degree_box": [0, 0]}]
    rep, code = run(json.dumps(data))
    assert code == 3
    assert rep["tasks"][0]["status"] == "unverified"
    data["tasks"][0]["regular_sequence"] = ["u0__1^2 - 1"]
    rep, code = run(json.dumps(data))
    assert code == 3
    assert "NotGenerating" in rep["tasks"][0]["error"]


def test_oracle_flag():
    rep, code = run(fixture_text("kummer2_q"), oracle=True)
    assert code == 0
    orc = rep["tasks"][-1]
    assert orc["task"] == "oracle" and all(orc["checks"].values())
    rep, code = run(fixture_text("logpoint"), oracle=True)
    assert code == 3
    assert "NotFiniteDimensional" in rep["tasks"][-1]["error"]


def test_reports_are_deterministic():
    text = fixture_text("dual_numbers")
    a, _ = run(text)
    b, _ = run(text)
    assert _strip_timings(a) == _strip_timings(b)


def test_thread_count_does_not_change_tables():
    before = get_threads()
    try:
        out = []
        for n in (1, 4):
            set_threads(n)
            rep, code = run(fixture_text("node"))
            assert code == 0
            out.append(_strip_timings(rep))
        assert out[0] == out[1]
    finally:
        set_threads(before)


def test_tables_sorted():
    rep, _ = run(fixture_text("kummer2_f2"))
    hh = rep["tasks"][0]["results"]["HH"]
    assert list(hh) == sorted(hh, key=int)
