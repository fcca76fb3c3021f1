import json
import subprocess
import sys

import pytest

from hecke_descent import cli
from hecke_descent import descent as descent_mod


def run(*args):
    """Run the entry point in-process and capture bytes written to stdout."""
    return cli.main(list(args))


def test_run_json_fields(capsysbinary):
    assert run("run", "--scenario", "gsp4", "--ell", "2") == 0
    data = json.loads(capsysbinary.readouterr().out)
    assert list(data)[:8] == ["scenario", "ell", "precision", "classes", "naive_count",
                              "descent_count", "equal", "timings"]
    assert data["naive_count"] == 15 and data["descent_count"] == 10 and data["equal"] is False
    assert [c["deg"] for c in data["classes"]] == [9, 1]
    for c in data["classes"]:
        assert {"rep", "deg", "c", "e", "card_A", "card_B", "weight"} <= set(c)
    assert data["timings"] == {}


def test_reports_are_byte_identical(capsysbinary):
    outs = []
    for _ in range(2):
        assert run("run", "--scenario", "gu22", "--ell", "5") == 0
        outs.append(capsysbinary.readouterr().out)
    assert outs[0] == outs[1]


def test_text_format_carries_the_same_numbers(capsysbinary):
    assert run("run", "--scenario", "gsp4", "--ell", "3", "--format", "text") == 0
    text = capsysbinary.readouterr().out.decode()
    assert "40" in text and "17" in text and "16" in text


def test_out_file(tmp_path, capsysbinary):
    out = tmp_path / "r.json"
    assert run("run", "--scenario", "gsp4", "--ell", "2", "--out", str(out)) == 0
    assert capsysbinary.readouterr().out == b""
    assert json.loads(out.read_bytes())["naive_count"] == 15


def test_timings_flag(capsysbinary):
    assert run("run", "--scenario", "gsp4", "--ell", "2", "--timings") == 0
    assert "total_seconds" in json.loads(capsysbinary.readouterr().out)["timings"]


def test_finite_scenario(capsysbinary):
    assert run("run", "--scenario", "finite:S4/D4", "--sigma", "3") == 0
    data = json.loads(capsysbinary.readouterr().out)
    assert data["scenario"] == "finite:S4/D4" and data["ell"] is None


def test_finite_model_file(tmp_path, capsysbinary):
    model = {"name": "S3 over A3", "generators": [[1, 0, 2], [1, 2, 0]],
             "H": [[1, 2, 0]], "J": [[0, 1, 2]]}
    path = tmp_path / "m.json"
    path.write_text(json.dumps(model))
    assert run("run", "--scenario", f"finite:{path}", "--g", "[1, 0, 2]") == 0
    assert json.loads(capsysbinary.readouterr().out)["naive_count"] >= 1


@pytest.mark.parametrize("args", [
    ("run", "--scenario", "gsp4"),
    ("run", "--scenario", "gsp4", "--ell", "4"),
    ("run", "--scenario", "gu22", "--ell", "3"),
    ("run", "--scenario", "nowhere", "--ell", "2"),
    ("run", "--scenario", "gsp4", "--ell", "2", "--precision", "0"),
    ("run", "--scenario", "gsp4", "--ell", "2", "--precision", "9"),
    ("run", "--scenario", "gsp4", "--ell", "2", "--d", "3"),
    ("run", "--scenario", "gsp4", "--ell", "2", "--sigma", "[[1]]"),
    ("run", "--scenario", "finite:S3/A3", "--ell", "2"),
    ("run", "--scenario", "finite:nothing"),
    ("run", "--scenario", "finite:S3/A3", "--sigma", "99"),
    ("ric-axioms", "--scenario", "gsp4"),
    ("ric-axioms", "--scenario", "finite:nothing"),
    ("bogus",),
    (),
])
def test_usage_errors(args, capsys):
    try:
        code = run(*args)
    except SystemExit as exc:
        code = exc.code
    assert code == 64


def test_bad_thread_variable(monkeypatch, capsys):
    monkeypatch.setenv("HECKE_DESCENT_THREADS", "zero")
    assert run("schwartz") == 64
    monkeypatch.setenv("HECKE_DESCENT_THREADS", "0")
    assert run("schwartz") == 64


def test_instability_exit_code(monkeypatch, capsys):
    real = descent_mod._adelic_once
    count = {"n": 0}

    def drifting(*args, **kwargs):
        rep = real(*args, **kwargs)
        count["n"] += 1
        rep.naive_count += count["n"]
        return rep

    monkeypatch.setattr(descent_mod, "_adelic_once", drifting)
    assert run("run", "--scenario", "gsp4", "--ell", "2", "--max-precision", "5") == 2


def test_oracle_mismatch_exit_code(monkeypatch, capsys):
    def constant_seven(M, *rest):
        return tuple(7 for _ in range(M.G.order))

    monkeypatch.setattr(descent_mod, "hecke_apply", constant_seven)
    assert run("run", "--scenario", "finite:S3/A3", "--sigma", "1") == 3


def test_failed_check_exit_code(monkeypatch, capsys):
    from hecke_descent import selfcheck
    monkeypatch.setattr(selfcheck, "schwartz_suite",
                        lambda: [selfcheck.Check("schwartz", "forced", False)])
    assert run("schwartz") == 3


def test_schwartz_and_axioms_commands(capsysbinary):
    assert run("schwartz", "--format", "json") == 0
    rows = json.loads(capsysbinary.readouterr().out)
    assert rows and all(r["ok"] for r in rows)
    assert run("ric-axioms", "--scenario", "finite:S3/A3") == 0
    assert b"passed" in capsysbinary.readouterr().out


def test_console_script_selfcheck_with_threads():
    env_cmd = [sys.executable, "-m", "hecke_descent.cli", "selfcheck"]
    proc = subprocess.run(env_cmd, capture_output=True, timeout=600,
                          env={"HECKE_DESCENT_THREADS": "4", "PATH": "/usr/bin:/bin"})
    assert proc.returncode == 0, proc.stderr.decode()[-2000:]
    assert proc.stdout.decode().strip().splitlines()[-1].endswith("passed")
