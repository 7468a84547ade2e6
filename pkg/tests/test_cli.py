import json

import pytest

from cait.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_bundled(capsys):
    code, out, _ = run(capsys, "check", "two_writers")
    assert code == 0 and "well-formed" in out


def test_check_ill_formed_file(tmp_path, capsys):
    f = tmp_path / "bad.cait"
    f.write_text("location h\nactuator a domain {0, 1}\nnetwork\n  n[|> a!1] stat @ h\n")
    code, out, _ = run(capsys, "check", str(f))
    assert code == 1 and "UndefinedInterfaceEntry" in out


def test_parse_error_exit_code(tmp_path, capsys):
    f = tmp_path / "bad.cait"
    f.write_text("location h\nnetwork\n  n[|> nil$] stat @ h\n")
    code, _, err = run(capsys, "check", str(f))
    assert code == 2 and "3:" in err


def test_missing_file(capsys):
    code, _, err = run(capsys, "check", "no_such_model")
    assert code == 2 and "no such file" in err


def test_reduce_trace(capsys):
    code, out, _ = run(capsys, "reduce", "one_writer", "--steps", "4", "--trace")
    lines = out.splitlines()
    assert code == 0 and lines[0].startswith("start :: ")
    assert [l.split(" :: ")[0] for l in lines[1:]] == ["act(a)", "act(a)", "act(a)", "sigma"]


def test_reduce_interactive(capsys, monkeypatch):
    answers = iter(["0", "q"])
    monkeypatch.setattr("builtins.input", lambda prompt="": next(answers))
    code, out, _ = run(capsys, "reduce", "one_writer", "--steps", "3", "--interactive")
    assert code == 0 and "[0] act(a)" in out


def test_lts_summary_and_exports(capsys):
    code, out, _ = run(capsys, "lts", "one_writer", "--mode", "intensional", "--json")
    assert code == 0 and json.loads(out) == {"mode": "intensional", "states": 4, "transitions": 4}
    code, out, _ = run(capsys, "lts", "one_writer", "--mode", "intensional", "--export", "dot")
    assert out.startswith("digraph")


def test_lts_budget(capsys):
    code, _, err = run(capsys, "lts", "smart_home_proximity", "--budget", "10")
    assert code == 2 and "budget" in err


def test_bisim_verdicts(capsys):
    code, out, _ = run(capsys, "bisim", "two_writers", "one_writer")
    assert code == 1 and "distinct" in out and "act(a)" in out
    code, out, _ = run(capsys, "bisim", "delayed_send", "delayed_send", "--json")
    assert code == 0 and json.loads(out)["verdict"] == "bisimilar"


def test_expand(capsys):
    code, out, _ = run(capsys, "expand", "one_writer", "one_writer")
    assert code == 0 and "expands" in out


def test_props(capsys):
    code, out, _ = run(capsys, "props", "one_writer")
    assert code == 0 and "rd bound: 3" in out and "harmony: ok" in out
    code, out, _ = run(capsys, "props", "one_writer", "--bound", "--json")
    assert json.loads(out) == {"rd": 3}


def test_laws(capsys):
    code, out, _ = run(capsys, "laws")
    assert code == 0 and "FAIL" not in out.split("\n", 1)[1]


def test_smart_home_props_and_print(capsys):
    code, out, _ = run(capsys, "smart-home", "--check", "props")
    assert code == 0 and "runtime: ok" in out
    code, out, _ = run(capsys, "smart-home", "--print", "--variant", "gps")
    assert "CLM" not in out and "nLM[" in out


def test_smart_home_equiv_lights_only(capsys):
    code, out, _ = run(capsys, "smart-home", "--check", "equiv", "--json")
    data = json.loads(out)
    assert code == 0 and data["lights"]["stats"]["blocks"] == 17 and "full" not in data


def test_smart_home_bad_config(capsys):
    code, _, err = run(capsys, "smart-home", "--theta", "30")
    assert code == 2 and "threshold" in err


def test_usage_error():
    with pytest.raises(SystemExit) as e:
        main(["frobnicate"])
    assert e.value.code == 2
