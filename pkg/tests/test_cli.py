import json
from pathlib import Path

import pytest

from tmotives import __version__
from tmotives.cli import EXIT_ERROR, EXIT_OK, EXIT_UNKNOWN, main, render_json

SPECS = Path(__file__).resolve().parent.parent / "specs"
COUNTER = str(SPECS / "counterexample.json")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_h1_counterexample(capsys):
    code, out, _ = run(capsys, "h1", "--spec", COUNTER)
    assert code == EXIT_OK
    assert out.strip().endswith("h1 = 0 [certified], h1_dual = 1 [certified]")
    assert "vertices: (1, -2) (8, -16) (16, -20)" in out


def test_h1_uniformizable(capsys):
    code, out, _ = run(capsys, "h1", "--spec", str(SPECS / "nilpotent-q3.json"), "--epsilon", "1")
    assert code == EXIT_OK
    assert "h1 = 4 = r: uniformizable" in out
    assert "pairing: rank in [4, 4]" in out


def test_json_report_round_trips_and_embeds_config(capsys, tmp_path):
    out_file = tmp_path / "report.json"
    code, out, _ = run(capsys, "h1", "--spec", COUNTER, "--json", "--out", str(out_file), "--depth", "16")
    assert code == EXIT_OK
    report = json.loads(out)
    assert json.loads(render_json(report)) == report
    assert json.loads(out_file.read_text()) == report
    assert report["version"] == __version__
    assert report["config"]["depth"] == 16 and report["config"]["precision"] == "inf"
    assert report["h1"]["interval"] == [0, 0] and report["h1_dual"]["interval"] == [1, 1]
    assert report["h1"]["s0_ords"] == ["2", "2", "2", "1/2"]


def test_malformed_spec_leaves_no_output(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"q": 2, "A": [[[[1, 5]]]]}')
    out_file = tmp_path / "out.json"
    code, _, err = run(capsys, "h1", "--spec", str(bad), "--out", str(out_file))
    assert code == EXIT_ERROR
    assert "error:" in err
    assert not out_file.exists()
    assert list(tmp_path.iterdir()) == [bad]


def test_bad_config_is_an_error(capsys):
    assert run(capsys, "h1", "--spec", COUNTER, "--depth", "3")[0] == EXIT_ERROR
    assert run(capsys, "h1", "--spec", COUNTER, "--precision", "-1")[0] == EXIT_ERROR
    assert run(capsys, "h1", "--spec", COUNTER, "--precision", "x")[0] == EXIT_ERROR
    assert run(capsys, "h1", "--spec", "/nonexistent.json")[0] == EXIT_ERROR
    assert run(capsys, "h1", "--spec", str(SPECS / "rank5.json"), "--epsilon", "1")[0] == EXIT_ERROR


def test_undecided_run_exits_2(capsys):
    code, out, _ = run(capsys, "h1", "--spec", COUNTER, "--depth", "4")
    assert code == EXIT_UNKNOWN
    assert "[unknown]" in out


def test_polygon_and_chain(capsys):
    code, out, _ = run(capsys, "polygon", "--spec", COUNTER)
    assert code == EXIT_OK
    assert "segment (1, -2)-(8, -16): root ord 2 x 7" in out
    code, out, _ = run(capsys, "chain", "--spec", COUNTER, "--index", "3", "--depth", "6", "--json")
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["chain"]["ords"] == ["1/2", "5/4", "13/8", "29/16", "61/32", "125/64", "253/128"]
    assert report["verdict"]["status"] == "NotSmall"
    assert run(capsys, "chain", "--spec", COUNTER, "--index", "9")[0] == EXIT_ERROR


def test_sweep_is_byte_identical(capsys, tmp_path):
    files = [tmp_path / "a.jsonl", tmp_path / "b.jsonl"]
    for f in files:
        code, _, _ = run(capsys, "sweep", "--seed", "3", "--count", "2", "--spec", COUNTER, "--out", str(f))
        assert code == EXIT_OK
    assert files[0].read_bytes() == files[1].read_bytes()
    lines = [json.loads(x) for x in files[0].read_text().splitlines()]
    assert lines[0]["version"] == __version__ and lines[0]["config"]["seed"] == 3
    assert lines[1]["quadruple"] == [4, 0, 1, 0]
    summary = lines[-1]["summary"]
    assert {"quadruple": [4, 0, 1, 0], "count": 1} in summary["quadruples"]
    assert summary["violations"] == 0 and summary["all_constraints_hold"]


def test_sweep_with_bad_extra_spec_writes_nothing(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    out_file = tmp_path / "s.jsonl"
    assert run(capsys, "sweep", "--count", "1", "--spec", str(bad), "--out", str(out_file))[0] == EXIT_ERROR
    assert not out_file.exists()


def test_reproduce_low_precision_exits_2(capsys):
    code, out, _ = run(capsys, "reproduce-paper", "--precision", "4")
    assert code == EXIT_UNKNOWN
    assert "FAIL" not in out
    assert "PrecisionExhausted" in out


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert __version__ in capsys.readouterr().out
