from __future__ import annotations

import json

from surfstack.cli import main


def _lines(out):
    return [json.loads(line) for line in out.strip().splitlines()]


def test_verify_counts_passes(capsys):
    assert main(["verify", "--d", "2", "--suite", "counts"]) == 0
    lines = _lines(capsys.readouterr().out)
    assert lines and all(l["passed"] for l in lines)
    assert lines[0]["command"] == "verify"


def test_stdout_is_deterministic(capsys):
    main(["verify", "--d", "2", "--suite", "ccz", "--samples", "200", "--seed", "1"])
    first = capsys.readouterr().out
    main(["verify", "--d", "2", "--suite", "ccz", "--samples", "200", "--seed", "1"])
    assert capsys.readouterr().out == first


def test_invalid_distance_exits_2(capsys):
    assert main(["build", "--d", "1"]) == 2
    assert "error" in capsys.readouterr().err


def test_build_writes_files(tmp_path, capsys):
    out = tmp_path / "s"
    assert main(["build", "--d", "2", "--out", str(out)]) == 0
    names = {p.name for p in out.iterdir()}
    assert any(n.endswith(".json") for n in names) and any(n.endswith(".alist") for n in names)


def test_surgery_command(tmp_path, capsys):
    assert main(["surgery", "--d", "2", "--axis", "b", "--out", str(tmp_path / "m.json")]) == 0
    assert json.loads((tmp_path / "m.json").read_text())["axis"] == "b"
    assert main(["surgery", "--d", "3", "--axis", "2d3d"]) == 0
    assert "3 ancillas" in capsys.readouterr().err


def test_circuits_command(capsys):
    assert main(["circuits"]) == 0
    assert all(l["passed"] for l in _lines(capsys.readouterr().out))
