import json

import pytest

from domino_helicity import cli
from domino_helicity.pipes import CurveSystem
from domino_helicity.region import make_box


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_enumerate(capsys, tmp_path):
    code, out, _ = run(capsys, "enumerate", "--builtin", "box-3-3-2", "--out", str(tmp_path / "t.json"))
    assert code == 0 and out.strip() == "229"
    data = json.loads((tmp_path / "t.json").read_text())
    assert len(data["tilings"]) == 229


def test_enumerate_region_file(capsys, tmp_path):
    f = tmp_path / "r.json"
    f.write_text(make_box(2, 2, 1).dumps())
    code, out, _ = run(capsys, "enumerate", "--region", str(f))
    assert code == 0 and out.strip() == "2"


def test_invariants_hex(capsys):
    code, out, _ = run(capsys, "invariants", "--builtin", "hex", "--tiling", "t1", "--base", "t0",
                       "--twist-bfs")
    assert code == 0
    assert "helicity: 18*phi^2 = 1/2" in out
    assert "twist (helicity): 1" in out and "twist (trits): 1" in out


def test_invariants_box332(capsys):
    code, out, _ = run(capsys, "invariants", "--builtin", "box-3-3-2")
    assert code == 0
    assert "helicity: -36*phi^2 = -1" in out and "twist (helicity): -1" in out
    assert "7 nontrivial" in out


def test_invariants_torus_skips_helicity(capsys):
    code, out, _ = run(capsys, "invariants", "--builtin", "torus-6", "--tiling", "x-bars")
    assert code == 0 and "not computed" in out


def test_moves(capsys):
    code, out, _ = run(capsys, "moves", "--builtin", "box-3-3-2", "--show", "2")
    assert code == 0
    assert "tilings: 229" in out and "positive trit edges: 8" in out
    assert "{-1: 1, 0: 227, 1: 1}" in out


def test_render(capsys):
    code, out, _ = run(capsys, "render", "--builtin", "box-4-4-2", "--tiling", "rigid")
    assert code == 0 and out.count("\n") > 4


def test_export_json_round_trip(capsys, tmp_path):
    f = tmp_path / "c.json"
    code, _, _ = run(capsys, "export-curves", "--builtin", "hex", "--six-pipe", "--out", str(f))
    assert code == 0
    sys_ = CurveSystem.loads(f.read_text())
    assert len(sys_.loops) == 3   # one per domino


def test_export_obj(capsys):
    code, out, _ = run(capsys, "export-curves", "--builtin", "box-2-2-1", "--format", "obj")
    assert code == 0
    v = [l for l in out.splitlines() if l.startswith("v ")]
    lines = [l for l in out.splitlines() if l.startswith("l ")]
    assert v and lines
    for l in lines:
        idx = l.split()[1:]
        assert idx[0] == idx[-1]


def test_unknown_tiling_is_usage_error(capsys):
    code, _, err = run(capsys, "render", "--builtin", "hex", "--tiling", "nope")
    assert code == cli.EXIT_USAGE and "unknown tiling" in err


def test_missing_region_file(capsys, tmp_path):
    code, _, _ = run(capsys, "enumerate", "--region", str(tmp_path / "missing.json"))
    assert code == cli.EXIT_USAGE


def test_cap_exit_code(capsys, monkeypatch):
    monkeypatch.setenv("DOMINO_HELICITY_CELL_CAP", "8")
    code, _, err = run(capsys, "enumerate", "--builtin", "box-3-3-2")
    assert code == cli.EXIT_CAP


def test_no_shell_exit_code(capsys):
    code, _, err = run(capsys, "export-curves", "--builtin", "cube-hole-13-5", "--tiling", "matching",
                       "--shell", "layered-auto")
    assert code == cli.EXIT_PIPES and "relative flux" in err


def test_no_stored_shell_is_usage_error(capsys):
    code, _, _ = run(capsys, "export-curves", "--builtin", "box-4-4-2", "--tiling", "rigid")
    assert code == cli.EXIT_USAGE


def test_bad_phi(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["invariants", "--builtin", "hex", "--phi", "-1"])
    assert exc.value.code == 2


def test_verify_paper_subset(capsys):
    code, out, _ = run(capsys, "verify-paper", "--only", "1", "11")
    assert code == 0 and out.count("[PASS]") == 2


def test_perturbed_framing_is_caught(capsys):
    code, out, _ = run(capsys, "verify-paper", "--only", "4", "11", "--perturb-framing")
    assert code == cli.EXIT_VERIFY and out.count("[FAIL]") == 2
