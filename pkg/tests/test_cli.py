import json

import pytest

from mslab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_models_lists_every_model(capsys):
    code, out, _ = run(capsys, "models")
    assert code == 0
    names = [line.split()[0] for line in out.splitlines()]
    assert {"psi0", "xi0", "psi1", "F1_torus", "north_south"} <= set(names)


def test_analyze_psi0(capsys, tmp_path):
    path = tmp_path / "psi0.json"
    code, out, _ = run(capsys, "analyze", "psi0", "--emit", str(path))
    assert code == 0
    assert "points: 2 sinks, 2 saddles, 2 sources" in out
    assert "Smale order: empty (gradient-like)" in out
    assert path.exists()


def test_unknown_model_exits_2(capsys):
    code, _, err = run(capsys, "analyze", "nosuchmodel")
    assert code == 2
    assert "unknown model" in err


def test_verify_fg(capsys, tmp_path):
    cert = tmp_path / "fg.json"
    code, out, _ = run(capsys, "verify", "--family", "fg", "--range", "0..3", "--certificate", str(cert))
    assert code == 0
    assert out.count("[PASS]") == 4 + 3
    assert "positive control psi1: connected: yes (Σ=∅, Klein bottle)  [PASS]" in out
    assert "positive control F1: connected: yes (Σ=∅, torus)  [PASS]" in out
    assert out.rstrip().splitlines()[-2] == "verify: PASS"
    data = json.loads(cert.read_text("utf-8"))
    assert data["pass"] and [r["n"] for r in data["results"]] == [0, 1, 2, 3]


def test_verify_xig_sigma0_row(capsys, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, out, _ = run(capsys, "verify", "--family", "xig", "--range", "1..2")
    assert code == 0
    rows = [line.split() for line in out.splitlines() if line.startswith("{sigma0} ")]
    assert rows and all(r[1] == "3" for r in rows)
    assert (tmp_path / "verify-xig-1-2.json").exists()


@pytest.mark.parametrize("rng", ["3..1", "0..2", "x"])
def test_verify_bad_range(capsys, rng):
    code, _, err = run(capsys, "verify", "--family", "xitq", "--range", rng)
    assert code == 2
    assert "range" in err


def test_charspace_on_emitted_file(capsys, tmp_path):
    path = tmp_path / "xi0.json"
    assert run(capsys, "build", "--golden", "xi0", "--emit", str(path))[0] == 0
    code, out, _ = run(capsys, "charspace", str(path), "--sigma", "sigma0")
    assert code == 0
    assert out.startswith("Σ={sigma0}: 3 component(s)")
    code, out, _ = run(capsys, "charspace", str(path))
    assert code == 0
    assert out.rstrip().endswith("connected characteristic space: no")


def test_charspace_invalid_sigma_exits_2(capsys, tmp_path):
    path = tmp_path / "xi0.json"
    run(capsys, "build", "--golden", "xi0", "--emit", str(path))
    code, _, err = run(capsys, "charspace", str(path), "--sigma", "sigma")
    assert code == 2
    assert "invalid Σ {sigma}" in err


def test_build_family(capsys, tmp_path):
    path = tmp_path / "f2.json"
    code, out, _ = run(capsys, "build", "--family", "fg", "--n", "2", "--emit", str(path))
    assert code == 0
    assert out.startswith("f2: 2 sinks, 6 saddles, 2 sources")


def test_render_invalid_size(capsys, tmp_path):
    code, _, err = run(capsys, "render", "xi0", "--out", str(tmp_path / "x.svg"), "--size", "10")
    assert code == 2
    assert "at least 64" in err
