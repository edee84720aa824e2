import json

import numpy as np
import pytest

from holocorr import chain_from_text, chain_to_text, load_chain
from holocorr.cli import main
from holocorr.measure import atoms_from_text


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_degree_of_boyd(capsys):
    code, out, err = run(capsys, "degree", "--chain", "@boyd")
    assert code == 0 and out == "d=4 d_dagger=2\n"
    cfg = json.loads(err.splitlines()[0])["config"]
    assert cfg["command"] == "degree" and cfg["seed"] == 20240611


def test_degree_from_file(tmp_path, capsys):
    path = tmp_path / "boyd.json"
    path.write_text(chain_to_text(load_chain("@boyd")))
    assert run(capsys, "degree", "--chain", str(path))[1] == "d=4 d_dagger=2\n"


def test_sample_square(capsys):
    code, out, _ = run(capsys, "sample", "--chain", "@square", "--start", "3,0", "--depth", "40",
                       "--samples", "1000")
    assert code == 0
    mu = atoms_from_text(out)
    assert len(mu) == 1000
    assert np.all(np.abs(np.abs(mu.z) - 1) < 1e-6)


def test_sample_writes_grid(tmp_path, capsys):
    out = tmp_path / "a.csv"
    grid = tmp_path / "g.pgm"
    code, _, _ = run(capsys, "sample", "--chain", "@boyd", "--depth", "12", "--samples", "500",
                     "--out", str(out), "--grid-out", str(grid), "--res", "16x24", "--window", "0,0,5")
    assert code == 0
    assert grid.read_bytes().startswith(b"P5\n24 16\n65535\n")
    assert (tmp_path / "g.pgm.txt").exists()
    assert len(atoms_from_text(out.read_text())) == 500


def test_dumps_do_not_depend_on_workers(tmp_path, capsys):
    texts = []
    for w in ("1", "8"):
        path = tmp_path / f"w{w}.csv"
        run(capsys, "sample", "--chain", "@boyd", "--depth", "20", "--samples", "10000",
            "--workers", w, "--out", str(path))
        texts.append(path.read_bytes())
    assert texts[0] == texts[1]


def test_compose_round_trip(tmp_path, capsys):
    path = tmp_path / "c.json"
    code, _, _ = run(capsys, "compose", "--chain", "@square", "--chain", "@boyd", "--out", str(path))
    assert code == 0
    c = chain_from_text(path.read_text())
    assert (c.d, c.d_dagger) == (8, 2)
    assert chain_to_text(chain_from_text(chain_to_text(c))) == path.read_text()
    assert run(capsys, "degree", "--chain", str(path))[1] == "d=8 d_dagger=2\n"


def test_adjoint_and_fiber(capsys):
    code, out, _ = run(capsys, "adjoint", "--chain", "@square")
    assert code == 0 and chain_from_text(out).d == 1
    code, out, _ = run(capsys, "fiber", "--chain", "@square", "--start", "4,0")
    rows = out.strip().splitlines()
    assert rows[0] == "re,im,mult" and len(rows) == 3
    vals = sorted(float(r.split(",")[0]) for r in rows[1:])
    assert vals == pytest.approx([-2, 2])
    code, out, _ = run(capsys, "fiber", "--chain", "@square", "--start", "3", "--forward")
    assert float(out.splitlines()[1].split(",")[0]) == pytest.approx(9)


def test_birkhoff_report(capsys):
    code, out, _ = run(capsys, "birkhoff", "--chain", "@square", "--phi", "logabs", "--method", "exact",
                       "--depth", "8", "--target", "0")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,A_n,half_width" and len(lines) == 11
    assert lines[-1] == "# ds_condition=not-asserted"
    code, out, _ = run(capsys, "birkhoff", "--chain", "@square", "--phi", "logabs", "--depth", "8",
                       "--samples", "200", "--assume-ds-condition")
    assert "method=monte-carlo" in out and out.endswith("# ds_condition=asserted\n")


def test_defect_command(capsys):
    code, out, _ = run(capsys, "defect", "--chain", "@square", "--region", "disk:0,0,1", "--samples", "2000")
    assert code == 0 and "defect=0.0" in out


def test_oracle_ergodic(tmp_path, capsys):
    fc = tmp_path / "split.fc"
    fc.write_text("2 2\n2 0\n0 2\n")
    code, out, _ = run(capsys, "oracle", "ergodic", "--fc", str(fc), "--mu", "1/2,1/2")
    assert code == 0 and out == "not ergodic, witness S={0}\n"
    code, out, _ = run(capsys, "oracle", "invariant", "--fc", str(fc))
    assert out == "(1, 0)\n(0, 1)\n"
    code, out, _ = run(capsys, "oracle", "functions", "--fc", str(fc), "--mu", "1/2,1/2")
    assert out.startswith("dimension=2 superlevel_sets_almost_invariant=True")


def test_oracle_other_checks(tmp_path, capsys):
    fc = tmp_path / "full.fc"
    fc.write_text("2 2\n1 1\n1 1\n")
    assert run(capsys, "oracle", "pullback", "--fc", str(fc), "--nu", "1,0")[1] == "(1/2, 1/2)\n"
    assert run(capsys, "oracle", "cesaro", "--fc", str(fc), "--nu", "1,0", "--depth", "4")[1] == "(5/8, 3/8)\n"
    out = run(capsys, "oracle", "birkhoff", "--fc", str(fc), "--phi", "0,1", "--depth", "4")[1]
    assert out.splitlines()[-1] == "4,3/8"
    out = run(capsys, "oracle", "almost-invariant", "--fc", str(fc), "--mu", "1/2,1/2", "--subset", "0")[1]
    assert out == "not almost invariant\n"
    out = run(capsys, "oracle", "maximal", "--fc", str(fc), "--mu", "1/2,1/2", "--phi", "0,1",
              "--alpha", "2/5", "--depth", "8")[1]
    assert out.startswith("pass lhs=1/2")
    out = run(capsys, "oracle", "complement", "--fc", str(fc), "--mu", "1/2,1/2", "--subset", "")[1]
    assert "almost invariant" in out


def test_oracle_suite_small(capsys):
    code, out, _ = run(capsys, "oracle", "suite", "--samples", "20", "--seed", "3")
    assert code == 0 and out.startswith("instances=20 ") and "failures=0" in out


def test_exit_codes(tmp_path, capsys):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "degree")[0] == 2
    assert run(capsys, "sample", "--chain", "@square", "--depth", "0")[0] == 2
    assert run(capsys, "birkhoff", "--chain", "@square")[0] == 2
    code, _, err = run(capsys, "degree", "--chain", str(tmp_path / "missing.json"))
    assert code == 1 and "error:" in err
    bad = tmp_path / "mu.fc"
    bad.write_text("2 2\n1 1\n1 1\n")
    code, _, err = run(capsys, "oracle", "ergodic", "--fc", str(bad), "--mu", "1,0")
    assert code == 1 and "NotInvariant" in err
    line = tmp_path / "line.json"
    # the vertical line x = 1
    line.write_text('{"components": [{"mult": 1, "coeffs": [[[-1, 0]], [[1, 0]]]}]}')
    code, _, err = run(capsys, "degree", "--chain", str(line))
    assert code == 1 and "LineComponent" in err
