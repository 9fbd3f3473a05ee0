import json
import subprocess
import sys

import numpy as np
import pytest

from qaffine import cli, serialize, verify
from qaffine.maps import KrausSet
from qaffine.state import PolarizationVector
from qaffine.su_basis import StructureTensors, compute_structure_constants

from conftest import basis


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(serialize.dumps(obj) if not isinstance(obj, (dict, str)) else
                 (obj if isinstance(obj, str) else json.dumps(obj)))
    return str(p)


def test_channel_depolarizing_affine(capsys):
    code, out, _ = run(capsys, "channel", "--name", "depolarizing", "--dim", "3", "--param", "x=0.4", "--emit", "affine")
    assert code == 0
    M = serialize.loads(out)
    assert np.abs(M.T - 0.55 * np.eye(8)).max() < 1e-12


def test_channel_emit_kraus_and_dynmap(capsys):
    code, out, _ = run(capsys, "channel", "--name", "trit-flip-12", "--emit", "kraus")
    assert code == 0 and len(serialize.loads(out)) == 1
    code, out, _ = run(capsys, "channel", "--name", "phase_damping", "--param", "x=0.2", "--emit", "dynmap")
    assert code == 0 and serialize.loads(out).B.shape == (9, 9)


def test_channel_from_spec_file(capsys, tmp_path):
    spec = write(tmp_path, "spec.json", {"name": "off_diagonal", "params": {"x": 0.2}, "signs": "alternating"})
    code, out, _ = run(capsys, "channel", "--spec", spec)
    assert code == 0
    assert serialize.loads(out).T[1, 1] == pytest.approx(0.9)


def test_channel_bad_inputs(capsys):
    assert run(capsys, "channel", "--name", "depolarizing", "--param", "x=2")[0] == 1
    assert run(capsys, "channel", "--name", "depolarizing", "--param", "x")[0] == 1
    assert run(capsys, "channel")[0] == 1
    with pytest.raises(SystemExit) as exc:
        cli.main(["channel", "--name", "nope"])
    assert exc.value.code == 1


def test_verify_identities_d4(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "identities", "--dim", "4")
    assert code == 0
    assert "12/12 checks passed" in out


def test_verify_all_suites_d2_d3(capsys):
    code, out, _ = run(capsys, "verify", "--dim", "2", "--dim", "3")
    assert code == 0, out
    assert "FAIL" not in out


def test_verify_requires_dim(capsys):
    code, _, err = run(capsys, "verify")
    assert code == 1 and "--dim" in err


def test_verify_out_of_range_dim(capsys):
    assert run(capsys, "verify", "--dim", "9")[0] == 1


def test_verify_corrupted_tensor_exits_2(capsys, monkeypatch):
    def corrupted(gens):
        st = compute_structure_constants(gens)
        f = st.f.copy()
        f[0, 1, 2] = f[1, 2, 0] = f[2, 0, 1] = 1.01
        return StructureTensors(st.dim, f, st.dtensor)

    monkeypatch.setattr(verify, "compute_structure_constants", corrupted)
    code, out, _ = run(capsys, "verify", "--suite", "identities", "--dim", "3")
    assert code == 2
    assert "FAIL" in out


def test_tolerance_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("QAFFINE_TOL", "1e-30")
    assert run(capsys, "verify", "--suite", "identities", "--dim", "3")[0] == 2
    monkeypatch.setenv("QAFFINE_TOL", "abc")
    assert run(capsys, "verify", "--suite", "identities", "--dim", "3")[0] == 1


def test_bloch_roundtrip(capsys, tmp_path):
    g, _ = basis(3)
    n = PolarizationVector(3, np.array([0, 0, -np.sqrt(3) / 2, 0, 0, 0, 0, 0.5]))
    path = write(tmp_path, "n.json", n)
    code, out, _ = run(capsys, "from-bloch", "-i", path)
    rho = serialize.loads(out)
    assert code == 0 and np.abs(rho.mat - np.diag([0, 1, 0])).max() < 1e-14
    path = write(tmp_path, "rho.json", out)
    code, out, _ = run(capsys, "to-bloch", "-i", path)
    assert np.abs(serialize.loads(out).n - n.n).max() < 1e-14


def test_osr_and_affine_commands(capsys, tmp_path):
    code, out, _ = run(capsys, "channel", "--name", "trit-flip-13", "--emit", "dynmap")
    dyn = write(tmp_path, "b.json", out)
    code, out, _ = run(capsys, "osr-from-dynmap", "-i", dyn)
    assert code == 0
    kraus = write(tmp_path, "k.json", out)
    code, out1, _ = run(capsys, "affine-from-osr", "-i", kraus)
    code, out2, _ = run(capsys, "affine-from-dynmap", "-i", dyn)
    M1, M2 = serialize.loads(out1), serialize.loads(out2)
    assert np.abs(M1.T - M2.T).max() < 1e-12
    assert M1.T[2, 7] == pytest.approx(-1 / np.sqrt(3))


def test_apply_command(capsys, tmp_path):
    _, out, _ = run(capsys, "channel", "--name", "depolarizing", "--param", "x=0.4")
    mpath = write(tmp_path, "m.json", out)
    n = np.linspace(-0.2, 0.2, 8)
    npath = write(tmp_path, "n.json", PolarizationVector(3, n))
    code, out, _ = run(capsys, "apply", "-m", mpath, "-i", npath)
    assert code == 0 and np.abs(serialize.loads(out).n - 0.55 * n).max() < 1e-12
    # Kraus set applied to a density matrix
    _, out, _ = run(capsys, "channel", "--name", "trit-flip-12", "--emit", "kraus")
    kpath = write(tmp_path, "k.json", out)
    rpath = write(tmp_path, "r.json", {"type": "DensityMatrix", "dim": 3,
                                       "mat": serialize.complex_to_json(np.diag([1, 0, 0]))})
    _, out, _ = run(capsys, "apply", "-m", kpath, "-i", rpath)
    assert np.abs(serialize.loads(out).mat - np.diag([0, 1, 0])).max() < 1e-15


def test_apply_dimension_mismatch(capsys, tmp_path):
    mpath = write(tmp_path, "m.json", KrausSet(2, [1.0], [np.eye(2)]))
    npath = write(tmp_path, "n.json", PolarizationVector(3, np.zeros(8)))
    code, _, err = run(capsys, "apply", "-m", mpath, "-i", npath)
    assert code == 1 and "dimension" in err


def test_unreadable_and_malformed_input(capsys, tmp_path):
    code, _, err = run(capsys, "to-bloch", "-i", str(tmp_path / "missing.json"))
    assert code == 1 and "cannot read" in err
    bad = write(tmp_path, "bad.json", '{"type": "DensityMatrix", "dim": 2}')
    code, _, err = run(capsys, "to-bloch", "-i", bad)
    assert code == 1 and "'mat'" in err
    wrong = write(tmp_path, "wrong.json", PolarizationVector(2, np.zeros(3)))
    code, _, err = run(capsys, "to-bloch", "-i", wrong)
    assert code == 1 and "expected DensityMatrix" in err


def test_scan_command(capsys, tmp_path):
    out = tmp_path / "fig1.csv"
    code, _, _ = run(capsys, "scan", "--initial", "ket2", "--generator", "f28", "--out", str(out))
    lines = out.read_text().splitlines()
    assert code == 0
    assert lines[0] == "theta,p,S3"
    assert len(lines) == 241 * 101 + 1
    th, p, s3 = map(float, lines[1].split(","))
    assert th == 0 and p == 0 and abs(s3) < 1e-12


def test_scan_bad_generator(capsys):
    assert run(capsys, "scan", "--generator", "f99", "--thetas", "3", "--ps", "3")[0] == 1


def test_gen_basis_and_gram(capsys):
    code, out, _ = run(capsys, "gen-basis", "--dim", "3", "--tensors")
    obj = json.loads(out)
    assert code == 0 and len(obj["generators"]["generators"]) == 8
    assert {"i": 1, "j": 2, "k": 3} == {k: obj["tensors"]["f"][0][k] for k in "ijk"}
    assert run(capsys, "gen-basis", "--dim", "1")[0] == 1
    code, out, _ = run(capsys, "gram")
    rows = out.splitlines()
    assert code == 0 and len(rows) == 29 and rows[0].split(",")[1] == "f1"


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qaffine.cli", "verify", "--suite", "trace-product", "--dim", "3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
