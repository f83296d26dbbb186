import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from nfbasis import io
from nfbasis.cli import main

from conftest import OSCILLATOR_CSV, random_invertible


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)
    return _write


def matrix_text(M):
    return "\n".join(" ".join(io.format_scalar(x) for x in row) for row in M) + "\n"


def run_json(capsys, argv):
    assert main(argv) == 0
    return json.loads(capsys.readouterr().out)


def test_nullspace_all_ones_snapped(write, capsys):
    path = write("ones.txt", "1 1 1 1 1\n")
    assert main(["nullspace", path, "--normal-form", "--snap-rational"]) == 0
    lines = capsys.readouterr().out.splitlines()
    rows = [line.split() for line in lines[:5]]
    assert rows == [["1", "1", "1", "1"]] + [
        ["-1" if i == j else "0" for j in range(4)] for i in range(4)
    ]


def test_nullspace_plain_and_trivial(write, capsys):
    data = run_json(capsys, ["nullspace", write("m.txt", "1 1 1\n"), "--json"])
    assert np.array(data["columns"]).shape == (3, 2)
    assert main(["nullspace", write("eye.txt", "1 0\n0 1\n")]) == 0
    assert "trivial" in capsys.readouterr().out


def test_pi_groups(write, capsys):
    path = write("osc.csv", OSCILLATOR_CSV)
    assert main(["pi-groups", path]) == 0
    out = capsys.readouterr().out
    assert "t*xdot0/x0" in out and "sqrt(k/m)*t" in out
    data = run_json(capsys, ["pi-groups", path, "--json"])
    assert data["exponents"] == [["1", "-1", "1", "0", "0"], ["1", "0", "0", "1/2", "-1/2"]]


def test_square_gives_identity(write, capsys, rng):
    path = write("sq.txt", matrix_text(random_invertible(rng, 5)))
    data = run_json(capsys, ["normal-form", path, "--algorithm", "topdown", "--json"])
    assert data["columns"] == np.eye(5).tolist()


@pytest.mark.parametrize("complex_", [False, True])
def test_algorithms_byte_identical(write, capsys, rng, complex_):
    for trial in range(5):
        A = rng.standard_normal((7, 3))
        if complex_:
            A = A + 1j * rng.standard_normal((7, 3))
        if trial % 2:
            A[2] = A[5]
        path = write(f"a{trial}.txt", matrix_text(A))
        outs = []
        for alg in ("standard", "topdown"):
            data = run_json(capsys, ["normal-form", path, "--algorithm", alg, "--json"])
            outs.append(json.dumps(data["columns"]))
        assert outs[0] == outs[1]


def test_json_round_trip(write, capsys, rng):
    from nfbasis.normalform import normal_form

    A = rng.standard_normal((6, 3)) + 1j * rng.standard_normal((6, 3))
    path = write("c.txt", matrix_text(A))
    data = run_json(capsys, ["normal-form", path, "--json"])
    back = io.matrix_from_json(data["columns"])
    assert back.tobytes() == normal_form(io.read_matrix(path)).columns.tobytes()


def test_text_output_reports_theta(write, capsys):
    path = write("t.txt", "1 0\n0 1\n2 0\n")
    assert main(["normal-form", path]) == 0
    out = capsys.readouterr().out
    assert "theta=37" in out and "theta=18" in out


def test_rcef(write, capsys):
    path = write("k.txt", "1 0\n0 1\n1 1\n")
    data = run_json(capsys, ["rcef", path, "--json"])
    assert data["columns"] == [[1, 0], [0, 1], [1, 1]]


def test_allow_n1(write, capsys):
    path = write("col.txt", "0\n2\n4\n")
    assert main(["normal-form", path]) == 1
    data = run_json(capsys, ["normal-form", path, "--allow-n1", "--json"])
    assert data["columns"] == [[0.0], [1.0], [2.0]]


@pytest.mark.parametrize("argv,text", [
    (["normal-form", "{}"], "1 2\n3\n"),
    (["normal-form", "{}"], "1 2\n2 4\n3 6\n"),
    (["normal-form", "{}", "--zero-tol", "2"], "1 0\n0 1\n"),
    (["rcef", "{}"], "1 1\n1 1\n"),
    (["pi-groups", "{}"], "a,b\n"),
])
def test_input_errors_exit_1(write, capsys, argv, text):
    path = write("bad.txt", text)
    assert main([a.format(path) for a in argv]) == 1
    captured = capsys.readouterr()
    assert captured.out == "" and "error" in captured.err


def test_missing_file(capsys, tmp_path):
    assert main(["rcef", str(tmp_path / "nope.txt")]) == 1
    assert capsys.readouterr().out == ""


def test_unknown_flag(capsys):
    assert main(["rcef", "x", "--bogus"]) == 1
    assert "usage" in capsys.readouterr().err


def test_no_subcommand(capsys):
    assert main([]) == 1


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0


def test_internal_error_exit_2(write, capsys, monkeypatch):
    from nfbasis import cli
    from nfbasis.exceptions import InternalInvariantError

    def boom(*args, **kwargs):
        raise InternalInvariantError("broken")

    monkeypatch.setattr(cli, "normal_form", boom)
    assert main(["normal-form", write("a.txt", "1 0\n0 1\n")]) == 2
    assert "internal" in capsys.readouterr().err


def test_module_entry_point(write):
    path = write("t.txt", "1 0\n0 1\n2 0\n")
    proc = subprocess.run([sys.executable, "-m", "nfbasis", "normal-form", path, "--json"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["columns"] == [[0.0, 1.0], [1.0, 0.0], [0.0, 2.0]]
    bad = subprocess.run([sys.executable, "-m", "nfbasis", "frobnicate"],
                         capture_output=True, text=True, check=False)
    assert bad.returncode == 1 and bad.stdout == ""


@pytest.mark.slow
def test_noether_demo(tmp_path, capsys):
    orbit = tmp_path / "orbit.csv"
    data = run_json(capsys, ["noether-demo", "--json", "--orbit-csv", str(orbit)])
    assert data["kernel_dimension"] == 9
    assert data["nonzero_count"] == 36
    assert data["max_symmetry_residual"] <= 1e-8
    np.testing.assert_allclose(data["beta"]["estimated"], data["beta"]["expected"], atol=1e-6)
    with open(orbit, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["lambda", "x1", "y1", "z1", "x2", "y2", "z2"]
    assert len(rows) == 402


def test_noether_demo_equal_masses_text(capsys):
    assert main(["noether-demo", "--m1", "0.5", "--m2", "0.5"]) == 0
    out = capsys.readouterr().out
    assert "kernel dimension: 9" in out and "beta" not in out
