import subprocess
import sys

import pytest

from treezeta.cli import main, parse_scalar

from conftest import DATA


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out.strip(), out.err.strip()


def test_parse_scalar():
    assert parse_scalar("3") == 3 and isinstance(parse_scalar("3"), int)
    assert parse_scalar("2.5") == 2.5 + 0j
    assert parse_scalar("2,1") == 2 + 1j


def test_zeta_sl2(capsys):
    code, out, _ = run(capsys, "zeta", "--graph", str(DATA / "segment_sl2_p3.json"),
                       "--from", "a", "--to", "a", "--s", "2")
    assert code == 0 and out == "5/4"


def test_zeta_with_series(capsys):
    code, out, _ = run(capsys, "zeta", "--graph", str(DATA / "segment_w3.json"),
                       "--from", "c", "--to", "c", "--s", "1", "--series", "2")
    assert code == 0
    assert out.splitlines()[1] == "series L=2 7/6"


def test_zeta_complex(capsys):
    code, out, _ = run(capsys, "zeta", "--graph", str(DATA / "segment_w3.json"),
                       "--from", "a", "--to", "a", "--s", "2,0.5")
    assert code == 0 and out.endswith("i")


def test_coeffs(capsys):
    code, out, _ = run(capsys, "coeffs", "--graph", str(DATA / "segment_w3.json"),
                       "--from", "c", "--to", "c", "--n-max", "30")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "n\ta_n\tb_n"
    assert "6\t1\t6" in lines


def test_chi(capsys):
    code, out, _ = run(capsys, "chi", "--graph", str(DATA / "bouquet3_w2.json"), "--at", "c")
    assert code == 0 and out == "-5"


def test_unimodular(capsys):
    code, out, _ = run(capsys, "unimodular", "--graph", str(DATA / "segment_loop.json"))
    assert code == 0 and out in ("true", "false")


def test_ihara(capsys):
    code, out, _ = run(capsys, "ihara", "--graph", str(DATA / "segment_w3.json"), "--x", "1")
    assert code == 0 and out == "-3"
    code, out, _ = run(capsys, "ihara", "--graph", str(DATA / "segment_w3.json"), "--x", "1/2")
    assert out == "0"


def test_lad_zeta(capsys):
    code, out, _ = run(capsys, "lad-zeta", "--lad", str(DATA / "sl2_p3.lad.json"), "--root", "c",
                       "--from", "color:a:0", "--to", "a", "--s", "2")
    assert code == 0 and out == "5/4"


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "star-consistency", "--instances", "2")
    assert code == 0
    assert out.splitlines()[0] == "suite star-consistency seed 0 instances 2"
    assert out.splitlines()[-1].startswith("summary ok=")


@pytest.mark.parametrize("argv, code", [
    (["zeta", "--graph", "missing.json", "--from", "c", "--to", "c", "--s", "2"], 2),
    (["zeta", "--graph", str(DATA / "segment_w3.json"), "--from", "c", "--to", "c", "--s", "x"], 2),
    (["zeta", "--graph", str(DATA / "segment_w3.json"), "--from", "zz", "--to", "c", "--s", "2"], 2),
    (["coeffs", "--graph", str(DATA / "bouquet3_w2.json"), "--from", "c", "--to", "c", "--n-max", "9"], 3),
])
def test_error_codes(capsys, argv, code):
    got, _, err = run(capsys, *argv)
    assert got == code and err.startswith("error:")


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "treezeta.cli", "ihara", "--graph",
                          str(DATA / "segment_w3.json"), "--x", "0"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == "1"
