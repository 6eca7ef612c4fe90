import csv
import hashlib
import io
import json
from fractions import Fraction

import pytest

from toeplitz_orbits.cli import PolynomialSyntaxError, main, parse_polynomial
from toeplitz_orbits.ntcore import IntPolynomial, format_polynomial
from toeplitz_orbits.orbitstats import CylinderFunction, birkhoff_average
from toeplitz_orbits.words import ViablePair, dumps_tpv, load_tpv

GOLDEN_SHA256 = "954031e88791096ee7244a6e3faed87bb0860f7667d4ca9497e0b61e9cb0dcd2"


@pytest.fixture
def a_tpv(tmp_path):
    path = tmp_path / "a.tpv"
    assert main(["construct-a", "--k", "2", "--l", "3", "--relaxed", "--primes", "11", "--fill", "zero", "-o", str(path)]) == 0
    return path


# -- polynomial text ----------------------------------------------------------------


@pytest.mark.parametrize(
    "text, coeffs",
    [
        ("m^2", (0, 0, 1)),
        ("3*m^3 - m + 7", (7, -1, 0, 3)),
        ("  x ^ 3 ", (0, 0, 0, 1)),
        ("-2*x^2 + x^2 - 5", (-5, 0, -1)),
        ("m*m", (0, 0, 1)),
        ("7", (7,)),
        ("m - m", (0,)),
    ],
)
def test_parse_examples(text, coeffs):
    assert parse_polynomial(text) == IntPolynomial(coeffs)


@pytest.mark.parametrize("text", ["m^(2)", "m^", "3*", "m x", "m + x", "2.5*m", "m^-1", ""])
def test_parse_errors(text):
    with pytest.raises(PolynomialSyntaxError):
        parse_polynomial(text)


def test_parse_error_reports_position():
    with pytest.raises(PolynomialSyntaxError) as info:
        parse_polynomial("m^(2)")
    assert info.value.pos == 2 and "position 2" in str(info.value)
    with pytest.raises(PolynomialSyntaxError, match="non-integer"):
        parse_polynomial("m + 0.5")


def test_parse_print_round_trip():
    for coeffs in [(0, 1), (7, -1, 0, 3), (-4, 0, 0, 0, 2), (0, 0, -1), (5,)]:
        P = IntPolynomial(coeffs)
        assert parse_polynomial(format_polynomial(P, "m")) == P


# -- construct ---------------------------------------------------------------------------


def test_construct_a_golden_file(a_tpv):
    data = a_tpv.read_bytes()
    assert hashlib.sha256(data).hexdigest() == GOLDEN_SHA256
    pair = load_tpv(a_tpv)
    assert str(pair.top.word) == "000?0?00000" and pair.checkpoints == [3]


def test_construct_is_deterministic(tmp_path):
    outs = []
    for name in ("x.tpv", "y.tpv"):
        path = tmp_path / name
        argv = ["construct-b", "--k", "2", "--l", "4", "--relaxed", "--tower", "221,6409", "--fill", "seeded", "--seed", "9", "-o", str(path)]
        assert main(argv) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_construct_iwanik_to_stdout(capsys):
    assert main(["construct-iwanik", "--poly", "210*m^2 + m", "--tower", "5,7"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["format_version"] == "TPV1" and doc["levels"][-1]["n"] == 35


def test_strict_budget_failure_exits_one(capsys):
    assert main(["construct-a", "--k", "2", "--l", "3", "--strict", "--levels", "2"]) == 1
    cap = capsys.readouterr()
    assert cap.err.startswith("verdict[fail]:")
    assert json.loads(cap.out)["plan"]["levels"][0]["n"] == "102407"


# -- nt -------------------------------------------------------------------------------------


def test_nt_weil(capsys):
    assert main(["nt", "weil", "--p", "7", "--k", "2", "--l", "3", "--a", "1"]) == 0
    assert capsys.readouterr().out == "11 (bound 15.87) OK\n"


def test_nt_perm_and_residues(capsys):
    assert main(["nt", "perm", "--poly", "m^3", "--n", "11"]) == 0
    assert capsys.readouterr().out.strip() == "PERMUTATION"
    assert main(["nt", "perm", "--poly", "m^2", "--lift", "3"]) == 0
    assert capsys.readouterr().out.strip().endswith("NOT-PERMUTATION")
    assert main(["nt", "residues", "--n", "8", "--k", "2"]) == 0
    assert capsys.readouterr().out.strip() == "0 1 4"


# -- analyses ---------------------------------------------------------------------------------


def test_average_csv_matches_library(a_tpv, capsys):
    assert main(["average", "--pair", str(a_tpv), "--poly", "m^3", "--N", "1000", "--shift", "0", "--cylinder", "G"]) == 0
    rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
    assert rows[0][:3] == ["N", "low", "high"]
    iv = birkhoff_average(load_tpv(a_tpv), IntPolynomial.monomial(3), 0, 1000, CylinderFunction.G())
    assert Fraction(rows[1][1]) == iv.low == Fraction(159, 250)
    assert Fraction(rows[1][2]) == iv.high == 1


def test_average_threads_and_gnuplot(a_tpv, tmp_path, capsys):
    out = tmp_path / "avg.csv"
    plot = tmp_path / "avg.gp"
    argv = ["average", "--pair", str(a_tpv), "--poly", "m^2", "--N", "10,100", "--shift", "0,1", "-o", str(out)]
    assert main(argv + ["--gnuplot", str(plot)]) == 0
    assert main(["--threads", "3"] + argv[:-1] + [str(tmp_path / "t.csv")]) == 0
    assert out.read_text() == (tmp_path / "t.csv").read_text()
    assert "avg.csv" in plot.read_text()
    assert len(out.read_text().splitlines()) == 5


def test_checkpoints_and_verify(a_tpv, capsys):
    assert main(["checkpoints", "--pair", str(a_tpv), "--require-alternation"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["checkpoints"][0]["C_t"] == 3 and rep["checkpoints"][0]["low"] == "1/1"
    assert main(["verify", "--pair", str(a_tpv)]) == 0


def test_density_and_ap(tmp_path, capsys):
    path = tmp_path / "w.tpv"
    path.write_text(dumps_tpv(ViablePair.from_words(["0001"])))
    assert main(["density", "--pair", str(path), "--poly", "m^2"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["verdict"] == "NOT-DENSE" and rep["missing_residues"] == [2, 3]
    assert main(["ap", "--poly", "210*m^2+m", "--tower", "5,7,9"]) == 0
    assert json.loads(capsys.readouterr().out)["all_match"]


def test_equi_tolerance_override(tmp_path, monkeypatch, capsys):
    path = tmp_path / "alt.tpv"
    path.write_text(dumps_tpv(ViablePair.from_words(["01"])))
    assert main(["equi", "--pair", str(path), "--poly", "m^3", "--cylinder", "1"]) == 0
    assert json.loads(capsys.readouterr().out)["orbit"] == ["1/2", "1/2"]
    monkeypatch.setenv("TOL_OVERRIDE", "abc")
    assert main(["equi", "--pair", str(path), "--poly", "m^3"]) == 2
    assert capsys.readouterr().err.startswith("error[input]:")


# -- exit codes ---------------------------------------------------------------------------------


@pytest.mark.parametrize(
    "argv, prefix",
    [
        (["nt", "perm", "--poly", "m^(2)", "--n", "5"], "error[input]:"),
        (["average", "--pair", "/nonexistent.tpv", "--poly", "m", "--N", "5"], "error[io]:"),
        (["nosuch"], "error[input]:"),
        (["construct-a", "--k", "2", "--l", "3", "--relaxed", "--primes", "11,11"], "error[input]:"),
    ],
)
def test_input_errors_exit_two(argv, prefix, capsys):
    assert main(argv) == 2
    assert capsys.readouterr().err.startswith(prefix)


def test_decreasing_grid_is_rejected(a_tpv, capsys):
    assert main(["average", "--pair", str(a_tpv), "--poly", "m", "--N", "10,5"]) == 2
