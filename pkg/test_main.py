import json
from fractions import Fraction

import pytest

from main import build_parser, run
from src.utils.errors import UsageError


@pytest.fixture(autouse=True)
def small_b1_sample(monkeypatch):
    monkeypatch.setenv("QUADRANK_B1_SAMPLE", "3")


def output(capsys):
    return json.loads(capsys.readouterr().out)


def test_zeta_verb(capsys):
    assert run(["zeta", "5"]) == 0
    document = output(capsys)
    assert document["zeta_minus1"] == "1/30"
    assert document["oracle_minus1"] == "1/30"
    assert document["fe_pass"] is True


def test_domain_error_exits_with_one(capsys):
    assert run(["field", "12"]) == 1
    assert output(capsys)["error"] == "NotSquarefree"
    assert run(["lift", "--d", "44"]) == 1
    assert output(capsys)["error"] == "DegreeTooLarge"


def test_usage_error_exits_with_two(capsys):
    assert run(["bogus"]) == 2
    assert output(capsys)["error"] == "UsageError"
    assert run(["scan", "--disc-range", "13..5"]) == 2
    capsys.readouterr()
    assert run(["zeta", "5", "--tol", "-1"]) == 2


def test_help_exits_cleanly(capsys):
    assert run(["--help"]) == 0
    assert "rankbound" in capsys.readouterr().out


def test_field_and_cfrac(capsys):
    assert run(["field", "3"]) == 0
    field = output(capsys)
    assert field["disc"] == 12 and field["class_number"] == 1 and field["narrow_class_number"] == 2
    assert field["codifferent_tp_generator"] is None
    assert field["different_sigma"] == 28
    assert sum(f["exponent"] for f in field["different_factorization"]) == 3

    assert run(["cfrac", "2"]) == 0
    cf = output(capsys)
    assert cf["period"] == [2] and cf["closing_term_expected"] == 2
    assert cf["epsilon"]["text"] == "1+1*sqrt(2)" and cf["norm"] == -1


def test_indec_and_kappa(capsys):
    assert run(["indec", "2"]) == 0
    assert output(capsys)["ring"]["count"] == 2

    assert run(["indec", "3", "--ideal", "3,0,1"]) == 0
    ideal = output(capsys)
    assert ideal["count"] == 2 and ideal["kappa_upper_cf"] == 2

    assert run(["kappa", "3"]) == 0
    kappa = output(capsys)
    assert (kappa["lower"], kappa["upper"]) == (2, 2)


def test_rankbound_and_lift(capsys):
    assert run(["rankbound", "--disc", "5"]) == 0
    assert output(capsys)["R_min"] == 1

    assert run(["lift"]) == 0
    lift = output(capsys)
    assert lift["admissible_discriminants"] == [5]
    assert lift["coefficients"] == "derived"


def test_scan_csv_and_save(capsys, tmp_path):
    target = tmp_path / "scan.csv"
    assert run(["scan", "--disc-range", "5..13", "--out", "csv", "--save", str(target)]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0].split(",")[:2] == ["D", "Δ"]
    assert len(lines) == 5
    assert target.read_text(encoding="utf-8").strip().splitlines() == lines


def test_external_coefficients_are_used(capsys, tmp_path):
    coeffs = tmp_path / "coeffs.txt"
    coeffs.write_text("2 1 1/240\n", encoding="utf-8")
    assert run(["lift", "--coeffs", str(coeffs)]) == 0
    assert output(capsys)["coefficients"] == "external"
    assert run(["lift", "--coeffs", str(tmp_path / "missing.txt")]) == 1
    assert output(capsys)["error"] == "MalformedInput"


def test_verify_exit_codes(capsys):
    assert run(["verify", "--suite", "lifting"]) == 0
    assert output(capsys)["passed"] is True
    assert run(["verify", "--suite", "siegel_oracle", "--inject-b1", "1/100"]) == 1
    report = output(capsys)
    assert report["suites"][0]["counterexample"]["D"] == 2


def test_parser_types():
    args = build_parser().parse_args(["indec", "5", "--ideal", "5,2,1/5"])
    assert args.ideal[:2] == (5, 2) and str(args.ideal[2]) == "1/5"
    args = build_parser().parse_args(["scan", "--disc-range", "5..100", "--workers", "2"])
    assert args.disc_range == (5, 100) and args.workers == 2
    assert build_parser().parse_args(["verify", "--inject-b1", "3/700"]).inject_b1 == Fraction(3, 700)
    with pytest.raises(UsageError):
        build_parser().parse_args(["verify", "--inject-b1", "1/x"])
