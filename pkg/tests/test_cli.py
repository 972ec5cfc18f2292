import json
import subprocess
import sys
from fractions import Fraction

import jsonschema
import pytest

from kodaira_census import cli
from kodaira_census.census import CENSUS_FIELDS, run_census, tally_rows
from kodaira_census.densities import proportion_given_bad
from kodaira_census.kodaira import KodairaType

SCHEMA = json.loads(cli.SCHEMA_PATH.read_text())


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_density_single_value(capsys):
    code, out, _ = run(capsys, "density", "--prime", "5", "--type", "II", "--mode", "given-bad", "--format", "csv")
    assert code == 0
    assert cli.read_csv(out)[0]["value"] == "78125/488281"


def test_density_full_table_sums_to_one(capsys):
    code, out, _ = run(capsys, "density", "--prime", "5", "--mode", "absolute", "--format", "csv")
    rows = cli.read_csv(out)
    body = [r for r in rows if r["type"] != "total"]
    assert len(body) == 10
    assert sum(Fraction(r["value"]) for r in body) == 1
    assert rows[-1]["value"] == "1/1"


@pytest.mark.parametrize("p", [5, 7, 11, 101])
def test_density_csv_round_trip(capsys, p):
    code, out, _ = run(capsys, "density", "--prime", str(p), "--mode", "given-bad", "--format", "csv", "--n", "3")
    for r in cli.read_csv(out):
        if r["type"] in ("I3", "II", "IV*"):
            assert Fraction(r["value"]) == proportion_given_bad(KodairaType.parse(r["type"]), p)


def test_density_bad_prime(capsys):
    code, _, err = run(capsys, "density", "--prime", "4")
    assert code == 2 and "prime >= 5 required" in err


@pytest.mark.parametrize(
    "argv,code,needle",
    [
        (["classify", "--a", "25", "--b", "125", "--prime", "5"], 0, "I0*"),
        (["classify", "--a", "3", "--b", "1", "--all-primes"], 0, "5,I1,1,1,5"),
        (["classify", "--a", "-3", "--b", "2", "--prime", "5"], 3, ""),
        (["classify", "--a", "16", "--b", "64", "--prime", "5"], 4, ""),
        (["boxcheck", "--prime", "5", "--type", "In", "--n", "1"], 0, "25,25,80,80,true"),
        (["boxcheck", "--prime", "101", "--type", "II*"], 6, ""),
        (["bounds", "--lemma", "nope", "--height", "1e8"], 7, ""),
        (["bounds", "--lemma", "II", "--height", "1e8"], 7, ""),
        (["bounds", "--lemma", "prop1", "--height", "100"], 7, ""),
        (["census", "--height", "1.5"], 2, ""),
    ],
)
def test_exit_codes(capsys, argv, code, needle):
    got, out, err = run(capsys, *argv, "--format", "csv") if argv[0] != "census" else run(capsys, *argv)
    assert got == code, err
    assert needle in out


def test_usage_error_exit_code(capsys):
    assert cli.main(["classify", "--a", "1"]) == 2
    assert cli.main(["--help"]) == 0


def test_factorization_exit_code(capsys, monkeypatch):
    import kodaira_census.arith as arith

    monkeypatch.setattr(arith, "pollard_brent", lambda n, *a, **k: None)
    monkeypatch.setattr(cli, "bad_primes_ge5", lambda pair: arith.factorize(pair.D, trial_bound=10))
    code, _, err = run(capsys, "classify", "--a", "1000003", "--b", "1", "--all-primes")
    assert code == 5


def test_corrupt_checkpoint_exit_code(capsys, tmp_path):
    ck = tmp_path / "c.ckpt"
    ck.write_text("garbage\n")
    code, _, _ = run(capsys, "census", "--height", "1e4", "--checkpoint", str(ck))
    assert code == 8


def test_height_parsing():
    assert cli.parse_height("1e8") == 10**8
    assert cli.parse_height("100000000") == 10**8
    assert cli.parse_height("2.5e3") == 2500
    for bad in ("1.5", "abc", "0", "-4"):
        with pytest.raises(Exception):
            cli.parse_height(bad)


@pytest.mark.parametrize(
    "argv",
    [
        ["density", "--prime", "7"],
        ["classify", "--a", "25", "--b", "125", "--all-primes"],
        ["census", "--height", "1000", "--primes", "5,7"],
        ["boxcheck", "--prime", "5", "--type", "II"],
        ["bounds", "--lemma", "multiplicative", "--height", "1e6", "--prime", "5", "--n", "1"],
        ["convergence", "--heights", "1e3,1e4", "--prime", "5", "--quantities", "bad-share"],
        ["twistcheck", "--samples", "50", "--seed", "1"],
    ],
)
def test_json_validates(capsys, argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    assert doc["command"] == argv[0] and doc["records"]


def test_census_csv_round_trip(capsys, tmp_path):
    path = tmp_path / "c.csv"
    code, _, _ = run(capsys, "census", "--height", "1e4", "--primes", "5", "--out", str(path))
    rows = cli.read_csv(path.read_text())
    assert tuple(rows[0]) == CENSUS_FIELDS
    assert rows == tally_rows(run_census(10**4, (5,)))
    t = run_census(10**4, (5,))
    assert int(rows[0]["count"]) == t.total_curves
    for r in rows:
        if r["p"] == "5" and r["type"] not in ("bad", "multiplicative", "potentially_multiplicative"):
            assert int(r["count"]) == t.count(5, KodairaType.parse(r["type"]))


def test_census_x100_totals_row(capsys):
    code, out, _ = run(capsys, "census", "--height", "100", "--primes", "5")
    assert cli.read_csv(out)[0]["count"] == "186"


def test_census_checkpoint_resume_identical(capsys, tmp_path):
    a, b, ck = tmp_path / "a.csv", tmp_path / "b.csv", tmp_path / "run.ckpt"
    run(capsys, "census", "--height", "1e5", "--primes", "5", "--out", str(a))
    run(capsys, "census", "--height", "1e5", "--primes", "5", "--out", str(b), "--checkpoint", str(ck))
    assert a.read_bytes() == b.read_bytes()
    run(capsys, "census", "--height", "1e5", "--primes", "5", "--out", str(b), "--checkpoint", str(ck))
    assert a.read_bytes() == b.read_bytes()


def test_checks_drive_exit_code(capsys):
    code, out, _ = run(capsys, "bounds", "--lemma", "prop1", "--height", "1e8", "--tolerance", "0.02", "--format", "csv")
    assert code == 0 and cli.read_csv(out)[0]["pass"] == "true"
    code, out, _ = run(capsys, "bounds", "--lemma", "prop1", "--height", "1e6", "--census", "--slack", "0", "--format", "csv")
    assert code == 1 and cli.read_csv(out)[0]["pass"] == "false"
    code, _, _ = run(capsys, "convergence", "--heights", "1e3", "--prime", "5", "--quantities", "bad-share", "--tolerance", "1e-9")
    assert code == 1


def test_twistcheck_seeded(capsys):
    _, a, _ = run(capsys, "twistcheck", "--samples", "100", "--seed", "9", "--format", "csv")
    _, b, _ = run(capsys, "twistcheck", "--samples", "100", "--seed", "9", "--format", "csv")
    assert a == b and "false" not in a


def test_module_entry_point():
    r = subprocess.run(
        [sys.executable, "-m", "kodaira_census", "density", "--prime", "5", "--type", "II*", "--mode", "given-bad", "--format", "csv"],
        capture_output=True, text=True, check=True,
    )
    assert "1/488281" in r.stdout
