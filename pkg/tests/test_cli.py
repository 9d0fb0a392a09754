import csv
import io
import json
from fractions import Fraction
from pathlib import Path

import jsonschema
import pytest

import mwhiggs
from mwhiggs.cli import CliConfig, build_parser, config_from_args, main, parse_rational

FIXTURES = Path(__file__).parent / "fixtures"
SCHEMA = json.loads(mwhiggs.schema_path().read_text())


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_report_json(capsys):
    code, out, _ = run(capsys, "report", "--group", "su", "--p", "2", "--q", "3", "--vol", "100", "--format", "json")
    assert code == 0
    d = json.loads(out)
    jsonschema.validate(d, SCHEMA)
    assert d["c_sigma"] == "-2/1" and d["rank"] == 2 and d["max_degree"] == 15


def test_report_sp(capsys):
    code, out, _ = run(capsys, "report", "--group", "sp", "--n", "2", "--vol", "1")
    d = json.loads(out)
    jsonschema.validate(d, SCHEMA)
    assert code == 0 and d["rank"] == 2 and d["c_sigma"] == "-2/1"


@pytest.mark.parametrize("name,argv", [
    ("report_su23_vol100.json", ["--group", "su", "--p", "2", "--q", "3", "--vol", "100"]),
    ("report_sp6_vol1.json", ["--group", "sp", "--n", "3", "--vol", "1"]),
])
def test_golden_reports(capsys, name, argv):
    code, out, _ = run(capsys, "report", *argv, "--format", "json")
    assert code == 0
    assert out == (FIXTURES / name).read_text()


@pytest.mark.parametrize("argv", [
    ["report", "--group", "su", "--p", "0", "--q", "3"],
    ["report", "--group", "su", "--p", "2", "--q", "3", "--vol", "6.28"],
    ["report", "--group", "sp", "--n", "2", "--vol", "-1"],
    ["check-embedding", "--group", "su", "--p", "1", "--q", "1"],
    ["verify", "--group", "sp", "--n", "1", "--trials", "0"],
])
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as e:
        main(argv)
    assert e.value.code == 2


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify", "--group", "su", "--p", "2", "--q", "2", "--trials", "200", "--seed", "42")
    assert code == 0
    d = json.loads(out)
    assert d["ok"] and len(d["identity_reports"]) == 200
    code, out, _ = run(capsys, "verify", "--group", "sp", "--n", "3", "--trials", "50")
    assert code == 0


def test_verify_fault(capsys):
    code, _, err = run(capsys, "verify", "--group", "su", "--p", "2", "--q", "2", "--trials", "2",
                       "--inject-fault", "sign-of-I")
    assert code == 1
    e = json.loads(err)
    assert e["error"]["first_failure"]["certificate"]["witnesses"]["sigma_I"]


def test_report_fault(capsys):
    code, _, err = run(capsys, "report", "--group", "su", "--p", "1", "--q", "2", "--inject-fault", "sign-of-I")
    assert code == 1 and json.loads(err)["error"]["stage"] == "admissibility"


@pytest.mark.parametrize("n", [1, 4])
def test_check_embedding(capsys, n):
    code, out, _ = run(capsys, "check-embedding", "--group", "sp", "--n", str(n))
    assert code == 0 and json.loads(out)["ok"]


def test_check_embedding_tampered(capsys):
    code, out, err = run(capsys, "check-embedding", "--group", "sp", "--n", "2", "--inject-fault", "drop-sqrt2")
    assert code == 1
    assert json.loads(out)["T_unitary"] is False and "T T^dagger" in err


def test_scan_degrees(capsys):
    # vol = 10 gives bound 10/(4 pi) = 0.79..; vol = 30 gives 2.38..
    code, out, _ = run(capsys, "scan-degrees", "--group", "su", "--p", "1", "--q", "1", "--vol", "30", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    by_d = {int(r["degV"]): r for r in rows}
    assert sorted(by_d) == list(range(-3, 4))
    assert all(by_d[d]["gate"] == "PASS" for d in range(-2, 3))
    assert by_d[3]["gate"] == by_d[-3]["gate"] == "FAIL"
    assert by_d[3]["margin"] == "True"
    for d in range(1, 4):
        assert Fraction(by_d[d]["toledo_coeff"]) == -Fraction(by_d[-d]["toledo_coeff"])
    code, out, _ = run(capsys, "scan-degrees", "--group", "sp", "--n", "1", "--vol", "10", "--format", "json")
    rows = json.loads(out)["rows"]
    assert [r["degV"] for r in rows if not r["margin"]] == [0]


def test_table_format(capsys):
    code, out, _ = run(capsys, "report", "--group", "su", "--p", "1", "--q", "1", "--format", "table")
    assert code == 0 and "c_sigma       -2" in out


def test_determinism(capsys):
    for argv in (["verify", "--group", "su", "--p", "1", "--q", "2", "--trials", "20", "--seed", "3"],
                 ["report", "--group", "sp", "--n", "2", "--vol", "628/100", "--seed", "5"]):
        _, a, _ = run(capsys, *argv)
        _, b, _ = run(capsys, *argv)
        assert a == b


def test_config_roundtrip():
    cfg = config_from_args(build_parser(), ["report", "--group", "su", "--p", "2", "--q", "3", "--vol", "628/100"])
    again = CliConfig.from_dict(json.loads(json.dumps(cfg.to_dict())))
    assert again == cfg and again.volume == parse_rational("157/25")


def test_env_pi_bits(monkeypatch, capsys):
    monkeypatch.setenv("MW_PI_BITS", "128")
    _, out, _ = run(capsys, "report", "--group", "su", "--p", "1", "--q", "1")
    assert json.loads(out)["pi_bits"] == 128


def test_output_file(tmp_path, capsys):
    target = tmp_path / "r.json"
    code, out, _ = run(capsys, "report", "--group", "su", "--p", "1", "--q", "1", "-o", str(target))
    assert code == 0 and out == ""
    jsonschema.validate(json.loads(target.read_text()), SCHEMA)
