import csv
import json
import math

import pytest

from dirac_steps.core.errors import DomainError
from step_scatter import EXIT_OK, EXIT_THRESHOLD, EXIT_USAGE, main, parse_tau


@pytest.mark.parametrize("text, expected", [
    ("0.25", 0.25),
    ("T_dB/40", math.pi / 40.0),
    ("2T_dB", 2.0 * math.pi),
    ("0.5*T_dB/3", math.pi / 6.0),
    ("tdb", math.pi),
])
def test_parse_tau(text, expected):
    assert parse_tau(text, 2.0) == pytest.approx(expected)


@pytest.mark.parametrize("text", ["fast", "T_dB/0", "T_dB//2"])
def test_parse_tau_rejects_garbage(text):
    with pytest.raises(DomainError):
        parse_tau(text, 2.0)


def test_csv_scan_to_file(tmp_path):
    out = tmp_path / "em.csv"
    assert main(["--mode", "em_temporal", "--values", "2", "0", "--out", str(out), "-q"]) == EXIT_OK
    with open(out, newline='', encoding='utf-8') as f:
        rows = list(csv.DictReader(f))
    assert float(rows[0]['F_plus_B']) == pytest.approx(0.3125)
    assert rows[1]['regime'] == "domain_error"
    assert rows[1]['F'] == ""


def test_json_scan_to_stdout(capsys):
    assert main(["-m", "sharp_temporal", "--values", "1", "-f", "json", "-q"]) == EXIT_OK
    captured = capsys.readouterr()
    payload = json.loads(captured.out)
    assert payload['header']['mode'] == "sharp_temporal"
    assert payload['rows'][0]['B'] == pytest.approx(0.0047, abs=1e-4)
    assert "Scanning" in captured.err


def test_tau_expressions_reach_the_request(tmp_path):
    out = tmp_path / "smooth.csv"
    code = main(["-m", "smooth", "--values", "1", "-t", "T_dB/40", "-t", "2T_dB", "-o", str(out), "-q"])
    assert code == EXIT_OK
    with open(out, newline='', encoding='utf-8') as f:
        taus = [float(row['tau']) for row in csv.DictReader(f)]
    assert taus == pytest.approx([math.pi / 40.0, 2.0 * math.pi])


def test_constants_report(capsys):
    assert main(["--mode", "constants"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "CONSTANTS" in out
    assert "ENERGY EXAMPLE" in out


def test_invalid_grid_is_a_usage_error(capsys):
    assert main(["-m", "sharp_spatial", "--grid", "2", "1"]) == EXIT_USAGE
    assert "invalid request" in capsys.readouterr().err


def test_unparseable_tau_is_a_usage_error():
    assert main(["-m", "smooth", "--values", "1", "-t", "soon", "-q"]) == EXIT_USAGE


def test_unknown_mode_exits():
    with pytest.raises(SystemExit) as info:
        main(["-m", "quantum_foam"])
    assert info.value.code == 2


def test_unwritable_output(tmp_path):
    out = tmp_path / "missing" / "rows.csv"
    assert main(["-m", "em_spatial", "--values", "2", "-o", str(out), "-q"]) == EXIT_USAGE


def test_oracle_threshold_sets_exit_code(tmp_path):
    out = tmp_path / "oracle.json"
    args = ["-m", "oracle_compare", "--values", "1", "-t", "0.3", "-f", "json", "-o", str(out), "-q"]
    assert main(args) == EXIT_OK
    assert json.loads(out.read_text(encoding='utf-8'))['header']['summary']['passed'] is True
    assert main(args + ["--threshold", "1e-30"]) == EXIT_THRESHOLD
