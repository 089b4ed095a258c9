import csv
import io
import json
import os
import subprocess
import sys
from fractions import Fraction

import pytest

from linnikpair import cli
from linnikpair.config import ConfigError, RunConfig, read_config_file, resolve


def run(*argv):
    return cli.main(list(argv))


def test_config_defaults():
    c = RunConfig()
    assert (c.precision_bits, c.prime_limit, c.workers, c.format) == (128, 10**6, 1, "table")


def test_config_invariants():
    with pytest.raises(ConfigError):
        RunConfig(precision_bits=32)
    with pytest.raises(ConfigError):
        RunConfig(prime_limit=10)
    with pytest.raises(ConfigError):
        RunConfig(format="xml")


def test_config_file_rejects_unknown_keys(tmp_path):
    p = tmp_path / "c.cfg"
    p.write_text("precision_bits = 160\nflux = 3\n")
    with pytest.raises(ConfigError, match="unknown key"):
        read_config_file(p)


def test_config_file_parses_comments_and_tolerances(tmp_path):
    p = tmp_path / "c.cfg"
    p.write_text("# comment\nprime_limit = 1e4\ntolerances = C=1e-3, lemma24=0.1\n")
    d = read_config_file(p)
    assert d["prime_limit"] == 10**4
    assert d["tolerances"] == {"C": Fraction(1, 1000), "lemma24": Fraction(1, 10)}


def test_three_layer_precedence(tmp_path):
    p = tmp_path / "c.cfg"
    p.write_text("precision_bits = 160\nprime_limit = 2000\nworkers = 3\n")
    env = {"LINNIKPAIR_PRIME_LIMIT": "3000", "LINNIKPAIR_WORKERS": "2", "LINNIKPAIR_NO_NUMBA": "0"}
    c = resolve(p, environ=env, flags={"workers": 4})
    assert c.precision_bits == 160  # file over default
    assert c.prime_limit == 3000  # environment over file
    assert c.workers == 4  # flag over environment
    assert resolve(p, environ={}, flags={}).prime_limit == 2000
    assert resolve(None, environ={}, flags={}).prime_limit == 10**6


def test_seed_scale_presets():
    c = resolve(None, environ={}, flags={"prime_limit": 5000}, seed_scale=True)
    assert c.prime_limit == 10**6 and c.frakj_exact_N == 10**4


def test_cli_precedence_end_to_end(tmp_path, monkeypatch):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("precision_bits = 160\nformat = csv\n")
    out = tmp_path / "g.json"
    monkeypatch.setenv("LINNIKPAIR_PRECISION_BITS", "192")
    assert run("gate", "--config", str(cfg), "--json", str(out)) == 0
    assert json.loads(out.read_text())["precision_bits"] == 192
    assert run("gate", "--config", str(cfg), "--precision", "256", "--json", str(out)) == 0
    assert json.loads(out.read_text())["precision_bits"] == 256


def test_unknown_subcommand_exit_2(capsys):
    with pytest.raises(SystemExit) as e:
        run("bogus")
    assert e.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_bad_config_value_exit_2(tmp_path):
    with pytest.raises(SystemExit) as e:
        run("gate", "--precision", "32")
    assert e.value.code == 2


def test_gate_prints_56(capsys):
    assert run("gate") == 0
    out = capsys.readouterr().out
    assert "minimal k = 56" in out and "k=55" in out


def test_two_adic_prints_profile(capsys):
    assert run("two-adic", "--q", "273") == 0
    out = capsys.readouterr().out
    assert "rho = 12" in out and "max f = f(91) = 6" in out


def test_two_adic_other_q(capsys):
    assert run("two-adic", "--q", "7") == 0
    assert "rho = 3" in capsys.readouterr().out


def test_check_failure_exit_1_report_still_written(tmp_path):
    out = tmp_path / "lf.json"
    assert run("local-factors", "--json", str(out)) == 1
    doc = json.loads(out.read_text())
    assert doc["pass"] is False
    assert {r["name"]: r["pass"] for r in doc["reports"]} == {
        "local_min_5": False, "local_min_11": False, "local_min_199": True}


def test_flipped_convention_passes(tmp_path):
    assert run("local-factors", "--convention", "flipped", "--out", str(tmp_path / "x.txt")) == 0


def test_tolerance_override_changes_verdict(tmp_path):
    out = tmp_path / "lf.json"
    assert run("local-factors", "--p", "5", "--tolerance", "local_min_5=0.01", "--json", str(out)) == 0
    assert json.loads(out.read_text())["reports"][0]["tolerance"] == "1e-02"


def test_exit_status_matches_reports(tmp_path):
    for argv in (["gate"], ["local-factors"], ["two-adic"], ["search", "--n", "1000", "--k", "1"]):
        out = tmp_path / "r.json"
        code = run(*argv, "--json", str(out))
        doc = json.loads(out.read_text())
        assert (code == 0) == all(r["pass"] for r in doc["reports"]) == doc["pass"]


def test_same_report_twice_identical_bytes(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run("gate", "--json", str(a))
    run("gate", "--json", str(b))
    assert a.read_bytes() == b.read_bytes()
    text = a.read_text()
    assert json.dumps(json.loads(text), sort_keys=True, indent=2) + "\n" == text or \
        json.dumps(json.loads(text), sort_keys=True, indent=2) == text


def test_table_format_columns(capsys):
    run("gate", "--format", "table")
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].split() == ["name", "target", "lo", "hi", "pass"]
    widths = {len(l) for l in lines[2:6]}
    assert len(widths) == 1


def test_csv_round_trip(tmp_path):
    out = tmp_path / "lf.csv"
    run("local-factors", "--format", "csv", "--out", str(out))
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    assert [r["name"] for r in rows] == ["local_min_5", "local_min_11", "local_min_199"]
    assert Fraction(rows[0]["lo"]) == Fraction(125, 128)


def test_local_factor_table_csv(tmp_path):
    t = tmp_path / "t.csv"
    run("local-factors", "--p", "7", "--table-out", str(t), "--out", str(tmp_path / "o"))
    rows = list(csv.DictReader(t.open()))
    assert len(rows) == 7


def test_search_outputs(tmp_path):
    w, c = tmp_path / "w.jsonl", tmp_path / "c.csv"
    assert run("search", "--n", "1000", "--n", "2000", "--witnesses-out", str(w),
               "--coverage-out", str(c), "--out", str(tmp_path / "o")) == 0
    assert len(w.read_text().splitlines()) == 2
    assert c.read_text().splitlines()[0] == "n,found,probes,millis"


def test_search_pair(tmp_path):
    assert run("search", "--N1", "2000", "--N2", "1998", "--k", "2", "--out", str(tmp_path / "o")) == 0


def test_frakj_seed_scale(tmp_path):
    out = tmp_path / "f.json"
    assert run("frakj", "--seed-scale", "--json", str(out)) == 0
    doc = json.loads(out.read_text())
    assert doc["details"]["continuous"]["N"] == 10**4


def test_elambda_small(tmp_path):
    out = tmp_path / "e.json"
    assert run("elambda", "--L", "10", "--L", "12", "--json", str(out)) == 0
    doc = json.loads(out.read_text())
    assert doc["details"]["rigorous"] is False


def test_sieve(tmp_path):
    t = tmp_path / "t.csv"
    assert run("sieve", "--T-out", str(t), "--out", str(tmp_path / "o")) == 0
    assert t.read_text().startswith("p,T1_lo")


def test_unwritable_output_reports_path(tmp_path):
    target = tmp_path / "missing" / "dir" / "x.json"
    blocker = tmp_path / "missing"
    blocker.write_text("file, not dir")
    with pytest.raises(OSError, match="x.json"):
        run("gate", "--json", str(target))


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "linnikpair", "gate"], capture_output=True, text=True)
    assert out.returncode == 0 and "minimal k = 56" in out.stdout
