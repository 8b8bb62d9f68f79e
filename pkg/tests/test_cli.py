from __future__ import annotations

import json

import pytest

from sylowlie import cli
from sylowlie.errors import UsageError


def run_json(argv):
    text, code = cli.run(argv)
    return json.loads(text), code, text


def test_construct_examples(tmp_path):
    d, code, _ = run_json(["construct", "--family", "g2", "--q", "2", "--cache-dir", str(tmp_path)])
    assert code == 0
    assert (d["order"], d["center_order"], d["exponent"]) == (64, 2, 8)
    assert d["schema_version"] == cli.SCHEMA_VERSION
    d, _, _ = run_json(["construct", "--family", "su4", "--q", "3"])
    assert (d["order"], d["exponent"]) == (729, 9)
    d, _, _ = run_json(["construct", "--family", "g2", "--q", "5"])
    assert d["exponent"] == 25


def test_cache_hit_matches_cold_run(tmp_path, capsys):
    argv = ["verify", "--all", "--family", "su4", "--q", "2", "--cache-dir", str(tmp_path), "--threads", "1"]
    cold, code_cold = cli.run(argv)
    assert "cache written" in capsys.readouterr().err
    assert list(tmp_path.glob("su4_q2_*.npz"))
    warm, code_warm = cli.run(argv)
    assert "cache hit" in capsys.readouterr().err
    assert cold == warm and code_cold == code_warm == 0


def test_reports_byte_identical_across_threads():
    a, _ = cli.run(["verify", "--all", "--family", "g2", "--q", "3", "--threads", "1"])
    b, _ = cli.run(["verify", "--all", "--family", "g2", "--q", "3", "--threads", "4"])
    assert a == b
    d = json.loads(a)
    assert d["verdict"] == "pass" and d["counts"]["fail"] == 0


def test_verification_failure_exit_code(capsys):
    d, code, _ = run_json(["verify", "--lemma", "q^4cent", "--family", "su4", "--q", "5"])
    assert code == cli.EXIT_FAIL and d["verdict"] == "fail"
    assert d["lemmas"][0]["witness"] is not None


@pytest.mark.parametrize("argv", [
    ["construct", "--family", "e8", "--q", "2"],
    ["construct", "--family", "g2", "--q", "6"],
    ["construct", "--family", "g2"],
    ["verify", "--family", "g2", "--q", "2"],
    ["verify", "--lemma", "nope", "--family", "g2", "--q", "2"],
    ["dump", "nonsense", "--family", "su4", "--q", "2"],
    ["construct", "--family", "g2", "--q", "4", "--modulus", "1,0"],
])
def test_usage_errors(argv, capsys):
    assert cli.main(argv) == cli.EXIT_USAGE
    assert capsys.readouterr().out == ""


def test_resource_cap_exit_code(capsys):
    assert cli.main(["enumerate-rc", "--family", "g2", "--q", "3"]) == cli.EXIT_RESOURCE


def test_env_overrides_and_flag_precedence(monkeypatch):
    monkeypatch.setenv("SYLOWLIE_FAMILY", "su4")
    monkeypatch.setenv("SYLOWLIE_Q", "2")
    d, _, _ = run_json(["construct"])
    assert d["family"] == "SU4" and d["order"] == 64
    d, _, _ = run_json(["construct", "--family", "g2"])
    assert d["family"] == "G2" and d["exponent"] == 8
    monkeypatch.setenv("SYLOWLIE_THREADS", "many")
    with pytest.raises(UsageError):
        cli.run(["construct"])


def test_runconfig_invariants():
    with pytest.raises(UsageError):
        cli.RunConfig(family="g2", q=2, threads=0)
    with pytest.raises(UsageError):
        cli.RunConfig(family="g2", q=2, out="xml")
    assert cli.parse_modulus("[1, 1, 0, 1]") == cli.parse_modulus("1 1 0 1") == (1, 1, 0, 1)


def test_enumerate_rc_q2():
    d, code, _ = run_json(["enumerate-rc", "--family", "su4", "--q", "2"])
    assert code == 0 and d["matches_expected"] and d["compared_to_expected"]
    assert d["complete"] and d["undecided"] == [] and d["unmatched_survivors"] == []
    assert sorted(r["order"] for r in d["survivors"]) == [8, 8, 8, 8, 16, 32, 32, 32, 32, 64]
    text, _ = cli.run(["enumerate-rc", "--family", "g2", "--q", "2", "--out", "md"])
    assert text.startswith("S-centric, S-radical subgroups of S, G2, q = 2") and "| 64 | 1 | S |" in text


def test_dump(tmp_path):
    d, code, _ = run_json(["dump", "datum", "--family", "g2", "--q", "2"])
    assert code == 0 and d["datum"]["roots"][0] == "a"
    d, _, _ = run_json(["dump", "J", "--family", "su4", "--q", "2"])
    sub = d["subgroup"]
    assert sub["order"] == 16 and sub["abelian"] and sub["exponent"] == 2
    d, _, _ = run_json(["dump", "datum", "--family", "g2", "--q", "3", "--convention", "-1"])
    assert d["convention"] == -1
