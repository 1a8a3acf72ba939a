"""Command line behavior: exit codes, formats, determinism, and the cache.

Everything drives hkr.cli.run(argv) directly; stdout is the interface under
test, so most assertions are on captured bytes.
"""

import json
import os

import pytest

from hkr.cli import CacheEntry, Config, SCHEMA_VERSION, run


def invoke(capsys, argv):
    code = run(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_rank_json_frozen(capsys):
    code, out, _ = invoke(capsys, ["rank", "--group", "Cyc(4)", "--p", "2", "--n", "2", "--no-cache"])
    assert code == 0
    doc = json.loads(out)
    assert doc == {"group": "Cyc(4)", "p": 2, "n": 2, "rank": 16}


def test_rank_plain_is_bare_number(capsys):
    code, out, _ = invoke(
        capsys,
        ["rank", "--group", "Cyc(1)", "--p", "2", "--n", "1", "--no-cache", "--format", "plain"],
    )
    assert code == 0
    assert out == "1\n"


def test_subgroup_count_frozen(capsys):
    code, out, _ = invoke(capsys, ["subgroups", "--p", "2", "--n", "2", "--k", "2", "--no-cache"])
    assert code == 0
    assert json.loads(out)["count"] == 7


def test_output_is_deterministic(capsys):
    argv = ["chartable", "--group", "Sym(3)", "--no-cache"]
    _, first, _ = invoke(capsys, argv)
    _, second, _ = invoke(capsys, argv)
    assert first == second


def test_csv_is_rank_only(capsys):
    code, out, _ = invoke(
        capsys,
        ["rank", "--group", "Cyc(2)", "--p", "2", "--n", "1", "--no-cache", "--format", "csv"],
    )
    assert code == 0
    assert out == "group,p,n,rank\nCyc(2),2,1,2\n"
    code, _, err = invoke(
        capsys, ["chartable", "--group", "Sym(3)", "--no-cache", "--format", "csv"]
    )
    assert code == 2
    assert "csv" in err


def test_bad_group_reports_grammar(capsys):
    code, out, err = invoke(capsys, ["rank", "--group", "Sim(3)", "--p", "2", "--n", "1", "--no-cache"])
    assert code == 2
    assert out == ""
    assert "expr" in err and "atom" in err


def test_order_cap_is_a_computational_failure(capsys):
    code, _, err = invoke(capsys, ["rank", "--group", "Sym(9)", "--p", "2", "--n", "1", "--no-cache"])
    assert code == 1
    assert "cap" in err


def test_unknown_subcommand_is_usage_error(capsys):
    assert run(["frobnicate"]) == 2
    capsys.readouterr()


def test_cache_round_trip(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("HKR_CACHE", raising=False)
    argv = ["rank", "--group", "Q8", "--p", "2", "--n", "2", "--cache", str(tmp_path)]
    code, cold, _ = invoke(capsys, argv)
    assert code == 0
    files = list(tmp_path.iterdir())
    assert len(files) == 1
    code, warm, _ = invoke(capsys, argv)
    assert code == 0
    assert warm == cold
    entry = CacheEntry.from_json(json.loads(files[0].read_text()))
    assert entry.version == SCHEMA_VERSION
    assert entry.value == cold


def test_corrupted_cache_recomputes(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("HKR_CACHE", raising=False)
    argv = ["rank", "--group", "Cyc(6)", "--p", "3", "--n", "1", "--cache", str(tmp_path)]
    _, cold, _ = invoke(capsys, argv)
    (cachefile,) = tmp_path.iterdir()
    cachefile.write_text("{not json")
    code, again, _ = invoke(capsys, argv)
    assert code == 0
    assert again == cold


def test_no_cache_writes_nothing(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("HKR_CACHE", str(tmp_path))
    code, _, _ = invoke(capsys, ["rank", "--group", "Cyc(2)", "--p", "2", "--n", "1", "--no-cache"])
    assert code == 0
    assert list(tmp_path.iterdir()) == []


def test_cache_env_var_and_flag_precedence(tmp_path, capsys, monkeypatch):
    envdir = tmp_path / "env"
    flagdir = tmp_path / "flag"
    envdir.mkdir()
    flagdir.mkdir()
    monkeypatch.setenv("HKR_CACHE", str(envdir))
    invoke(capsys, ["rank", "--group", "Cyc(3)", "--p", "3", "--n", "1"])
    assert len(list(envdir.iterdir())) == 1
    invoke(capsys, ["rank", "--group", "Cyc(3)", "--p", "3", "--n", "1", "--cache", str(flagdir)])
    assert len(list(envdir.iterdir())) == 1
    assert len(list(flagdir.iterdir())) == 1


def test_format_is_part_of_the_cache_key(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("HKR_CACHE", raising=False)
    base = ["rank", "--group", "Cyc(2)", "--p", "2", "--n", "1", "--cache", str(tmp_path)]
    invoke(capsys, base)
    invoke(capsys, base + ["--format", "plain"])
    assert len(list(tmp_path.iterdir())) == 2


def test_verbose_goes_to_stderr_only(capsys):
    quiet = invoke(capsys, ["rank", "--group", "Sym(3)", "--p", "2", "--n", "1", "--no-cache"])
    loud = invoke(
        capsys, ["rank", "--group", "Sym(3)", "--p", "2", "--n", "1", "--no-cache", "--verbose"]
    )
    assert loud[1] == quiet[1]
    assert loud[2] != ""


def test_fgl_series_smoke(capsys):
    code, out, _ = invoke(capsys, ["fgl", "series", "multiplicative", "2", "--D", "6", "--no-cache"])
    assert code == 0
    assert json.loads(out)["series"] == "2*x + 1*x^2"


def test_fgl_coprime_smoke(capsys):
    code, out, _ = invoke(capsys, ["fgl", "coprime", "--p", "2", "1", "2", "--no-cache"])
    assert code == 0
    assert json.loads(out)["coprime"] is True


def test_c0_demo_smoke(capsys):
    for action in ("ring", "vandermonde", "localize", "drinfeld"):
        code, out, _ = invoke(capsys, ["c0-demo", action, "--p", "2", "--k", "2", "--no-cache"])
        assert code == 0
        assert json.loads(out)


def test_fix_census_smoke(capsys):
    code, out, _ = invoke(capsys, ["fix", "census", "--group", "Q8", "--p", "2", "--n", "2", "--no-cache"])
    assert code == 0
    doc = json.loads(out)
    assert doc["consistent"] is True
    assert len(doc["orbits"]) == 22


def test_fix_loops_smoke(capsys):
    code, out, _ = invoke(capsys, ["fix", "loops-check", "--group", "Dih(4)", "--n", "2", "--no-cache"])
    assert code == 0
    doc = json.loads(out)
    assert doc["ok"] is True and doc["hom_count"] == 40


def test_fix_accepts_gset_file(tmp_path, capsys):
    from hkr.groupcore import named_group
    from hkr.inertia import regular_gset

    doc = regular_gset(named_group("Sym(3)")).to_json()
    path = tmp_path / "action.json"
    path.write_text(json.dumps(doc))
    code, out, _ = invoke(
        capsys, ["fix", "census", "--gset", str(path), "--p", "2", "--n", "1", "--no-cache"]
    )
    assert code == 0
    assert json.loads(out)["total_points"] == 6


def test_selftest_single_criterion(capsys):
    code, out, _ = invoke(capsys, ["selftest", "--only", "2", "--no-cache"])
    assert code == 0
    assert "criterion  2" in out and "PASS" in out


def test_selftest_cache_transparency_check():
    from hkr.cli import _selftest_cache_check

    assert _selftest_cache_check() is True


def test_config_validation():
    cfg = Config(order_cap=10, tuple_work_cap=10, truncation_default=8,
                 cache_path=None, output_format="json")
    assert cfg.order_cap == 10
    with pytest.raises(ValueError):
        Config(order_cap=0, tuple_work_cap=10, truncation_default=8,
               cache_path=None, output_format="json")
    with pytest.raises(ValueError):
        Config(order_cap=10, tuple_work_cap=10, truncation_default=8,
               cache_path=None, output_format="yaml")


def test_cache_entry_round_trip():
    entry = CacheEntry(key="k", value="v", version=SCHEMA_VERSION)
    assert CacheEntry.from_json(entry.to_json()) == entry
    with pytest.raises(KeyError):
        CacheEntry.from_json({"key": "k"})
