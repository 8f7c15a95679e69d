import json
from itertools import combinations

import pytest

from conftest import naive
from fqbasis.cli import main
from fqbasis.errors import PreconditionError
from fqbasis.field import make_field
from fqbasis.subsets import FqSubset, productset
from fqbasis.sweep import (
    OUTPUT_DIR_ENV,
    SweepConfig,
    exhaustive_pairs,
    parse_filter,
    random_pairs,
    sweep,
)

RECORD_KEYS = {"field", "A", "B", "theorem", "claimed_order", "oracle_order",
               "consistent", "verified", "micros"}


def read_jsonl(path):
    with open(path) as fh:
        return [json.loads(line) for line in fh]


# -- configuration ----------------------------------------------------------

def test_parse_filter():
    assert parse_filter(">q") == ">q"
    assert parse_filter("≥2q") == ">=2q"
    assert parse_filter(" 12 ") == "12"
    for bad in ("<q", "-3", "x"):
        with pytest.raises(PreconditionError):
            parse_filter(bad)


def test_config_validation():
    with pytest.raises(PreconditionError):
        SweepConfig(p=5, mode="random").validate()          # no seed
    with pytest.raises(PreconditionError):
        SweepConfig(p=13, mode="exhaustive").validate()     # over budget
    with pytest.raises(PreconditionError):
        SweepConfig(p=5, mode="sideways").validate()
    with pytest.raises(PreconditionError):
        SweepConfig(p=5, seed=1, theorem="main8").validate()
    with pytest.raises(PreconditionError):
        SweepConfig(p=4, seed=1).validate()
    assert SweepConfig(p=11, mode="exhaustive").validate().q == 11


def test_exhaustive_order_and_count():
    pairs = list(exhaustive_pairs(3, ">q"))
    sizes = [bin(a).count("1") * bin(b).count("1") for a, b in pairs]
    assert sizes == sorted(sizes, reverse=True)
    expected = sum(1 for a in range(1, 8) for b in range(1, 8)
                   if bin(a).count("1") * bin(b).count("1") > 3)
    assert len(pairs) == len(set(pairs)) == expected
    for n in set(sizes):
        block = [p for p, s in zip(pairs, sizes) if s == n]
        assert block == sorted(block)


def test_random_pairs_filter_and_shortfall():
    stats = {}
    pairs = list(random_pairs(5, ">=2q", 50, 3, stats))
    assert len(pairs) == 50
    assert all(bin(a).count("1") * bin(b).count("1") >= 10 for a, b in pairs)
    stats = {}
    # |A||B| >= 26 is impossible in F_5
    assert list(random_pairs(5, "26", 2, 3, stats)) == []
    assert stats["draws"] == 2000


# -- sweeps -----------------------------------------------------------------

def test_exhaustive_q5(tmp_path):
    out = tmp_path / "s.jsonl"
    rep = sweep(SweepConfig(p=5, mode="exhaustive", output=str(out)))
    assert rep.violations == []
    s = rep.summary
    assert s["pairs"] == s["certified"] == s["verified"]
    lines = read_jsonl(out)
    assert lines[0]["header"]["mode"] == "exhaustive"
    assert len(lines) == 1 + s["pairs"]
    for rec in lines[1:]:
        assert set(rec) == RECORD_KEYS
        assert rec["micros"] is None and rec["consistent"] and rec["verified"]
        assert rec["claimed_order"] >= rec["oracle_order"]
    summary = json.loads((tmp_path / "s.jsonl.summary.json").read_text())
    assert summary["summary"] == s


def test_named_theorem_skips(tmp_path):
    rep = sweep(SweepConfig(p=5, mode="exhaustive", theorem="antisym8"))
    assert rep.summary["skipped"] > 0 and rep.violations == []
    assert set(rep.summary["by_theorem"]) == {"antisym8"}


def test_equal_q_sweep_matches_subgroup_containment():
    # at |A||B| = q in F_4, no basis exists exactly when AB sits in a proper additive subgroup
    f = make_field(2, 2)
    nv = naive(2, 2)
    subgroups = [frozenset(c) for k in (1, 2) for c in combinations(range(4), k)
                 if 0 in c and nv.sumset(frozenset(c), frozenset(c)) == frozenset(c)]
    rep = sweep(SweepConfig(p=2, m=2, mode="exhaustive", pair_filter="=q", keep_records=True))
    assert rep.violations == [] and rep.summary["pairs"] > 0
    nones = 0
    for rec in rep.records:
        assert rec["theorem"] is None
        AB = frozenset(productset(FqSubset.from_indices(f, rec["A"]),
                                  FqSubset.from_indices(f, rec["B"])))
        trapped = any(AB <= G for G in subgroups)
        assert (rec["oracle_order"] is None) == trapped
        nones += trapped
    assert nones > 0
    assert {"A": [0, 1, 2, 3], "B": [0]} in [{"A": r["A"], "B": r["B"]} for r in rep.records
                                             if r["oracle_order"] is None]


def test_random_sweep_deterministic(tmp_path):
    cfg = dict(p=2, m=3, mode="random", trials=200, seed=42)
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    sweep(SweepConfig(output=str(a), **cfg))
    sweep(SweepConfig(output=str(b), **cfg))
    assert a.read_bytes() == b.read_bytes()
    assert (tmp_path / "a.jsonl.summary.json").read_bytes() == \
        (tmp_path / "b.jsonl.summary.json").read_bytes()
    lines = read_jsonl(a)
    assert lines[0]["header"]["rng"] == "numpy.PCG64" and lines[0]["header"]["seed"] == 42
    assert len(lines) == 201


def test_workers_do_not_change_bytes(tmp_path):
    cfg = dict(p=2, m=3, mode="random", trials=100, seed=7)
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    sweep(SweepConfig(output=str(a), **cfg))
    sweep(SweepConfig(output=str(b), workers=2, **cfg))
    assert a.read_bytes() == b.read_bytes()


def test_timing_opt_in():
    rep = sweep(SweepConfig(p=3, mode="random", trials=5, seed=1, timing=True, keep_records=True))
    assert all(isinstance(r["micros"], int) for r in rep.records)
    assert "seconds" in rep.summary


def test_env_output_dir(tmp_path, monkeypatch):
    monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path))
    rep = sweep(SweepConfig(p=3, mode="random", trials=5, seed=9))
    assert rep.output == str(tmp_path / "sweep-p3-m1-random-seed9.jsonl")
    assert len(read_jsonl(rep.output)) == 6


def test_unwritable_output(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    with pytest.raises(PreconditionError):
        sweep(SweepConfig(p=3, mode="random", trials=5, seed=9, output=str(blocker / "x.jsonl")))


def test_csv_summary(tmp_path):
    path = tmp_path / "s.csv"
    sweep(SweepConfig(p=3, mode="random", trials=5, seed=9, csv_summary=str(path)))
    rows = path.read_text().splitlines()
    assert rows[0] == "key,value" and any(r.startswith("pairs,5") for r in rows)


# -- CLI --------------------------------------------------------------------

def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_verify(capsys):
    code, out, _ = run(capsys, "verify", "--p", "5", "--m", "1", "--A", "0,1,3", "--B", "1,2")
    assert code == 0
    data = json.loads(out)
    assert data["theorem"] == "antisym8" and data["verified"] and data["claimed_order"] == 8
    assert data["consistent"] is True


def test_cli_verify_forced_theorem(capsys):
    code, out, _ = run(capsys, "verify", "--p", "5", "--A", "0,1,2,3,4", "--B", "1,2",
                       "--theorem", "main16")
    assert code == 0 and json.loads(out)["claimed_order"] == 16
    code, _, err = run(capsys, "verify", "--p", "5", "--A", "0,1,2,3,4", "--B", "1,2",
                       "--theorem", "sym8")
    assert code == 1 and "symmetric" in err


def test_cli_oracle(capsys):
    code, out, _ = run(capsys, "oracle", "--p", "5", "--m", "1", "--X", "1", "--cap", "20")
    assert code == 0 and json.loads(out)["minimal_order"] is None
    code, out, _ = run(capsys, "oracle", "--p", "5", "--A", "1,2", "--B", "1,3")
    assert code == 0 and json.loads(out)["minimal_order"] == 2
    code, _, _ = run(capsys, "oracle", "--p", "5", "--A", "1,2")
    assert code == 1


def test_cli_counterexample(capsys):
    code, out, _ = run(capsys, "counterexample", "box", "--p", "2", "--m", "4", "--k", "2", "--l", "2")
    assert code == 0
    props = json.loads(out)["properties"]
    assert props["AB_subset_C"] and props["oracle_minimal_order"] is None
    code, _, _ = run(capsys, "counterexample", "box", "--p", "2", "--m", "4", "--k", "2")
    assert code == 1
    code, _, _ = run(capsys, "counterexample", "subfield", "--p", "2", "--m", "3")
    assert code == 1
    code, out, _ = run(capsys, "counterexample", "trivial", "--p", "3")
    assert code == 0 and json.loads(out)["B"] == [0]


def test_cli_energy_and_field(capsys):
    code, out, _ = run(capsys, "energy", "--p", "3", "--A", "0,1", "--B", "0,1")
    data = json.loads(out)
    assert code == 0 and data["total"] == data["expected"] == 12 and data["equal"]
    code, out, _ = run(capsys, "field", "--p", "2", "--m", "2")
    data = json.loads(out)
    assert code == 0 and data["modulus"] == [1, 1, 1] and data["primitive_element"] == 2


def test_cli_usage_errors(capsys):
    assert run(capsys, "verify", "--p", "5", "--A", "0,1", "--B", "x")[0] == 1
    assert run(capsys, "verify", "--p", "6", "--A", "0", "--B", "0")[0] == 1
    assert run(capsys, "frobnicate")[0] == 1
    assert run(capsys, "verify", "--p", "5", "--bogus", "1")[0] == 1
    assert run(capsys, "sweep", "--p", "5", "--mode", "random")[0] == 1


def test_cli_sweep_stdout(capsys):
    code, out, _ = run(capsys, "sweep", "--p", "3", "--mode", "random", "--trials", "4", "--seed", "5")
    lines = [json.loads(x) for x in out.splitlines()]
    assert code == 0 and len(lines) == 5
    assert lines[-1]["summary"]["pairs"] == 4 and lines[-1]["summary"]["violations"] == []


def test_cli_sweep_file(capsys, tmp_path):
    out_path = tmp_path / "r.jsonl"
    code, out, _ = run(capsys, "sweep", "--p", "2", "--m", "2", "--mode", "exhaustive",
                       "--out", str(out_path), "--csv", str(tmp_path / "r.csv"))
    assert code == 0 and json.loads(out)["summary"]["violations"] == []
    assert out_path.exists() and (tmp_path / "r.csv").exists()


def test_cli_violation_exit_code(capsys, monkeypatch):
    from fqbasis import cli
    from fqbasis.errors import TheoremViolation

    def boom(*a, **k):
        raise TheoremViolation("synthetic")

    monkeypatch.setattr(cli, "verify_pair", boom)
    code, _, err = run(capsys, "verify", "--p", "5", "--A", "0,1,3", "--B", "1,2")
    assert code == 2 and "TheoremViolation" in err
