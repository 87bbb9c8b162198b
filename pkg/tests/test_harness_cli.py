import json
import os
import subprocess
import sys

from kasteleyn.cli import main
from kasteleyn.families import FamilySpec
from kasteleyn.harness import (
    conjecture_suite,
    family_matrix_for_ring,
    run_report,
    verify_theorems,
)
from kasteleyn.graphs import load_graph
from kasteleyn.matrices import parse_matrix
from kasteleyn.rings import parse_laurent, q_integer


class TestRunReport:
    def test_box_222_integers(self):
        rec = run_report(FamilySpec(variant="ppbox", a=2, b=2, c=2), "z")
        assert rec.invariant_factors == ["2", "10"]
        assert rec.free_rank == 0
        assert rec.oracle_check == "holds"
        assert rec.oracle_count == 20
        assert rec.round_verdict == "holds"

    def test_aztec_4(self):
        rec = run_report(FamilySpec(variant="aztec", n=4), "z")
        assert rec.invariant_factors == ["2", "4", "8", "16"]
        assert rec.oracle_check == "holds"

    def test_box_222_laurent(self):
        rec = run_report(FamilySpec(variant="ppbox", a=2, b=2, c=2), "laurent")
        two_q2 = q_integer(2).substitute_q_power(2)
        assert [parse_laurent(s) for s in rec.invariant_factors] == [
            two_q2, two_q2 * q_integer(5)
        ]
        assert rec.round_verdict == "holds"
        assert rec.squarefree_verdict == "holds"
        assert rec.oracle_check == "holds"

    def test_impossible_oracle(self):
        spec = FamilySpec(variant="ppbox-impossible", a=2, b=2, c=2,
                          group="tau", wrong_parity=True)
        rec = run_report(spec, "z")
        assert rec.oracle_check in ("holds", "skipped")

    def test_q0_specialization(self):
        rec = run_report(FamilySpec(variant="ppbox", a=2, b=2, c=2), "z@q0", q0=-1)
        assert rec.invariant_factors == ["2", "2"]

    def test_qpoly_ring(self):
        rec = run_report(FamilySpec(variant="ppbox", a=1, b=1, c=2), "qpoly")
        assert rec.free_rank == 0


class TestConjectureSuites:
    def test_round_small(self):
        verdicts = conjecture_suite("round", 4)
        assert verdicts
        by = {}
        for v in verdicts:
            by[v.verdict] = by.get(v.verdict, 0) + 1
        boxes = [v for v in verdicts if v.instance["label"].startswith("M(1,1,1;q)")]
        assert boxes and all(v.verdict == "holds" for v in boxes)

    def test_deterministic(self):
        a = [(v.instance["label"], v.verdict) for v in conjecture_suite("round", 4)]
        b = [(v.instance["label"], v.verdict) for v in conjecture_suite("round", 4)]
        assert a == b

    def test_qm1_covers_every_tuple(self):
        verdicts = conjecture_suite("q-minus-one", 4)
        assert verdicts
        for v in verdicts:
            assert v.verdict in ("holds", "fails", "inconclusive", "skipped")
            if v.verdict == "fails":
                assert v.witness


class TestReportDeterminism:
    def test_byte_identical_modulo_duration(self):
        spec = FamilySpec(variant="ppbox", a=2, b=2, c=2)
        a = run_report(spec, "z").to_json()
        b = run_report(spec, "z").to_json()
        a.pop("duration")
        b.pop("duration")
        assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)

    def test_seed_independent_invariants(self):
        spec = FamilySpec(variant="ppbox-quotient", a=2, b=2, c=2, group="tau")
        seen = set()
        for seed in (0, 1, 4):
            M, kind, _ = family_matrix_for_ring(spec, "z", tree_seed=seed)
            assert kind == "A"
            from kasteleyn.matrices import stable_invariants

            seen.add(stable_invariants(M))
        assert len(seen) == 1


class TestVerify:
    def test_aztec_base_case(self):
        summary, failures = verify_theorems("aztec", 1)
        assert summary["failed"] == 0 and failures == []

    def test_jt_small(self):
        summary, failures = verify_theorems("jt", 3)
        assert summary["failed"] == 0


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestCli:
    def test_snf_example(self, capsys):
        code, out, _ = run_cli(
            ["snf", "--family", "ppbox", "--a", "2", "--b", "2", "--c", "2",
             "--ring", "z"], capsys)
        assert code == 0
        data = json.loads(out)
        assert data["invariant_factors"] == ["2", "10"]

    def test_oracle_example(self, capsys):
        code, out, _ = run_cli(
            ["oracle", "--family", "aztec", "--n", "3"], capsys)
        assert code == 0
        assert json.loads(out)["count"] == 64

    def test_verify_exit_zero(self, capsys):
        code, out, _ = run_cli(
            ["verify", "--which", "aztec", "--max-n", "4", "--format", "text"],
            capsys)
        assert code == 0

    def test_usage_error_exit_two(self, capsys):
        code, _, _ = run_cli(["snf", "--ring", "bogus"], capsys)
        assert code == 2

    def test_domain_error_exit_two(self, capsys):
        code, _, err = run_cli(
            ["build", "--family", "ppbox", "--a", "0", "--b", "1", "--c", "1"],
            capsys)
        assert code == 2
        assert "error" in err

    def test_build_roundtrip(self, capsys):
        code, out, _ = run_cli(
            ["build", "--family", "ppbox", "--a", "1", "--b", "1", "--c", "1"],
            capsys)
        assert code == 0
        G = load_graph(out)
        assert G.n_vertices == 6

    def test_matrix_roundtrip(self, capsys):
        code, out, _ = run_cli(
            ["matrix", "--family", "ppbox", "--a", "1", "--b", "1", "--c", "1",
             "--ring", "laurent", "--q-mode", "cube"], capsys)
        assert code == 0
        M = parse_matrix(out)
        assert M.rows == 3 and M.ring == "laurent"

    def test_report_csv(self, capsys):
        code, out, _ = run_cli(
            ["report", "--family", "ppbox", "--a", "1", "--b", "1", "--c", "2",
             "--ring", "z", "--format", "csv"], capsys)
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0].startswith("variant,")
        assert len(lines) == 2

    def test_conjecture_json(self, capsys):
        code, out, _ = run_cli(
            ["conjecture", "--id", "sqfree", "--ceiling", "3"], capsys)
        assert code == 0
        data = json.loads(out)
        assert all("verdict" in row for row in data)

    def test_out_file(self, tmp_path, capsys):
        path = tmp_path / "g.json"
        code, _, _ = run_cli(
            ["build", "--family", "aztec", "--n", "1", "--out", str(path)],
            capsys)
        assert code == 0
        assert load_graph(path.read_text()).n_vertices == 4

    def test_coker_free_rank(self, capsys):
        code, out, _ = run_cli(
            ["coker", "--family", "ppbox-impossible", "--a", "1", "--b", "1",
             "--c", "1", "--group", "kappa"], capsys)
        assert code == 0
        data = json.loads(out)
        assert data["free_rank"] >= 1

    def test_oracle_guard_env(self, capsys, monkeypatch):
        monkeypatch.setenv("KASTELEYN_ORACLE_GUARD", "4")
        code, _, err = run_cli(["oracle", "--family", "aztec", "--n", "2"], capsys)
        assert code == 2
        assert "guard" in err

    def test_console_script_help(self):
        out = subprocess.run(
            [sys.executable, "-m", "kasteleyn.cli", "--help"],
            capture_output=True, text=True,
        )
        assert out.returncode == 0
        assert "snf" in out.stdout
