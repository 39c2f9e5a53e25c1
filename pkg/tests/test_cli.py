"""End-to-end CLI behavior: exit codes, fixtures, determinism."""

import json
import subprocess
import sys

FIX = "fixtures"


def run(*args):
    return subprocess.run([sys.executable, "-m", "domkit", *args],
                          capture_output=True, text=True)


class TestCheck:
    def test_valid_poset(self):
        r = run("check", f"{FIX}/two-chain.poset")
        assert r.returncode == 0
        assert "ok" in r.stdout

    def test_validation_failure_is_exit_two(self):
        r = run("check", f"{FIX}/not-transitive.poset")
        assert r.returncode == 2
        assert "but not" in r.stdout  # transitivity witness

    def test_missing_reflexivity_reported(self):
        r = run("check", f"{FIX}/bad-reflexive.json")
        assert r.returncode == 2
        assert "missing" in r.stdout

    def test_unreadable_is_exit_one(self):
        r = run("check", "no/such/file.poset")
        assert r.returncode == 1

    def test_multiple_files_worst_code_wins(self):
        r = run("check", f"{FIX}/two-chain.poset", f"{FIX}/bad-antisymmetric.poset")
        assert r.returncode == 2


class TestBilimit:
    def test_partial_empty_start_apex_size_one(self):
        r = run("bilimit", f"{FIX}/partial-empty-start")
        assert r.returncode == 0
        assert "apex size: 1" in r.stdout

    def test_total_fixture(self):
        r = run("--format", "json", "bilimit", f"{FIX}/total-two-chain")
        assert r.returncode == 0
        payload = json.loads(r.stdout)
        assert payload["apex_size"] == 2
        assert payload["ok"]

    def test_broken_functoriality_exit_two(self):
        r = run("bilimit", f"{FIX}/broken-functoriality")
        assert r.returncode == 2

    def test_dot_export(self):
        r = run("--format", "dot", "bilimit", f"{FIX}/total-two-chain")
        assert r.returncode == 0
        assert r.stdout.startswith("digraph")


class TestVerify:
    def test_small_runs_pass(self):
        for mode in ("total", "partial"):
            r = run("verify", "--mode", mode, "--seed", "1", "--count", "3")
            assert r.returncode == 0, r.stdout
            assert "pass 3/3" in r.stdout

    def test_internal_mode(self):
        r = run("verify", "--mode", "internal", "--seed", "1", "--count", "2")
        assert r.returncode == 0, r.stdout

    def test_count_zero_vacuous_pass(self):
        r = run("verify", "--count", "0")
        assert r.returncode == 0
        assert "pass 0/0" in r.stdout

    def test_degenerate_generator_bounds_still_pass(self):
        r = run("verify", "--seed", "2", "--count", "3", "--max-obj", "1")
        assert r.returncode == 0
        assert "pass 3/3" in r.stdout

    def test_budget_cap_fails_solve_with_hint(self, tmp_path):
        r = run("--budget", "2", "solve", "fixtures/arrow-domain.domain")
        assert r.returncode == 2
        assert "budget" in r.stderr

    def test_byte_identical_reports(self):
        a = run("--format", "json", "verify", "--mode", "total",
                "--seed", "9", "--count", "5")
        b = run("--format", "json", "verify", "--mode", "total",
                "--seed", "9", "--count", "5")
        assert a.returncode == b.returncode == 0
        assert a.stdout == b.stdout

    def test_json_report_shape(self):
        r = run("--format", "json", "verify", "--seed", "3", "--count", "2")
        payload = json.loads(r.stdout)
        assert payload["summary"] == {"pass": 2, "fail": 0}
        assert len(payload["cases"]) == 2
        for case in payload["cases"]:
            assert {c["cone"] for c in case["cones"]} >= {"own", "top"}


class TestSolve:
    def test_lift_domain(self):
        r = run("solve", f"{FIX}/lift-domain.domain")
        assert r.returncode == 0
        assert "sizes: 0,1,2,3,4" in r.stdout

    def test_arrow_domain(self):
        r = run("solve", f"{FIX}/arrow-domain.domain")
        assert r.returncode == 0
        assert "sizes: 2,3,10" in r.stdout

    def test_no_starter_exit_two(self, tmp_path):
        f = tmp_path / "bad.domain"
        f.write_text("domain D = X -> X\nbase 0\nmode total\ndepth 2\n")
        r = run("solve", str(f))
        assert r.returncode == 2
        assert "hint" in r.stderr

    def test_depth_override(self):
        r = run("solve", f"{FIX}/lift-domain.domain", "--depth", "2")
        assert "sizes: 0,1,2" in r.stdout


class TestOmegabar:
    def test_depth_four(self):
        r = run("omegabar", "--depth", "4")
        assert r.returncode == 0
        assert "sizes: 0,1,2,3,4" in r.stdout
        assert "top->top pass" in r.stdout


class TestExport:
    def test_poset_to_dot(self, tmp_path):
        out = tmp_path / "d.dot"
        r = run("--format", "dot", "--out", str(out), "export",
                f"{FIX}/diamond.poset")
        assert r.returncode == 0
        assert out.read_text().startswith("digraph")

    def test_poset_to_json_round_trip(self, tmp_path):
        out = tmp_path / "p.json"
        r = run("--format", "json", "--out", str(out), "export",
                f"{FIX}/two-chain.poset")
        assert r.returncode == 0
        payload = json.loads(out.read_text())
        assert payload["elements"] == ["c0", "c1"]

    def test_diagram_to_dot_of_apex(self):
        r = run("--format", "dot", "export", f"{FIX}/partial-empty-start")
        assert r.returncode == 0
        assert "digraph" in r.stdout
