#!/usr/bin/env python3
"""
End-to-end checks for the Eisenstein Module Verifier

Runs the unit tests, then drives the eisv command line through a passing
PGL2 run, the perturbation self-test and the configuration error path.
Pass --slow to include the SL3 runs.
"""

import json
import subprocess
import sys
import tempfile
from pathlib import Path


class EndToEndTester:
    """Runs the CLI scenarios and records pass/fail per scenario"""

    def __init__(self, slow: bool = False):
        self.slow = slow
        self.workdir = Path(tempfile.mkdtemp(prefix="eisv-"))
        self.test_results = {}

    def eisv(self, *args):
        return subprocess.run([sys.executable, "-m", "src.main", *args], capture_output=True, text=True)

    def record(self, name, success, detail=""):
        self.test_results[name] = success
        if success:
            print(f"✅ {name} passed")
        else:
            print(f"❌ {name} failed {detail}")

    def run_all_tests(self):
        """Run all end-to-end checks"""
        print("🧪 Starting end-to-end checks...")

        self.test_unit_suite()
        self.test_pgl2_run()
        self.test_perturbation()
        self.test_config_errors()
        self.test_emit_relations()
        if self.slow:
            self.test_sl3_run()

        self.print_results()
        return all(self.test_results.values())

    def test_unit_suite(self):
        print("🔍 Running unit tests...")
        args = [sys.executable, "-m", "pytest", "-q"]
        if not self.slow:
            args += ["-m", "not slow"]
        result = subprocess.run(args)
        self.record("unit_tests", result.returncode == 0)

    def test_pgl2_run(self):
        print("🔍 Verifying PGL2...")
        out = self.workdir / "pgl2.json"
        result = self.eisv("verify", "--group", "pgl2", "--out", str(out), "--markdown", str(self.workdir / "pgl2.md"))
        success = result.returncode == 0 and out.exists()
        if success:
            summary = json.loads(out.read_text())["summary"]
            print(f"   summary: {summary}")
            success = summary["FAIL"] == 0
        self.record("pgl2_verify", success, result.stderr[-500:])

    def test_perturbation(self):
        print("🔍 Perturbing a golden cell dimension...")
        out = self.workdir / "perturbed.json"
        result = self.eisv("verify", "--group", "pgl2", "--suite", "eismod", "--perturb", "eismod.pgl2.cell.1,0",
                           "--out", str(out))
        success = result.returncode == 1 and out.exists()
        if success:
            claims = {c["claim_id"]: c["status"] for c in json.loads(out.read_text())["claims"]}
            success = claims.get("eismod.pgl2.cell.1,0") == "FAIL"
        self.record("perturbation_detected", success, result.stderr[-500:])

    def test_config_errors(self):
        print("🔍 Checking configuration errors...")
        self.record("invalid_group", self.eisv("verify", "--group", "gl3").returncode == 2)
        self.record("invalid_q", self.eisv("verify", "--group", "pgl2", "--q", "6").returncode == 2)

    def test_emit_relations(self):
        print("🔍 Emitting relations...")
        result = self.eisv("emit-relations", "--group", "sl3", "--points", "4")
        success = result.returncode == 0
        if success:
            payload = json.loads(result.stdout)
            success = payload["sites"] == ["0", "1", "inf", "p3"] and len(payload["generators"]) > 0
        self.record("emit_relations", success, result.stderr[-500:])

    def test_sl3_run(self):
        print("🔍 Verifying SL3 (slow)...")
        out = self.workdir / "sl3.json"
        result = self.eisv("verify", "--group", "sl3", "--out", str(out))
        self.record("sl3_verify", result.returncode == 0, result.stderr[-500:])

    def print_results(self):
        """Print test results summary"""
        print("\n📊 Test Results Summary:")
        print("=" * 50)

        passed = sum(1 for result in self.test_results.values() if result)
        for test_name, result in self.test_results.items():
            status = "✅ PASS" if result else "❌ FAIL"
            print(f"{test_name:30} {status}")

        print("=" * 50)
        print(f"Total: {passed}/{len(self.test_results)} checks passed")
        print(f"Reports in {self.workdir}")

        if passed == len(self.test_results):
            print("🎉 All checks passed!")
        else:
            print("⚠️  Some checks failed!")


if __name__ == "__main__":
    tester = EndToEndTester(slow="--slow" in sys.argv[1:])
    success = tester.run_all_tests()
    sys.exit(0 if success else 1)
