import shutil
from pathlib import Path

import pytest

from src.config.config_loader import ConfigLoader
from src.config.settings import GeometrySettings, Settings
from src.models.data_models import ClaimRecord, ClaimStatus, RunConfig, SuiteName, SuiteResult
from src.models.errors import ConfigError
from src.reporting.report import artifact_hashes, build_report, render_markdown, report_json
from src.rootdata.root_datum import parse_group_key
from src.suites.eismod_suite import EisModSuite
from src.suites.manager import SuiteManager


CONFIG_DIR = Path(__file__).resolve().parent.parent / "config"


@pytest.fixture
def manager(tmp_path):
    config_dir = tmp_path / "config"
    shutil.copytree(CONFIG_DIR, config_dir)
    settings = Settings(config_dir=str(config_dir), geometry=GeometrySettings(cache_dir=str(tmp_path / "cache")))
    return SuiteManager(settings)


def record(claim_id, status):
    return ClaimRecord(claim_id=claim_id, anchor="statement", status=status)


class TestSuiteManager:
    """Running suites and assembling the report"""

    def test_light_suites_pass(self, manager):
        """Root data and coefficient claims all pass for PGL2"""
        report = manager.run(RunConfig(group="pgl2", suites=["rootdata", "coeffs"]))
        assert report.claims
        assert report.summary["FAIL"] == 0
        assert not report.failed
        assert all(c.claim_id.split(".")[0] in ("rootdata", "coeffs") for c in report.claims)
        assert report.datum["weyl_order"] == 2

    def test_claim_ids_are_stable(self, manager):
        """Two runs produce the same claim ids in the same order"""
        config = RunConfig(group="pgl2", suites=["rootdata"])
        first = [c.claim_id for c in manager.run(config).claims]
        second = [c.claim_id for c in manager.run(config).claims]
        assert first == second
        assert "rootdata.pgl2.omega" in first

    def test_no_wall_times_by_default(self, manager):
        """Wall times only appear with timings enabled"""
        report = manager.run(RunConfig(group="pgl2", suites=["rootdata"]))
        assert all(c.wall_time is None for c in report.claims)
        timed = manager.run(RunConfig(group="pgl2", suites=["rootdata"], timings=True))
        assert all(c.wall_time is not None for c in timed.claims)

    def test_perturb_with_regenerate_rejected(self, manager):
        """The self-test never writes golden tables"""
        config = RunConfig(group="pgl2", suites=["rootdata"], perturb="eismod.pgl2.cell.0,0")
        with pytest.raises(ConfigError):
            manager.run(config, regenerate_golden=True)

    def test_regenerate_golden(self, manager):
        """Observed values are merged into the golden tables"""
        context = manager.create_context(RunConfig(group="pgl2", suites=["eismod"]))
        context.observe(("dimensions", "pgl2", "5,0"), 8)
        context.observe(("orbit_counts", "pgl2", "5,0", "2"), 8)
        manager.regenerate_golden(context)
        golden = manager.loader.load_golden()
        assert golden.dimensions["pgl2"]["5,0"] == 8
        assert golden.dimensions["pgl2"]["1,0"] == 9
        assert golden.orbit_counts["pgl2"]["5,0"][2] == 8

    def test_suites_run_in_order(self, manager):
        """Claims of earlier suites come first, one suite after the other"""
        report = manager.run(RunConfig(group="pgl2", suites=["coeffs", "rootdata"]))
        prefixes = [c.claim_id.split(".")[0] for c in report.claims]
        assert prefixes == sorted(prefixes, key=["rootdata", "coeffs"].index)
        assert prefixes[0] == "rootdata" and prefixes[-1] == "coeffs"

    def test_rank_evidence_over_budget_is_skipped(self, manager):
        """The SL3 radius-3 window is refused under a small budget and reported SKIPPED"""
        context = manager.create_context(RunConfig(group="sl3", suites=["eismod"], budget=10 ** 6))
        suite = EisModSuite(context)
        claim = next(c for c in suite.claims() if c.claim_id == "eismod.sl3.rank_evidence")
        record = suite.run_claim(claim)
        assert record.status == ClaimStatus.SKIPPED
        assert record.details["budget"] == 10 ** 6


class TestReport:
    """Report assembly and rendering"""

    def make_report(self, claims):
        loader = ConfigLoader(str(CONFIG_DIR))
        results = [SuiteResult(SuiteName.ROOTDATA, claims)]
        return build_report(RunConfig(group="pgl2"), parse_group_key("pgl2"), results, loader.load_golden())

    def test_summary_counts(self):
        """Counts per status plus the total"""
        report = self.make_report([
            record("a", ClaimStatus.PASS),
            record("b", ClaimStatus.UNRESOLVED),
            record("c", ClaimStatus.FAIL),
        ])
        assert report.summary["PASS"] == 1
        assert report.summary["UNRESOLVED"] == 1
        assert report.summary["total"] == 3
        assert report.failed

    def test_unresolved_is_not_failure(self):
        """Only FAIL claims fail a run"""
        report = self.make_report([record("a", ClaimStatus.PASS), record("b", ClaimStatus.UNRESOLVED)])
        assert not report.failed

    def test_duplicate_ids_rejected(self):
        """Claim ids are unique within a report"""
        with pytest.raises(ValueError):
            self.make_report([record("a", ClaimStatus.PASS), record("a", ClaimStatus.FAIL)])

    def test_artifact_hashes_are_deterministic(self):
        """One sha256 per golden table"""
        golden = ConfigLoader(str(CONFIG_DIR)).load_golden()
        hashes = artifact_hashes(golden)
        assert set(hashes) == {"cusp", "dimensions", "finite_products", "orbit_counts", "triples"}
        assert hashes == artifact_hashes(golden.model_copy(deep=True))
        assert all(len(h) == 64 for h in hashes.values())

    def test_rendering(self):
        """JSON is canonical and markdown lists every claim"""
        report = self.make_report([record("rootdata.pgl2.weyl", ClaimStatus.PASS)])
        assert report_json(report) == report_json(report)
        assert report_json(report).endswith("}\n")
        assert "`rootdata.pgl2.weyl` | PASS" in render_markdown(report)
