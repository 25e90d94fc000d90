from pathlib import Path

import pytest
from pydantic import ValidationError

from src.config.config_loader import ConfigLoader, GoldenTables, GroupConfig
from src.config.settings import GeometrySettings, LinalgSettings, Settings
from src.geom.cache import GeometryCache
from src.models.data_models import LinalgMode, RunConfig, SuiteName, SuiteResult
from src.rootdata.root_datum import parse_group_key
from src.suites.base import SuiteContext


CONFIG_DIR = Path(__file__).resolve().parent.parent / "config"


class TestConfigLoader:
    """YAML group configuration and golden tables"""

    def test_groups(self):
        """Configured groups parse with their cells and geometry"""
        loader = ConfigLoader(str(CONFIG_DIR))
        sl3 = loader.get_group("sl3")
        assert sl3.q_values == [3, 4]
        assert [0, 0, 0] in sl3.cells
        assert sl3.geometry[0].dominant == [0, 0, 0]
        assert loader.get_group("pgl2").membership.max_j_sites == 3

    def test_unlisted_group_gets_defaults(self):
        """Unknown keys fall back to defaults"""
        group = ConfigLoader(str(CONFIG_DIR)).get_group("pgln:4")
        assert group.key == "pgln:4"
        assert group.cells == []

    def test_golden_tables(self):
        """Dimensions, orbit counts and finite products"""
        golden = ConfigLoader(str(CONFIG_DIR)).load_golden()
        assert golden.dimension("pgl2", (1, 0)) == 9
        assert golden.dimension("sl3", (0, 0, 0)) == 69
        assert golden.orbit_counts["sl3"]["0,0,0"][4] == 73
        assert golden.cusp[3] == 3
        assert "s1*s1" in golden.finite_products
        assert len(golden.triples["sl3"]) == 69
        assert len({tuple(t) for t in golden.triples["sl3"]}) == 69

    def test_missing_directory(self, tmp_path):
        """No files means empty configuration"""
        loader = ConfigLoader(str(tmp_path))
        assert loader.load_groups() == {}
        assert loader.load_golden() == GoldenTables()

    def test_save_golden(self, tmp_path):
        """Saved tables load back unchanged"""
        golden = ConfigLoader(str(CONFIG_DIR)).load_golden()
        loader = ConfigLoader(str(tmp_path))
        loader.save_golden(golden)
        assert loader.load_golden() == golden

    def test_validation(self):
        """The shipped configuration validates cleanly"""
        errors = ConfigLoader(str(CONFIG_DIR)).validate_configuration()
        assert errors == {"groups": [], "golden": []}

    def test_short_triple_reported(self, tmp_path):
        """Relative-position triples need three entries"""
        loader = ConfigLoader(str(tmp_path))
        loader.save_golden(GoldenTables(dimensions={"sl3": {"0,0,0": 69}}, triples={"sl3": [["s1", "s1"]]}))
        assert loader.validate_configuration()["golden"] == ["sl3: every relative-position triple needs three entries"]


class TestRunConfig:
    """Validation of run parameters"""

    def test_defaults(self):
        """All suites in dependency order"""
        config = RunConfig(group="SL3")
        assert config.group == "sl3"
        assert config.selected_suites() == [
            SuiteName.ROOTDATA, SuiteName.COEFFS, SuiteName.HECKE, SuiteName.EISMOD, SuiteName.GEOM
        ]

    def test_suite_selection_keeps_order(self):
        """Selected suites run in dependency order"""
        config = RunConfig(group="pgl2", suites=["geom", "rootdata"])
        assert config.selected_suites() == [SuiteName.ROOTDATA, SuiteName.GEOM]

    def test_q_values(self):
        """Prime powers only, sorted and deduplicated"""
        assert RunConfig(group="pgl2", q_values=[4, 2, 4]).q_values == [2, 4]
        assert RunConfig(group="pgl2", q_values=[9, 8, 5]).q_values == [5, 8, 9]
        with pytest.raises(ValidationError):
            RunConfig(group="pgl2", q_values=[6])
        with pytest.raises(ValidationError):
            RunConfig(group="pgl2", q_values=[1])

    def test_bad_group(self):
        """Unknown group keys are rejected"""
        with pytest.raises(ValidationError):
            RunConfig(group="gl3")

    def test_negative_window(self):
        """Windows are non-negative"""
        with pytest.raises(ValidationError):
            RunConfig(group="pgl2", window=-1)


class TestSettings:
    """Environment settings"""

    def test_linalg_mode_from_environment(self, monkeypatch):
        """EISV_LINALG_MODE parses into the backend enum"""
        monkeypatch.setenv("EISV_LINALG_MODE", "specialized")
        assert LinalgSettings().mode == LinalgMode.SPECIALIZED
        monkeypatch.setenv("EISV_LINALG_MODE", "fast")
        with pytest.raises(ValidationError):
            LinalgSettings()

    def test_suite_result_errors_not_shared(self):
        """Each suite result starts with its own error list"""
        first = SuiteResult(SuiteName.ROOTDATA, [])
        second = SuiteResult(SuiteName.COEFFS, [])
        first.errors.append("boom")
        assert second.errors == []


class TestGoldenPerturbation:
    """Moving a golden value for the self-test"""

    def make_context(self, tmp_path, perturb):
        return SuiteContext(
            config=RunConfig(group="pgl2", perturb=perturb),
            datum=parse_group_key("pgl2"),
            group=GroupConfig(key="pgl2"),
            golden=GoldenTables(),
            settings=Settings(),
            cache=GeometryCache(GeometrySettings(cache_dir=str(tmp_path))),
        )

    def test_integer_value(self, tmp_path):
        """Integers move by one, only for the targeted claim"""
        context = self.make_context(tmp_path, "eismod.pgl2.cell.1,0")
        assert context.expected("eismod.pgl2.cell.0,0", 5) == 5
        assert not context.perturb_applied
        assert context.expected("eismod.pgl2.cell.1,0", 9) == 10
        assert context.perturb_applied

    def test_finite_product(self, tmp_path):
        """The first coefficient of a product moves by one"""
        context = self.make_context(tmp_path, "hecke.sl3.product.s1*s1")
        value = [{"word": "s1", "coeff": "v^2 - 1"}, {"word": "1", "coeff": "v^2"}]
        perturbed = context.expected("hecke.sl3.product.s1*s1", value)
        assert perturbed[0]["coeff"] == "v^2"
        assert perturbed[1] == value[1]

    def test_triple_list(self, tmp_path):
        """A list of triples loses its first entry"""
        context = self.make_context(tmp_path, "geom.sl3.triples")
        value = [["1", "1", "1"], ["s1", "s1", "1"]]
        assert context.expected("geom.sl3.triples", value) == [["s1", "s1", "1"]]
        assert context.perturb_applied

    def test_missing_value_untouched(self, tmp_path):
        """Absent golden values stay absent"""
        context = self.make_context(tmp_path, "geom.sl3.cusp.q2")
        assert context.expected("geom.sl3.cusp.q2", None) is None
