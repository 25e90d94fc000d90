import json

from click.testing import CliRunner

from src.config.config_loader import GroupConfig, MembershipConfig
from src.config.settings import GeometrySettings, Settings, VerifySettings
from src.main import build_run_config, cli


class TestCli:
    """Command-line surface and exit codes"""

    def test_emit_relations(self, tmp_path):
        """Two marked points give two translation and one reflection generator for PGL2"""
        out = tmp_path / "relations.json"
        result = CliRunner().invoke(cli, ["emit-relations", "--group", "pgl2", "--points", "2", "--out", str(out)])
        assert result.exit_code == 0, result.output
        payload = json.loads(out.read_text())
        assert payload["sites"] == ["0", "1"]
        assert [g["kind"] for g in payload["generators"]] == ["translation", "translation", "reflection"]

    def test_emit_relations_single_point(self, tmp_path):
        """One point is accepted and noted"""
        out = tmp_path / "relations.json"
        result = CliRunner().invoke(cli, ["emit-relations", "--group", "sl3", "--points", "1", "--out", str(out)])
        assert result.exit_code == 0
        assert "note" in json.loads(out.read_text())

    def test_emit_relations_zero_points(self):
        """Zero points is a configuration error"""
        result = CliRunner().invoke(cli, ["emit-relations", "--group", "pgl2", "--points", "0"])
        assert result.exit_code == 2

    def test_invalid_group(self):
        """Unknown groups exit with code 2"""
        result = CliRunner().invoke(cli, ["verify", "--group", "gl3"])
        assert result.exit_code == 2

    def test_invalid_field_size(self):
        """q must be a prime power"""
        result = CliRunner().invoke(cli, ["verify", "--group", "pgl2", "--suite", "rootdata", "--q", "6"])
        assert result.exit_code == 2

    def test_verify_light_suites(self, tmp_path):
        """A passing run exits 0 and writes both reports"""
        out = tmp_path / "report.json"
        markdown = tmp_path / "report.md"
        result = CliRunner().invoke(cli, [
            "verify", "--group", "pgl2", "--suite", "rootdata", "--suite", "coeffs",
            "--out", str(out), "--markdown", str(markdown),
        ])
        assert result.exit_code == 0, result.output
        report = json.loads(out.read_text())
        assert report["datum"]["key"] == "pgl2"
        assert report["summary"]["FAIL"] == 0
        assert report["config"]["suites"] == ["rootdata", "coeffs"]
        assert "rootdata.pgl2.weyl" in markdown.read_text()


class TestRunConfigResolution:
    """Options, then the group's YAML entry, then environment settings"""

    SETTINGS = Settings(verify=VerifySettings(window=2), geometry=GeometrySettings(q_values=[5]))

    def test_group_entry_over_environment(self):
        """Configured field sizes and window win over the environment"""
        group = GroupConfig(key="sl3", q_values=[4, 3], membership=MembershipConfig(window=1))
        config = build_run_config(self.SETTINGS, group, "sl3")
        assert config.q_values == [3, 4]
        assert config.window == 1

    def test_environment_fallback(self):
        """Unlisted groups use the environment settings"""
        config = build_run_config(self.SETTINGS, GroupConfig(key="pgln:4"), "pgln:4")
        assert config.q_values == [5]
        assert config.window == 2

    def test_options_first(self):
        """Explicit options win, including a zero window"""
        group = GroupConfig(key="sl3", q_values=[3, 4], membership=MembershipConfig(window=1))
        config = build_run_config(self.SETTINGS, group, "sl3", q_values=[2], window=0)
        assert config.q_values == [2]
        assert config.window == 0
