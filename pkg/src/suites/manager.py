"""
Suite Manager - Runs the claim suites of a verification run
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Type

from src.config.config_loader import ConfigLoader, GoldenTables
from src.config.settings import Settings
from src.eismod.cells import cell_engine, orbit_presentation
from src.geom.cache import GeometryCache
from src.models.data_models import Report, RunConfig, SuiteName, SuiteResult, cell_key
from src.models.errors import ConfigError
from src.reporting.report import build_report
from src.rootdata.root_datum import parse_group_key
from src.suites.base import ClaimSuite, SuiteContext
from src.suites.coeffs_suite import CoeffsSuite
from src.suites.eismod_suite import EisModSuite
from src.suites.geom_suite import GeomSuite
from src.suites.hecke_suite import HeckeSuite
from src.suites.rootdata_suite import RootDataSuite


logger = logging.getLogger(__name__)

SUITES: Dict[SuiteName, Type[ClaimSuite]] = {
    SuiteName.ROOTDATA: RootDataSuite,
    SuiteName.COEFFS: CoeffsSuite,
    SuiteName.HECKE: HeckeSuite,
    SuiteName.EISMOD: EisModSuite,
    SuiteName.GEOM: GeomSuite,
}


class SuiteManager:
    """Builds the shared suite context, runs the selected suites and assembles the report"""

    def __init__(self, settings: Settings, loader: Optional[ConfigLoader] = None):
        self.settings = settings
        self.loader = loader or ConfigLoader(settings.config_dir)

    def create_context(self, config: RunConfig) -> SuiteContext:
        try:
            datum = parse_group_key(config.group)
        except Exception as e:
            raise ConfigError(f"invalid group {config.group}: {e}") from e
        geometry = self.settings.geometry.model_copy(update={"budget": config.budget})
        return SuiteContext(
            config=config,
            datum=datum,
            group=self.loader.get_group(datum.key),
            golden=self.loader.load_golden(),
            settings=self.settings,
            cache=GeometryCache(geometry),
        )

    def _run_suite(self, suite: ClaimSuite) -> SuiteResult:
        logger.info(f"Running suite {suite.name.value} on {suite.datum.key}")
        result = suite.run()
        logger.info(f"Suite {suite.name.value} finished with {len(result.claims)} claims, "
                    f"{len(result.errors)} errors")
        return result

    def run(self, config: RunConfig, regenerate_golden: bool = False) -> Report:
        """Run the selected suites in dependency order and build the report"""
        if regenerate_golden and config.perturb:
            raise ConfigError("--perturb and --regenerate-golden cannot be combined")
        context = self.create_context(config)
        suites = [SUITES[name](context) for name in config.selected_suites()]
        logger.info(f"Verifying {context.datum.key}: suites {[s.name.value for s in suites]}")
        results: List[SuiteResult] = [self._run_suite(s) for s in suites]
        if config.perturb and not context.perturb_applied:
            logger.warning(f"Perturbation target {config.perturb} matched no golden-backed claim")
        if regenerate_golden:
            self.regenerate_golden(context)
        return build_report(config, context.datum, results, context.golden)

    def regenerate_golden(self, context: SuiteContext) -> Path:
        """Merge the values observed in this run into the golden tables and write them back"""
        golden: GoldenTables = context.golden.model_copy(deep=True)
        for key, value in sorted(context.observed.items()):
            kind = key[0]
            if kind == "dimensions":
                golden.dimensions.setdefault(key[1], {})[key[2]] = value
            elif kind == "orbit_counts":
                golden.orbit_counts.setdefault(key[1], {}).setdefault(key[2], {})[int(key[3])] = value
            elif kind == "cusp":
                golden.cusp[int(key[1])] = value
            elif kind == "finite_products":
                golden.finite_products[key[1]] = value
            else:
                logger.warning(f"Ignoring observed value {key}")
        logger.info(f"Regenerating golden tables from {len(context.observed)} observed values")
        return self.loader.save_golden(golden)

    def dimension_table(self, group: str, mode: Optional[Any] = None) -> List[Dict[str, Any]]:
        """Cell dimensions of every configured cell, with the golden value alongside"""
        datum = parse_group_key(group)
        config = self.loader.get_group(datum.key)
        golden = self.loader.load_golden()
        engine = cell_engine(datum)
        rows = []
        for cell in config.cells:
            lam = datum.canon(cell)
            dims = engine.cell_dimension(orbit_presentation(datum, lam), mode)
            rows.append({**dims.to_dict(), "golden": golden.dimension(datum.key, lam)})
            logger.info(f"{datum.key} cell {cell_key(lam)}: {dims.graded_dimension}")
        return rows
