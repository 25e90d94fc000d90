"""
Eisenstein Module Verifier - Command-line entry point
"""

import json
import logging
import sys
from typing import List, Optional

import click
import structlog
from dotenv import load_dotenv
from pydantic import ValidationError

from src.config.config_loader import ConfigLoader, GroupConfig
from src.config.settings import Settings, get_settings
from src.eismod.relations import emit_relations
from src.geom.cache import GeometryCache
from src.models.data_models import LinalgMode, RunConfig, SuiteName
from src.models.errors import ConfigError, EisVerifyError, RootDatumError
from src.reporting.report import dimension_table_markdown, report_json, write_markdown, write_report
from src.rootdata.root_datum import parse_group_key
from src.suites.manager import SuiteManager


logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2


def configure_logging(level: str) -> None:
    """Stdlib logging with the service format; structlog events render as key=value through it"""
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[logging.StreamHandler(sys.stderr)],
    )
    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.PositionalArgumentsFormatter(),
            structlog.processors.format_exc_info,
            structlog.processors.KeyValueRenderer(key_order=["event"], sort_keys=True),
        ],
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )


def parse_q_list(text: Optional[str]) -> Optional[List[int]]:
    if not text:
        return None
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise click.BadParameter(f"expected comma-separated integers, got {text!r}") from e


def first_set(*values):
    return next((v for v in values if v is not None), None)


def build_run_config(settings: Settings, group_config: GroupConfig, key: str, q_values: Optional[List[int]] = None,
                     window: Optional[int] = None, box_radius: Optional[int] = None, budget: Optional[int] = None,
                     mode: Optional[str] = None, **options) -> RunConfig:
    """Command-line options first, then the group's YAML entry, then the environment settings"""
    return RunConfig(
        group=key,
        q_values=q_values or group_config.q_values or settings.geometry.q_values,
        window=first_set(window, group_config.membership.window, settings.verify.window),
        box_radius=first_set(box_radius, settings.verify.box_radius),
        budget=first_set(budget, settings.geometry.budget),
        mode=mode or settings.linalg.mode,
        **options,
    )


def config_error(message: str) -> None:
    logger.error(message)
    click.echo(f"config error: {message}", err=True)
    sys.exit(EXIT_CONFIG)


@click.group()
@click.option("--log-level", default=None, help="Override EISV_LOG_LEVEL")
def cli(log_level: Optional[str]):
    """Verify algebraic Eisenstein module claims for affine Hecke algebras"""
    load_dotenv()
    configure_logging(log_level or get_settings().log_level)


@cli.command()
@click.option("--group", required=True, help="pgl2, sl3, sln:n or pgln:n")
@click.option("--suite", "suites", multiple=True, type=click.Choice([s.value for s in SuiteName]),
              default=("all",), show_default=True)
@click.option("--q", "q_text", default=None, help="Comma-separated field sizes, e.g. 2,3")
@click.option("--window", type=int, default=None, help="Membership search window radius")
@click.option("--box-radius", type=int, default=None, help="Coweight box for property checks")
@click.option("--budget", type=int, default=None, help="Enumeration budget (states x generators)")
@click.option("--mode", type=click.Choice([m.value for m in LinalgMode]), default=None)
@click.option("--out", default=None, help="JSON report path (stdout when omitted)")
@click.option("--markdown", default=None, help="Markdown report path")
@click.option("--regenerate-golden", is_flag=True, help="Write computed values back to golden.yaml")
@click.option("--perturb", default=None, help="Claim id whose golden value is perturbed (self-test)")
@click.option("--timings", is_flag=True, help="Record wall times in the report")
def verify(group, suites, q_text, window, box_radius, budget, mode, out, markdown, regenerate_golden, perturb,
           timings):
    """Run verification suites and write the claim report"""
    settings = get_settings()
    manager = SuiteManager(settings)
    try:
        datum = parse_group_key(group)
        group_config = manager.loader.get_group(datum.key)
        config = build_run_config(
            settings, group_config, datum.key,
            q_values=parse_q_list(q_text),
            window=window,
            box_radius=box_radius,
            budget=budget,
            mode=mode,
            suites=list(suites),
            out=out,
            markdown=markdown,
            perturb=perturb,
            timings=timings,
        )
        report = manager.run(config, regenerate_golden=regenerate_golden)
    except (ValidationError, ConfigError, RootDatumError) as e:
        config_error(str(e))
        return

    if out:
        write_report(report, out)
    else:
        click.echo(report_json(report), nl=False)
    if markdown:
        write_markdown(report, markdown)
    summary = ", ".join(f"{k}={v}" for k, v in report.summary.items())
    click.echo(f"{report.datum['key']}: {summary}", err=True)
    sys.exit(EXIT_FAIL if report.failed else EXIT_PASS)


@cli.command("dim-table")
@click.option("--group", required=True)
@click.option("--mode", type=click.Choice([m.value for m in LinalgMode]), default=None)
def dim_table(group, mode):
    """Print the cell-dimension table in markdown"""
    manager = SuiteManager(get_settings())
    try:
        rows = manager.dimension_table(group, LinalgMode(mode) if mode else None)
    except (ConfigError, RootDatumError) as e:
        config_error(str(e))
        return
    click.echo(dimension_table_markdown(group, rows), nl=False)
    mismatched = [r for r in rows if r["golden"] is not None and r["golden"] != r["graded_dimension"]]
    sys.exit(EXIT_FAIL if mismatched else EXIT_PASS)


@cli.command("emit-relations")
@click.option("--group", required=True)
@click.option("--points", type=int, default=3, show_default=True)
@click.option("--out", default=None, help="Output path (stdout when omitted)")
def emit_relations_command(group, points, out):
    """Write the defining relations for a number of marked points"""
    try:
        payload = emit_relations(parse_group_key(group), points)
    except (ConfigError, RootDatumError) as e:
        config_error(str(e))
        return
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if out:
        with open(out, "w") as f:
            f.write(text)
        logger.info(f"Wrote {len(payload['generators'])} generators to {out}")
    else:
        click.echo(text, nl=False)


@cli.group()
def cache():
    """Manage the on-disk orbit cache"""


@cache.command("list")
def cache_list():
    for entry in GeometryCache().entries():
        click.echo(f"{entry['file']}  {entry['cell']}  orbits={entry['orbits']}  v{entry['version']}  "
                   f"{entry['bytes']}B")


@cache.command("clear")
def cache_clear():
    removed = GeometryCache().clear()
    click.echo(f"removed {removed} entries")


@cache.command("warm")
@click.option("--group", required=True)
@click.option("--q", "q_text", default=None, help="Restrict to these field sizes")
def cache_warm(group, q_text):
    """Enumerate every configured geometry cell not cached yet"""
    try:
        datum = parse_group_key(group)
    except RootDatumError as e:
        config_error(str(e))
        return
    wanted = parse_q_list(q_text)
    group_config = ConfigLoader(get_settings().config_dir).get_group(datum.key)
    cells = []
    for cell in group_config.geometry:
        qs = [q for q in cell.q_values if wanted is None or q in wanted]
        if qs:
            cells.append((datum.canon(cell.dominant), qs))
    try:
        warmed = GeometryCache().warm(datum, cells)
    except EisVerifyError as e:
        logger.error(f"Cache warm failed: {e}")
        click.echo(f"error: {e}", err=True)
        sys.exit(EXIT_FAIL)
    click.echo(f"warmed {len(warmed)} cells")


if __name__ == "__main__":
    cli()
