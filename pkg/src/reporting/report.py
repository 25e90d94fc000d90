"""
Verification reports: assembly, canonical JSON and markdown rendering
"""

import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Sequence

from src.config.config_loader import GoldenTables
from src.models.data_models import ClaimRecord, ClaimStatus, Report, RunConfig, SuiteResult
from src.rootdata.root_datum import RootDatum


logger = logging.getLogger(__name__)


def canonical_json(data: Any) -> str:
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False, default=str)


def artifact_hashes(golden: GoldenTables) -> Dict[str, str]:
    """sha256 of the canonical JSON of each golden table"""
    tables = golden.model_dump(mode="json")
    return {
        name: hashlib.sha256(json.dumps(table, sort_keys=True).encode()).hexdigest()
        for name, table in sorted(tables.items())
    }


def summarize(claims: Sequence[ClaimRecord]) -> Dict[str, int]:
    counts = {status.value: 0 for status in ClaimStatus}
    for claim in claims:
        counts[claim.status.value] += 1
    counts["total"] = len(claims)
    return counts


def build_report(config: RunConfig, datum: RootDatum, results: Sequence[SuiteResult],
                 golden: GoldenTables) -> Report:
    claims: List[ClaimRecord] = [c for result in results for c in result.claims]
    seen = set()
    for claim in claims:
        if claim.claim_id in seen:
            raise ValueError(f"duplicate claim id {claim.claim_id}")
        seen.add(claim.claim_id)
    return Report(
        config=config.model_dump(mode="json"),
        datum={"key": datum.key, "cartan_matrix": datum.cartan_matrix(), "weyl_order": len(datum.weyl)},
        claims=claims,
        summary=summarize(claims),
        artifact_hashes=artifact_hashes(golden),
    )


def report_json(report: Report) -> str:
    return canonical_json(report.model_dump(mode="json")) + "\n"


def write_report(report: Report, path: str) -> Path:
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(report_json(report), encoding="utf-8")
    logger.info(f"Report written to {out}")
    return out


def render_markdown(report: Report) -> str:
    lines = [
        f"# Verification report: {report.datum.get('key', '?')}",
        "",
        " | ".join(f"{k}: {v}" for k, v in report.summary.items()),
        "",
        "| claim | status | statement | certificate |",
        "|---|---|---|---|",
    ]
    for claim in report.claims:
        size = "" if claim.certificate_size is None else str(claim.certificate_size)
        lines.append(f"| `{claim.claim_id}` | {claim.status.value} | {claim.anchor} | {size} |")
    lines += ["", "## Artifacts", ""]
    for name, digest in report.artifact_hashes.items():
        lines.append(f"- {name}: `{digest}`")
    return "\n".join(lines) + "\n"


def write_markdown(report: Report, path: str) -> Path:
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(render_markdown(report), encoding="utf-8")
    logger.info(f"Markdown report written to {out}")
    return out


def dimension_table_markdown(group: str, rows: Sequence[Dict[str, Any]]) -> str:
    """Cell dimensions with their graded pieces, one row per dominant coweight"""
    lines = [
        f"## Cell dimensions for {group}",
        "",
        "| cell | generators | graded pieces | dimension | direct | coupling | golden |",
        "|---|---|---|---|---|---|---|",
    ]
    for row in rows:
        pieces = ", ".join(f"{k}: {v}" for k, v in row["graded_pieces"].items())
        golden = "" if row.get("golden") is None else str(row["golden"])
        lines.append(
            f"| {row['dominant']} | {' '.join(row['generators'])} | {pieces} | {row['graded_dimension']} "
            f"| {row['direct_dimension']} | {row['coupling_rank']} | {golden} |"
        )
    return "\n".join(lines) + "\n"
