"""
Base interface for claim suites
"""

import logging
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

import structlog

from src.coeffs.laurent import LaurentScalar
from src.config.config_loader import GoldenTables, GroupConfig
from src.config.settings import Settings
from src.geom.cache import GeometryCache
from src.models.data_models import ClaimRecord, ClaimStatus, RunConfig, SuiteName, SuiteResult
from src.models.errors import BudgetExceededError, MissingCellError
from src.rootdata.root_datum import RootDatum


logger = logging.getLogger(__name__)
events = structlog.stdlib.get_logger(__name__)


@dataclass
class ClaimOutcome:
    """What a claim check hands back to the suite"""
    status: ClaimStatus
    details: Dict[str, Any] = field(default_factory=dict)
    certificate_size: Optional[int] = None


def outcome(holds: bool, details: Optional[Dict[str, Any]] = None,
            certificate_size: Optional[int] = None) -> ClaimOutcome:
    return ClaimOutcome(ClaimStatus.PASS if holds else ClaimStatus.FAIL, details or {}, certificate_size)


@dataclass
class Claim:
    claim_id: str
    anchor: str
    check: Callable[[], ClaimOutcome]


@dataclass
class SuiteContext:
    """Everything a suite reads: validated run config, datum, group config and golden tables"""
    config: RunConfig
    datum: RootDatum
    group: GroupConfig
    golden: GoldenTables
    settings: Settings
    cache: GeometryCache
    # golden-table entries computed during the run, for --regenerate-golden
    observed: Dict[Tuple[str, ...], Any] = field(default_factory=dict)
    perturb_applied: bool = False

    def perturbed(self, claim_id: str) -> bool:
        if self.config.perturb == claim_id:
            self.perturb_applied = True
            return True
        return False

    def expected(self, claim_id: str, value: Any) -> Any:
        """Golden value, with one coefficient moved when this claim is the perturbation target"""
        if value is None or not self.perturbed(claim_id):
            return value
        logger.warning(f"Perturbing golden value of {claim_id}")
        if isinstance(value, int):
            return value + 1
        if isinstance(value, list) and value and isinstance(value[0], dict) and "coeff" in value[0]:
            first = dict(value[0])
            first["coeff"] = str(LaurentScalar.parse(first["coeff"]) + 1)
            return [first] + list(value[1:])
        if isinstance(value, list) and value and isinstance(value[0], list):
            return list(value[1:])
        raise ValueError(f"cannot perturb golden value of type {type(value).__name__}")

    def observe(self, key: Tuple[str, ...], value: Any) -> None:
        self.observed[key] = value


class ClaimSuite(ABC):
    """Base class for all claim suites"""

    name: SuiteName

    def __init__(self, context: SuiteContext):
        self.context = context
        self.datum = context.datum
        self.config = context.config

    @abstractmethod
    def claims(self) -> List[Claim]:
        """Claims that apply to the configured datum, in report order"""
        pass

    def run_claim(self, claim: Claim) -> ClaimRecord:
        """Run one check; budget refusals become SKIPPED and any other error FAIL"""
        start = time.perf_counter()
        try:
            result = claim.check()
        except BudgetExceededError as e:
            logger.warning(f"Claim {claim.claim_id} skipped: {e}")
            result = ClaimOutcome(ClaimStatus.SKIPPED, {"reason": str(e), "estimate": e.estimate, "budget": e.budget})
        except MissingCellError as e:
            logger.error(f"Claim {claim.claim_id} needs cells {e.missing}: {e}")
            result = ClaimOutcome(ClaimStatus.FAIL, {"error": str(e), "missing_cells": e.missing})
        except Exception as e:
            logger.error(f"Claim {claim.claim_id} raised {type(e).__name__}: {e}")
            result = ClaimOutcome(ClaimStatus.FAIL, {"error": f"{type(e).__name__}: {e}"})
        elapsed = time.perf_counter() - start
        events.info("claim_finished", suite=self.name.value, claim_id=claim.claim_id,
                    status=result.status.value, seconds=round(elapsed, 3))
        return ClaimRecord(
            claim_id=claim.claim_id,
            anchor=claim.anchor,
            status=result.status,
            details=result.details,
            certificate_size=result.certificate_size,
            wall_time=round(elapsed, 3) if self.config.timings else None,
        )

    def run(self) -> SuiteResult:
        records: List[ClaimRecord] = []
        errors: List[str] = []
        try:
            claims = self.claims()
        except Exception as e:
            logger.error(f"Error building claims of suite {self.name.value}: {e}")
            return SuiteResult(self.name, [], [str(e)])
        events.info("suite_started", suite=self.name.value, group=self.datum.key, claims=len(claims))
        for claim in claims:
            record = self.run_claim(claim)
            records.append(record)
            if record.status == ClaimStatus.FAIL and "error" in record.details:
                errors.append(f"{claim.claim_id}: {record.details['error']}")
        return SuiteResult(self.name, records, errors)
