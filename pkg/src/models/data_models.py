"""
Data models for the Eisenstein verification engine
"""

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

import galois
from pydantic import BaseModel, Field, field_validator


GROUP_KEY_PATTERN = re.compile(r"^(pgl2|sl3|sln:\d+|pgln:\d+)$")


class GroupKind(str, Enum):
    """Root datum families"""
    SL = "sl"
    PGL = "pgl"


class SuiteName(str, Enum):
    """Claim suites, in dependency order"""
    ROOTDATA = "rootdata"
    COEFFS = "coeffs"
    HECKE = "hecke"
    EISMOD = "eismod"
    GEOM = "geom"
    ALL = "all"


class ClaimStatus(str, Enum):
    """Outcome of a single claim"""
    PASS = "PASS"
    FAIL = "FAIL"
    UNRESOLVED = "UNRESOLVED"
    SKIPPED = "SKIPPED"


class LinalgMode(str, Enum):
    """Linear algebra backend for rank computations"""
    EXACT = "exact"
    SPECIALIZED = "specialized"


class CertificateStatus(str, Enum):
    """Outcome of a quotient membership search"""
    PROVED_ZERO = "PROVED_ZERO"
    UNRESOLVED = "UNRESOLVED"


class RunConfig(BaseModel):
    """Validated configuration of one verification run"""
    group: str = Field(..., description="Root datum key: pgl2, sl3, sln:n or pgln:n")
    suites: List[SuiteName] = Field(default_factory=lambda: [SuiteName.ALL])
    q_values: List[int] = Field(default_factory=lambda: [2, 3], description="Field sizes for geometry")
    window: int = Field(default=2, description="Membership search window radius")
    box_radius: int = Field(default=3, description="Coweight box for property checks")
    budget: int = Field(default=50_000_000, description="Enumeration budget (states x generators)")
    mode: LinalgMode = Field(default=LinalgMode.EXACT)
    out: Optional[str] = Field(None, description="JSON report path")
    markdown: Optional[str] = Field(None, description="Markdown report path")
    perturb: Optional[str] = Field(None, description="Claim id whose golden value is perturbed")
    timings: bool = Field(default=False, description="Record wall times in the report")

    @field_validator("group")
    @classmethod
    def _check_group(cls, value: str) -> str:
        value = value.strip().lower()
        if not GROUP_KEY_PATTERN.match(value):
            raise ValueError(f"unknown group key: {value}")
        return value

    @field_validator("q_values")
    @classmethod
    def _check_q(cls, values: List[int]) -> List[int]:
        for q in values:
            if q < 2 or not galois.is_prime_power(q):
                raise ValueError(f"q must be a prime power, got {q}")
        return sorted(set(values))

    @field_validator("window", "box_radius")
    @classmethod
    def _check_non_negative(cls, value: int) -> int:
        if value < 0:
            raise ValueError("must be non-negative")
        return value

    def selected_suites(self) -> List[SuiteName]:
        if SuiteName.ALL in self.suites:
            return [s for s in SuiteName if s is not SuiteName.ALL]
        order = [s for s in SuiteName if s is not SuiteName.ALL]
        return [s for s in order if s in self.suites]


class ClaimRecord(BaseModel):
    """Result of a single verified claim"""
    claim_id: str = Field(..., description="Stable claim identifier")
    anchor: str = Field(..., description="Short statement of the claimed result")
    status: ClaimStatus = Field(..., description="Claim outcome")
    details: Dict[str, Any] = Field(default_factory=dict)
    certificate_size: Optional[int] = Field(None, description="Number of relation instances used")
    wall_time: Optional[float] = Field(None, description="Seconds, only with timings enabled")


class Report(BaseModel):
    """Full verification report"""
    config: Dict[str, Any] = Field(..., description="Echo of the run configuration")
    datum: Dict[str, Any] = Field(default_factory=dict, description="Root datum key and Cartan matrix")
    claims: List[ClaimRecord] = Field(default_factory=list)
    summary: Dict[str, int] = Field(default_factory=dict)
    artifact_hashes: Dict[str, str] = Field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return any(c.status == ClaimStatus.FAIL for c in self.claims)


@dataclass
class SuiteResult:
    """Claims produced by one suite"""
    suite: SuiteName
    claims: List[ClaimRecord]
    errors: List[str] = field(default_factory=list)


def cell_key(dominant: tuple) -> str:
    """Golden table key of a cell, e.g. '1,0,-1'"""
    return ",".join(str(c) for c in dominant)
