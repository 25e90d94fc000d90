"""
Spans of geometric Eisenstein functions and the cuspidal complement
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from src.coeffs.laurent import LaurentScalar
from src.coeffs.matrix import ModularEchelon, specialization_points
from src.config.settings import get_settings
from src.geom.cache import GeometryCache
from src.geom.eisenstein import GeometryContext, eis_vector
from src.models.data_models import cell_key
from src.rootdata.root_datum import Coweight, RootDatum, parse_group_key


logger = logging.getLogger(__name__)


@dataclass
class SpanResult:
    group: str
    cells: List[Coweight]
    q: int
    dimension: int
    ambient: int
    samples: List[int] = field(default_factory=list)

    @property
    def agreed(self) -> bool:
        return len(set(self.samples)) <= 1

    def to_dict(self) -> Dict[str, Any]:
        return {
            "group": self.group,
            "cells": [cell_key(c) for c in self.cells],
            "q": self.q,
            "dimension": self.dimension,
            "ambient": self.ambient,
            "samples": self.samples,
            "agreed": self.agreed,
        }


def _mod_vector(values: Sequence[Fraction], p: int) -> np.ndarray:
    return np.array([v.numerator * pow(v.denominator, -1, p) % p for v in values], dtype=np.int64)


def _row(vec: np.ndarray) -> Dict[int, LaurentScalar]:
    return {int(i): LaurentScalar.from_int(int(vec[i])) for i in np.flatnonzero(vec)}


def krylov_dimension(seeds: Sequence[Sequence[Fraction]], operators: Sequence[np.ndarray], p: int) -> int:
    """Dimension mod p of the smallest operator-stable subspace containing the seeds"""
    echelon = ModularEchelon(p, 1)
    pending = [_mod_vector(s, p) for s in seeds]
    while pending:
        vec = pending.pop()
        if not vec.any() or echelon.add_rows([_row(vec)]) == 0:
            continue
        for op in operators:
            pending.append((op @ vec) % p)
    return echelon.rank


def span_of_cells(datum: RootDatum, cells: Sequence[Coweight], q: int,
                  context: Optional[GeometryContext] = None) -> SpanResult:
    """Span of Eis_mu, mu over the W-orbits of the cells, closed under every Avg"""
    cells = [datum.dominant_representative(c) for c in cells]
    context = context or GeometryContext(datum, q, cells)
    seeds = []
    for lam in cells:
        for mu in sorted(datum.orbit(lam)):
            seeds.append(eis_vector(context, mu).vector())
    operators = [context.block_operator("avg", site, i) for site in range(3) for i in range(1, datum.n)]
    samples = [krylov_dimension(seeds, operators, p) for p, _ in specialization_points(get_settings().linalg, 2)]
    result = SpanResult(datum.key, list(cells), q, max(samples), context.dimension, samples)
    if not result.agreed:
        logger.warning(f"Span dimensions disagree across primes: {samples}")
    logger.info(f"Eisenstein span of {[cell_key(c) for c in cells]} over F_{q}: {result.dimension}"
                f" in {result.ambient} orbits")
    return result


def eis_span_dimension(datum: RootDatum, dominant: Coweight, q: int,
                       context: Optional[GeometryContext] = None) -> int:
    return span_of_cells(datum, [dominant], q, context).dimension


@dataclass
class CuspResult:
    q: int
    orbits: Dict[str, int]
    span_dimension: int
    cusp_dimension: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "q": self.q,
            "orbits": self.orbits,
            "span_dimension": self.span_dimension,
            "cusp_dimension": self.cusp_dimension,
        }


def cusp_report(q: int, cache: Optional[GeometryCache] = None) -> CuspResult:
    """Functions on the trivial and rho bundle types orthogonal to both Eisenstein cells, for SL3"""
    datum = parse_group_key("sl3")
    cells = [datum.zero(), datum.rho]
    context = GeometryContext(datum, q, cells, cache)
    span = span_of_cells(datum, cells, q, context)
    orbits = {cell_key(nu): len(context.tables[nu]) for nu in context.types}
    # the weights 1/|Stab| make the pairing nondegenerate, so the complement has codimension dim(span)
    cusp = context.dimension - span.dimension
    logger.info(f"Cuspidal dimension over F_{q}: {cusp} ({orbits}, span {span.dimension})")
    return CuspResult(q, orbits, span.dimension, cusp)


def cusp_dimension(q: int, cache: Optional[GeometryCache] = None) -> int:
    return cusp_report(q, cache).cusp_dimension
