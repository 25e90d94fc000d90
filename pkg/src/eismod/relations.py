"""
Defining relations of the Eisenstein module for any number of marked points
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List

from src.coeffs.laurent import LaurentScalar
from src.eismod.tensor import FiniteKey, TensorAlgebra, TensorElt, tensor_algebra
from src.models.errors import ConfigError
from src.rootdata.root_datum import RootDatum


logger = logging.getLogger(__name__)


@dataclass
class RelationGenerator:
    """One generator of the left ideal"""
    kind: str
    name: str
    element: TensorElt
    simple: int = 0

    def finite_terms(self) -> Dict[FiniteKey, LaurentScalar]:
        return self.element.finite_terms()

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "name": self.name, "terms": self.element.serialize()}


def reflection_pairs(algebra: TensorAlgebra) -> List[tuple]:
    """Omitted-point pairs (last, p); for three points Avg^{01} - Avg^{0inf} comes first"""
    n = len(algebra.sites)
    if n < 2:
        return []
    return [(n - 1, p) for p in range(n - 2, -1, -1)]


def reflection_generators(algebra: TensorAlgebra) -> List[RelationGenerator]:
    """Avg_i^{S-a} - Avg_i^{S-b} for every simple root i"""
    sites = algebra.sites
    out = []
    for i in range(1, algebra.datum.n):
        for a, b in reflection_pairs(algebra):
            keep_a = sites.name(sites.complement([a])) or "1"
            keep_b = sites.name(sites.complement([b])) or "1"
            out.append(
                RelationGenerator(
                    kind="reflection",
                    name=f"Avg_{i}^{{{keep_a}}} - Avg_{i}^{{{keep_b}}}",
                    element=algebra.reflection_relation(i, a, b),
                    simple=i,
                )
            )
    return out


def translation_generators(algebra: TensorAlgebra) -> List[RelationGenerator]:
    """J_lam^0 - J_lam^s for s != 0 and lam over plus/minus a lattice basis"""
    d = algebra.datum
    out = []
    for s in range(1, len(algebra.sites)):
        label = algebra.sites.labels[s]
        for b in d.lattice_basis():
            for lam in (b, d.neg(b)):
                out.append(
                    RelationGenerator(
                        kind="translation",
                        name=f"J[{','.join(map(str, lam))}]^0 - J[{','.join(map(str, lam))}]^{label}",
                        element=algebra.j(0, lam) - algebra.j(s, lam),
                    )
                )
    return out


def relation_generators(datum: RootDatum, num_points: int = 3) -> List[RelationGenerator]:
    """Generators of the left ideal defining the module on num_points marked points"""
    if num_points < 1:
        raise ConfigError(f"num_points must be at least 1, got {num_points}")
    algebra = tensor_algebra(datum, num_points)
    gens = translation_generators(algebra) + reflection_generators(algebra)
    logger.debug(f"{datum.key} on {num_points} points: {len(gens)} relation generators")
    return gens


def emit_relations(datum: RootDatum, num_points: int) -> Dict[str, Any]:
    """Serializable generator list"""
    gens = relation_generators(datum, num_points)
    algebra = tensor_algebra(datum, num_points)
    payload: Dict[str, Any] = {
        "group": datum.key,
        "points": num_points,
        "sites": list(algebra.sites.labels),
        "scalar_variable": "v, q = v^2",
        "generators": [g.to_dict() for g in gens],
    }
    if not gens:
        payload["note"] = "a single marked point has no site pairs; the ideal is zero"
    return payload
