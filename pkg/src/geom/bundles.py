"""
Split bundles O(a_1) + ... + O(a_n) on P^1 and their automorphisms at the marked points
"""

import logging
from dataclasses import dataclass
from math import prod
from typing import Dict, List, Optional, Tuple

import galois

from src.geom.finite_field import FiniteField
from src.models.data_models import cell_key
from src.models.errors import NonDominantError
from src.rootdata.root_datum import Coweight, RootDatum


logger = logging.getLogger(__name__)

NUM_SITES = 3


def gl_order(m: int, q: int) -> int:
    return prod(q ** m - q ** k for k in range(m))


@dataclass(frozen=True)
class BundleCell:
    """Bundle type with degrees a_1 >= ... >= a_n"""
    group: str
    dominant: Coweight
    q: int

    @property
    def degrees(self) -> Tuple[int, ...]:
        return tuple(self.dominant)

    @property
    def rank(self) -> int:
        return len(self.dominant)

    @property
    def key(self) -> str:
        return f"{self.group}:{cell_key(self.dominant)}:q{self.q}"

    @property
    def is_trivial(self) -> bool:
        return len(set(self.degrees)) == 1

    def blocks(self) -> List[int]:
        """Sizes of the runs of equal degrees"""
        sizes: List[int] = []
        prev = None
        for a in self.degrees:
            if a == prev:
                sizes[-1] += 1
            else:
                sizes.append(1)
            prev = a
        return sizes

    def aut_order(self) -> int:
        """|Aut(E)| modulo scalars"""
        q = self.q
        levi = prod(gl_order(m, q) for m in self.blocks())
        unipotent = 0
        a = self.degrees
        for i in range(self.rank):
            for j in range(self.rank):
                if a[i] > a[j]:
                    unipotent += a[i] - a[j] + 1
        return levi * q ** unipotent // (q - 1)

    def stable_subspaces(self) -> Dict[int, bool]:
        """Whether the span of e_1..e_k is Aut-stable, for k = 1..n-1"""
        a = self.degrees
        return {k: a[k - 1] > a[k] for k in range(1, self.rank)}

    def to_dict(self) -> Dict:
        return {"group": self.group, "dominant": list(self.dominant), "q": self.q, "aut_order": self.aut_order()}


def bundle_cell(datum: RootDatum, dominant: Coweight, q: int) -> BundleCell:
    lam = datum.canon(dominant)
    if not datum.is_dominant(lam):
        raise NonDominantError(f"{lam} is not dominant for {datum.key}")
    return BundleCell(datum.key, lam, q)


@dataclass
class AutGenerator:
    """One automorphism, as its values at the three marked points"""
    name: str
    values: Tuple[galois.FieldArray, ...]


def aut_generators(cell: BundleCell, field: FiniteField) -> List[AutGenerator]:
    """Elementary transvections by monomials times an additive basis, and the torus"""
    n = cell.rank
    a = cell.degrees
    gens: List[AutGenerator] = []
    for i in range(n):
        for j in range(n):
            if i == j or a[i] < a[j]:
                continue
            d = a[i] - a[j]
            for k in range(d + 1):
                # X^k Y^(d-k) at 0, 1, inf
                mono = (1 if k == 0 else 0, 1, 1 if k == d else 0)
                for c in field.additive_generators():
                    values = []
                    for site in range(NUM_SITES):
                        g = field.identity(n)
                        g[i, j] = c * mono[site]
                        values.append(g)
                    gens.append(AutGenerator(f"e{i + 1}{j + 1}(x^{k}y^{d - k}*{int(c)})", tuple(values)))
    for i in range(n):
        g = field.identity(n)
        g[i, i] = field.units_generator()
        gens.append(AutGenerator(f"t{i + 1}", (g,) * NUM_SITES))
    logger.debug(f"Automorphism generators of {cell.key}: {len(gens)}")
    return gens


def standard_vector(field: FiniteField, n: int, k: int) -> galois.FieldArray:
    v = field.zeros(n)
    v[k] = 1
    return v


def stable_line(cell: BundleCell, field: FiniteField) -> Optional[galois.FieldArray]:
    return standard_vector(field, cell.rank, 0) if cell.stable_subspaces().get(1) else None


def stable_plane_normal(cell: BundleCell, field: FiniteField) -> Optional[galois.FieldArray]:
    if cell.rank != 3 or not cell.stable_subspaces().get(2):
        return None
    return standard_vector(field, 3, 2)
