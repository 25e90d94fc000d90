"""
Finite Hecke algebra: precomputed multiplication table on T_w, w in W
"""

import logging
from functools import lru_cache
from typing import Dict, List, Mapping, Tuple

from src.coeffs.laurent import LaurentScalar
from src.hecke.algebra import ONE, Q, Q_INV, add_into, hecke_algebra
from src.rootdata.root_datum import RootDatum, WeylElt


logger = logging.getLogger(__name__)

FiniteTerms = Dict[WeylElt, LaurentScalar]


class FiniteHecke:
    """All |W|^2 products T_w T_v, computed once per datum"""

    def __init__(self, datum: RootDatum):
        self.datum = datum
        self.weyl: List[WeylElt] = list(datum.weyl)
        self._table: Dict[Tuple[WeylElt, WeylElt], FiniteTerms] = {}
        self._inverse: Dict[WeylElt, FiniteTerms] = {}
        self._build()

    def _build(self) -> None:
        algebra = hecke_algebra(self.datum)
        for w in self.weyl:
            left = algebra.finite_basis(w)
            for v in self.weyl:
                prod = algebra.mul(left, algebra.finite_basis(v))
                self._table[(w, v)] = {x.w: c for x, c in prod.terms.items()}
            inv = algebra.invert_basis(algebra.group.finite(w))
            self._inverse[w] = {x.w: c for x, c in inv.terms.items()}
        logger.debug(f"Finite Hecke table for {self.datum.key}: {len(self._table)} products")

    def product(self, w: WeylElt, v: WeylElt) -> FiniteTerms:
        return self._table[(w, v)]

    def inverse(self, w: WeylElt) -> FiniteTerms:
        return self._inverse[w]

    def mul(self, a: Mapping[WeylElt, LaurentScalar], b: Mapping[WeylElt, LaurentScalar]) -> FiniteTerms:
        out: FiniteTerms = {}
        for w, c in a.items():
            for v, d in b.items():
                cd = c * d
                for u, e in self._table[(w, v)].items():
                    add_into(out, u, cd * e)
        return out

    def basis(self, w: WeylElt) -> FiniteTerms:
        return {w: ONE}

    def one(self) -> FiniteTerms:
        return {self.datum.identity: ONE}

    def generator(self, i: int) -> FiniteTerms:
        return {self.datum.simple_reflection(i): ONE}

    def avg(self, i: int) -> FiniteTerms:
        """1 + T_{s_i}"""
        return {self.datum.identity: ONE, self.datum.simple_reflection(i): ONE}

    def generator_inverse(self, i: int) -> FiniteTerms:
        return {self.datum.simple_reflection(i): Q_INV, self.datum.identity: Q_INV - 1}

    def quadratic_holds(self, i: int) -> bool:
        s = self.datum.simple_reflection(i)
        expected = {s: Q - 1, self.datum.identity: Q}
        return self.product(s, s) == expected

    def product_by_names(self, left: str, right: str) -> FiniteTerms:
        d = self.datum
        return self.product(d.weyl_from_name(left), d.weyl_from_name(right))

    def serialize(self, terms: Mapping[WeylElt, LaurentScalar]) -> List[Dict[str, str]]:
        d = self.datum
        items = sorted(terms.items(), key=lambda t: (-d.weyl_length(t[0]), d.weyl_name(t[0])))
        return [{"word": d.weyl_name(w), "coeff": str(c)} for w, c in items]

    def parse(self, entries: List[Dict[str, str]]) -> FiniteTerms:
        out: FiniteTerms = {}
        for entry in entries:
            add_into(out, self.datum.weyl_from_name(entry["word"]), LaurentScalar.parse(entry["coeff"]))
        return out

    def non_additive_pairs(self) -> List[Tuple[WeylElt, WeylElt]]:
        """Pairs (w, v) with l(wv) < l(w) + l(v)"""
        d = self.datum
        return [
            (w, v)
            for w in self.weyl
            for v in self.weyl
            if d.weyl_length(d.compose(w, v)) < d.weyl_length(w) + d.weyl_length(v)
        ]


@lru_cache(maxsize=None)
def finite_hecke(datum: RootDatum) -> FiniteHecke:
    return FiniteHecke(datum)
