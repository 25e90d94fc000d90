"""
Extended affine Weyl group W x| Lambda with length function and reduced words
"""

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

from src.models.errors import InternalConsistencyError, RootDatumError
from src.rootdata.root_datum import Coweight, RootDatum, WeylElt


logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class AffineWeylElt:
    """t_lam * w"""
    lam: Coweight
    w: WeylElt

    def __str__(self) -> str:
        return f"t{list(self.lam)}*{list(self.w)}"


class AffineWeylGroup:
    """Extended affine Weyl group of a root datum

    Multiplication is (l1, w1)(l2, w2) = (l1 + w1.l2, w1 w2). Simple affine
    generators are indexed 0..n-1, with s_0 = t_theta s_theta.
    """

    def __init__(self, datum: RootDatum):
        self.datum = datum
        self.one = AffineWeylElt(datum.zero(), datum.identity)
        self._generators: Dict[int, AffineWeylElt] = {
            i: AffineWeylElt(datum.zero(), datum.simple_reflection(i)) for i in range(1, datum.n)
        }
        self._generators[0] = AffineWeylElt(datum.theta_coroot(), datum.reflection(datum.theta))
        self._length_cache: Dict[AffineWeylElt, int] = {}
        self._word_cache: Dict[AffineWeylElt, Tuple[AffineWeylElt, Tuple[int, ...]]] = {}
        self._omega: List[AffineWeylElt] = []

    @property
    def generator_indices(self) -> List[int]:
        return list(range(self.datum.n))

    def simple_affine(self, i: int) -> AffineWeylElt:
        if i not in self._generators:
            raise RootDatumError(f"no simple affine generator {i} in {self.datum.key}")
        return self._generators[i]

    def translation(self, lam: Coweight) -> AffineWeylElt:
        return AffineWeylElt(self.datum.canon(lam), self.datum.identity)

    def finite(self, w: WeylElt) -> AffineWeylElt:
        return AffineWeylElt(self.datum.zero(), tuple(w))

    def is_finite(self, x: AffineWeylElt) -> bool:
        return x.lam == self.datum.zero()

    def mul(self, x: AffineWeylElt, y: AffineWeylElt) -> AffineWeylElt:
        d = self.datum
        return AffineWeylElt(d.add(x.lam, d.weyl_act(x.w, y.lam)), d.compose(x.w, y.w))

    def inverse(self, x: AffineWeylElt) -> AffineWeylElt:
        d = self.datum
        w_inv = d.w_inverse(x.w)
        return AffineWeylElt(d.neg(d.weyl_act(w_inv, x.lam)), w_inv)

    def from_word(self, omega: AffineWeylElt, word: Sequence[int]) -> AffineWeylElt:
        x = omega
        for i in word:
            x = self.mul(x, self.simple_affine(i))
        return x

    def length(self, x: AffineWeylElt) -> int:
        """Number of affine hyperplanes separating the base alcove from its image"""
        cached = self._length_cache.get(x)
        if cached is not None:
            return cached
        d = self.datum
        w_inv = d.w_inverse(x.w)
        total = 0
        for root in d.positive_roots():
            p = d.pair(root, x.lam)
            if d.is_positive(d.root_image(w_inv, root)):
                total += abs(p)
            else:
                total += abs(p - 1)
        self._length_cache[x] = total
        return total

    def reduced_word(self, x: AffineWeylElt) -> Tuple[AffineWeylElt, Tuple[int, ...]]:
        """x = omega * s_{i1} ... s_{ik} with k = length(x)"""
        cached = self._word_cache.get(x)
        if cached is not None:
            return cached
        tail: List[int] = []
        y = x
        current = self.length(y)
        while current > 0:
            for i in self.generator_indices:
                ys = self.mul(y, self._generators[i])
                if self.length(ys) < current:
                    tail.append(i)
                    y = ys
                    current -= 1
                    break
            else:
                raise InternalConsistencyError(f"no descent found for {x} at length {current}")
        result = (y, tuple(reversed(tail)))
        self._word_cache[x] = result
        return result

    def omega_elements(self) -> List[AffineWeylElt]:
        """Length-zero elements, one per class of the lattice modulo coroots"""
        if not self._omega:
            d = self.datum
            found = []
            for bits in itertools.product((0, 1), repeat=d.n):
                try:
                    lam = d.canon(bits)
                except RootDatumError:
                    continue
                for w in d.weyl:
                    x = AffineWeylElt(lam, w)
                    if self.length(x) == 0 and x not in found:
                        found.append(x)
            if self.one not in found:
                found.append(self.one)
            self._omega = sorted(found)
            logger.debug(f"{d.key}: |Omega| = {len(self._omega)}")
        return self._omega


@lru_cache(maxsize=None)
def affine_weyl_group(datum: RootDatum) -> AffineWeylGroup:
    return AffineWeylGroup(datum)
