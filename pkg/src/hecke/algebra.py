"""
Extended affine Hecke algebra in the Iwahori-Matsumoto basis
"""

import logging
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Union

from src.coeffs.laurent import LaurentScalar, Number
from src.models.errors import RootDatumError
from src.rootdata.affine_weyl import AffineWeylElt, AffineWeylGroup, affine_weyl_group
from src.rootdata.root_datum import Coweight, RootDatum, WeylElt


logger = logging.getLogger(__name__)

Q = LaurentScalar.q(1)
Q_INV = LaurentScalar.q(-1)
ONE = LaurentScalar.one()

Terms = Dict[AffineWeylElt, LaurentScalar]


def add_into(out: Dict, key, coeff: LaurentScalar) -> None:
    """out[key] += coeff, dropping zeros"""
    nv = out.get(key)
    nv = coeff if nv is None else nv + coeff
    if nv:
        out[key] = nv
    else:
        out.pop(key, None)


class HeckeElt:
    """Finite combination of basis elements T_x"""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: "HeckeAlgebra", terms: Optional[Mapping[AffineWeylElt, LaurentScalar]] = None):
        self.algebra = algebra
        self.terms: Terms = {x: c for x, c in (terms or {}).items() if c}

    def _check(self, other: "HeckeElt") -> None:
        if other.algebra.datum != self.algebra.datum:
            raise RootDatumError(f"Hecke elements of {self.algebra.datum.key} and {other.algebra.datum.key}")

    def __add__(self, other: "HeckeElt") -> "HeckeElt":
        self._check(other)
        out = dict(self.terms)
        for x, c in other.terms.items():
            add_into(out, x, c)
        return HeckeElt(self.algebra, out)

    def __neg__(self) -> "HeckeElt":
        return HeckeElt(self.algebra, {x: -c for x, c in self.terms.items()})

    def __sub__(self, other: "HeckeElt") -> "HeckeElt":
        return self + (-other)

    def scale(self, c: Union[LaurentScalar, Number]) -> "HeckeElt":
        c = LaurentScalar.coerce(c)
        return HeckeElt(self.algebra, {x: c * v for x, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, HeckeElt):
            self._check(other)
            return self.algebra.mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, HeckeElt):
            return NotImplemented
        return self.algebra.datum == other.algebra.datum and self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def serialize(self) -> List[Dict[str, str]]:
        """Sorted by (length, word)"""
        items = [(self.algebra.word_string(x), x, c) for x, c in self.terms.items()]
        items.sort(key=lambda t: (self.algebra.group.length(t[1]), t[0]))
        return [{"word": word, "coeff": str(c)} for word, _, c in items]

    def __repr__(self) -> str:
        body = " + ".join(f"({d['coeff']})T[{d['word']}]" for d in self.serialize())
        return f"HeckeElt({body or '0'})"


class HeckeAlgebra:
    """Multiplication, inversion and translation elements J_lam"""

    def __init__(self, datum: RootDatum):
        self.datum = datum
        self.group: AffineWeylGroup = affine_weyl_group(datum)
        self._inverse_cache: Dict[AffineWeylElt, HeckeElt] = {}
        self._j_cache: Dict[Coweight, HeckeElt] = {}

    # basis

    def one(self) -> HeckeElt:
        return HeckeElt(self, {self.group.one: ONE})

    def zero(self) -> HeckeElt:
        return HeckeElt(self)

    def basis(self, x: AffineWeylElt) -> HeckeElt:
        return HeckeElt(self, {x: ONE})

    def finite_basis(self, w: WeylElt) -> HeckeElt:
        return self.basis(self.group.finite(w))

    def generator(self, i: int) -> HeckeElt:
        return self.basis(self.group.simple_affine(i))

    def scalar(self, c: Union[LaurentScalar, Number]) -> HeckeElt:
        return self.one().scale(c)

    def word_string(self, x: AffineWeylElt) -> str:
        if self.group.is_finite(x):
            return self.datum.weyl_name(x.w)
        omega, word = self.group.reduced_word(x)
        prefix = ""
        if omega != self.group.one:
            prefix = f"w{self.group.omega_elements().index(omega)}"
        return prefix + "".join(f"s{i}" for i in word)

    # multiplication

    def right_mul_generator(self, terms: Mapping[AffineWeylElt, LaurentScalar], i: int) -> Terms:
        """(sum c T_z) * T_{s_i}"""
        s = self.group.simple_affine(i)
        out: Terms = {}
        for z, c in terms.items():
            zs = self.group.mul(z, s)
            if self.group.length(zs) > self.group.length(z):
                add_into(out, zs, c)
            else:
                add_into(out, z, c * (Q - 1))
                add_into(out, zs, c * Q)
        return out

    def right_mul_basis(self, terms: Mapping[AffineWeylElt, LaurentScalar], y: AffineWeylElt) -> Terms:
        omega, word = self.group.reduced_word(y)
        current: Terms = {self.group.mul(x, omega): c for x, c in terms.items()}
        for i in word:
            current = self.right_mul_generator(current, i)
        return current

    def mul(self, a: HeckeElt, b: HeckeElt) -> HeckeElt:
        out: Terms = {}
        for y, cy in b.terms.items():
            for x, c in self.right_mul_basis(a.terms, y).items():
                add_into(out, x, c * cy)
        return HeckeElt(self, out)

    def product(self, factors: Iterable[HeckeElt]) -> HeckeElt:
        result = self.one()
        for f in factors:
            result = self.mul(result, f)
        return result

    # inverses and translations

    def generator_inverse(self, terms: Mapping[AffineWeylElt, LaurentScalar], i: int) -> Terms:
        """(sum c T_z) * T_{s_i}^{-1}, with T_s^{-1} = q^-1 T_s + (q^-1 - 1)"""
        out: Terms = {}
        for z, c in self.right_mul_generator(terms, i).items():
            add_into(out, z, c * Q_INV)
        for z, c in terms.items():
            add_into(out, z, c * (Q_INV - 1))
        return out

    def invert_basis(self, x: AffineWeylElt) -> HeckeElt:
        cached = self._inverse_cache.get(x)
        if cached is not None:
            return cached
        omega, word = self.group.reduced_word(x)
        current: Terms = {self.group.one: ONE}
        for i in reversed(word):
            current = self.generator_inverse(current, i)
        omega_inv = self.group.inverse(omega)
        current = {self.group.mul(z, omega_inv): c for z, c in current.items()}
        result = HeckeElt(self, current)
        self._inverse_cache[x] = result
        return result

    def j_element_from(self, lam1: Coweight, lam2: Coweight) -> HeckeElt:
        """(T_{t_-lam1})^-1 T_{t_-lam2} for dominant lam1, lam2"""
        d = self.datum
        t1 = self.group.translation(d.neg(lam1))
        t2 = self.group.translation(d.neg(lam2))
        return HeckeElt(self, self.right_mul_basis(self.invert_basis(t1).terms, t2))

    def j_element(self, lam: Coweight) -> HeckeElt:
        lam = self.datum.canon(lam)
        cached = self._j_cache.get(lam)
        if cached is not None:
            return cached
        d = self.datum
        if d.is_antidominant(lam):
            result = self.basis(self.group.translation(lam))
        else:
            c = max(0, max(-d.pair(d.simple_root(i), lam) for i in range(1, d.n)))
            shift = d.scale(c, d.rho)
            result = self.j_element_from(d.add(lam, shift), shift)
        self._j_cache[lam] = result
        return result


@lru_cache(maxsize=None)
def hecke_algebra(datum: RootDatum) -> HeckeAlgebra:
    return HeckeAlgebra(datum)
