"""
Tensor powers of the affine Hecke algebra, one factor per marked point
"""

import logging
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from src.coeffs.laurent import LaurentScalar, Number
from src.hecke.algebra import ONE, HeckeAlgebra, HeckeElt, add_into, hecke_algebra
from src.models.errors import AffineSupportError, ConfigError, RootDatumError
from src.rootdata.affine_weyl import AffineWeylElt
from src.rootdata.root_datum import RootDatum, WeylElt


logger = logging.getLogger(__name__)

TensorKey = Tuple[AffineWeylElt, ...]
FiniteKey = Tuple[WeylElt, ...]

_SITE_TOKEN = re.compile(r"inf|p\d+|\d")


@dataclass(frozen=True)
class Sites:
    """Marked points, labelled 0, 1, inf, p3, p4, ..."""
    labels: Tuple[str, ...]

    @classmethod
    def standard(cls, count: int) -> "Sites":
        if count < 1:
            raise ConfigError(f"need at least one marked point, got {count}")
        base = ["0", "1", "inf"][:count]
        base.extend(f"p{k}" for k in range(3, count))
        return cls(tuple(base))

    def __len__(self) -> int:
        return len(self.labels)

    def index(self, label: Union[str, int]) -> int:
        if isinstance(label, int):
            if not 0 <= label < len(self.labels):
                raise ConfigError(f"no site {label}")
            return label
        label = "inf" if label in ("∞", "oo") else label
        if label not in self.labels:
            raise ConfigError(f"no site {label!r} among {self.labels}")
        return self.labels.index(label)

    def subset(self, which: Union[str, Iterable]) -> Tuple[int, ...]:
        """Site indices of a selector such as '01', '1inf', 'S' or an iterable of labels"""
        if isinstance(which, str):
            if which == "S":
                return tuple(range(len(self.labels)))
            tokens = _SITE_TOKEN.findall(which.replace("∞", "inf"))
            if "".join(tokens) != which.replace("∞", "inf"):
                raise ConfigError(f"bad site selector {which!r}")
            which = tokens
        return tuple(sorted({self.index(s) for s in which}))

    def complement(self, indices: Iterable[int]) -> Tuple[int, ...]:
        drop = set(indices)
        return tuple(i for i in range(len(self.labels)) if i not in drop)

    def name(self, indices: Iterable[int]) -> str:
        indices = tuple(indices)
        if len(indices) == len(self.labels) and len(self.labels) > 1:
            return "S"
        return "".join(self.labels[i] for i in indices)


class TensorElt:
    """Finite combination of pure tensors T_{x_0} (x) ... (x) T_{x_{N-1}}"""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: "TensorAlgebra", terms: Optional[Mapping[TensorKey, LaurentScalar]] = None):
        self.algebra = algebra
        self.terms: Dict[TensorKey, LaurentScalar] = {k: c for k, c in (terms or {}).items() if c}

    def _check(self, other: "TensorElt") -> None:
        if other.algebra is not self.algebra and (
            other.algebra.datum != self.algebra.datum or len(other.algebra.sites) != len(self.algebra.sites)
        ):
            raise RootDatumError("tensor elements over different algebras")

    def __add__(self, other: "TensorElt") -> "TensorElt":
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            add_into(out, k, c)
        return TensorElt(self.algebra, out)

    def __neg__(self) -> "TensorElt":
        return TensorElt(self.algebra, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "TensorElt") -> "TensorElt":
        return self + (-other)

    def scale(self, c: Union[LaurentScalar, Number]) -> "TensorElt":
        c = LaurentScalar.coerce(c)
        return TensorElt(self.algebra, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, TensorElt):
            self._check(other)
            return self.algebra.mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorElt):
            return NotImplemented
        return self.algebra.datum == other.algebra.datum and self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def is_finite(self) -> bool:
        group = self.algebra.hecke.group
        return all(group.is_finite(x) for key in self.terms for x in key)

    def finite_terms(self) -> Dict[FiniteKey, LaurentScalar]:
        """Coordinates in the basis of (H^fin)^(x)N"""
        if not self.is_finite():
            raise AffineSupportError("element has translation parts; use quotient verification")
        return {tuple(x.w for x in key): c for key, c in self.terms.items()}

    def serialize(self) -> List[Dict[str, object]]:
        algebra = self.algebra
        items = []
        for key, c in self.terms.items():
            words = {
                algebra.sites.labels[s]: algebra.hecke.word_string(x)
                for s, x in enumerate(key)
                if x != algebra.hecke.group.one
            }
            items.append({"sites": words, "coeff": str(c)})
        items.sort(key=lambda d: (sum(len(w) for w in d["sites"].values()), sorted(d["sites"].items())))
        return items

    def __repr__(self) -> str:
        body = " + ".join(
            f"({d['coeff']})" + "".join(f"T[{w}]^{s}" for s, w in d["sites"].items()) for d in self.serialize()
        )
        return f"TensorElt({body or '0'})"


class TensorAlgebra:
    """H^(x)N with sitewise multiplication"""

    def __init__(self, datum: RootDatum, num_points: int = 3):
        self.datum = datum
        self.sites = Sites.standard(num_points)
        self.hecke: HeckeAlgebra = hecke_algebra(datum)
        self._product_cache: Dict[Tuple[AffineWeylElt, AffineWeylElt], Dict[AffineWeylElt, LaurentScalar]] = {}
        one = self.hecke.group.one
        self._unit_key: TensorKey = tuple([one] * len(self.sites))

    # constructors

    def one(self) -> TensorElt:
        return TensorElt(self, {self._unit_key: ONE})

    def zero(self) -> TensorElt:
        return TensorElt(self)

    def scalar(self, c: Union[LaurentScalar, Number]) -> TensorElt:
        return self.one().scale(c)

    def local(self, site: Union[str, int], a: HeckeElt) -> TensorElt:
        """a placed at one site"""
        s = self.sites.index(site)
        out: Dict[TensorKey, LaurentScalar] = {}
        for x, c in a.terms.items():
            key = list(self._unit_key)
            key[s] = x
            out[tuple(key)] = c
        return TensorElt(self, out)

    def weyl(self, w: Union[str, WeylElt]) -> WeylElt:
        return self.datum.weyl_from_name(w) if isinstance(w, str) else tuple(w)

    def t(self, which: Union[str, Iterable], w: Union[str, WeylElt]) -> TensorElt:
        """T_w placed at every selected site"""
        x = self.hecke.group.finite(self.weyl(w))
        key = list(self._unit_key)
        for s in self.sites.subset(which):
            key[s] = x
        return TensorElt(self, {tuple(key): ONE})

    def monomial(self, words: Mapping[str, Union[str, WeylElt]]) -> TensorElt:
        """Pure tensor of finite basis elements, e.g. {'0': 's2', 'inf': 's1s2'}"""
        key = list(self._unit_key)
        for label, w in words.items():
            key[self.sites.index(label)] = self.hecke.group.finite(self.weyl(w))
        return TensorElt(self, {tuple(key): ONE})

    def finite(self, terms: Mapping[FiniteKey, LaurentScalar]) -> TensorElt:
        group = self.hecke.group
        return TensorElt(self, {tuple(group.finite(w) for w in ws): c for ws, c in terms.items()})

    def j(self, site: Union[str, int], lam: Sequence[int]) -> TensorElt:
        return self.local(site, self.hecke.j_element(self.datum.canon(lam)))

    def avg(self, which: Union[str, Iterable], i: int) -> TensorElt:
        """Product over the selected sites of Avg_i^s = 1 + T_{s_i}^s"""
        s_i = self.datum.simple_reflection(i)
        result = self.one()
        for s in self.sites.subset(which):
            result = self.mul(result, self.one() + self.t([self.sites.labels[s]], s_i))
        return result

    def reflection_relation(self, i: int, omit_a: Union[str, int], omit_b: Union[str, int]) -> TensorElt:
        """Avg_i^{S - a} - Avg_i^{S - b}"""
        a = self.sites.index(omit_a)
        b = self.sites.index(omit_b)
        return self.avg(self.sites.complement([a]), i) - self.avg(self.sites.complement([b]), i)

    # multiplication

    def _site_product(self, x: AffineWeylElt, y: AffineWeylElt) -> Dict[AffineWeylElt, LaurentScalar]:
        key = (x, y)
        cached = self._product_cache.get(key)
        if cached is None:
            cached = self.hecke.right_mul_basis({x: ONE}, y)
            self._product_cache[key] = cached
        return cached

    def mul(self, a: TensorElt, b: TensorElt) -> TensorElt:
        out: Dict[TensorKey, LaurentScalar] = {}
        for ka, ca in a.terms.items():
            for kb, cb in b.terms.items():
                partial: Dict[TensorKey, LaurentScalar] = {(): ca * cb}
                for x, y in zip(ka, kb):
                    step: Dict[TensorKey, LaurentScalar] = {}
                    for prefix, c in partial.items():
                        for z, e in self._site_product(x, y).items():
                            add_into(step, prefix + (z,), c * e)
                    partial = step
                for k, c in partial.items():
                    add_into(out, k, c)
        return TensorElt(self, out)

    def product(self, factors: Iterable[TensorElt]) -> TensorElt:
        result = self.one()
        for f in factors:
            result = self.mul(result, f)
        return result


@lru_cache(maxsize=None)
def tensor_algebra(datum: RootDatum, num_points: int = 3) -> TensorAlgebra:
    return TensorAlgebra(datum, num_points)
