"""
Normal form of H^(x)N acting on the Eisenstein generator

Every site factor is rewritten as T_w J_lam; translation relations move all
J-parts onto site 0, so x.Eis becomes a combination of
T^0_{w0} T^1_{w1} ... J_lam . Eis, i.e. a vector of the free
(H^fin)^(x)N-module on the coweight lattice.
"""

import itertools
import logging
from functools import lru_cache
from typing import Any, Dict, Iterator, List, Mapping, Optional, Sequence, Set, Tuple

import numpy as np

from src.coeffs.laurent import LaurentScalar, Number
from src.config.settings import get_settings
from src.eismod.tensor import FiniteKey, TensorAlgebra, TensorElt
from src.hecke.algebra import ONE, Q, add_into
from src.hecke.bernstein import BernTerms, BernsteinEngine, bernstein_engine
from src.hecke.finite import FiniteHecke, finite_hecke
from src.rootdata.affine_weyl import AffineWeylElt
from src.rootdata.root_datum import Coweight, RootDatum, WeylElt


logger = logging.getLogger(__name__)

NFKey = Tuple[FiniteKey, Coweight]
NFTerms = Dict[NFKey, LaurentScalar]


class NormalFormVec:
    """sum c T^0_{w0} ... T^{N-1}_{w_{N-1}} e_lam with e_lam = J_lam . Eis"""

    __slots__ = ("datum", "terms")

    def __init__(self, datum: RootDatum, terms: Optional[Mapping[NFKey, LaurentScalar]] = None):
        self.datum = datum
        self.terms: NFTerms = {k: c for k, c in (terms or {}).items() if c}

    def __add__(self, other: "NormalFormVec") -> "NormalFormVec":
        out = dict(self.terms)
        for k, c in other.terms.items():
            add_into(out, k, c)
        return NormalFormVec(self.datum, out)

    def __neg__(self) -> "NormalFormVec":
        return NormalFormVec(self.datum, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "NormalFormVec") -> "NormalFormVec":
        return self + (-other)

    def scale(self, c) -> "NormalFormVec":
        c = LaurentScalar.coerce(c)
        return NormalFormVec(self.datum, {k: c * v for k, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, NormalFormVec):
            return NotImplemented
        return self.datum == other.datum and self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def labels(self) -> Set[Coweight]:
        return {lam for _, lam in self.terms}

    def at_label(self, lam: Coweight) -> Dict[FiniteKey, LaurentScalar]:
        return {ws: c for (ws, mu), c in self.terms.items() if mu == lam}

    def serialize(self) -> List[Dict[str, str]]:
        d = self.datum
        out = []
        for (ws, lam), c in sorted(self.terms.items(), key=lambda t: (t[0][1], [d.weyl_length(w) for w in t[0][0]])):
            out.append(
                {
                    "words": ",".join(d.weyl_name(w) for w in ws),
                    "lambda": ",".join(map(str, lam)),
                    "coeff": str(c),
                }
            )
        return out

    def __repr__(self) -> str:
        body = " + ".join(f"({e['coeff']})[{e['words']}]e[{e['lambda']}]" for e in self.serialize())
        return f"NormalFormVec({body or '0'})"


class NormalFormEngine:
    """The map x -> x.Eis and the left action of finite Hecke operators on its image"""

    def __init__(self, tensor: TensorAlgebra):
        self.tensor = tensor
        self.datum: RootDatum = tensor.datum
        self.num_sites = len(tensor.sites)
        self.bernstein: BernsteinEngine = bernstein_engine(self.datum)
        self.finite: FiniteHecke = finite_hecke(self.datum)
        self._j_finite_cache: Dict[Tuple[Coweight, WeylElt], BernTerms] = {}
        self._length = {w: self.datum.weyl_length(w) for w in self.datum.weyl}

    # reduction

    def site_form(self, x: AffineWeylElt) -> BernTerms:
        return self.bernstein.basis_form(x)

    def _combine(self, coeff: LaurentScalar, forms: Sequence[Mapping], out: NFTerms) -> None:
        d = self.datum
        for combo in itertools.product(*(f.items() for f in forms)):
            c = coeff
            lam = d.zero()
            ws = []
            for (w, mu), e in combo:
                c = c * e
                lam = d.add(lam, mu)
                ws.append(w)
            add_into(out, (tuple(ws), lam), c)

    def reduce(self, x: TensorElt) -> NormalFormVec:
        """Coordinates of x.Eis on the spanning set"""
        out: NFTerms = {}
        for key, c in x.terms.items():
            self._combine(c, [self.site_form(xs) for xs in key], out)
        return NormalFormVec(self.datum, out)

    def j_times_finite(self, kappa: Coweight, w: WeylElt) -> BernTerms:
        """J_kappa T_w in the T_u J_mu basis"""
        key = (kappa, w)
        cached = self._j_finite_cache.get(key)
        if cached is None:
            cached = self.bernstein.right_mul_finite({(self.datum.identity, kappa): ONE}, w)
            self._j_finite_cache[key] = cached
        return cached

    def instance(self, kappas: Sequence[Coweight], relation: Mapping[FiniteKey, LaurentScalar]) -> NormalFormVec:
        """(J^0_{k0} ... J^{N-1}_{k_{N-1}}) r . Eis for a finite element r"""
        out: NFTerms = {}
        for ws, c in relation.items():
            self._combine(c, [self.j_times_finite(k, w) for k, w in zip(kappas, ws)], out)
        return NormalFormVec(self.datum, out)

    def lift(self, vec: NormalFormVec) -> TensorElt:
        """sum c T^0_{w0} J^0_lam T^1_{w1} ... , an element reducing to vec"""
        t = self.tensor
        out = t.zero()
        for (ws, lam), c in vec.terms.items():
            factors = [t.t([0], ws[0]), t.j(0, lam)] + [t.t([s], w) for s, w in enumerate(ws) if s]
            out = out + t.product(factors).scale(c)
        return out

    def is_spanning_vector(self, vec: NormalFormVec) -> bool:
        """Every key is a tuple of finite Weyl elements, one per site, with a canonical coweight"""
        d = self.datum
        weyl = set(d.weyl)
        return all(
            len(ws) == self.num_sites and all(w in weyl for w in ws) and d.canon(lam) == lam
            for ws, lam in vec.terms
        )

    # left action of (H^fin)^(x)N

    def left_mul_generator(self, terms: Mapping[NFKey, LaurentScalar], site: int, i: int) -> NFTerms:
        d = self.datum
        s = d.simple_reflection(i)
        out: NFTerms = {}
        for (ws, lam), c in terms.items():
            w = ws[site]
            sw = d.compose(s, w)
            moved = (ws[:site] + (sw,) + ws[site + 1:], lam)
            if self._length[sw] > self._length[w]:
                add_into(out, moved, c)
            else:
                add_into(out, (ws, lam), c * (Q - 1))
                add_into(out, moved, c * Q)
        return out

    def left_mul_basis(self, ws: FiniteKey, vec: NormalFormVec) -> NormalFormVec:
        """T^0_{w0} ... T^{N-1}_{w_{N-1}} . vec"""
        terms: NFTerms = dict(vec.terms)
        for site, w in enumerate(ws):
            for i in reversed(self.datum.weyl_word(w)):
                terms = self.left_mul_generator(terms, site, i)
        return NormalFormVec(self.datum, terms)

    def left_mul(self, coeff: Mapping[FiniteKey, LaurentScalar], vec: NormalFormVec) -> NormalFormVec:
        out: NFTerms = {}
        for ws, c in coeff.items():
            for k, e in self.left_mul_basis(ws, vec).terms.items():
                add_into(out, k, c * e)
        return NormalFormVec(self.datum, out)

    def monomial_layers(
        self, vec: NormalFormVec, max_depth: Optional[int] = None
    ) -> Iterator[List[Tuple[FiniteKey, NormalFormVec]]]:
        """Products m.vec over finite monomials m, grouped by total length of m

        Each m.vec is obtained from a shorter one by a single generator, so
        every layer costs one generator application per product.
        """
        d = self.datum
        layer: Dict[FiniteKey, NFTerms] = {tuple([d.identity] * self.num_sites): vec.terms}
        depth = 0
        while layer:
            yield [(m, NormalFormVec(d, terms)) for m, terms in sorted(layer.items())]
            depth += 1
            if max_depth is not None and depth > max_depth:
                return
            nxt: Dict[FiniteKey, NFTerms] = {}
            for m, terms in layer.items():
                for site in range(self.num_sites):
                    for i in range(1, d.n):
                        sw = d.compose(d.simple_reflection(i), m[site])
                        if self._length[sw] < self._length[m[site]]:
                            continue
                        m2 = m[:site] + (sw,) + m[site + 1:]
                        if m2 not in nxt:
                            nxt[m2] = self.left_mul_generator(terms, site, i)
            layer = nxt

    def unit(self, ws: FiniteKey, lam: Coweight, coeff: Number = 1) -> NormalFormVec:
        return NormalFormVec(self.datum, {(tuple(ws), self.datum.canon(lam)): LaurentScalar.coerce(coeff)})


@lru_cache(maxsize=None)
def normal_form_engine(tensor: TensorAlgebra) -> NormalFormEngine:
    return NormalFormEngine(tensor)


def spanning_check(tensor: TensorAlgebra, radius: int = 1, pairs: int = 8, seed: Optional[int] = None) -> Dict[str, Any]:
    """Spot-check reduce on random pairs (m, x)

    x is a product of T^s_w J^s_mu over all sites with mu in the box of the
    given radius, m a finite monomial. Checked: reduce(x) lies on the spanning
    set, reduce(lift(reduce(x))) = reduce(x), and reduce(m.x) equals both
    reduce(m.lift(reduce(x))) and m acting on reduce(x).
    """
    d = tensor.datum
    engine = normal_form_engine(tensor)
    rng = np.random.default_rng(get_settings().linalg.seed if seed is None else seed)
    weyl = sorted(d.weyl)
    box = d.box(radius)
    n = len(tensor.sites)
    failures: List[Dict[str, Any]] = []
    for k in range(pairs):
        ws = [weyl[int(i)] for i in rng.integers(0, len(weyl), n)]
        mus = [box[int(i)] for i in rng.integers(0, len(box), n)]
        us = [weyl[int(i)] for i in rng.integers(0, len(weyl), n)]
        x = tensor.product([tensor.mul(tensor.t([s], ws[s]), tensor.j(s, mus[s])) for s in range(n)])
        m = tensor.finite({tuple(us): ONE})
        vec = engine.reduce(x)
        lifted = engine.lift(vec)
        acted = engine.reduce(tensor.mul(m, x))
        checks = {
            "spanning": engine.is_spanning_vector(vec),
            "idempotent": engine.reduce(lifted) == vec,
            "well_defined": engine.reduce(tensor.mul(m, lifted)) == acted,
            "left_action": engine.left_mul({tuple(us): ONE}, vec) == acted,
        }
        if not all(checks.values()):
            failures.append({
                "pair": k,
                "x": [f"{d.weyl_name(w)}*J{list(mu)}" for w, mu in zip(ws, mus)],
                "m": [d.weyl_name(u) for u in us],
                **checks,
            })
    logger.info(f"Spanning check on {d.key}: {pairs - len(failures)}/{pairs} pairs consistent")
    return {"radius": radius, "pairs": pairs, "units_per_label": len(weyl) ** n, "failures": failures}
