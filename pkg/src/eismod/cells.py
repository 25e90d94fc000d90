"""
Per-orbit cells of the Eisenstein module

A cell is presented as the free (H^fin)^(x)3-module on the shifted-dominant
members of a Weyl orbit, modulo the wall, functional-equation and
re-expanded functional-equation relations that hold among them.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Set, Tuple

from src.coeffs.laurent import LaurentScalar
from src.coeffs.matrix import matrix_rank
from src.eismod.normal_form import NFTerms, NormalFormEngine, NormalFormVec, normal_form_engine
from src.eismod.relations import reflection_generators
from src.eismod.tensor import FiniteKey, TensorAlgebra, tensor_algebra
from src.hecke.algebra import ONE, add_into
from src.models.data_models import LinalgMode, cell_key
from src.models.errors import InternalConsistencyError, NonDominantError, RootDatumError
from src.rootdata.root_datum import Coweight, RootDatum


logger = logging.getLogger(__name__)

Expansion = Dict[Coweight, Dict[FiniteKey, LaurentScalar]]


@dataclass
class ReexpandStep:
    """One use of the identity J_mu (T^0 J_lam)(T^1 J_lam) R_0 . Eis = 0"""
    label: Coweight
    simple: int
    anchor: Coweight
    shift: Coweight
    image: NormalFormVec

    def to_dict(self) -> Dict[str, object]:
        return {
            "label": list(self.label),
            "simple": self.simple,
            "anchor": list(self.anchor),
            "shift": list(self.shift),
            "labels_hit": sorted(list(lam) for lam in self.image.labels()),
        }


@dataclass
class ReexpandResult:
    """e_label = sum over labels mu of coefficient_mu . e_mu in the module"""
    label: Coweight
    simple: int
    combination: Expansion
    steps: List[ReexpandStep] = field(default_factory=list)

    def labels(self) -> List[Coweight]:
        return sorted(self.combination)


@dataclass
class CellRelation:
    kind: str
    generator: Coweight
    simple: int
    site: Optional[str]
    vector: NFTerms

    def labels(self) -> Set[Coweight]:
        return {lam for _, lam in self.vector}


@dataclass
class OrbitCellPresentation:
    datum: RootDatum
    dominant: Coweight
    generators: List[Coweight]
    relations: List[CellRelation]
    cross_labels: List[Coweight] = field(default_factory=list)

    @property
    def free_dimension(self) -> int:
        return len(self.datum.weyl) ** 3 * len(self.generators)

    def level(self, g: Coweight) -> int:
        """Number of simple roots pairing negatively with g"""
        d = self.datum
        return sum(1 for i in range(1, d.n) if d.pair(d.simple_root(i), g) < 0)


@dataclass
class CellDimension:
    dominant: Coweight
    generators: List[Coweight]
    free_dimension: int
    graded_dimension: int
    graded_pieces: Dict[str, int]
    direct_dimension: int
    coupling_rank: int
    relation_count: int
    mode_used: str
    agreed: bool = True

    def to_dict(self) -> Dict[str, object]:
        return {
            "dominant": cell_key(self.dominant),
            "generators": [cell_key(g) for g in self.generators],
            "free_dimension": self.free_dimension,
            "graded_dimension": self.graded_dimension,
            "graded_pieces": self.graded_pieces,
            "direct_dimension": self.direct_dimension,
            "coupling_rank": self.coupling_rank,
            "relation_count": self.relation_count,
            "mode": self.mode_used,
            "specializations_agree": self.agreed,
        }


class CellEngine:
    """Presentations and dimensions of orbit cells on three marked points"""

    def __init__(self, datum: RootDatum):
        self.datum = datum
        self.tensor: TensorAlgebra = tensor_algebra(datum, 3)
        self.nf: NormalFormEngine = normal_form_engine(self.tensor)
        self.identity_key: FiniteKey = (datum.identity,) * 3
        self._reflections = {
            i: [g.finite_terms() for g in reflection_generators(self.tensor) if g.simple == i]
            for i in range(1, datum.n)
        }
        self._anchor_cache: Dict[int, Coweight] = {}
        self._reexpand_cache: Dict[Tuple[Coweight, int], ReexpandResult] = {}

    # re-expansion of labels pairing <= -2

    def anchor(self, i: int) -> Coweight:
        """Smallest coweight pairing to 1 with alpha_i"""
        cached = self._anchor_cache.get(i)
        if cached is None:
            d = self.datum
            root = d.simple_root(i)
            candidates = [lam for lam in d.box(2) if d.pair(root, lam) == 1]
            if not candidates:
                raise RootDatumError(f"no coweight pairs to 1 with alpha_{i}")
            cached = min(candidates, key=lambda lam: (sum(abs(c) for c in lam), tuple(-c for c in lam)))
            self._anchor_cache[i] = cached
        return cached

    def _vector_times(self, coeff: Dict[FiniteKey, LaurentScalar], expansion: Expansion) -> Expansion:
        """coeff . (sum c_mu e_mu)"""
        out: Expansion = {}
        for mu, c_mu in expansion.items():
            vec = NormalFormVec(self.datum, {(ws, mu): c for ws, c in c_mu.items()})
            prod = self.nf.left_mul(coeff, vec)
            target = out.setdefault(mu, {})
            for (ws, _), c in prod.terms.items():
                add_into(target, ws, c)
        return {mu: terms for mu, terms in out.items() if terms}

    def _single_step(self, label: Coweight, i: int) -> ReexpandStep:
        d = self.datum
        t = self.tensor
        s_i = d.simple_reflection(i)
        lam = self.anchor(i)
        alpha = d.simple_coroot(i)
        shift = d.sub(d.scale(2, lam), d.scale(2, alpha))
        mu = d.sub(label, shift)
        r_0 = t.reflection_relation(i, 2, 1)
        x = t.product([t.j(0, mu), t.t("0", s_i), t.j(0, lam), t.t("1", s_i), t.j(1, lam), r_0])
        image = self.nf.reduce(x)
        if image.at_label(label) != {self.identity_key: ONE}:
            raise InternalConsistencyError(f"re-expansion of {label} along alpha_{i} has the wrong leading term")
        p = d.pair(d.simple_root(i), label)
        allowed = {d.add(label, d.scale(j, alpha)) for j in range(0, -p + 1)}
        if not image.labels() <= allowed:
            raise InternalConsistencyError(f"re-expansion of {label} leaves the alpha_{i}-string")
        return ReexpandStep(label=label, simple=i, anchor=lam, shift=mu, image=image)

    def reexpand(self, label: Coweight, i: int) -> ReexpandResult:
        """Write e_label through labels whose alpha_i pairing lies in [-1, -<alpha_i, label>]"""
        d = self.datum
        label = d.canon(label)
        key = (label, i)
        cached = self._reexpand_cache.get(key)
        if cached is not None:
            return cached
        p = d.pair(d.simple_root(i), label)
        if p >= -1:
            result = ReexpandResult(label=label, simple=i, combination={label: {self.identity_key: ONE}})
            self._reexpand_cache[key] = result
            return result
        step = self._single_step(label, i)
        combination: Expansion = {}
        steps = [step]
        for mu in sorted(step.image.labels()):
            if mu == label:
                continue
            coeff = {ws: -c for ws, c in step.image.at_label(mu).items()}
            if d.pair(d.simple_root(i), mu) <= -2:
                inner = self.reexpand(mu, i)
                steps.extend(inner.steps)
                part = self._vector_times(coeff, inner.combination)
            else:
                part = {mu: coeff}
            for nu, terms in part.items():
                target = combination.setdefault(nu, {})
                for ws, c in terms.items():
                    add_into(target, ws, c)
        combination = {nu: terms for nu, terms in combination.items() if terms}
        result = ReexpandResult(label=label, simple=i, combination=combination, steps=steps)
        logger.debug(f"Re-expanded {label} along alpha_{i} over {sorted(combination)}")
        self._reexpand_cache[key] = result
        return result

    def express(self, label: Coweight, generators: List[Coweight], depth: int = 0) -> Expansion:
        """e_label over the generators of its cell, plus labels from other orbits"""
        d = self.datum
        label = d.canon(label)
        if label in generators or d.dominant_representative(label) != d.dominant_representative(generators[0]):
            return {label: {self.identity_key: ONE}}
        if depth > 4 * len(d.weyl):
            raise InternalConsistencyError(f"re-expansion of {label} does not terminate")
        for i in range(1, d.n):
            if d.pair(d.simple_root(i), label) <= -2:
                first = self.reexpand(label, i)
                out: Expansion = {}
                for mu, coeff in first.combination.items():
                    part = self._vector_times(coeff, self.express(mu, generators, depth + 1))
                    for nu, terms in part.items():
                        target = out.setdefault(nu, {})
                        for ws, c in terms.items():
                            add_into(target, ws, c)
                return {nu: terms for nu, terms in out.items() if terms}
        raise InternalConsistencyError(f"{label} is neither shifted dominant nor re-expandable")

    # presentations

    def orbit_presentation(self, dominant: Coweight) -> OrbitCellPresentation:
        d = self.datum
        dominant = d.canon(dominant)
        if not d.is_dominant(dominant):
            raise NonDominantError(f"{dominant} is not dominant")
        generators = d.shifted_dominant_members(dominant)
        t = self.tensor
        relations: List[CellRelation] = []
        for g in generators:
            for i in range(1, d.n):
                c = d.pair(d.simple_root(i), g)
                if c == 0:
                    for rel in self._reflections[i]:
                        vector = {(ws, g): e for ws, e in rel.items()}
                        relations.append(CellRelation("wall", g, i, None, vector))
                elif c == -1:
                    target = d.weyl_act(d.simple_reflection(i), g)
                    kind = "functional" if target in generators else "functional-reexpanded"
                    expansion = self.express(target, generators)
                    for s, label in enumerate(t.sites.labels):
                        avg = t.avg([label], i)
                        rest = [x for x in t.sites.labels if x != label]
                        shifted = (avg * t.t(rest, d.simple_reflection(i))).finite_terms()
                        vector: NFTerms = {}
                        for ws, e in avg.finite_terms().items():
                            add_into(vector, (ws, g), e)
                        for (ws, mu), e in self._expansion_vector(shifted, expansion).items():
                            add_into(vector, (ws, mu), -e)
                        relations.append(CellRelation(kind, g, i, label, vector))
        cross = sorted({lam for r in relations for lam in r.labels() if lam not in generators})
        logger.info(
            f"Cell {cell_key(dominant)} of {d.key}: {len(generators)} generators, "
            f"{len(relations)} relations, cross labels {cross}"
        )
        return OrbitCellPresentation(d, dominant, generators, relations, cross)

    def _expansion_vector(self, coeff: Dict[FiniteKey, LaurentScalar], expansion: Expansion) -> NFTerms:
        out: NFTerms = {}
        for mu, terms in self._vector_times(coeff, expansion).items():
            for ws, c in terms.items():
                add_into(out, (ws, mu), c)
        return out

    # dimensions

    def relation_rows(self, vector: NFTerms) -> List[NFTerms]:
        """m . r for every finite monomial m"""
        rows = []
        for layer in self.nf.monomial_layers(NormalFormVec(self.datum, vector)):
            rows.extend(v.terms for _, v in layer if v.terms)
        return rows

    def graded_part(self, pres: OrbitCellPresentation, rel: CellRelation) -> NFTerms:
        """Components of rel at the highest filtration level among its generator labels"""
        levels = {pres.level(lam) for lam in rel.labels() if lam in pres.generators}
        if not levels:
            return {}
        top = max(levels)
        return {
            k: c for k, c in rel.vector.items() if k[1] in pres.generators and pres.level(k[1]) == top
        }

    def cell_dimension(self, pres: OrbitCellPresentation, mode: Optional[LinalgMode] = None) -> CellDimension:
        d = self.datum
        cube = len(d.weyl) ** 3
        generators = pres.generators

        # graded pieces: relation rows grouped into blocks of linked labels
        parent = {g: g for g in generators}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        graded = [self.graded_part(pres, r) for r in pres.relations]
        for gr in graded:
            labels = sorted({lam for _, lam in gr})
            for lam in labels[1:]:
                parent[find(lam)] = find(labels[0])
        blocks: Dict[Coweight, List[Coweight]] = {}
        for g in generators:
            blocks.setdefault(find(g), []).append(g)
        block_rows: Dict[Coweight, List[NFTerms]] = {root: [] for root in blocks}
        for gr in graded:
            if gr:
                root = find(next(iter(gr))[1])
                block_rows[root].extend(self.relation_rows(gr))
        pieces: Dict[str, int] = {}
        modes = set()
        agreed = True
        for root, labels in blocks.items():
            rows = block_rows[root]
            rank = 0
            if rows:
                result = matrix_rank(rows, mode=mode)
                rank = result.rank
                modes.add(result.mode_used.value)
                agreed = agreed and result.agreed
            pieces[" ".join(cell_key(g) for g in labels)] = cube * len(labels) - rank
        graded_dimension = sum(pieces.values())

        # direct presentation, with and without the columns of other cells
        full_rows: List[NFTerms] = []
        for rel in pres.relations:
            full_rows.extend(self.relation_rows(rel.vector))
        gens = set(generators)
        projected = [{k: c for k, c in row.items() if k[1] in gens} for row in full_rows]
        if full_rows:
            proj = matrix_rank(projected, mode=mode)
            modes.add(proj.mode_used.value)
            agreed = agreed and proj.agreed
            if pres.cross_labels:
                full = matrix_rank(full_rows, mode=mode)
                modes.add(full.mode_used.value)
                agreed = agreed and full.agreed
                coupling = full.rank - proj.rank
            else:
                coupling = 0
            direct_dimension = pres.free_dimension - proj.rank
        else:
            direct_dimension, coupling = pres.free_dimension, 0
        result = CellDimension(
            dominant=pres.dominant,
            generators=list(generators),
            free_dimension=pres.free_dimension,
            graded_dimension=graded_dimension,
            graded_pieces=pieces,
            direct_dimension=direct_dimension,
            coupling_rank=coupling,
            relation_count=len(pres.relations),
            mode_used="+".join(sorted(modes)) or "none",
            agreed=agreed,
        )
        logger.info(
            f"Cell {cell_key(pres.dominant)}: graded dim {graded_dimension} {pieces}, "
            f"direct dim {direct_dimension}, coupling rank {coupling}"
        )
        return result


@lru_cache(maxsize=None)
def cell_engine(datum: RootDatum) -> CellEngine:
    return CellEngine(datum)


def orbit_presentation(datum: RootDatum, dominant: Coweight) -> OrbitCellPresentation:
    return cell_engine(datum).orbit_presentation(dominant)


def cell_dimension(pres: OrbitCellPresentation, mode: Optional[LinalgMode] = None) -> int:
    """Dimension of the cell through its filtration by negative pairings"""
    return cell_engine(pres.datum).cell_dimension(pres, mode).graded_dimension


def reexpand(datum: RootDatum, label: Coweight, i: int) -> ReexpandResult:
    return cell_engine(datum).reexpand(label, i)
