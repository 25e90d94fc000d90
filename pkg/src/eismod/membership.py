"""
Membership in the left ideal defining the Eisenstein module

An element x of H^(x)N vanishes on Eis exactly when its normal form is a
combination of relation instances m (J^0_k0 ... J^{N-1}_k{N-1}) r . Eis,
with m a finite monomial and r a reflection generator. The search grows a
window of translation shifts and a depth of monomials, screens mod p, and
returns an exact certificate that can be replayed.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Set, Tuple

from src.coeffs.fraction import FracScalar
from src.coeffs.laurent import LaurentScalar
from src.coeffs.matrix import ModularEchelon, solve_membership, specialization_points
from src.config.settings import VerifySettings, get_settings
from src.eismod.normal_form import NFTerms, NormalFormEngine, NormalFormVec, normal_form_engine
from src.eismod.relations import RelationGenerator, reflection_generators
from src.eismod.tensor import FiniteKey, TensorAlgebra, TensorElt, tensor_algebra
from src.hecke.algebra import add_into
from src.models.data_models import CertificateStatus
from src.models.errors import BudgetExceededError, InternalConsistencyError
from src.rootdata.root_datum import Coweight, RootDatum


logger = logging.getLogger(__name__)

Kappas = Tuple[Coweight, ...]


@dataclass
class RelationInstance:
    """m (J_kappa) r with its coefficient numerator"""
    monomial: FiniteKey
    kappas: Kappas
    relation: int
    relation_name: str
    coefficient: LaurentScalar

    def to_dict(self, datum: RootDatum, sigma: LaurentScalar) -> Dict[str, Any]:
        return {
            "monomial": ",".join(datum.weyl_name(w) for w in self.monomial),
            "shifts": [list(k) for k in self.kappas],
            "relation": self.relation_name,
            "coefficient": str(FracScalar(self.coefficient, sigma)),
        }


@dataclass
class MembershipCertificate:
    """sigma . x.Eis = sum of coefficient . instance, or the reason no certificate was found"""
    status: CertificateStatus
    window: Optional[int] = None
    depth: Optional[int] = None
    sigma: LaurentScalar = field(default_factory=LaurentScalar.one)
    instances: List[RelationInstance] = field(default_factory=list)
    target: Optional[NormalFormVec] = None
    rows_examined: int = 0
    reason: Optional[str] = None

    @property
    def size(self) -> int:
        return len(self.instances)

    @property
    def proved(self) -> bool:
        return self.status == CertificateStatus.PROVED_ZERO

    def sigma_vanishing(self, q_values: Sequence[int]) -> List[int]:
        """Field sizes at which sigma vanishes, where the certificate says nothing"""
        return [q for q in q_values if self.sigma.vanishes_at_q(q)]

    def to_dict(self, datum: RootDatum) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "status": self.status.value,
            "sigma": str(self.sigma),
            "window": self.window,
            "depth": self.depth,
            "size": self.size,
            "rows_examined": self.rows_examined,
            "instances": [inst.to_dict(datum, self.sigma) for inst in self.instances],
        }
        if self.reason:
            out["reason"] = self.reason
        return out


class QuotientVerifier:
    """Certificates that an element of H^(x)N kills the Eisenstein generator"""

    def __init__(
        self,
        datum: RootDatum,
        num_points: int = 3,
        max_j_sites: int = 1,
        settings: Optional[VerifySettings] = None,
    ):
        self.datum = datum
        self.settings = settings or get_settings().verify
        self.tensor: TensorAlgebra = tensor_algebra(datum, num_points)
        self.nf: NormalFormEngine = normal_form_engine(self.tensor)
        self.max_j_sites = max(0, min(max_j_sites, num_points))
        self.generators: List[RelationGenerator] = reflection_generators(self.tensor)
        self._finite = [g.finite_terms() for g in self.generators]
        self._layers: Dict[Tuple[Kappas, int], List[List[Tuple[FiniteKey, NormalFormVec]]]] = {}
        self._layer_iters: Dict[Tuple[Kappas, int], Any] = {}

    # search space

    def window_shifts(self, labels: Set[Coweight], window: int) -> List[Coweight]:
        """K_0 = {0, +-labels}; each step adds 0, +-lattice basis and +-simple coroots"""
        d = self.datum
        current = {d.zero()} | {d.canon(lam) for lam in labels} | {d.neg(lam) for lam in labels}
        steps = [d.zero()]
        for b in d.lattice_basis() + [d.simple_coroot(i) for i in range(1, d.n)]:
            steps.extend([b, d.neg(b)])
        for _ in range(window):
            current = {d.add(k, s) for k in current for s in steps}
        return sorted(current, key=lambda k: (sum(abs(c) for c in k), k))

    def shift_tuples(self, shifts: Sequence[Coweight]) -> List[Kappas]:
        d = self.datum
        zero = d.zero()
        n = len(self.tensor.sites)
        out = []
        for sites in range(self.max_j_sites + 1):
            for chosen in itertools.combinations(range(n), sites):
                for values in itertools.product([k for k in shifts if k != zero], repeat=sites):
                    kappas = [zero] * n
                    for s, k in zip(chosen, values):
                        kappas[s] = k
                    out.append(tuple(kappas))
        return out

    def _layer(self, base: Tuple[Kappas, int], depth: int) -> Optional[List[Tuple[FiniteKey, NormalFormVec]]]:
        layers = self._layers.setdefault(base, [])
        while len(layers) <= depth:
            it = self._layer_iters.get(base)
            if it is None:
                vec = self.nf.instance(base[0], self._finite[base[1]])
                it = self.nf.monomial_layers(vec)
                self._layer_iters[base] = it
            nxt = next(it, None)
            if nxt is None:
                return None
            layers.append(nxt)
        return layers[depth]

    # verification

    def verify_in_quotient(
        self, x: TensorElt, window: Optional[int] = None, max_depth: Optional[int] = None
    ) -> MembershipCertificate:
        target = self.nf.reduce(x)
        return self.verify_vector(target, window, max_depth)

    def verify_vector(
        self, target: NormalFormVec, window: Optional[int] = None, max_depth: Optional[int] = None
    ) -> MembershipCertificate:
        window = self.settings.window if window is None else window
        max_depth = self.settings.max_depth if max_depth is None else max_depth
        if target.is_zero():
            return MembershipCertificate(CertificateStatus.PROVED_ZERO, window=0, depth=0, target=target)
        (p, v0), = specialization_points(get_settings().linalg, 1)
        examined = 0
        for w in range(window + 1):
            bases = [(k, r) for k in self.shift_tuples(self.window_shifts(target.labels(), w))
                     for r in range(len(self.generators))]
            screen = ModularEchelon(p, v0)
            rows: List[NFTerms] = []
            descriptors: List[Tuple[Tuple[Kappas, int], FiniteKey]] = []
            logger.debug(f"Window {w}: {len(bases)} relation bases")
            for depth in range(max_depth + 1):
                block: List[NFTerms] = []
                for base in bases:
                    layer = self._layer(base, depth)
                    for m, vec in layer or []:
                        if vec.terms:
                            block.append(vec.terms)
                            descriptors.append((base, m))
                if not block:
                    break
                rows.extend(block)
                examined = max(examined, len(rows))
                if len(rows) > self.settings.max_rows:
                    reason = f"row budget {self.settings.max_rows} exceeded at window {w}, depth {depth}"
                    logger.warning(reason)
                    return MembershipCertificate(
                        CertificateStatus.UNRESOLVED, target=target, rows_examined=examined, reason=reason
                    )
                screen.add_rows(block)
                if not screen.contains(target.terms):
                    continue
                solution = solve_membership(rows, target.terms, screen=screen)
                if solution is None:
                    continue
                instances = []
                for i, c in sorted(solution.coefficients.items()):
                    (kappas, r), m = descriptors[i]
                    instances.append(RelationInstance(m, kappas, r, self.generators[r].name, c))
                logger.info(f"Certificate at window {w}, depth {depth}: {len(instances)} instances")
                return MembershipCertificate(
                    CertificateStatus.PROVED_ZERO,
                    window=w,
                    depth=depth,
                    sigma=solution.sigma,
                    instances=instances,
                    target=target,
                    rows_examined=examined,
                )
        return MembershipCertificate(
            CertificateStatus.UNRESOLVED,
            target=target,
            rows_examined=examined,
            reason=f"no certificate within window {window} and depth {max_depth}",
        )

    def instance_vector(self, inst: RelationInstance) -> NormalFormVec:
        base = self.nf.instance(inst.kappas, self._finite[inst.relation])
        return self.nf.left_mul_basis(inst.monomial, base)

    def replay(self, cert: MembershipCertificate) -> bool:
        """Rebuild every instance from its descriptor and recheck the combination"""
        if not cert.proved:
            return False
        if cert.target is None:
            raise InternalConsistencyError("certificate carries no target")
        total: NFTerms = {}
        for inst in cert.instances:
            for k, c in self.instance_vector(inst).terms.items():
                add_into(total, k, inst.coefficient * c)
        expected = cert.target.scale(cert.sigma).terms
        return total == expected

    # freeness evidence

    def rank_evidence(self, radius: int, seeds: int = 2, budget: Optional[int] = None) -> Dict[str, Any]:
        """Units e_{(1, w1, w2), kappa} stay independent modulo the relations shifted inside a box

        Relation instances take every shift tuple over the box, at up to max_j_sites sites,
        and keep all their terms; rows reaching outside the box still constrain the units
        through cancellations among them.
        """
        d = self.datum
        box = [d.canon(k) for k in d.box(radius)]
        n_w = len(d.weyl)
        n = len(self.tensor.sites)
        budget = budget or get_settings().geometry.budget
        tuples = self.shift_tuples(box)
        estimate = len(tuples) * len(self.generators) * n_w ** n * n_w ** n * len(box)
        if estimate > budget:
            raise BudgetExceededError(
                f"rank evidence over {len(tuples)} shift tuples needs about {estimate} entries", estimate, budget
            )
        inside = set(box)
        rows: List[NFTerms] = []
        outside = 0
        for kappas in tuples:
            for r in range(len(self.generators)):
                vec = self.nf.instance(kappas, self._finite[r])
                for layer in self.nf.monomial_layers(vec):
                    for _, mv in layer:
                        if not mv.terms:
                            continue
                        rows.append(mv.terms)
                        if not mv.labels() <= inside:
                            outside += 1
        units: List[NFTerms] = []
        rest = list(itertools.product(d.weyl, repeat=n - 1))
        for kappa in box:
            for ws in rest:
                units.append({((d.identity,) + ws, kappa): LaurentScalar.one()})
        expected = len(units)
        samples = []
        for p, v0 in specialization_points(get_settings().linalg, seeds):
            relations = ModularEchelon(p, v0)
            relations.add_rows(rows)
            base_rank = relations.rank
            relations.add_rows(units)
            samples.append(relations.rank - base_rank)
        logger.info(f"Rank evidence on box {radius}: increments {samples}, expected {expected}")
        return {
            "radius": radius,
            "box_size": len(box),
            "shift_tuples": len(tuples),
            "relation_rows": len(rows),
            "rows_leaving_box": outside,
            "units": expected,
            "increments": samples,
            "independent": all(s == expected for s in samples),
        }


def verify_identity_finite(lhs: TensorElt, rhs: TensorElt) -> bool:
    """Exact equality of two finite elements in the basis of (H^fin)^(x)N"""
    left = lhs.finite_terms()
    right = rhs.finite_terms()
    equal = left == right
    if not equal:
        logger.debug(f"Finite identity differs on {len(set(left) ^ set(right))} basis elements")
    return equal
