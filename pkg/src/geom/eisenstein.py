"""
Geometric Eisenstein functions on Bun_G(P^1, {0, 1, inf}) over F_q

Eis_mu(E, F) counts the B-reductions of E of degree mu whose induced flags at
the marked points are F. Values are constant on Aut(E)-orbits; a function is
stored as one list of exact values per bundle type.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import galois
import numpy as np

from src.geom.bundles import NUM_SITES, bundle_cell
from src.geom.cache import GeometryCache
from src.geom.finite_field import FiniteField, finite_field
from src.geom.flags import FlagVariety, flag_variety
from src.geom.operators import OperatorCache
from src.geom.orbits import OrbitTable
from src.models.data_models import cell_key
from src.models.errors import ConfigError, MissingCellError, RootDatumError
from src.rootdata.root_datum import Coweight, RootDatum


logger = logging.getLogger(__name__)


def precedes(datum: RootDatum, nu: Coweight, lam: Coweight) -> bool:
    """nu <= lam: lam - nu is a non-negative sum of simple coroots, up to the PGL centre"""
    diff = [a - b for a, b in zip(lam, nu)]
    total = sum(diff)
    if total % datum.n:
        return False
    shift = total // datum.n
    diff = [c - shift for c in diff]
    partial = 0
    for c in diff[:-1]:
        partial += c
        if partial < 0:
            return False
    return True


def support_types(datum: RootDatum, dominant: Coweight) -> List[Coweight]:
    """Dominant bundle types nu <= dominant, largest first"""
    lam = datum.canon(dominant)
    if not datum.is_dominant(lam):
        raise RootDatumError(f"{lam} is not dominant")
    bound = max(abs(c) for c in lam) if any(lam) else 0
    found = [nu for nu in datum.iter_dominant(bound) if precedes(datum, nu, lam)]
    return sorted(found, key=lambda nu: (-sum(abs(c) for c in nu), nu))


def reduction_degrees(degrees: Sequence[int], mu: Coweight) -> Optional[Tuple[int, ...]]:
    """Degrees of the B-reduction, mu moved by the centre to match deg E"""
    total = sum(degrees) - sum(mu)
    if total % len(mu):
        return None
    t = total // len(mu)
    return tuple(m + t for m in mu)


class GeometryContext:
    """Orbit tables, flag varieties and operators for the bundle types below some cells"""

    def __init__(self, datum: RootDatum, q: int, cells: Sequence[Coweight], cache: Optional[GeometryCache] = None):
        if datum.n not in (2, 3):
            raise ConfigError(f"geometry is enumerated in rank 2 and 3 only, got {datum.key}")
        self.datum = datum
        self.q = q
        self.field: FiniteField = finite_field(q)
        self.flags: FlagVariety = flag_variety(q, datum.n)
        self.cache = cache or GeometryCache()
        types: List[Coweight] = []
        for lam in cells:
            for nu in support_types(datum, datum.dominant_representative(lam)):
                if nu not in types:
                    types.append(nu)
        self.types = types
        self.tables: Dict[Coweight, OrbitTable] = {}
        self.operators: Dict[Coweight, OperatorCache] = {}
        for nu in types:
            table = self.cache.table(bundle_cell(datum, nu, q))
            self.tables[nu] = table
            self.operators[nu] = OperatorCache(table, self.flags)

    def table(self, nu: Coweight) -> OrbitTable:
        return self.tables[nu]

    @property
    def dimension(self) -> int:
        return sum(len(t) for t in self.tables.values())

    def offsets(self) -> Dict[Coweight, int]:
        out, pos = {}, 0
        for nu in self.types:
            out[nu] = pos
            pos += len(self.tables[nu])
        return out

    def block_operator(self, kind: str, site: int, i: int) -> np.ndarray:
        """Avg or T on the direct sum over all bundle types"""
        dim = self.dimension
        out = np.zeros((dim, dim), dtype=np.int64)
        for nu, pos in self.offsets().items():
            ops = self.operators[nu]
            mat = ops.avg(site, i) if kind == "avg" else ops.hecke(site, i)
            size = mat.shape[0]
            out[pos:pos + size, pos:pos + size] = mat
        return out


@dataclass
class AutFunction:
    """Exact function on orbits, one list per bundle type"""
    context: GeometryContext
    values: Dict[Coweight, List[Fraction]] = field(default_factory=dict)

    def vector(self) -> List[Fraction]:
        out: List[Fraction] = []
        for nu in self.context.types:
            out.extend(self.values.get(nu, [Fraction(0)] * len(self.context.tables[nu])))
        return out

    def support(self) -> List[Tuple[Coweight, str, Fraction]]:
        out = []
        for nu in self.context.types:
            table = self.context.tables[nu]
            for idx, value in enumerate(self.values.get(nu, [])):
                if value:
                    out.append((nu, table.orbits[idx].label, value))
        return out

    def to_dict(self) -> Dict[str, Any]:
        return {
            "q": self.context.q,
            "support": [{"bundle": cell_key(nu), "orbit": label, "value": str(v)} for nu, label, v in self.support()],
        }


def _split_forms(vec: galois.FieldArray, sizes: Sequence[int]) -> List[galois.FieldArray]:
    out, pos = [], 0
    for s in sizes:
        out.append(vec[pos:pos + s])
        pos += s
    return out


def _evaluate(field_: FiniteField, forms: Sequence[galois.FieldArray], site: int) -> galois.FieldArray:
    return field_.GF(np.array([int(field_.evaluate_form(f, site)) for f in forms], dtype=np.int64))


def _coprime_tuples(field_: FiniteField, sizes: Sequence[int]) -> Iterator[List[galois.FieldArray]]:
    """Tuples of forms with the given coefficient counts, up to scalar, without common zero"""
    total = sum(sizes)
    if total == 0:
        return
    for vec in field_.projective_points(total):
        forms = _split_forms(vec, sizes)
        if field_.forms_coprime(forms):
            yield forms


def _product_matrix(field_: FiniteField, f: Sequence[galois.FieldArray], g_sizes: Sequence[int],
                    out_size: int) -> galois.FieldArray:
    """Matrix of g -> sum f_i g_i on coefficient vectors"""
    cols = []
    for fi, size in zip(f, g_sizes):
        for k in range(size):
            col = field_.zeros(out_size)
            if fi.size:
                col[k:k + fi.size] = fi
            cols.append(col)
    return field_.GF(np.stack([c.view(np.ndarray) for c in cols], axis=1))


def reduction_triples(context: GeometryContext, degrees: Sequence[int], red: Sequence[int]) -> List[int]:
    """Triple index of every B-reduction of O(degrees) with the given degrees"""
    field_, flags = context.field, context.flags
    n = len(degrees)
    N = len(flags)
    f_sizes = [max(a - red[0] + 1, 0) for a in degrees]
    out: List[int] = []
    for f in _coprime_tuples(field_, f_sizes):
        lines = [_evaluate(field_, f, s) for s in range(NUM_SITES)]
        if n == 2:
            idx = [flags.lookup(line) for line in lines]
            out.append((idx[0] * N + idx[1]) * N + idx[2])
            continue
        g_sizes = [max(red[-1] - a + 1, 0) for a in degrees]
        dim_g = sum(g_sizes)
        if dim_g == 0:
            continue
        out_size = red[-1] - red[0] + 1
        if out_size <= 0:
            basis = field_.identity(dim_g)
        else:
            basis = _product_matrix(field_, f, g_sizes, out_size).null_space()
        if basis.shape[0] == 0:
            continue
        for c in field_.projective_points(basis.shape[0]):
            g = _split_forms(c @ basis, g_sizes)
            if not field_.forms_coprime(g):
                continue
            idx = [flags.lookup(lines[s], _evaluate(field_, g, s)) for s in range(NUM_SITES)]
            out.append((idx[0] * N + idx[1]) * N + idx[2])
    return out


def eis_vector(context: GeometryContext, mu: Sequence[int]) -> AutFunction:
    """Eis_mu on every bundle type of the context"""
    datum = context.datum
    mu = datum.canon(mu)
    needed = support_types(datum, datum.dominant_representative(mu))
    missing = [nu for nu in needed if nu not in context.tables]
    if missing:
        raise MissingCellError(
            f"Eis_{list(mu)} is supported on bundle types outside the enumerated range",
            [cell_key(nu) for nu in missing],
        )
    result = AutFunction(context)
    for nu in context.types:
        table = context.tables[nu]
        red = reduction_degrees(table.cell.degrees, mu)
        values = [Fraction(0)] * len(table)
        if red is not None:
            triples = reduction_triples(context, table.cell.degrees, red)
            if triples:
                per_orbit = np.bincount(table.assignment[np.asarray(triples, dtype=np.int64)], minlength=len(table))
                values = [Fraction(int(c), o.size) for c, o in zip(per_orbit, table.orbits)]
        result.values[nu] = values
    logger.debug(f"Eis_{list(mu)} over F_{context.q}: {len(result.support())} orbits in support")
    return result


def eis_minus_rho_check(context: GeometryContext) -> Dict[str, Any]:
    """Support of Eis_{-rho}: one rho-bundle orbit over (s3, s3, s3) plus the generic trivial locus, all with value 1"""
    datum = context.datum
    if datum.key != "sl3":
        raise RootDatumError("the -rho support check is stated for sl3")
    minus_rho = datum.neg(datum.rho)
    eis = eis_vector(context, minus_rho)
    zero, rho = datum.zero(), datum.rho
    support = eis.support()
    on_rho = [(label, v) for nu, label, v in support if nu == rho]
    on_zero = [(label, v) for nu, label, v in support if nu == zero]
    generic = set()
    if zero in context.tables:
        generic = {o.label for o in context.tables[zero].orbits if o.label.startswith("c_0(s3,s3,s3;{})")}
    agrees = (
        len(on_rho) == 1
        and on_rho[0][0].startswith("c_[1,0,-1](s3,s3,s3)")
        and all(v == 1 for _, v in on_rho + on_zero)
        and {label for label, _ in on_zero} == generic
    )
    logger.info(
        f"Eis_-rho over F_{context.q}: {len(on_rho)} rho orbits, {len(on_zero)} trivial orbits, agrees={agrees}"
    )
    return {
        "q": context.q,
        "rho_support": [{"orbit": label, "value": str(v)} for label, v in on_rho],
        "trivial_support": [{"orbit": label, "value": str(v)} for label, v in on_zero],
        "generic_orbits": sorted(generic),
        "agrees": agrees,
    }
