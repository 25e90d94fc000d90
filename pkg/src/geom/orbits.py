"""
Orbits of Aut(E) on triples of flags at the marked points 0, 1, inf

Triples are indexed t = (f_0 N + f_1) N + f_inf. Each automorphism generator
induces a permutation of triples; orbits are the weakly connected components
of the union of those permutation graphs.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from src.config.settings import get_settings
from src.geom.bundles import BundleCell, NUM_SITES, aut_generators, stable_line, stable_plane_normal
from src.geom.finite_field import finite_field
from src.geom.flags import FlagVariety, flag_variety
from src.models.errors import BudgetExceededError, InternalConsistencyError


logger = logging.getLogger(__name__)

ENUMERATION_VERSION = 1
SITE_NAMES = ("0", "1", "inf")


@dataclass
class Orbit:
    index: int
    representative: Tuple[int, int, int]
    size: int
    stabilizer: int
    label: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "index": self.index,
            "representative": list(self.representative),
            "size": self.size,
            "stabilizer": self.stabilizer,
            "label": self.label,
        }


@dataclass
class OrbitTable:
    """Orbit decomposition of Fl^3 for one bundle type"""
    cell: BundleCell
    n_flags: int
    orbits: List[Orbit]
    assignment: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.orbits)

    def triple(self, f0: int, f1: int, f2: int) -> int:
        return (f0 * self.n_flags + f1) * self.n_flags + f2

    def split(self, t: int) -> Tuple[int, int, int]:
        return _split(t, self.n_flags)

    def orbit_of(self, triple: Tuple[int, int, int]) -> int:
        return int(self.assignment[self.triple(*triple)])

    def by_label(self, label: str) -> List[int]:
        return [o.index for o in self.orbits if o.label == label]

    def labels(self) -> List[str]:
        return [o.label for o in self.orbits]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "cell": self.cell.to_dict(),
            "n_flags": self.n_flags,
            "orbits": [o.to_dict() for o in self.orbits],
        }


def enumerate_orbits(cell: BundleCell, budget: Optional[int] = None) -> OrbitTable:
    """Orbit table with stabilizer orders and labels"""
    budget = budget or get_settings().geometry.budget
    field_ = finite_field(cell.q)
    flags = flag_variety(cell.q, cell.rank)
    gens = aut_generators(cell, field_)
    n = len(flags)
    total = n ** NUM_SITES
    estimate = total * len(gens)
    if estimate > budget:
        raise BudgetExceededError(f"orbit enumeration for {cell.key} needs {estimate} edges", estimate, budget)
    logger.info(f"Enumerating orbits of {cell.key}: {total} triples, {len(gens)} generators")

    f0, rest = np.divmod(np.arange(total, dtype=np.int64), n * n)
    f1, f2 = np.divmod(rest, n)
    sources = []
    targets = []
    for gen in gens:
        perms = [flags.act(g) for g in gen.values]
        image = (perms[0][f0] * n + perms[1][f1]) * n + perms[2][f2]
        moved = image != np.arange(total)
        sources.append(np.nonzero(moved)[0].astype(np.int32))
        targets.append(image[moved].astype(np.int32))
    src = np.concatenate(sources) if sources else np.zeros(0, dtype=np.int32)
    dst = np.concatenate(targets) if targets else np.zeros(0, dtype=np.int32)
    graph = coo_matrix((np.ones(src.size, dtype=np.int8), (src, dst)), shape=(total, total)).tocsr()
    count, components = connected_components(graph, directed=True, connection="weak")

    # number orbits by their smallest triple
    _, first = np.unique(components, return_index=True)
    order = np.argsort(first)
    renumber = np.empty(count, dtype=np.int32)
    renumber[components[first[order]]] = np.arange(count, dtype=np.int32)
    assignment = renumber[components]
    sizes = np.bincount(assignment, minlength=count)

    aut = cell.aut_order()
    orbits = []
    for idx in range(count):
        size = int(sizes[idx])
        if aut % size:
            raise InternalConsistencyError(f"orbit of size {size} does not divide |Aut| = {aut} for {cell.key}")
        rep = first[order[idx]]
        orbits.append(Orbit(idx, tuple(int(x) for x in _split(rep, n)), size, aut // size))
    table = OrbitTable(cell, n, orbits, assignment)
    assign_labels(table, flags)
    logger.info(f"{cell.key}: {count} orbits")
    return table


def _split(t: int, n: int) -> Tuple[int, int, int]:
    return t // (n * n), (t // n) % n, t % n


# labels


def coincidence_name(sites: List[int]) -> str:
    if len(sites) == NUM_SITES:
        return "S"
    if not sites:
        return "∅"
    return "".join(SITE_NAMES[s] for s in sites)


def _label_pgl2(table: OrbitTable, flags: FlagVariety, rep: Tuple[int, int, int]) -> str:
    k = table.cell.degrees[0] - table.cell.degrees[1]
    if k == 0:
        equal = [s for s in range(NUM_SITES) if rep[s] == rep[(s + 1) % NUM_SITES]]
        if len(equal) == NUM_SITES:
            return "c_0(S)"
        if not equal:
            return "c_0(∅)"
        # the pair of sites carrying the same line
        s = equal[0]
        pair = sorted((s, (s + 1) % NUM_SITES))
        return f"c_0({''.join(SITE_NAMES[p] for p in pair)})"
    e1 = flags.line_index[(1, 0)]
    on_sub = [s for s in range(NUM_SITES) if flags.flags[rep[s]][0] == e1]
    if k == 1 and not on_sub:
        # lines (x_s : 1); the sub O -> O(1)+O forces x_1 = x_0 + x_inf
        xs = []
        for s in range(NUM_SITES):
            v = flags.line_of(rep[s])
            xs.append(v[0] / v[1])
        return "c_1(∅)" if int(xs[1] - xs[0] - xs[2]) == 0 else "c_1(*)"
    return f"c_{k}({coincidence_name(on_sub)})"


def _position_to_stable(cell: BundleCell, flags: FlagVariety, flag: int) -> str:
    """Relative position of a flag to the Aut-stable partial flag"""
    field_ = flags.field
    line = stable_line(cell, field_)
    normal = stable_plane_normal(cell, field_)
    f_line, f_plane = flags.flags[flag]
    if line is not None and normal is not None:
        stable = flags.lookup(line, normal)
        return flags.relative_position(stable, flag)
    if normal is not None:
        # only the plane <e1, e2> is stable
        p = flags.plane_index[field_.key(normal)]
        if f_plane == p:
            return "1"
        return "s2" if flags.incidence[p, f_line] else "s1s2"
    l_idx = flags.line_index[field_.key(line)]
    if f_line == l_idx:
        return "1"
    return "s1" if flags.incidence[f_plane, l_idx] else "s2s1"


def _label_rank3(table: OrbitTable, flags: FlagVariety, rep: Tuple[int, int, int]) -> str:
    cell = table.cell
    if cell.is_trivial:
        w01 = flags.relative_position(rep[0], rep[1])
        w1i = flags.relative_position(rep[1], rep[2])
        w0i = flags.relative_position(rep[0], rep[2])
        label = f"c_0({w01},{w1i},{w0i})"
        if (w01, w1i, w0i) == ("s3", "s3", "s3"):
            delta = []
            if flags.lines_coplanar(rep):
                delta.append("s1")
            if flags.planes_concurrent(rep):
                delta.append("s2")
            label = f"c_0(s3,s3,s3;{{{','.join(delta)}}})"
        return label
    name = ",".join(str(a) for a in cell.degrees)
    return f"c_[{name}]({','.join(_position_to_stable(cell, flags, f) for f in rep)})"


def assign_labels(table: OrbitTable, flags: FlagVariety) -> None:
    """Invariant names; orbits sharing a name get #1, #2, ... in index order"""
    rank = table.cell.rank
    for orbit in table.orbits:
        if rank == 2:
            orbit.label = _label_pgl2(table, flags, orbit.representative)
        else:
            orbit.label = _label_rank3(table, flags, orbit.representative)
    groups: Dict[str, List[Orbit]] = {}
    for orbit in table.orbits:
        groups.setdefault(orbit.label, []).append(orbit)
    for label, members in groups.items():
        if len(members) > 1:
            for k, orbit in enumerate(members, start=1):
                orbit.label = f"{label}#{k}"
