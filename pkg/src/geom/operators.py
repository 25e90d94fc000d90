"""
Averaging and Hecke operators on functions of orbits
"""

import logging
from typing import Dict, Sequence, Tuple

import numpy as np

from src.geom.flags import FlagVariety
from src.geom.orbits import OrbitTable


logger = logging.getLogger(__name__)

SITE_INDEX = {"0": 0, "1": 1, "inf": 2}


def avg_matrix(table: OrbitTable, flags: FlagVariety, site: int, i: int) -> np.ndarray:
    """M[O, O'] = number of flags F' in the step i fibre at site through rep(O) with the new triple in O'

    Functions are column vectors of orbit values, so (Avg f)(O) = sum M[O, O'] f(O').
    """
    m = np.zeros((len(table), len(table)), dtype=np.int64)
    fibres = flags.fibres[i]
    for orbit in table.orbits:
        rep = list(orbit.representative)
        for f in fibres[rep[site]]:
            moved = list(rep)
            moved[site] = int(f)
            m[orbit.index, table.orbit_of(tuple(moved))] += 1
    return m


class OperatorCache:
    """Avg matrices per (site, simple root), built on demand"""

    def __init__(self, table: OrbitTable, flags: FlagVariety):
        self.table = table
        self.flags = flags
        self._avg: Dict[Tuple[int, int], np.ndarray] = {}

    def avg(self, site: int, i: int) -> np.ndarray:
        key = (site, i)
        if key not in self._avg:
            self._avg[key] = avg_matrix(self.table, self.flags, site, i)
        return self._avg[key]

    def hecke(self, site: int, i: int) -> np.ndarray:
        return self.avg(site, i) - np.eye(len(self.table), dtype=np.int64)

    def apply(self, ops: Sequence[Tuple[str, int, int]], vector: np.ndarray) -> np.ndarray:
        """Apply ("avg" | "t", site, i) factors right to left"""
        out = np.asarray(vector)
        for kind, site, i in reversed(list(ops)):
            mat = self.avg(site, i) if kind == "avg" else self.hecke(site, i)
            out = mat @ out
        return out

    def all_avg(self):
        rank = self.table.cell.rank
        return [self.avg(site, i) for site in range(3) for i in range(1, rank)]

    def check_quadratic(self) -> bool:
        """Avg^2 = (q+1) Avg at every site"""
        q = self.table.cell.q
        for site in range(3):
            for i in range(1, self.table.cell.rank):
                a = self.avg(site, i)
                if not np.array_equal(a @ a, (q + 1) * a):
                    logger.error(f"Quadratic relation fails at site {site}, root {i}")
                    return False
        return True
