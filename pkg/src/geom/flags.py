"""
Complete flags in F_q^n for n = 2, 3
"""

import logging
from functools import lru_cache
from typing import Dict, List, Tuple

import galois
import numpy as np

from src.geom.finite_field import FiniteField, finite_field
from src.models.errors import ConfigError


logger = logging.getLogger(__name__)


class FlagVariety:
    """Flags as (line,) for n = 2 and (line, plane) for n = 3, planes stored by normal covector"""

    def __init__(self, field: FiniteField, n: int):
        if n not in (2, 3):
            raise ConfigError(f"flag varieties are built for rank 2 and 3, got {n}")
        self.field = field
        self.n = n
        self.lines = field.projective_points(n)
        self.line_index: Dict[Tuple[int, ...], int] = {field.key(v): i for i, v in enumerate(self.lines)}
        if n == 2:
            self.planes = None
            self.plane_index: Dict[Tuple[int, ...], int] = {}
            self.incidence = None
            self.flags: List[Tuple[int, ...]] = [(i,) for i in range(len(self.lines))]
        else:
            self.planes = field.projective_points(n)
            self.plane_index = {field.key(c): i for i, c in enumerate(self.planes)}
            # incidence[p, l]: line l lies in plane p
            self.incidence = ((self.planes @ self.lines.T).view(np.ndarray) == 0)
            self.flags = [(li, pi) for pi in range(len(self.planes)) for li in range(len(self.lines))
                          if self.incidence[pi, li]]
        self.flag_index = {f: i for i, f in enumerate(self.flags)}
        self.fibres = {i: self._fibres(i) for i in range(1, n)}
        logger.debug(f"Flag variety over F_{field.q} in rank {n}: {len(self.flags)} flags")

    def __len__(self) -> int:
        return len(self.flags)

    def _fibres(self, i: int) -> np.ndarray:
        """fibres[f] lists the q+1 flags differing from f at most in the step i subspace"""
        if self.n == 2:
            everything = np.arange(len(self.flags), dtype=np.int64)
            return np.tile(everything, (len(self.flags), 1))
        # i = 1 moves the line inside the plane, i = 2 the plane around the line
        keep = 1 if i == 1 else 0
        groups: Dict[int, List[int]] = {}
        for idx, f in enumerate(self.flags):
            groups.setdefault(f[keep], []).append(idx)
        return np.array([groups[f[keep]] for f in self.flags], dtype=np.int64)

    def line_of(self, flag: int) -> galois.FieldArray:
        return self.lines[self.flags[flag][0]]

    def plane_of(self, flag: int) -> galois.FieldArray:
        return self.planes[self.flags[flag][1]]

    def lookup(self, line: galois.FieldArray, plane: galois.FieldArray = None) -> int:
        """Index of the flag through the given (unnormalized) vectors"""
        field = self.field
        li = self.line_index[field.key(field.normalize(line.reshape(1, -1))[0])]
        if self.n == 2:
            return self.flag_index[(li,)]
        pi = self.plane_index[field.key(field.normalize(plane.reshape(1, -1))[0])]
        return self.flag_index[(li, pi)]

    def act(self, g: galois.FieldArray) -> np.ndarray:
        """Permutation of flags induced by an invertible matrix"""
        field = self.field
        images = field.normalize((g @ self.lines.T).T)
        line_perm = np.array([self.line_index[field.key(v)] for v in images], dtype=np.int64)
        if self.n == 2:
            return line_perm
        normals = field.normalize(self.planes @ np.linalg.inv(g))
        plane_perm = np.array([self.plane_index[field.key(c)] for c in normals], dtype=np.int64)
        return np.array([self.flag_index[(line_perm[li], plane_perm[pi])] for li, pi in self.flags], dtype=np.int64)

    def relative_position(self, a: int, b: int) -> str:
        """Name of the Weyl element w with (F_a, F_b) in position w"""
        fa, fb = self.flags[a], self.flags[b]
        if self.n == 2:
            return "1" if fa == fb else "s1"
        (l1, p1), (l2, p2) = fa, fb
        if l1 == l2 and p1 == p2:
            return "1"
        if p1 == p2:
            return "s1"
        if l1 == l2:
            return "s2"
        l2_in_p1 = bool(self.incidence[p1, l2])
        l1_in_p2 = bool(self.incidence[p2, l1])
        if l2_in_p1:
            return "s2s1"
        if l1_in_p2:
            return "s1s2"
        return "s3"

    def lines_coplanar(self, flags: Tuple[int, ...]) -> bool:
        vecs = self.field.GF(np.stack([self.line_of(f).view(np.ndarray) for f in flags]))
        return int(np.linalg.det(vecs)) == 0

    def planes_concurrent(self, flags: Tuple[int, ...]) -> bool:
        vecs = self.field.GF(np.stack([self.plane_of(f).view(np.ndarray) for f in flags]))
        return int(np.linalg.det(vecs)) == 0


@lru_cache(maxsize=None)
def flag_variety(q: int, n: int) -> FlagVariety:
    return FlagVariety(finite_field(q), n)
