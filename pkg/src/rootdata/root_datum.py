"""
Root data of type A: coweight lattice, roots, finite Weyl group
"""

import itertools
import logging
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, List, Sequence, Set, Tuple

from src.models.data_models import GroupKind
from src.models.errors import RootDatumError


logger = logging.getLogger(__name__)

Coweight = Tuple[int, ...]
Root = Tuple[int, int]
WeylElt = Tuple[int, ...]


class RootDatum:
    """Root datum of SL_n or PGL_n

    Coweights are integer n-tuples. For SL_n they sum to zero; for PGL_n
    they are taken modulo the diagonal and stored with minimum entry 0.
    Roots are index pairs (i, j) pairing as lam[i] - lam[j]; the root is
    positive iff i < j. Weyl elements are permutation tuples.
    """

    def __init__(self, kind: GroupKind, n: int):
        if n < 2:
            raise RootDatumError(f"rank too small: n={n}")
        if kind == GroupKind.SL and n % 2 == 0:
            # pairing gcd 2 for n=2, half-integral rho for every even n
            raise RootDatumError(f"SL_{n} rejected: rho is not a coweight or pairing is not surjective")
        self.kind = kind
        self.n = n
        self.rank = n - 1
        self.weyl: List[WeylElt] = sorted(itertools.permutations(range(n)))
        self.identity: WeylElt = tuple(range(n))
        self.rho: Coweight = self._make_rho()
        self.theta: Root = (0, n - 1)
        logger.debug(f"Built root datum {self.key} with |W|={len(self.weyl)}")

    @property
    def key(self) -> str:
        if self.kind == GroupKind.PGL:
            return "pgl2" if self.n == 2 else f"pgln:{self.n}"
        return "sl3" if self.n == 3 else f"sln:{self.n}"

    def __repr__(self) -> str:
        return f"RootDatum({self.key})"

    def __eq__(self, other) -> bool:
        return isinstance(other, RootDatum) and self.kind == other.kind and self.n == other.n

    def __hash__(self) -> int:
        return hash((self.kind, self.n))

    def _make_rho(self) -> Coweight:
        if self.kind == GroupKind.SL:
            return tuple((self.n - 1) // 2 - i for i in range(self.n))
        return self.canon(tuple(self.n - 1 - i for i in range(self.n)))

    # coweights

    def canon(self, lam: Sequence[int]) -> Coweight:
        """Canonical representative of a coweight"""
        lam = tuple(int(c) for c in lam)
        if len(lam) != self.n:
            raise RootDatumError(f"coweight {lam} does not belong to {self.key}")
        if self.kind == GroupKind.SL:
            if sum(lam) != 0:
                raise RootDatumError(f"coweight {lam} of {self.key} must sum to zero")
            return lam
        m = min(lam)
        return tuple(c - m for c in lam)

    def zero(self) -> Coweight:
        return tuple([0] * self.n)

    def add(self, a: Coweight, b: Coweight) -> Coweight:
        return self.canon(tuple(x + y for x, y in zip(a, b)))

    def sub(self, a: Coweight, b: Coweight) -> Coweight:
        return self.canon(tuple(x - y for x, y in zip(a, b)))

    def scale(self, k: int, a: Coweight) -> Coweight:
        return self.canon(tuple(k * x for x in a))

    def neg(self, a: Coweight) -> Coweight:
        return self.scale(-1, a)

    # roots

    def positive_roots(self) -> List[Root]:
        return [(i, j) for i in range(self.n) for j in range(i + 1, self.n)]

    def simple_root(self, i: int) -> Root:
        """Simple root alpha_i, 1-indexed"""
        if not 1 <= i <= self.rank:
            raise RootDatumError(f"no simple root {i} in {self.key}")
        return (i - 1, i)

    def simple_coroot(self, i: int) -> Coweight:
        a, b = self.simple_root(i)
        vec = [0] * self.n
        vec[a], vec[b] = 1, -1
        return self.canon(vec)

    def coroot(self, root: Root) -> Coweight:
        vec = [0] * self.n
        vec[root[0]] += 1
        vec[root[1]] -= 1
        return self.canon(vec)

    def theta_coroot(self) -> Coweight:
        return self.coroot(self.theta)

    def pair(self, root: Root, lam: Coweight) -> int:
        """Pairing <root, lam>"""
        if len(lam) != self.n or not (0 <= root[0] < self.n and 0 <= root[1] < self.n):
            raise RootDatumError(f"root {root} and coweight {lam} do not belong to {self.key}")
        return lam[root[0]] - lam[root[1]]

    def is_positive(self, root: Root) -> bool:
        return root[0] < root[1]

    def cartan_matrix(self) -> List[List[int]]:
        return [
            [self.pair(self.simple_root(i), self.simple_coroot(j)) for j in range(1, self.n)]
            for i in range(1, self.n)
        ]

    def rho_check_pairing(self, lam: Coweight) -> Fraction:
        """<rho-check, lam>: half the sum of positive-root pairings"""
        return Fraction(sum(self.pair(r, lam) for r in self.positive_roots()), 2)

    def is_dominant(self, lam: Coweight) -> bool:
        return all(lam[i] >= lam[i + 1] for i in range(self.n - 1))

    def is_antidominant(self, lam: Coweight) -> bool:
        return all(lam[i] <= lam[i + 1] for i in range(self.n - 1))

    def dominant_representative(self, lam: Coweight) -> Coweight:
        return self.canon(sorted(lam, reverse=True))

    def lattice_basis(self) -> List[Coweight]:
        """Z-basis of the coweight lattice"""
        if self.kind == GroupKind.SL:
            return [self.simple_coroot(i) for i in range(1, self.n)]
        basis = []
        for i in range(self.n - 1):
            vec = [0] * self.n
            vec[i] = 1
            basis.append(self.canon(vec))
        return basis

    def box(self, radius: int) -> List[Coweight]:
        """Coweights with coordinates in [-radius, radius] (last coordinate 0 for PGL)"""
        out = set()
        if self.kind == GroupKind.SL:
            for head in itertools.product(range(-radius, radius + 1), repeat=self.n - 1):
                last = -sum(head)
                if -radius <= last <= radius:
                    out.add(self.canon(head + (last,)))
        else:
            for head in itertools.product(range(-radius, radius + 1), repeat=self.n - 1):
                out.add(self.canon(head + (0,)))
        return sorted(out)

    # finite Weyl group

    def compose(self, w1: WeylElt, w2: WeylElt) -> WeylElt:
        return tuple(w1[w2[i]] for i in range(self.n))

    def w_inverse(self, w: WeylElt) -> WeylElt:
        inv = [0] * self.n
        for i, wi in enumerate(w):
            inv[wi] = i
        return tuple(inv)

    def simple_reflection(self, i: int) -> WeylElt:
        a, b = self.simple_root(i)
        perm = list(range(self.n))
        perm[a], perm[b] = b, a
        return tuple(perm)

    def reflection(self, root: Root) -> WeylElt:
        perm = list(range(self.n))
        perm[root[0]], perm[root[1]] = root[1], root[0]
        return tuple(perm)

    def weyl_act(self, w: WeylElt, lam: Coweight) -> Coweight:
        out = [0] * self.n
        for i in range(self.n):
            out[w[i]] = lam[i]
        return self.canon(out)

    def root_image(self, w: WeylElt, root: Root) -> Root:
        return (w[root[0]], w[root[1]])

    def weyl_length(self, w: WeylElt) -> int:
        return sum(1 for i in range(self.n) for j in range(i + 1, self.n) if w[i] > w[j])

    def weyl_word(self, w: WeylElt) -> List[int]:
        """Reduced word of w in simple reflections, smallest descent first"""
        word: List[int] = []
        while w != self.identity:
            for i in range(1, self.n):
                s = self.simple_reflection(i)
                ws = self.compose(w, s)
                if self.weyl_length(ws) < self.weyl_length(w):
                    word.append(i)
                    w = ws
                    break
        return list(reversed(word))

    def weyl_from_word(self, word: Sequence[int]) -> WeylElt:
        w = self.identity
        for i in word:
            w = self.compose(w, self.simple_reflection(i))
        return w

    def weyl_name(self, w: WeylElt) -> str:
        """Word name such as 's1s2'; 's3' for the longest element of SL3"""
        if self.n == 3 and w == (2, 1, 0):
            return "s3"
        word = self.weyl_word(w)
        return "".join(f"s{i}" for i in word) or "1"

    def weyl_from_name(self, name: str) -> WeylElt:
        name = name.strip()
        if name == "1":
            return self.identity
        if self.n == 3 and name == "s3":
            return (2, 1, 0)
        parts = [p for p in name.split("s") if p]
        return self.weyl_from_word([int(p) for p in parts])

    def orbit(self, lam: Coweight) -> Set[Coweight]:
        return {self.weyl_act(w, lam) for w in self.weyl}

    def shifted_dominant_members(self, lam: Coweight) -> List[Coweight]:
        """W-orbit of lam intersected with the shifted dominant cone -rho + dominant"""
        members = [mu for mu in self.orbit(lam) if self.is_dominant(self.add(mu, self.rho))]
        return sorted(members, key=lambda mu: (-self.rho_check_pairing(mu), tuple(-c for c in mu)))

    def iter_dominant(self, bound: int) -> Iterator[Coweight]:
        for lam in self.box(bound):
            if self.is_dominant(lam):
                yield lam


@lru_cache(maxsize=None)
def parse_group_key(key: str) -> RootDatum:
    """Root datum from a config key: pgl2, sl3, sln:n or pgln:n"""
    key = key.strip().lower()
    try:
        if key == "pgl2":
            return RootDatum(GroupKind.PGL, 2)
        if key == "sl3":
            return RootDatum(GroupKind.SL, 3)
        if key.startswith("sln:"):
            return RootDatum(GroupKind.SL, int(key[4:]))
        if key.startswith("pgln:"):
            return RootDatum(GroupKind.PGL, int(key[5:]))
    except ValueError as e:
        raise RootDatumError(f"bad group key {key}: {e}") from e
    raise RootDatumError(f"unknown group key: {key}")
