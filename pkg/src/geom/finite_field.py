"""
Finite fields F_q and binary forms over them
"""

import itertools
import logging
from functools import lru_cache
from typing import List, Sequence, Tuple

import galois
import numpy as np

from src.models.errors import ConfigError


logger = logging.getLogger(__name__)

# homogeneous coordinates of the marked points 0, 1, inf
SITE_POINTS: Tuple[Tuple[int, int], ...] = ((0, 1), (1, 1), (1, 0))


class FiniteField:
    """F_q through galois lookup tables"""

    def __init__(self, q: int):
        if q < 2 or not galois.is_prime_power(q):
            raise ConfigError(f"q must be a prime power, got {q}")
        self.q = q
        self.GF = galois.GF(q)
        self.characteristic = int(self.GF.characteristic)
        self.degree = int(self.GF.degree)
        self.primitive = self.GF.primitive_element
        logger.debug(f"Built F_{q} with characteristic {self.characteristic}")

    def __repr__(self) -> str:
        return f"FiniteField({self.q})"

    def array(self, values) -> galois.FieldArray:
        return self.GF(np.asarray(values, dtype=np.int64))

    def zeros(self, shape) -> galois.FieldArray:
        return self.GF.Zeros(shape)

    def identity(self, n: int) -> galois.FieldArray:
        return self.GF.Identity(n)

    def additive_generators(self) -> List[galois.FieldArray]:
        """F_p-basis 1, w, ..., w^(r-1) of F_q"""
        return [self.primitive ** k for k in range(self.degree)]

    def units_generator(self) -> galois.FieldArray:
        return self.primitive

    def vectors(self, n: int) -> galois.FieldArray:
        """All of F_q^n, one row each"""
        return self.GF(np.array(list(itertools.product(range(self.q), repeat=n)), dtype=np.int64).reshape(-1, n))

    def normalize(self, rows: galois.FieldArray) -> galois.FieldArray:
        """Scale each nonzero row so that its first nonzero entry is 1"""
        raw = rows.view(np.ndarray)
        lead_pos = np.argmax(raw != 0, axis=1)
        lead = rows[np.arange(rows.shape[0]), lead_pos]
        if np.any(lead.view(np.ndarray) == 0):
            raise ConfigError("cannot normalize a zero vector")
        return rows / lead[:, None]

    def projective_points(self, n: int) -> galois.FieldArray:
        """Normalized representatives of the lines of F_q^n"""
        vecs = self.vectors(n)
        raw = vecs.view(np.ndarray)
        nonzero = raw.any(axis=1)
        lead = raw[np.arange(raw.shape[0]), np.argmax(raw != 0, axis=1)]
        return vecs[nonzero & (lead == 1)]

    @staticmethod
    def key(row: galois.FieldArray) -> Tuple[int, ...]:
        return tuple(int(x) for x in row.view(np.ndarray))

    # binary forms: coefficient k multiplies X^k Y^(d-k)

    def evaluate_form(self, coeffs: galois.FieldArray, site: int) -> galois.FieldArray:
        """Value of a homogeneous form at one of the marked points"""
        if coeffs.size == 0:
            return self.GF(0)
        x, y = SITE_POINTS[site]
        if (x, y) == (0, 1):
            return coeffs[0]
        if (x, y) == (1, 0):
            return coeffs[-1]
        return np.add.reduce(coeffs)

    def forms(self, degree: int) -> galois.FieldArray:
        """Every form of the given degree; a single empty row for negative degree"""
        if degree < 0:
            return self.zeros((1, 0))
        return self.vectors(degree + 1)

    def forms_coprime(self, forms: Sequence[galois.FieldArray]) -> bool:
        """No common zero on P^1 over the algebraic closure"""
        nonzero = [f for f in forms if f.size and np.any(f.view(np.ndarray))]
        if not nonzero:
            return False
        # common zero at infinity: every form has vanishing X^d coefficient
        if all(f.size == 0 or int(f[-1]) == 0 for f in forms):
            return False
        g = None
        for f in nonzero:
            # galois.Poly takes the highest degree coefficient first
            poly = galois.Poly(f[::-1], field=self.GF)
            g = poly if g is None else galois.gcd(g, poly)
            if g.degree == 0:
                return True
        return g.degree == 0


@lru_cache(maxsize=None)
def finite_field(q: int) -> FiniteField:
    return FiniteField(q)
