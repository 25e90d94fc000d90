"""
Exact and modular linear algebra over Q[v, v^-1]

Rows are sparse mappings column label -> LaurentScalar. ExactEchelon runs
fraction-free elimination; ModularEchelon runs the same computation over
F_p after v -> v0 with numpy float64 arithmetic.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, Hashable, List, Mapping, Optional, Sequence, Tuple

import galois
import numpy as np

from src.coeffs.laurent import LaurentScalar, laurent_gcd
from src.config.settings import LinalgSettings, get_settings
from src.models.data_models import LinalgMode
from src.models.errors import InternalConsistencyError, ZeroDivisorError


logger = logging.getLogger(__name__)

Row = Mapping[Hashable, LaurentScalar]

# keeps every float64 partial sum below 2^53 for p < 2^20
_INNER_CHUNK = 4096

# widest row set for which an exact solve may fall back to every row
_FULL_RETRY_LIMIT = 2000


def _frac_gcd(a: Fraction, b: Fraction) -> Fraction:
    return Fraction(gcd(a.numerator * b.denominator, b.numerator * a.denominator), a.denominator * b.denominator)


def _axpy(r: Mapping[int, LaurentScalar], f: LaurentScalar, p: Mapping[int, LaurentScalar]) -> Dict[int, LaurentScalar]:
    """r + f * p"""
    out = dict(r)
    for c, val in p.items():
        nv = out.get(c, LaurentScalar()) + f * val
        if nv:
            out[c] = nv
        else:
            out.pop(c, None)
    return out


def _scale(r: Mapping[int, LaurentScalar], f: LaurentScalar) -> Dict[int, LaurentScalar]:
    return {c: val * f for c, val in r.items()}


class ExactEchelon:
    """Incremental fraction-free echelon form

    With tracking on, every stored row carries its combination of the
    input rows, so that membership queries return explicit certificates.
    """

    def __init__(self, track: bool = False):
        self.track = track
        self._col_index: Dict[Hashable, int] = {}
        self.rows: List[Dict[int, LaurentScalar]] = []
        self.pivot_cols: List[int] = []
        self.combos: List[Dict[int, LaurentScalar]] = []
        self.n_inputs = 0

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _encode(self, row: Row) -> Dict[int, LaurentScalar]:
        out: Dict[int, LaurentScalar] = {}
        for label, val in row.items():
            val = LaurentScalar.coerce(val)
            if val.is_zero():
                continue
            idx = self._col_index.get(label)
            if idx is None:
                idx = len(self._col_index)
                self._col_index[label] = idx
            out[idx] = val
        return out

    def _reduce(self, r: Dict[int, LaurentScalar]):
        # invariant: r = sigma * input - sum K_i * input_i
        sigma = LaurentScalar.one()
        K: Dict[int, LaurentScalar] = {}
        for pos, col in enumerate(self.pivot_cols):
            a = r.get(col)
            if a is None:
                continue
            p = self.rows[pos]
            b = p[col]
            if b.is_monomial():
                f = a * b.monomial_inverse()
                r = _axpy(r, -f, p)
                if self.track:
                    K = _axpy(K, f, self.combos[pos])
            else:
                r = _axpy(_scale(r, b), -a, p)
                if self.track:
                    sigma = sigma * b
                    K = _axpy(_scale(K, b), a, self.combos[pos])
                r, sigma, K = self._strip_unit(r, sigma, K)
        return r, sigma, K

    def _strip_unit(self, r, sigma, K):
        """Divide out the largest monomial unit common to all entries"""
        if not r:
            return r, sigma, K
        lo = min(val.degree_span()[0] for val in r.values())
        g = Fraction(0)
        for val in r.values():
            c = val.content()
            g = c if g == 0 else _frac_gcd(g, c)
        unit = LaurentScalar.monomial(lo, g)
        if unit == LaurentScalar.one():
            return r, sigma, K
        inv = unit.monomial_inverse()
        r = _scale(r, inv)
        if self.track:
            sigma = sigma * inv
            K = _scale(K, inv)
        return r, sigma, K

    @staticmethod
    def _strip_polynomial_content(r: Dict[int, LaurentScalar]) -> Dict[int, LaurentScalar]:
        g: Optional[LaurentScalar] = None
        for val in r.values():
            g = val if g is None else laurent_gcd(g, val)
            if g.is_constant():
                return r
        if g is None:
            return r
        return {c: val.exact_div(g) for c, val in r.items()}

    @staticmethod
    def _choose_pivot(r: Dict[int, LaurentScalar]) -> int:
        monomials = [c for c, val in r.items() if val.is_monomial()]
        if monomials:
            return min(monomials)
        return min(r, key=lambda c: (len(r[c].terms), c))

    def add(self, row: Row) -> bool:
        """Insert a row; True if it raised the rank"""
        index = self.n_inputs
        self.n_inputs += 1
        r, sigma, K = self._reduce(self._encode(row))
        if not r:
            return False
        r, sigma, K = self._strip_unit(r, sigma, K)
        if not self.track:
            r = self._strip_polynomial_content(r)
        self.rows.append(r)
        self.pivot_cols.append(self._choose_pivot(r))
        if self.track:
            combo = {i: -k for i, k in K.items()}
            combo[index] = combo.get(index, LaurentScalar()) + sigma
            self.combos.append({i: k for i, k in combo.items() if k})
        return True

    def add_many(self, rows: Sequence[Row]) -> int:
        for row in rows:
            self.add(row)
        return self.rank

    def contains(self, row: Row) -> bool:
        r, _, _ = self._reduce(self._encode(row))
        return not r

    def solve(self, target: Row) -> Optional[Tuple[LaurentScalar, Dict[int, LaurentScalar]]]:
        """(sigma, combo) with sigma * target = sum combo[i] * input_i, or None"""
        if not self.track:
            raise InternalConsistencyError("solve requires a tracking echelon")
        r, sigma, K = self._reduce(self._encode(target))
        if r:
            return None
        return sigma, {i: k for i, k in K.items() if k}


def matmul_mod(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """A @ B mod p for float64 arrays with entries in [0, p)"""
    inner = A.shape[1]
    if inner == 0:
        return np.zeros((A.shape[0], B.shape[1]))
    out = np.zeros((A.shape[0], B.shape[1]))
    for start in range(0, inner, _INNER_CHUNK):
        stop = min(start + _INNER_CHUNK, inner)
        out = np.mod(out + np.mod(A[:, start:stop] @ B[start:stop, :], p), p)
    return out


class ModularEchelon:
    """Incremental reduced row echelon form over F_p

    Columns are registered on first appearance. Stored rows live in
    preallocated arrays that grow by doubling. With tracking on, C records
    each stored row as a combination of the input rows.
    """

    def __init__(self, p: int, v0: int, track: bool = False):
        if p >= 1 << 20:
            raise ValueError(f"prime {p} too large for float64 elimination")
        self.p = p
        self.v0 = v0 % p
        self.track = track
        self._col_index: Dict[Hashable, int] = {}
        self._value_cache: Dict[LaurentScalar, int] = {}
        self._P = np.zeros((16, 16))
        self._C = np.zeros((16, 16)) if track else np.zeros((0, 0))
        self.pivot_cols: List[int] = []
        # input row index that introduced each stored pivot
        self.pivot_inputs: List[int] = []
        self.n_inputs = 0

    @property
    def rank(self) -> int:
        return len(self.pivot_cols)

    @property
    def ncols(self) -> int:
        return len(self._col_index)

    @property
    def P(self) -> np.ndarray:
        return self._P[: self.rank, : self.ncols]

    @property
    def C(self) -> np.ndarray:
        return self._C[: self.rank, : self.n_inputs]

    def _ensure(self, rows: int, cols: int, inputs: int) -> None:
        r_cap, c_cap = self._P.shape
        if rows > r_cap or cols > c_cap:
            grown = np.zeros((max(r_cap, 2 * rows), max(c_cap, 2 * cols)))
            grown[:r_cap, :c_cap] = self._P
            self._P = grown
        if self.track:
            r_cap, i_cap = self._C.shape
            if rows > r_cap or inputs > i_cap:
                grown = np.zeros((max(r_cap, 2 * rows), max(i_cap, 2 * inputs)))
                grown[:r_cap, :i_cap] = self._C
                self._C = grown

    def value(self, x: LaurentScalar) -> int:
        cached = self._value_cache.get(x)
        if cached is None:
            cached = x.mod_p(self.v0, self.p)
            self._value_cache[x] = cached
        return cached

    def encode(self, rows: Sequence[Row]) -> np.ndarray:
        for row in rows:
            for label in row:
                if label not in self._col_index:
                    self._col_index[label] = len(self._col_index)
        dense = np.zeros((len(rows), len(self._col_index)))
        for i, row in enumerate(rows):
            for label, val in row.items():
                dense[i, self._col_index[label]] = self.value(LaurentScalar.coerce(val))
        return dense

    def _eliminate(self, t: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Residue of t against the stored rows, and the pivot coefficients used"""
        if not self.pivot_cols:
            return t, np.zeros((t.shape[0], 0))
        k = t[:, self.pivot_cols]
        return np.mod(t - matmul_mod(k, self.P, self.p), self.p), k

    def add_rows(self, rows: Sequence[Row]) -> int:
        """Insert a block of rows; returns the number of new pivots"""
        if not rows:
            return 0
        B = self.encode(rows)
        m = B.shape[0]
        first_input = self.n_inputs
        self.n_inputs += m
        self._ensure(self.rank + m, self.ncols, self.n_inputs)
        B, K = self._eliminate(B)
        CB = None
        if self.track:
            CB = np.zeros((m, self.n_inputs))
            CB[np.arange(m), first_input + np.arange(m)] = 1
            if K.shape[1]:
                CB = np.mod(CB - matmul_mod(K, self.C, self.p), self.p)
        first_new = self.rank
        added = 0
        for i in range(m):
            r = B[i]
            c = CB[i] if CB is not None else None
            if self.rank > first_new:
                new_pivots = self.pivot_cols[first_new:]
                k = r[new_pivots][None, :]
                if k.any():
                    r = np.mod(r - matmul_mod(k, self._P[first_new : self.rank, : self.ncols], self.p)[0], self.p)
                    if c is not None:
                        fresh = self._C[first_new : self.rank, : self.n_inputs]
                        c = np.mod(c - matmul_mod(k, fresh, self.p)[0], self.p)
            nz = np.flatnonzero(r)
            if nz.size == 0:
                continue
            j = int(nz[0])
            inv = pow(int(r[j]), -1, self.p)
            r = np.mod(r * inv, self.p)
            # clear column j from the stored rows that carry it
            hit = np.flatnonzero(self._P[: self.rank, j])
            if hit.size:
                col = self._P[hit, j].copy()
                block = self._P[hit, : self.ncols]
                self._P[hit, : self.ncols] = np.mod(block - np.mod(np.outer(col, r), self.p), self.p)
            if c is not None:
                c = np.mod(c * inv, self.p)
                if hit.size:
                    self._C[hit, : self.n_inputs] = np.mod(
                        self._C[hit, : self.n_inputs] - np.mod(np.outer(col, c), self.p), self.p
                    )
                self._C[self.rank, : self.n_inputs] = c
            self._P[self.rank, : self.ncols] = r
            self.pivot_cols.append(j)
            self.pivot_inputs.append(first_input + i)
            added += 1
        return added

    def reduce_vector(self, row: Row) -> np.ndarray:
        t = self.encode([row])
        self._ensure(self.rank, self.ncols, self.n_inputs)
        residue, _ = self._eliminate(t)
        return residue[0]

    def contains(self, row: Row) -> bool:
        return not self.reduce_vector(row).any()

    def support_of_solution(self, row: Row) -> Optional[List[int]]:
        """Input indices used by a mod-p solution, or None if row is outside the span"""
        if not self.track:
            raise InternalConsistencyError("support extraction requires tracking")
        t = self.encode([row])
        self._ensure(self.rank, self.ncols, self.n_inputs)
        residue, k = self._eliminate(t)
        if residue.any():
            return None
        if not k.shape[1]:
            return []
        combo = matmul_mod(k, self.C, self.p)[0]
        return [int(i) for i in np.flatnonzero(combo)]



@dataclass
class RankResult:
    """Rank with the backend that produced it"""
    rank: int
    mode_used: LinalgMode
    agreed: bool = True
    samples: List[int] = field(default_factory=list)


def specialization_points(settings: LinalgSettings, count: int) -> List[Tuple[int, int]]:
    """`count` pairs (p, v0) with p the largest primes below the bound"""
    rng = np.random.default_rng(settings.seed)
    points: List[Tuple[int, int]] = []
    p = settings.prime_bound
    while len(points) < count and p > 5:
        p = int(galois.prev_prime(p - 1))
        points.append((p, int(rng.integers(2, p - 1))))
    return points


def modular_rank(rows: Sequence[Row], p: int, v0: int) -> int:
    echelon = ModularEchelon(p, v0)
    echelon.add_rows(list(rows))
    return echelon.rank


def dedupe_rows(rows: Sequence[Row]) -> List[Row]:
    """Drop zero rows and rows equal to an earlier row up to a unit c*v^k"""
    seen = set()
    out: List[Row] = []
    for row in rows:
        row = {k: LaurentScalar.coerce(v) for k, v in row.items() if v}
        if not row:
            continue
        lo = min(val.degree_span()[0] for val in row.values())
        g = Fraction(0)
        for val in row.values():
            c = val.content()
            g = c if g == 0 else _frac_gcd(g, c)
        lead = row[min(row, key=repr)]
        if lead.terms[max(lead.terms)] < 0:
            g = -g
        unit_inv = LaurentScalar.monomial(-lo, 1 / g)
        signature = frozenset((k, val * unit_inv) for k, val in row.items())
        if signature in seen:
            continue
        seen.add(signature)
        out.append(row)
    return out


def matrix_rank(
    rows: Sequence[Row],
    mode: Optional[LinalgMode] = None,
    settings: Optional[LinalgSettings] = None,
) -> RankResult:
    """Rank over Q(v)

    Exact elimination is used in exact mode while rows x columns stays within
    the exact entry budget; otherwise two specializations must agree. A
    specialized rank never exceeds the true rank.
    """
    settings = settings or get_settings().linalg
    mode = LinalgMode(mode or settings.mode)
    rows = dedupe_rows(rows)
    columns = {label for row in rows for label in row}
    if mode == LinalgMode.EXACT and len(rows) * len(columns) <= settings.exact_entry_budget:
        echelon = ExactEchelon()
        echelon.add_many(rows)
        return RankResult(rank=echelon.rank, mode_used=LinalgMode.EXACT)
    if mode == LinalgMode.EXACT:
        logger.info(f"Exact rank of {len(rows)}x{len(columns)} exceeds budget, using certified specialization")
    samples = []
    for p, v0 in specialization_points(settings, max(2, settings.num_primes)):
        try:
            samples.append(modular_rank(rows, p, v0))
        except ZeroDivisorError as e:
            logger.warning(f"Specialization at p={p}, v0={v0} failed: {e}")
    if not samples:
        raise InternalConsistencyError("no usable specialization point")
    agreed = len(set(samples)) == 1
    if not agreed:
        logger.warning(f"Specialized ranks disagree: {samples}")
    return RankResult(rank=max(samples), mode_used=LinalgMode.SPECIALIZED, agreed=agreed, samples=samples)


@dataclass
class ExactMatrix:
    """Sparse matrix over Q[v, v^-1] with optional row labels"""
    rows: List[Dict[Hashable, LaurentScalar]]
    row_labels: List[Hashable] = field(default_factory=list)

    @classmethod
    def from_dense(cls, entries: Sequence[Sequence]) -> "ExactMatrix":
        rows = []
        for line in entries:
            rows.append({j: LaurentScalar.coerce(x) for j, x in enumerate(line) if x})
        return cls(rows=rows)

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.rows), len({label for row in self.rows for label in row})

    def rank(self, mode: Optional[LinalgMode] = None) -> int:
        return matrix_rank(self.rows, mode=mode).rank

    def contains(self, vector: Row) -> bool:
        """Exact row-space membership"""
        echelon = ExactEchelon()
        echelon.add_many(self.rows)
        return echelon.contains(vector)


@dataclass
class MembershipSolution:
    """sigma * target = sum coefficients[i] * rows[i], checked exactly"""
    sigma: LaurentScalar
    coefficients: Dict[int, LaurentScalar]


def combine_rows(rows: Sequence[Row], coefficients: Mapping[int, LaurentScalar]) -> Dict[Hashable, LaurentScalar]:
    out: Dict[Hashable, LaurentScalar] = {}
    for i, coeff in coefficients.items():
        for label, val in rows[i].items():
            nv = out.get(label, LaurentScalar()) + coeff * val
            if nv:
                out[label] = nv
            else:
                out.pop(label, None)
    return out


def check_solution(rows: Sequence[Row], target: Row, solution: MembershipSolution) -> bool:
    lhs = {label: solution.sigma * LaurentScalar.coerce(val) for label, val in target.items()}
    lhs = {k: v for k, v in lhs.items() if v}
    return combine_rows(rows, solution.coefficients) == lhs


def solve_membership(
    rows: Sequence[Row],
    target: Row,
    settings: Optional[LinalgSettings] = None,
    screen: Optional[ModularEchelon] = None,
) -> Optional[MembershipSolution]:
    """Explicit exact combination of rows equal to target, or None

    A mod-p pass screens membership. The rows that introduced its pivots
    span everything, so a tracked mod-p pass on those alone selects the
    support, and the exact elimination runs on that support only.
    """
    settings = settings or get_settings().linalg
    rows = list(rows)
    if not target:
        return MembershipSolution(sigma=LaurentScalar.one(), coefficients={})
    if screen is None:
        (p, v0), = specialization_points(settings, 1)
        screen = ModularEchelon(p, v0)
        screen.add_rows(rows)
    if not screen.contains(target):
        return None
    basis = list(screen.pivot_inputs)
    tracked = ModularEchelon(screen.p, screen.v0, track=True)
    tracked.add_rows([rows[i] for i in basis])
    local_support = tracked.support_of_solution(target)
    if local_support is None:
        raise InternalConsistencyError("pivot rows of the screen do not span its row space")
    candidates = [[basis[i] for i in local_support], basis]
    if len(rows) <= _FULL_RETRY_LIMIT:
        candidates.append(list(range(len(rows))))
    for support in candidates:
        echelon = ExactEchelon(track=True)
        for i in support:
            echelon.add(rows[i])
        solved = echelon.solve(target)
        if solved is None:
            # the specialization can hide an exact dependency
            logger.info(f"Exact solve failed on {len(support)} rows, widening the support")
            continue
        sigma, local = solved
        solution = MembershipSolution(sigma=sigma, coefficients={support[i]: c for i, c in local.items()})
        if not check_solution(rows, target, solution):
            raise InternalConsistencyError("membership certificate does not reproduce the target")
        return solution
    return None
