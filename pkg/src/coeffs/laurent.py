"""
Sparse Laurent polynomials in v = q^(1/2) with rational coefficients
"""

import re
from fractions import Fraction
from math import gcd, isqrt
from typing import Dict, List, Optional, Tuple, Union

from src.models.errors import InexactDivisionError, ZeroDivisorError


Number = Union[int, Fraction]

_TERM_SPLIT = re.compile(r"(?<!\^)(?=[+-])")


def _norm(c: Number) -> Number:
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


class LaurentScalar:
    """Element of Q[v, v^-1], stored as exponent -> coefficient with no zeros"""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Optional[Dict[int, Number]] = None):
        clean: Dict[int, Number] = {}
        if terms:
            for e, c in terms.items():
                if c:
                    clean[int(e)] = _norm(c)
        self.terms = clean
        self._hash: Optional[int] = None

    # constructors

    @classmethod
    def zero(cls) -> "LaurentScalar":
        return cls()

    @classmethod
    def one(cls) -> "LaurentScalar":
        return cls({0: 1})

    @classmethod
    def from_int(cls, c: Number) -> "LaurentScalar":
        return cls({0: c})

    @classmethod
    def monomial(cls, exponent: int, coeff: Number = 1) -> "LaurentScalar":
        return cls({exponent: coeff})

    @classmethod
    def v(cls, k: int = 1) -> "LaurentScalar":
        return cls({k: 1})

    @classmethod
    def q(cls, k: int = 1) -> "LaurentScalar":
        """q^k = v^(2k)"""
        return cls({2 * k: 1})

    @staticmethod
    def coerce(x: Union["LaurentScalar", Number]) -> "LaurentScalar":
        if isinstance(x, LaurentScalar):
            return x
        return LaurentScalar({0: x})

    # arithmetic

    def __add__(self, other):
        other = LaurentScalar.coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentScalar(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentScalar({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-LaurentScalar.coerce(other))

    def __rsub__(self, other):
        return LaurentScalar.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, LaurentScalar):
            if not other:
                return LaurentScalar()
            return LaurentScalar({e: c * other for e, c in self.terms.items()})
        if len(other.terms) == 1:
            (f, d), = other.terms.items()
            return LaurentScalar({e + f: c * d for e, c in self.terms.items()})
        out: Dict[int, Number] = {}
        for e, c in self.terms.items():
            for f, d in other.terms.items():
                out[e + f] = out.get(e + f, 0) + c * d
        return LaurentScalar(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.monomial_inverse() ** (-n)
        result = LaurentScalar.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = LaurentScalar.coerce(other)
        if not isinstance(other, LaurentScalar):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_constant(self) -> bool:
        return not self.terms or set(self.terms) == {0}

    def degree_span(self) -> Tuple[int, int]:
        if not self.terms:
            raise ZeroDivisorError("degree of the zero Laurent polynomial")
        return min(self.terms), max(self.terms)

    def shift(self, k: int) -> "LaurentScalar":
        """Multiply by v^k"""
        return LaurentScalar({e + k: c for e, c in self.terms.items()})

    def monomial_inverse(self) -> "LaurentScalar":
        if not self.is_monomial():
            raise InexactDivisionError(f"{self} is not a unit")
        (e, c), = self.terms.items()
        return LaurentScalar({-e: Fraction(1) / c})

    def content(self) -> Fraction:
        """Positive rational c with self/c having coprime integer coefficients"""
        if not self.terms:
            return Fraction(1)
        den = 1
        for c in self.terms.values():
            d = Fraction(c).denominator
            den = den * d // gcd(den, d)
        g = 0
        for c in self.terms.values():
            g = gcd(g, int(Fraction(c) * den))
        return Fraction(g, den)

    def exact_div(self, other: Union["LaurentScalar", Number]) -> "LaurentScalar":
        """self / other, which must be a Laurent polynomial"""
        other = LaurentScalar.coerce(other)
        if other.is_zero():
            raise ZeroDivisorError("division by zero")
        if self.is_zero():
            return LaurentScalar()
        if other.is_monomial():
            return self * other.monomial_inverse()
        lo_a, _ = self.degree_span()
        lo_b, _ = other.degree_span()
        quotient, remainder = poly_divmod(to_dense(self.shift(-lo_a)), to_dense(other.shift(-lo_b)))
        if any(remainder):
            raise InexactDivisionError(f"({self}) is not divisible by ({other})")
        return from_dense(quotient).shift(lo_a - lo_b)

    # evaluation

    def specialize(self, v0: Number) -> Fraction:
        v0 = Fraction(v0)
        if v0 == 0:
            if any(e < 0 for e in self.terms):
                raise ZeroDivisorError("specializing negative powers of v at v = 0")
            return Fraction(self.terms.get(0, 0))
        return sum((Fraction(c) * v0 ** e for e, c in self.terms.items()), Fraction(0))

    def vanishes_at_q(self, q: int) -> bool:
        """Zero at v = q^(1/2); for non-square q both parities must vanish"""
        even = sum((Fraction(c) * Fraction(q) ** (e // 2) for e, c in self.terms.items() if e % 2 == 0), Fraction(0))
        odd = sum((Fraction(c) * Fraction(q) ** (e // 2) for e, c in self.terms.items() if e % 2), Fraction(0))
        root = isqrt(q)
        if root * root == q:
            return even + root * odd == 0
        return even == 0 and odd == 0

    def mod_p(self, v0: int, p: int) -> int:
        """Image in F_p under v -> v0"""
        if v0 % p == 0 and any(e < 0 for e in self.terms):
            raise ZeroDivisorError("specializing negative powers of v at v = 0 mod p")
        total = 0
        for e, c in self.terms.items():
            if isinstance(c, Fraction):
                if c.denominator % p == 0:
                    raise ZeroDivisorError(f"denominator {c.denominator} vanishes mod {p}")
                cm = c.numerator * pow(c.denominator, -1, p)
            else:
                cm = c
            total += cm * pow(v0, e, p)
        return total % p

    # serialization

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts: List[str] = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                var = "v" if e == 1 else f"v^{e}"
                body = var if mag == 1 else f"{mag}*{var}"
            parts.append(f"{sign} {body}")
        text = " ".join(parts)
        if text.startswith("+ "):
            return text[2:]
        return "-" + text[2:]

    def __repr__(self) -> str:
        return f"LaurentScalar({self})"

    @classmethod
    def parse(cls, text: str) -> "LaurentScalar":
        """Inverse of str(); accepts terms like '3/2*v^-2', '-v', '4'"""
        s = text.replace(" ", "")
        if not s or s == "0":
            return cls()
        terms: Dict[int, Number] = {}
        for token in _TERM_SPLIT.split(s):
            if not token:
                continue
            sign = -1 if token[0] == "-" else 1
            body = token.lstrip("+-")
            if "v" in body:
                coef_part, _, power = body.partition("v")
                coef_part = coef_part.rstrip("*")
                coef = Fraction(coef_part) if coef_part else Fraction(1)
                exp = int(power[1:]) if power.startswith("^") else 1
            else:
                coef, exp = Fraction(body), 0
            terms[exp] = terms.get(exp, 0) + sign * coef
        return cls(terms)


# dense polynomial helpers, index = exponent

def to_dense(x: LaurentScalar) -> List[Fraction]:
    if not x.terms:
        return []
    lo, hi = x.degree_span()
    if lo < 0:
        raise ValueError("negative exponents in a polynomial")
    out = [Fraction(0)] * (hi + 1)
    for e, c in x.terms.items():
        out[e] = Fraction(c)
    return out


def from_dense(coeffs: List[Fraction]) -> LaurentScalar:
    return LaurentScalar({e: c for e, c in enumerate(coeffs) if c})


def _trim(a: List[Fraction]) -> List[Fraction]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_divmod(a: List[Fraction], b: List[Fraction]) -> Tuple[List[Fraction], List[Fraction]]:
    a = _trim(list(a))
    b = _trim(list(b))
    if not b:
        raise ZeroDivisorError("polynomial division by zero")
    if len(a) < len(b):
        return [], a
    quotient = [Fraction(0)] * (len(a) - len(b) + 1)
    lead = b[-1]
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        factor = a[-1] / lead
        quotient[shift] = factor
        for i, c in enumerate(b):
            a[shift + i] -= factor * c
        a.pop()
        _trim(a)
    return quotient, a


def poly_gcd(a: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    """Monic gcd over Q"""
    a = _trim(list(a))
    b = _trim(list(b))
    while b:
        _, r = poly_divmod(a, b)
        a, b = b, r
    if not a:
        return []
    lead = a[-1]
    return [c / lead for c in a]


def laurent_gcd(a: LaurentScalar, b: LaurentScalar) -> LaurentScalar:
    """Monic polynomial gcd of the v-free parts (monomial factors are units)"""
    if a.is_zero():
        return b if b.is_zero() else from_dense(poly_gcd(to_dense(b.shift(-b.degree_span()[0])), []))
    if b.is_zero():
        return from_dense(poly_gcd(to_dense(a.shift(-a.degree_span()[0])), []))
    pa = to_dense(a.shift(-a.degree_span()[0]))
    pb = to_dense(b.shift(-b.degree_span()[0]))
    return from_dense(poly_gcd(pa, pb))
