"""
Fraction field of Q[v, v^-1]
"""

from fractions import Fraction
from typing import Union

from src.coeffs.laurent import LaurentScalar, Number, laurent_gcd
from src.models.errors import ZeroDivisorError


class FracScalar:
    """num / den in lowest terms, den monic with lowest exponent 0"""

    __slots__ = ("num", "den")

    def __init__(self, num: Union[LaurentScalar, Number], den: Union[LaurentScalar, Number] = 1):
        num = LaurentScalar.coerce(num)
        den = LaurentScalar.coerce(den)
        if den.is_zero():
            raise ZeroDivisorError("fraction with zero denominator")
        if num.is_zero():
            self.num, self.den = LaurentScalar(), LaurentScalar.one()
            return
        g = laurent_gcd(num, den)
        if not g.is_constant():
            num = num.exact_div(g)
            den = den.exact_div(g)
        lo, hi = den.degree_span()
        lead = Fraction(den.terms[hi])
        self.num = num.shift(-lo) * (1 / lead)
        self.den = den.shift(-lo) * (1 / lead)

    @staticmethod
    def coerce(x) -> "FracScalar":
        if isinstance(x, FracScalar):
            return x
        return FracScalar(x)

    def __add__(self, other):
        other = FracScalar.coerce(other)
        if self.den == other.den:
            return FracScalar(self.num + other.num, self.den)
        return FracScalar(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return FracScalar(-self.num, self.den)

    def __sub__(self, other):
        return self + (-FracScalar.coerce(other))

    def __rsub__(self, other):
        return FracScalar.coerce(other) - self

    def __mul__(self, other):
        other = FracScalar.coerce(other)
        return FracScalar(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = FracScalar.coerce(other)
        if other.is_zero():
            raise ZeroDivisorError("division by zero fraction")
        return FracScalar(self.num * other.den, self.den * other.num)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, LaurentScalar)):
            other = FracScalar(other)
        if not isinstance(other, FracScalar):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_laurent(self) -> bool:
        return self.den.is_monomial()

    def as_laurent(self) -> LaurentScalar:
        return self.num.exact_div(self.den)

    def specialize(self, v0: Number) -> Fraction:
        d = self.den.specialize(v0)
        if d == 0:
            raise ZeroDivisorError(f"denominator {self.den} vanishes at v = {v0}")
        return self.num.specialize(v0) / d

    def __str__(self) -> str:
        if self.den == LaurentScalar.one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self) -> str:
        return f"FracScalar({self})"
