from fractions import Fraction

import pytest

from src.coeffs.fraction import FracScalar
from src.coeffs.laurent import LaurentScalar
from src.coeffs.matrix import (
    ExactMatrix,
    check_solution,
    matrix_rank,
    modular_rank,
    solve_membership,
    specialization_points,
)
from src.config.settings import LinalgSettings
from src.models.data_models import LinalgMode
from src.models.errors import InexactDivisionError, ZeroDivisorError


def L(text):
    return LaurentScalar.parse(text)


class TestLaurentScalar:
    """Sparse Laurent polynomials in v"""

    def test_parse_and_render(self):
        """Rendering and parsing are inverse"""
        for text in ["v^2 - 1", "3 - v^-2", "3/2*v^-1", "v", "0", "v^4 - 2*v^2 + 1"]:
            assert str(L(text)) == text

    def test_q_is_v_squared(self):
        """q^k = v^(2k)"""
        assert LaurentScalar.q(1) == LaurentScalar.v(2)
        assert LaurentScalar.q(-1) * LaurentScalar.q(1) == LaurentScalar.one()

    def test_exact_division(self):
        """(q - 1)(q + 1) / (q + 1) = q - 1"""
        assert L("v^4 - 1").exact_div(L("v^2 + 1")) == L("v^2 - 1")
        assert L("v^3 - v").exact_div(L("v")) == L("v^2 - 1")

    def test_inexact_division_raises(self):
        """Nonzero remainder is an error"""
        with pytest.raises(InexactDivisionError):
            L("v^2 + 1").exact_div(L("v + 1"))
        with pytest.raises(ZeroDivisorError):
            L("v").exact_div(LaurentScalar.zero())

    def test_specialize(self):
        """Evaluation at rationals, refused at v = 0 for negative powers"""
        assert L("v^2 - 1").specialize(2) == 3
        assert L("v^-1").specialize(Fraction(1, 3)) == 3
        with pytest.raises(ZeroDivisorError):
            L("v^-1").specialize(0)

    def test_vanishes_at_q(self):
        """Zeros at v = q^(1/2), rational or not"""
        assert L("v^2 - 2").vanishes_at_q(2)
        assert not L("v^2 - 1").vanishes_at_q(2)
        assert L("v - 2").vanishes_at_q(4)
        assert not L("v - 2").vanishes_at_q(2)
        assert L("v^-1 - 2*v^-3").vanishes_at_q(2)

    def test_mod_p(self):
        """Image in F_p"""
        assert L("v^2 - 1").mod_p(3, 7) == 1
        assert L("1/2").mod_p(1, 5) == 3


class TestFracScalar:
    """Fractions of Laurent polynomials"""

    def test_lowest_terms(self):
        """Common factors cancel"""
        assert FracScalar(L("v^4 - 1"), L("v^2 - 1")) == FracScalar(L("v^2 + 1"))
        assert FracScalar(L("v^4 - 1"), L("v^2 - 1")).is_laurent()
        assert FracScalar(L("v^4 - 1"), L("v^2 - 1")).as_laurent() == L("v^2 + 1")

    def test_arithmetic(self):
        """1/(q-1) + 1 = q/(q-1)"""
        a = FracScalar(1, L("v^2 - 1")) + 1
        assert a == FracScalar(L("v^2"), L("v^2 - 1"))
        assert a.specialize(2) == Fraction(4, 3)

    def test_zero_denominator(self):
        """Zero denominators are refused"""
        with pytest.raises(ZeroDivisorError):
            FracScalar(1, 0)


class TestExactLinearAlgebra:
    """Ranks and membership over Q(v)"""

    ROWS = [
        {0: L("v"), 1: L("1")},
        {0: L("v^2"), 1: L("v")},
        {1: L("v^2 - 1"), 2: L("1")},
        {0: L("1"), 2: L("1")},
    ]

    def test_exact_rank(self):
        """A v-multiple of a row does not raise the rank"""
        assert matrix_rank(self.ROWS, mode=LinalgMode.EXACT).rank == 3

    def test_specialized_rank_agrees(self):
        """Two specializations agree with the exact rank"""
        result = matrix_rank(self.ROWS, mode=LinalgMode.SPECIALIZED)
        assert result.rank == 3
        assert result.agreed

    def test_modular_rank_bound(self):
        """Specialized ranks never exceed the exact rank"""
        assert modular_rank(self.ROWS, 101, 5) <= 3

    def test_membership(self):
        """Row-space membership and an explicit checked combination"""
        matrix = ExactMatrix(rows=list(self.ROWS))
        assert matrix.contains({0: L("v^3"), 1: L("v^2")})
        target = {0: L("v"), 1: L("v^2"), 2: L("1")}
        solution = solve_membership(self.ROWS, target)
        assert solution is not None
        assert check_solution(self.ROWS, target, solution)

    def test_dense_constructor(self):
        """Dense rows drop zeros"""
        matrix = ExactMatrix.from_dense([[1, 0], [0, 1], [1, 1]])
        assert matrix.shape == (3, 2)
        assert matrix.rank(LinalgMode.EXACT) == 2

    def test_specialization_points(self):
        """Distinct primes below the bound, largest first, with v0 in range"""
        points = specialization_points(LinalgSettings(prime_bound=100, seed=7), 3)
        assert [p for p, _ in points] == [97, 89, 83]
        assert all(2 <= v0 < p - 1 for p, v0 in points)
