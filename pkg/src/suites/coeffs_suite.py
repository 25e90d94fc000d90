"""
Self-tests of Laurent arithmetic and the rank backends
"""

import logging
from fractions import Fraction
from typing import List

from src.coeffs.laurent import LaurentScalar
from src.coeffs.matrix import ExactMatrix, matrix_rank
from src.models.data_models import LinalgMode, SuiteName
from src.models.errors import InexactDivisionError
from src.suites.base import Claim, ClaimOutcome, ClaimSuite, outcome


logger = logging.getLogger(__name__)

SAMPLES = ["v^2 - 1", "v + 1", "v^-1", "2*v^3 - v + 1", "v^4 - v^2", "-v^-2 + 3"]


class CoeffsSuite(ClaimSuite):
    """Exact division, specialization and rank agreement"""

    name = SuiteName.COEFFS

    def claims(self) -> List[Claim]:
        return [
            Claim("coeffs.exact_division", "products divide back exactly; remainders are refused",
                  self.check_division),
            Claim("coeffs.specialization", "specialization is a ring map at rational points",
                  self.check_specialization),
            Claim("coeffs.rank_modes", "exact and specialized ranks agree on a known matrix",
                  self.check_rank),
        ]

    def check_division(self) -> ClaimOutcome:
        values = [LaurentScalar.parse(s) for s in SAMPLES]
        failed = [
            f"({a})*({b})" for a in values for b in values if (a * b).exact_div(b) != a
        ]
        try:
            LaurentScalar.parse("v^2 + 1").exact_div(LaurentScalar.parse("v + 1"))
            refused = False
        except InexactDivisionError:
            refused = True
        return outcome(not failed and refused, {"pairs": len(values) ** 2, "failed": failed, "refused": refused})

    def check_specialization(self) -> ClaimOutcome:
        values = [LaurentScalar.parse(s) for s in SAMPLES]
        failed = []
        for v0 in (Fraction(3, 2), Fraction(-2), Fraction(5, 7)):
            for a in values:
                for b in values:
                    if (a * b).specialize(v0) != a.specialize(v0) * b.specialize(v0):
                        failed.append(f"({a})*({b}) at {v0}")
                    if (a + b).specialize(v0) != a.specialize(v0) + b.specialize(v0):
                        failed.append(f"({a})+({b}) at {v0}")
        return outcome(not failed, {"failed": failed})

    def check_rank(self) -> ClaimOutcome:
        v = LaurentScalar.v(1)
        one = LaurentScalar.one()
        matrix = ExactMatrix(rows=[
            {0: v, 1: one},
            {0: v * v, 1: v},
            {1: LaurentScalar.parse("v^2 - 1"), 2: one},
            {0: one, 2: one},
        ])
        exact = matrix_rank(matrix.rows, mode=LinalgMode.EXACT)
        specialized = matrix_rank(matrix.rows, mode=LinalgMode.SPECIALIZED)
        member = matrix.contains({0: v * v * v, 1: v * v})
        holds = exact.rank == 3 and specialized.rank == 3 and specialized.agreed and member
        return outcome(holds, {"exact": exact.rank, "specialized": specialized.samples, "membership": member})
