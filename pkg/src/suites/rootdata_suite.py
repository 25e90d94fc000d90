"""
Self-tests of the root datum and the extended affine Weyl group
"""

import logging
import math
from typing import List

from src.models.data_models import GroupKind, SuiteName, cell_key
from src.rootdata.affine_weyl import AffineWeylElt, affine_weyl_group
from src.suites.base import Claim, ClaimOutcome, ClaimSuite, outcome


logger = logging.getLogger(__name__)


class RootDataSuite(ClaimSuite):
    """Weyl group, reduced words, shifted dominant orbits and length-zero elements"""

    name = SuiteName.ROOTDATA

    def claims(self) -> List[Claim]:
        key = self.datum.key
        return [
            Claim(f"rootdata.{key}.weyl", "finite Weyl group has n! elements and length = word length",
                  self.check_weyl),
            Claim(f"rootdata.{key}.reduced_words", "reduced words realize the affine length on a box",
                  self.check_reduced_words),
            Claim(f"rootdata.{key}.shifted_dominant", "orbit generators lie in the shifted dominant cone",
                  self.check_shifted_dominant),
            Claim(f"rootdata.{key}.omega", "length-zero elements biject with lattice modulo coroots",
                  self.check_omega),
        ]

    def check_weyl(self) -> ClaimOutcome:
        d = self.datum
        bad = [
            d.weyl_name(w) for w in d.weyl
            if d.weyl_length(w) != len(d.weyl_word(w)) or d.weyl_from_word(d.weyl_word(w)) != w
        ]
        longest = max(d.weyl_length(w) for w in d.weyl)
        holds = len(d.weyl) == math.factorial(d.n) and longest == len(d.positive_roots()) and not bad
        return outcome(holds, {"order": len(d.weyl), "longest": longest, "mismatched": bad})

    def check_reduced_words(self) -> ClaimOutcome:
        d = self.datum
        group = affine_weyl_group(d)
        radius = min(self.config.box_radius, 2)
        checked, bad = 0, []
        for lam in d.box(radius):
            for w in d.weyl:
                x = AffineWeylElt(d.canon(lam), w)
                omega, word = group.reduced_word(x)
                checked += 1
                if group.from_word(omega, word) != x or len(word) != group.length(x) or group.length(omega):
                    bad.append(str(x))
        return outcome(not bad, {"radius": radius, "checked": checked, "failed": bad[:20]})

    def check_shifted_dominant(self) -> ClaimOutcome:
        d = self.datum
        rows, holds = [], True
        for lam in d.iter_dominant(2):
            members = d.shifted_dominant_members(lam)
            ok = lam in members and all(d.is_dominant(d.add(mu, d.rho)) for mu in members)
            holds = holds and ok
            rows.append({"dominant": cell_key(lam), "generators": [cell_key(mu) for mu in members], "ok": ok})
        if d.key == "sl3":
            expected = {d.rho, d.simple_coroot(1), d.simple_coroot(2), d.neg(d.rho)}
            holds = holds and set(d.shifted_dominant_members(d.rho)) == expected
        return outcome(holds, {"cells": rows})

    def check_omega(self) -> ClaimOutcome:
        d = self.datum
        found = affine_weyl_group(d).omega_elements()
        expected = d.n if d.kind == GroupKind.PGL else 1
        return outcome(len(found) == expected, {"omega": [str(x) for x in found], "expected": expected})
