"""
Claims on the algebraic Eisenstein module: identities, quotient certificates, cell dimensions
"""

import logging
from typing import Any, Dict, List

from src.eismod.cells import cell_engine, orbit_presentation
from src.eismod.identities import (
    averaging_swap_identity,
    cancellation_certificate_identity,
    cancellation_element,
    d_operator_element,
    functional_equation_suite,
    pgl2_translation_identity,
)
from src.eismod.membership import MembershipCertificate, QuotientVerifier, verify_identity_finite
from src.eismod.normal_form import spanning_check
from src.eismod.relations import relation_generators
from src.eismod.tensor import TensorElt
from src.models.data_models import ClaimStatus, SuiteName, cell_key
from src.suites.base import Claim, ClaimOutcome, ClaimSuite, outcome


logger = logging.getLogger(__name__)


class EisModSuite(ClaimSuite):
    """Identities in H^(x)3, their images in the module, and cell dimensions"""

    name = SuiteName.EISMOD

    def __init__(self, context):
        super().__init__(context)
        self._verifier = None

    @property
    def verifier(self) -> QuotientVerifier:
        if self._verifier is None:
            self._verifier = QuotientVerifier(self.datum, 3, self.context.group.membership.max_j_sites)
        return self._verifier

    def claims(self) -> List[Claim]:
        key = self.datum.key
        claims = [
            Claim(f"eismod.{key}.generators_vanish", "every relation generator kills the generator at window 0",
                  self.check_generators),
            Claim(f"eismod.{key}.spanning",
                  "x.Eis reduces onto T^0_w0 T^1_w1 T^inf_w2 e_lam, compatibly with the finite action",
                  self.check_spanning),
        ]
        if key == "sl3":
            claims += [
                Claim("eismod.sl3.cancellation_identity",
                      "cancellation element equals its averaging combination in (H_fin)^(x)3",
                      self.check_cancellation_identity),
                Claim("eismod.sl3.averaging_swap", "T^inf Avg^1 - T^0 Avg^1 = -Avg^1 (Avg^0 - Avg^inf)",
                      self.check_averaging_swap),
                Claim("eismod.sl3.cancellation_quotient", "cancellation element vanishes on the generator",
                      self.check_cancellation_quotient),
            ]
        if key == "pgl2":
            claims.append(Claim("eismod.pgl2.translation_identity",
                                "(q^2 J_2^0 - 1)(T^1 T^inf - q T^0) = (q-1)(T^1 - q)(T^inf - q) on the generator",
                                self.check_pgl2_translation))
        if key in ("pgl2", "sl3"):
            claims += [
                Claim(f"eismod.{key}.d_operator", "D-operator relation for <alpha, lam> = 1 on a box",
                      self.check_d_operator),
                Claim(f"eismod.{key}.functional_equation",
                      "Avg^s J_lam = Avg^s T^(S-s) J_(s lam) at pairing -1, span reduction below",
                      self.check_functional_equation),
            ]
        for cell in self.context.group.cells:
            lam = self.datum.canon(cell)
            claims.append(Claim(f"eismod.{key}.cell.{cell_key(lam)}", f"dimension of the orbit cell of {list(lam)}",
                                self._cell_check(lam)))
        radius = self.context.group.rank_evidence_radius
        claims.append(Claim(f"eismod.{key}.rank_evidence",
                            f"translates of T^1 T^inf units stay independent on the radius-{radius} box",
                            self.check_rank_evidence))
        return claims

    def _certificate_outcome(self, cert: MembershipCertificate, extra: Dict[str, Any] = None) -> ClaimOutcome:
        details = {
            "status": cert.status.value,
            "window": cert.window,
            "depth": cert.depth,
            "rows_examined": cert.rows_examined,
            **(extra or {}),
        }
        if not cert.proved:
            details["reason"] = cert.reason
            return ClaimOutcome(ClaimStatus.UNRESOLVED, details)
        details["sigma"] = str(cert.sigma)
        details["sigma_vanishes_at"] = cert.sigma_vanishing(self.config.q_values)
        replayed = self.verifier.replay(cert)
        details["replayed"] = replayed
        return outcome(replayed, details, cert.size)

    def _quotient(self, x: TensorElt) -> ClaimOutcome:
        cert = self.verifier.verify_in_quotient(x, self.config.window)
        return self._certificate_outcome(cert)

    def check_generators(self) -> ClaimOutcome:
        gens = relation_generators(self.datum, 3)
        statuses = {}
        for g in gens:
            statuses[g.name] = self.verifier.verify_in_quotient(g.element, 0).status.value
        holds = all(s == "PROVED_ZERO" for s in statuses.values())
        return outcome(holds, {"generators": statuses})

    def check_spanning(self) -> ClaimOutcome:
        report = spanning_check(self.verifier.tensor, radius=1, pairs=8)
        return outcome(not report["failures"], report)

    def check_cancellation_identity(self) -> ClaimOutcome:
        lhs, rhs = cancellation_certificate_identity(self.datum)
        if self.context.perturbed("eismod.sl3.cancellation_identity"):
            rhs = rhs + rhs.algebra.one()
        equal = verify_identity_finite(lhs, rhs)
        return outcome(equal, {"lhs_terms": len(lhs.finite_terms()), "rhs_terms": len(rhs.finite_terms())})

    def check_averaging_swap(self) -> ClaimOutcome:
        lhs, rhs = averaging_swap_identity(self.datum)
        if self.context.perturbed("eismod.sl3.averaging_swap"):
            rhs = rhs + rhs.algebra.one()
        return outcome(verify_identity_finite(lhs, rhs), {"terms": len(lhs.finite_terms())})

    def check_cancellation_quotient(self) -> ClaimOutcome:
        return self._quotient(cancellation_element(self.datum))

    def check_pgl2_translation(self) -> ClaimOutcome:
        return self._quotient(pgl2_translation_identity(self.datum))

    def check_d_operator(self) -> ClaimOutcome:
        d = self.datum
        rows = []
        size = 0
        for lam in sorted({d.canon(x) for x in d.box(self.config.box_radius)}):
            for i in range(1, d.n):
                if d.pair(d.simple_root(i), lam) != 1:
                    continue
                cert = self.verifier.verify_in_quotient(d_operator_element(d, lam, i), self.config.window)
                replayed = self.verifier.replay(cert) if cert.proved else False
                size += cert.size
                rows.append({"lambda": cell_key(lam), "simple": i, "status": cert.status.value, "replayed": replayed,
                             "sigma_vanishes_at": cert.sigma_vanishing(self.config.q_values)})
        # printed coefficient, reported only
        printed = self.verifier.verify_in_quotient(d_operator_element(d, d.rho, 1, "printed"), self.config.window)
        details = {"cases": rows, "printed_coefficient_status": printed.status.value}
        if any(r["status"] != "PROVED_ZERO" for r in rows):
            return ClaimOutcome(ClaimStatus.UNRESOLVED, details, size)
        return outcome(all(r["replayed"] for r in rows), details, size)

    def check_functional_equation(self) -> ClaimOutcome:
        report = functional_equation_suite(
            self.datum, self.config.box_radius, self.config.window, self.context.group.membership.max_j_sites
        )
        size = sum(r["size"] for r in report["differences"])
        if not report["all_in_range"]:
            return outcome(False, report, size)
        if not report["all_proved"]:
            unproved = [r for r in report["differences"] if r["status"] != "PROVED_ZERO"]
            if unproved:
                return ClaimOutcome(ClaimStatus.UNRESOLVED, report, size)
            # proved but a certificate failed replay
            return outcome(False, report, size)
        return outcome(True, report, size)

    def _cell_check(self, lam):
        def check() -> ClaimOutcome:
            d = self.datum
            claim_id = f"eismod.{d.key}.cell.{cell_key(lam)}"
            pres = orbit_presentation(d, lam)
            dims = cell_engine(d).cell_dimension(pres, self.config.mode)
            self.context.observe(("dimensions", d.key, cell_key(lam)), dims.graded_dimension)
            golden = self.context.expected(claim_id, self.context.golden.dimension(d.key, lam))
            details = {**dims.to_dict(), "golden": golden}
            if golden is None:
                return ClaimOutcome(ClaimStatus.UNRESOLVED, {**details, "reason": "no golden value"})
            return outcome(dims.graded_dimension == golden and dims.agreed, details)
        return check

    def check_rank_evidence(self) -> ClaimOutcome:
        evidence = self.verifier.rank_evidence(self.context.group.rank_evidence_radius, budget=self.config.budget)
        return outcome(evidence["independent"], evidence)
