import itertools

import pytest

from src.coeffs.laurent import LaurentScalar
from src.eismod.cells import cell_dimension, orbit_presentation
from src.eismod.identities import (
    averaging_swap_identity,
    cancellation_certificate_identity,
    cancellation_element,
    d_operator_element,
    functional_equation_suite,
    pgl2_translation_identity,
)
from src.eismod.membership import MembershipCertificate, QuotientVerifier, verify_identity_finite
from src.eismod.normal_form import normal_form_engine, spanning_check
from src.eismod.relations import emit_relations, relation_generators
from src.eismod.tensor import Sites, tensor_algebra
from src.models.data_models import CertificateStatus
from src.models.errors import BudgetExceededError, ConfigError, RootDatumError
from src.rootdata.root_datum import parse_group_key


@pytest.fixture(scope="module")
def sl3():
    return parse_group_key("sl3")


@pytest.fixture(scope="module")
def pgl2():
    return parse_group_key("pgl2")


class TestSites:
    """Marked point labels"""

    def test_standard_labels(self):
        """0, 1, inf, then p3, p4, ..."""
        assert Sites.standard(5).labels == ("0", "1", "inf", "p3", "p4")
        with pytest.raises(ConfigError):
            Sites.standard(0)

    def test_subsets(self):
        """Site specs parse into sorted indices"""
        sites = Sites.standard(3)
        assert sites.subset("1inf") == (1, 2)
        assert sites.subset("S") == (0, 1, 2)
        assert sites.name((0, 1, 2)) == "S"
        with pytest.raises(ConfigError):
            sites.subset("2")


class TestRelations:
    """Generators of the defining left ideal"""

    def test_generator_counts(self, sl3, pgl2):
        """Translation and reflection generators on three points"""
        kinds = [g.kind for g in relation_generators(pgl2, 3)]
        assert kinds.count("translation") == 4
        assert kinds.count("reflection") == 2
        kinds = [g.kind for g in relation_generators(sl3, 3)]
        assert kinds.count("translation") == 8
        assert kinds.count("reflection") == 4

    def test_more_points(self, pgl2):
        """Each extra point adds translation and reflection generators"""
        assert len(relation_generators(pgl2, 4)) == 6 + 3

    def test_single_point_has_empty_ideal(self, pgl2):
        """One marked point gives no generators and a note"""
        payload = emit_relations(pgl2, 1)
        assert payload["generators"] == []
        assert "note" in payload
        with pytest.raises(ConfigError):
            relation_generators(pgl2, 0)

    def test_emitted_payload(self, pgl2):
        """Sites and serialized terms"""
        payload = emit_relations(pgl2, 3)
        assert payload["sites"] == ["0", "1", "inf"]
        assert all(g["terms"] for g in payload["generators"])


class TestFiniteIdentities:
    """Identities checked directly in the finite tensor basis"""

    def test_cancellation_certificate(self, sl3):
        """The cancellation element equals the listed combination of averaging relations"""
        lhs, rhs = cancellation_certificate_identity(sl3)
        assert verify_identity_finite(lhs, rhs)

    def test_cancellation_requires_sl3(self, pgl2):
        """Stated for SL3 only"""
        with pytest.raises(RootDatumError):
            cancellation_certificate_identity(pgl2)

    def test_averaging_swap(self, sl3, pgl2):
        """T^inf Avg^1 - T^0 Avg^1 = -Avg^1 (Avg^0 - Avg^inf)"""
        for datum in (sl3, pgl2):
            assert verify_identity_finite(*averaging_swap_identity(datum))

    def test_swap_detects_change(self, pgl2):
        """A modified right side is caught"""
        lhs, rhs = averaging_swap_identity(pgl2)
        assert not verify_identity_finite(lhs, rhs + tensor_algebra(pgl2, 3).one())

    def test_d_operator_needs_pairing_one(self, sl3):
        """lambda must pair to 1 with the simple root"""
        with pytest.raises(RootDatumError):
            d_operator_element(sl3, (0, 0, 0))
        with pytest.raises(ValueError):
            d_operator_element(sl3, sl3.rho, 1, variant="other")


class TestNormalForms:
    """Reduction onto the spanning set T^0_w0 T^1_w1 T^inf_w2 e_lam"""

    def test_units_reduce_to_themselves(self, pgl2):
        """All |W|^3 units at a coweight are fixed by reduce after lifting"""
        engine = normal_form_engine(tensor_algebra(pgl2, 3))
        for ws in itertools.product(pgl2.weyl, repeat=3):
            unit = engine.unit(ws, (1, 0))
            assert engine.reduce(engine.lift(unit)) == unit

    def test_random_pairs_pgl2(self, pgl2):
        """reduce is idempotent and reduce(m x) depends only on reduce(x)"""
        report = spanning_check(tensor_algebra(pgl2, 3), radius=2, pairs=12, seed=3)
        assert report["failures"] == []
        assert report["units_per_label"] == 8

    def test_random_pairs_sl3(self, sl3):
        """Same checks with J-parts at every site for SL3"""
        report = spanning_check(tensor_algebra(sl3, 3), radius=1, pairs=4, seed=11)
        assert report["failures"] == []
        assert report["units_per_label"] == 216


class TestQuotientVerifier:
    """Membership certificates in the defining ideal"""

    def test_zero_is_proved(self, pgl2):
        """The zero element needs no instances"""
        verifier = QuotientVerifier(pgl2, 3)
        cert = verifier.verify_in_quotient(verifier.tensor.zero(), 0)
        assert cert.proved
        assert cert.size == 0

    def test_reflection_generators_vanish(self, pgl2):
        """Each reflection generator is proved with a replayable certificate"""
        verifier = QuotientVerifier(pgl2, 3)
        for gen in verifier.generators:
            cert = verifier.verify_in_quotient(gen.element, 0)
            assert cert.proved, gen.name
            assert verifier.replay(cert)

    def test_unit_is_not_proved(self, pgl2):
        """1 does not kill the generator"""
        verifier = QuotientVerifier(pgl2, 3)
        cert = verifier.verify_in_quotient(verifier.tensor.one(), 0)
        assert cert.status == CertificateStatus.UNRESOLVED

    def test_pgl2_translation_identity(self, pgl2):
        """(q^2 J_2 - 1)(T^1 T^inf - q T^0) agrees with (q-1)(T^1 - q)(T^inf - q) on the generator"""
        verifier = QuotientVerifier(pgl2, 3, max_j_sites=3)
        cert = verifier.verify_in_quotient(pgl2_translation_identity(pgl2), 2)
        assert cert.proved
        assert verifier.replay(cert)

    def test_d_operator_corrected(self, pgl2):
        """The corrected D-operator element vanishes at a coweight pairing to 1"""
        verifier = QuotientVerifier(pgl2, 3, max_j_sites=3)
        cert = verifier.verify_in_quotient(d_operator_element(pgl2, (1, 0), 1), 2)
        assert cert.proved
        assert verifier.replay(cert)

    def test_functional_equation_pgl2(self, pgl2):
        """Every difference at pairing -1 is proved on the radius-1 box"""
        report = functional_equation_suite(pgl2, radius=1, window=2, max_j_sites=3)
        assert len(report["differences"]) == 3
        assert report["all_proved"]
        assert report["all_in_range"]

    @pytest.mark.slow
    def test_cancellation_element(self, sl3):
        """The SL3 cancellation element vanishes on the generator"""
        verifier = QuotientVerifier(sl3, 3, max_j_sites=1)
        cert = verifier.verify_in_quotient(cancellation_element(sl3), 2)
        assert cert.proved
        assert verifier.replay(cert)

    def test_sigma_vanishing(self):
        """Field sizes where the certificate denominator vanishes are listed"""
        sigma = LaurentScalar.parse("v^2 - 3")
        cert = MembershipCertificate(CertificateStatus.PROVED_ZERO, sigma=sigma)
        assert cert.sigma_vanishing([2, 3, 4]) == [3]
        assert MembershipCertificate(CertificateStatus.PROVED_ZERO).sigma_vanishing([2, 3]) == []


class TestRankEvidence:
    """Independence of the translated T^1 T^inf units"""

    def test_pgl2_all_site_shifts(self, pgl2):
        """Relations shifted at every site, rows leaving the box kept"""
        verifier = QuotientVerifier(pgl2, 3, max_j_sites=3)
        evidence = verifier.rank_evidence(1)
        assert evidence["shift_tuples"] == len(verifier.shift_tuples(pgl2.box(1))) == 27
        assert evidence["rows_leaving_box"] > 0
        assert evidence["units"] == 3 * 4
        assert evidence["independent"]

    def test_budget_refusal(self, sl3):
        """The SL3 radius-3 window is refused under a small budget"""
        with pytest.raises(BudgetExceededError):
            QuotientVerifier(sl3, 3, max_j_sites=1).rank_evidence(3, budget=10 ** 6)


class TestCellDimensions:
    """Graded dimensions of the cells of the module"""

    @pytest.mark.parametrize("dominant, expected", [((0, 0), 5), ((1, 0), 9), ((2, 0), 8)])
    def test_pgl2_cells(self, pgl2, dominant, expected):
        """PGL2 cells through the first few dominant coweights"""
        assert cell_dimension(orbit_presentation(pgl2, pgl2.canon(dominant))) == expected

    @pytest.mark.slow
    @pytest.mark.parametrize("dominant, expected", [((0, 0, 0), 69), ((1, 1, -2), 135)])
    def test_sl3_cells(self, sl3, dominant, expected):
        """SL3 cells"""
        assert cell_dimension(orbit_presentation(sl3, dominant)) == expected
