import pytest

from src.models.errors import RootDatumError
from src.rootdata.affine_weyl import AffineWeylElt, affine_weyl_group
from src.rootdata.root_datum import parse_group_key


class TestRootDatum:
    """Coweights, roots and the finite Weyl group"""

    def test_group_keys(self):
        """Known keys parse, even SL is rejected"""
        assert parse_group_key("sl3").n == 3
        assert parse_group_key("PGL2").key == "pgl2"
        assert parse_group_key("pgln:4").key == "pgln:4"
        with pytest.raises(RootDatumError):
            parse_group_key("sln:2")
        with pytest.raises(RootDatumError):
            parse_group_key("gl3")

    def test_cartan_matrix(self):
        """Type A Cartan matrices"""
        assert parse_group_key("sl3").cartan_matrix() == [[2, -1], [-1, 2]]
        assert parse_group_key("pgl2").cartan_matrix() == [[2]]

    def test_canonical_forms(self):
        """SL coweights sum to zero, PGL coweights have minimum zero"""
        pgl2 = parse_group_key("pgl2")
        assert pgl2.canon((3, 5)) == (0, 2)
        assert pgl2.simple_coroot(1) == (2, 0)
        with pytest.raises(RootDatumError):
            parse_group_key("sl3").canon((1, 0, 0))

    def test_weyl_action(self):
        """s1 rho = rho - alpha_1"""
        d = parse_group_key("sl3")
        s1 = d.simple_reflection(1)
        assert d.weyl_act(s1, d.rho) == d.sub(d.rho, d.simple_coroot(1))
        assert d.weyl_act(d.identity, d.rho) == d.rho

    def test_weyl_names(self):
        """Names round-trip and the longest element is s3"""
        d = parse_group_key("sl3")
        for w in d.weyl:
            assert d.weyl_from_name(d.weyl_name(w)) == w
        assert d.weyl_name((2, 1, 0)) == "s3"
        assert d.weyl_length((2, 1, 0)) == 3

    def test_rho_check_pairing(self):
        """<rho-check, rho> = 2 for SL3"""
        d = parse_group_key("sl3")
        assert d.rho_check_pairing(d.rho) == 2
        assert d.rho_check_pairing(d.simple_coroot(1)) == 1

    def test_shifted_dominant_members_of_rho(self):
        """The rho orbit has generators rho, alpha_1, alpha_2 and -rho"""
        d = parse_group_key("sl3")
        members = d.shifted_dominant_members(d.rho)
        assert set(members) == {d.rho, d.simple_coroot(1), d.simple_coroot(2), d.neg(d.rho)}
        assert members[0] == d.rho

    def test_dominant_representative(self):
        """Sorting gives the dominant member of an orbit"""
        d = parse_group_key("sl3")
        assert d.dominant_representative((-1, 0, 1)) == (1, 0, -1)
        assert d.is_dominant(d.rho)
        assert d.is_antidominant(d.neg(d.rho))


class TestAffineWeylGroup:
    """Lengths, reduced words and length-zero elements"""

    def test_translation_length(self):
        """l(t_lam) is the sum of |<alpha, lam>| over positive roots"""
        d = parse_group_key("sl3")
        group = affine_weyl_group(d)
        assert group.length(group.translation(d.rho)) == 4

    def test_simple_affine_generators_have_length_one(self):
        """s_0, s_1, s_2 all have length one"""
        group = affine_weyl_group(parse_group_key("sl3"))
        for i in group.generator_indices:
            assert group.length(group.simple_affine(i)) == 1

    def test_reduced_words(self):
        """from_word inverts reduced_word and the word length is the length"""
        d = parse_group_key("sl3")
        group = affine_weyl_group(d)
        for lam in d.box(1):
            for w in d.weyl:
                x = AffineWeylElt(lam, w)
                omega, word = group.reduced_word(x)
                assert group.from_word(omega, word) == x
                assert len(word) == group.length(x)
                assert group.length(omega) == 0

    def test_inverse(self):
        """x x^-1 = 1"""
        d = parse_group_key("pgl2")
        group = affine_weyl_group(d)
        x = AffineWeylElt((3, 0), d.simple_reflection(1))
        assert group.mul(x, group.inverse(x)) == group.one

    def test_omega_elements(self):
        """One length-zero element for SL3, two for PGL2"""
        assert len(affine_weyl_group(parse_group_key("sl3")).omega_elements()) == 1
        assert len(affine_weyl_group(parse_group_key("pgl2")).omega_elements()) == 2

    @pytest.mark.parametrize("key", ["pgl2", "sl3"])
    def test_length_subadditive(self, key):
        """l(xy) <= l(x) + l(y) and right multiplication by s_i moves the length by one"""
        d = parse_group_key(key)
        group = affine_weyl_group(d)
        elements = [AffineWeylElt(lam, w) for lam in d.box(1) for w in d.weyl]
        for x in elements:
            for y in elements:
                assert group.length(group.mul(x, y)) <= group.length(x) + group.length(y)
            for i in group.generator_indices:
                assert abs(group.length(group.mul(x, group.simple_affine(i))) - group.length(x)) == 1
