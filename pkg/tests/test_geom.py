from pathlib import Path

import pytest

from src.config.config_loader import ConfigLoader
from src.config.settings import GeometrySettings
from src.geom.bundles import bundle_cell
from src.geom.cache import GeometryCache
from src.geom.checks import (
    hecke_position_triples,
    pgl2_module_relations_check,
    pgl2_stabilizer_check,
    position_triples,
    position_triples_check,
    splitting_annotation,
)
from src.geom.eisenstein import GeometryContext
from src.geom.finite_field import finite_field
from src.geom.flags import flag_variety
from src.geom.operators import OperatorCache
from src.geom.span import cusp_report, eis_span_dimension
from src.models.errors import ConfigError, NonDominantError
from src.rootdata.root_datum import parse_group_key


CONFIG_DIR = Path(__file__).resolve().parent.parent / "config"


@pytest.fixture
def cache(tmp_path):
    return GeometryCache(GeometrySettings(cache_dir=str(tmp_path / "orbits")))


@pytest.fixture(scope="module")
def pgl2():
    return parse_group_key("pgl2")


class TestFiniteField:
    """Fields, projective points and flags"""

    def test_prime_powers_only(self):
        """q = 6 is refused"""
        assert finite_field(4).q == 4
        with pytest.raises(ConfigError):
            finite_field(6)

    def test_projective_line(self):
        """P^1(F_q) has q + 1 points"""
        for q in (2, 3, 4):
            assert len(finite_field(q).projective_points(2)) == q + 1

    def test_forms_coprime(self):
        """Coprimality of binary forms through gcds over F_q"""
        field_ = finite_field(3)
        gf = field_.GF
        assert field_.forms_coprime([gf([0, 1]), gf([1, 0])])
        assert not field_.forms_coprime([gf([1, 1]), gf([2, 2])])
        assert not field_.forms_coprime([gf([0, 1]), gf([0, 2])])
        assert not field_.forms_coprime([gf([0, 0])])

    def test_flag_counts(self):
        """Complete flags in F_q^3 number (q^2 + q + 1)(q + 1)"""
        assert len(flag_variety(2, 2)) == 3
        assert len(flag_variety(2, 3)) == 21
        assert len(flag_variety(3, 3)) == 52


class TestBundleCells:
    """Bundle types and their automorphism groups"""

    def test_non_dominant_rejected(self, pgl2):
        """(0, 2) is not dominant"""
        with pytest.raises(NonDominantError):
            bundle_cell(pgl2, (0, 2), 2)

    def test_aut_orders(self, pgl2):
        """PGL2(F_q) for the trivial bundle, a Borel-like group otherwise"""
        assert bundle_cell(pgl2, (0, 0), 2).aut_order() == 6
        assert bundle_cell(pgl2, (0, 0), 3).aut_order() == 24
        assert bundle_cell(pgl2, (1, 0), 2).aut_order() == 4


class TestOrbits:
    """Orbit enumeration for PGL2 and the cache around it"""

    @pytest.mark.parametrize("q", [2, 3])
    @pytest.mark.parametrize("dominant, expected", [((0, 0), 5), ((1, 0), 9), ((2, 0), 8), ((3, 0), 8)])
    def test_pgl2_orbit_counts(self, cache, pgl2, q, dominant, expected):
        """5, 9, then 8 orbits for every degree from 2 on"""
        assert len(cache.table(bundle_cell(pgl2, dominant, q))) == expected

    def test_orbit_sizes_cover_triples(self, cache, pgl2):
        """Orbit sizes add up to |Fl|^3"""
        table = cache.table(bundle_cell(pgl2, (1, 0), 3))
        assert sum(o.size for o in table.orbits) == table.n_flags ** 3

    def test_cache_round_trip(self, cache, pgl2):
        """A cached table loads back with the same orbits"""
        cell = bundle_cell(pgl2, (2, 0), 2)
        first = cache.table(cell)
        assert cache.path_for(cell).exists()
        loaded = cache.load(cell)
        assert loaded.labels() == first.labels()
        assert [e["orbits"] for e in cache.entries()] == [len(first)]
        assert cache.clear() == 1
        assert cache.load(cell) is None

    def test_stabilizers(self, cache):
        """Stabilizer orders match their closed forms"""
        result = pgl2_stabilizer_check(q_values=(2, 3), max_k=3, cache=cache)
        assert result["all_hold"], [r for r in result["rows"] if not r["holds"]]


class TestOperators:
    """Averaging operators on functions of orbits"""

    def test_quadratic(self, cache, pgl2):
        """Avg^2 = (q + 1) Avg"""
        for dominant in [(0, 0), (1, 0)]:
            table = cache.table(bundle_cell(pgl2, dominant, 3))
            assert OperatorCache(table, flag_variety(3, 2)).check_quadratic()

    def test_pgl2_module_relations(self, cache):
        """The defining relations hold among indicator functions"""
        result = pgl2_module_relations_check(2, cache=cache)
        assert result["all_hold"], result["failed"]

    def test_perturbed_relations_fail(self, cache):
        """A perturbed image breaks the first relation"""
        result = pgl2_module_relations_check(2, perturb=True, cache=cache)
        assert not result["all_hold"]

    def test_span_matches_cell_dimension(self, cache, pgl2):
        """Eisenstein vectors of the W-orbit of (1, 0) span 9 dimensions over F_2"""
        context = GeometryContext(pgl2, 2, [(1, 0)], cache)
        assert eis_span_dimension(pgl2, (1, 0), 2, context) == 9


class TestSplitting:
    """Very positive splittings and predicted orbit counts"""

    def test_pgl2(self, pgl2):
        """Degree gap 2 splits into lines, gap 1 does not"""
        assert splitting_annotation(pgl2, (2, 0))["predicted_orbits"] == 8
        near = splitting_annotation(pgl2, (1, 0))
        assert not near["very_positive"]
        assert near["predicted_orbits"] is None

    def test_sl3(self):
        """(2, 0, -2) splits completely, (2, 1, -3) only partially"""
        sl3 = parse_group_key("sl3")
        assert splitting_annotation(sl3, (2, 0, -2))["predicted_orbits"] == 216
        partial = splitting_annotation(sl3, (2, 1, -3))
        assert partial["splitting"] == 2
        assert partial["predicted_orbits"] is None


class TestRelativePositions:
    """Relative positions of flag triples on the trivial SL3 bundle"""

    def test_hecke_prediction(self):
        """Supports of T_w' T_w give 69 triples"""
        triples = hecke_position_triples(parse_group_key("sl3"))
        assert len(triples) == 69
        assert ("s1s2", "s2s1", "s2") in triples
        assert ("s1s2", "s2s1", "s1") not in triples
        assert ("s1", "s1", "s1") in triples

    def test_trivial_bundle_over_f2(self, cache):
        """Every predicted triple is realized, and nothing else"""
        sl3 = parse_group_key("sl3")
        table = cache.table(bundle_cell(sl3, (0, 0, 0), 2))
        observed = position_triples(table)
        golden = ConfigLoader(str(CONFIG_DIR)).load_golden().triples["sl3"]
        assert observed == hecke_position_triples(sl3)
        assert observed == {tuple(t) for t in golden}
        assert position_triples_check(sl3, table, golden)["holds"]

    def test_dropped_golden_triple_fails(self, cache):
        """A golden list missing one triple does not hold"""
        sl3 = parse_group_key("sl3")
        table = cache.table(bundle_cell(sl3, (0, 0, 0), 2))
        golden = ConfigLoader(str(CONFIG_DIR)).load_golden().triples["sl3"]
        report = position_triples_check(sl3, table, golden[1:])
        assert not report["holds"]
        assert report["unexpected"] == [tuple(golden[0])]


@pytest.mark.slow
class TestSl3Geometry:
    """SL3 enumerations over F_3"""

    def test_cusp_dimension(self, cache):
        """Three cuspidal functions over F_3"""
        assert cusp_report(3, cache).cusp_dimension == 3
