"""
Tests for module representations: materialisation, duality, hom spaces,
socles and isomorphism testing.
"""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.algebra.classify import c_word
from app.algebra.linalg import FieldSpec, Matrix
from app.algebra.modrep import (
    BandParam,
    ModuleRep,
    band_dual_parameter,
    conjugate,
    direct_sum,
    double_dual_unit,
    dual,
    hom_basis,
    hom_dim,
    is_homomorphism,
    is_isomorphic,
    materialize_band,
    materialize_string,
    quotient,
    radical,
    radical_series,
    random_module,
    socle,
    socle_layer,
    socle_series,
    submodule_generated,
    top_dim,
)
from app.algebra.strings import parse_band, parse_word
from app.errors import BandError, ModuleInvariantError, UsageError


class TestModuleRep:
    """ModuleRep enforces xy = yx = 0 and nilpotency."""

    def test_relation_checked(self, gf5):
        with pytest.raises(ModuleInvariantError, match="xy = yx = 0"):
            ModuleRep.from_rows(gf5, [[0, 0], [1, 0]], [[0, 1], [0, 0]])

    def test_nilpotency_checked(self, gf5):
        with pytest.raises(ModuleInvariantError, match="nilpotent"):
            ModuleRep.from_rows(gf5, [[1]], [[0]])

    def test_shape_checked(self, gf5):
        with pytest.raises(UsageError):
            ModuleRep(gf5, Matrix.zeros(gf5, 2, 2), Matrix.zeros(gf5, 3, 3))

    def test_zero_module(self, gf5):
        assert ModuleRep.zero(gf5).dim == 0


class TestMaterialize:
    """String and band modules from words."""

    def test_string_xY(self, make_string, gf5):
        m = make_string("xY", gf5)
        assert m.dim == 3
        assert m.act_x.to_lists() == [[0, 0, 0], [1, 0, 0], [0, 0, 0]]
        assert m.act_y.to_lists() == [[0, 0, 0], [0, 0, 1], [0, 0, 0]]

    def test_simple(self, make_string):
        m = make_string("")
        assert m.dim == 1
        assert m.act_x.is_zero() and m.act_y.is_zero()

    def test_string_Xy(self, make_string, gf5):
        m = make_string("Xy", gf5)
        assert m.act_x[0, 1] == 1
        assert m.act_y[2, 1] == 1

    def test_infinite_rejected(self, gf5):
        with pytest.raises(UsageError, match="truncate"):
            materialize_string(parse_word("x^inf Y^inf"), gf5)

    def test_band_inverse_wrap(self, make_band, gf5):
        m = make_band("xY", eigenvalue=2, field=gf5)
        assert m.dim == 2
        assert m.act_x[1, 0] == 1
        assert m.act_y[1, 0] == 3

    def test_band_identity_parameter(self, make_band, qq):
        m = make_band("xY", eigenvalue=1, field=qq)
        assert m.act_y[1, 0] == 1

    @pytest.mark.parametrize("size", [1, 2, 3])
    def test_band_dimension(self, make_band, size):
        assert make_band("xY", eigenvalue=5, size=size).dim == 2 * size

    def test_band_zero_eigenvalue(self, make_band):
        with pytest.raises(BandError, match="nonzero"):
            make_band("xY", eigenvalue=0)

    def test_companion_parameter(self, gf):
        v = BandParam.companion((1, 0, 1), power=2)
        m = materialize_band(parse_band("band(xY)"), v, gf)
        assert m.dim == 2 * 4

    def test_parameter_direct_sum(self, gf):
        pw = parse_band("band(xY)")
        j1, j2 = BandParam.jordan(2), BandParam.jordan(3, size=2)
        m = materialize_band(pw, BandParam.direct_sum(j1, j2), gf)
        assert m.dim == 6
        assert is_isomorphic(m, direct_sum(materialize_band(pw, j1, gf), materialize_band(pw, j2, gf)))

    def test_parameter_direct_sum_inverted(self, gf5):
        v = BandParam.direct_sum(BandParam.jordan(2), BandParam.jordan(4))
        assert v.inverted(gf5).t_matrix(gf5) == Matrix.from_rows(gf5, [[3, 0], [0, 4]])

    def test_empty_parameter_sum(self):
        with pytest.raises(BandError, match="at least one"):
            BandParam.direct_sum()

    def test_companion_zero_constant(self, gf):
        with pytest.raises(BandError, match="f\\(0\\)"):
            BandParam.companion((0, 1)).t_matrix(gf)


class TestConstructions:
    """direct sums, duals, submodules and quotients."""

    def test_direct_sum(self, make_string):
        m = direct_sum(make_string("x"), make_string(""))
        assert m.dim == 3
        assert m.act_x.rank() == 1

    def test_direct_sum_field_mismatch(self, make_string, gf5):
        with pytest.raises(UsageError, match="field mismatch"):
            direct_sum(make_string("x"), make_string("x", gf5))

    def test_dual_of_string(self, make_string):
        assert is_isomorphic(dual(make_string("xY")), make_string("Xy"))

    def test_dual_is_involution(self, make_string):
        m = make_string("xYxY")
        assert dual(dual(m)) == m

    def test_double_dual_unit(self, make_string):
        unit = double_dual_unit(make_string("xY"))
        assert unit.is_invertible()
        assert double_dual_unit(make_string("")) == Matrix.identity(unit.field, 1)

    def test_submodule_generated(self, make_string, gf5):
        m = make_string("xY", gf5)
        e0 = Matrix.from_rows(gf5, [[1], [0], [0]])
        sub, inclusion = submodule_generated(m, [e0])
        assert sub.dim == 2
        assert is_homomorphism(inclusion, sub, m)

    def test_submodule_of_nothing(self, make_string):
        sub, inclusion = submodule_generated(make_string("xY"), [])
        assert sub.dim == 0 and inclusion.cols == 0

    def test_quotient_matches_split(self, make_string, gf5):
        m = make_string("xY", gf5)
        e0 = Matrix.from_rows(gf5, [[1], [0], [0]])
        _, inclusion = submodule_generated(m, [e0])
        q = quotient(m, inclusion)
        assert is_isomorphic(q, make_string("", gf5))

    def test_quotient_rejects_non_submodule(self, make_string, gf5):
        m = make_string("xY", gf5)
        with pytest.raises(UsageError, match="not closed"):
            quotient(m, Matrix.from_rows(gf5, [[1], [0], [0]]))

    @settings(max_examples=10, derandomize=True, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(1, 8))
    def test_random_module_dimension(self, seed, dim):
        field = FieldSpec.prime(101)
        m = random_module(field, dim, seed)
        assert m.dim == dim


class TestHomSpaces:
    """hom_basis() spans exactly the intertwiners."""

    def test_simple(self, make_string):
        assert hom_dim(make_string(""), make_string("")) == 1

    def test_end_of_xY(self, make_string):
        assert hom_dim(make_string("xY"), make_string("xY")) == 3

    def test_x_to_y(self, make_string):
        assert hom_dim(make_string("x"), make_string("y")) == 1

    def test_basis_elements_intertwine(self, make_string):
        src, tgt = make_string("xYx"), make_string("Yx")
        for h in hom_basis(src, tgt).basis:
            assert is_homomorphism(h, src, tgt)

    def test_over_rationals(self, make_string, qq):
        assert hom_dim(make_string("xY", qq), make_string("xY", qq)) == 3

    def test_zero_source(self, make_string, gf):
        assert hom_dim(ModuleRep.zero(gf), make_string("x")) == 0

    def test_additive_in_each_argument(self, make_string, make_band):
        a, b, c = make_string("x"), make_string("xY"), make_band("Yx", 3)
        assert hom_dim(direct_sum(a, b), c) == hom_dim(a, c) + hom_dim(b, c)
        assert hom_dim(c, direct_sum(a, b)) == hom_dim(c, a) + hom_dim(c, b)
        assert hom_dim(direct_sum(a, b), direct_sum(a, b)) == sum(
            hom_dim(s, t) for s in (a, b) for t in (a, b)
        )

    @settings(max_examples=10, derandomize=True, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(1, 5), st.integers(1, 5))
    def test_adjunction_symmetry(self, seed, d1, d2):
        field = FieldSpec.prime(101)
        m, n = random_module(field, d1, seed), random_module(field, d2, seed + 1)
        assert hom_dim(m, dual(n)) == hom_dim(n, dual(m))


class TestSocleAndRadical:
    """socle, radical, top and the socle series."""

    def test_socle_xY(self, make_string, gf5):
        s = socle(make_string("xY", gf5))
        assert s.cols == 1
        assert s.to_lists() == [[0], [1], [0]]

    def test_radical_of_simple(self, make_string):
        assert radical(make_string("")).cols == 0

    def test_top(self, make_string):
        assert top_dim(make_string("xY")) == 2

    @pytest.mark.parametrize("i", [1, 2, 3])
    def test_socle_series_of_c_words(self, gf, i):
        m = materialize_string(c_word(i), gf)
        assert socle_series(m) == [2 * j + 1 for j in range(i + 1)]

    def test_socle_layers_are_smaller_c_words(self, gf):
        m = materialize_string(c_word(3), gf)
        for j in (1, 2, 3):
            assert is_isomorphic(socle_layer(m, j), materialize_string(c_word(j - 1), gf))

    def test_radical_series(self, make_string):
        assert radical_series(make_string("xY")) == [3, 1, 0]

    @settings(max_examples=10, derandomize=True, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(1, 8))
    def test_duality_swaps_socle_and_top(self, seed, dim):
        m = random_module(FieldSpec.prime(101), dim, seed)
        assert socle(m).cols == top_dim(dual(m))


class TestIsomorphism:
    """is_isomorphic() returns witnesses and honest bounds."""

    def test_reverse_inverse_strings(self, make_string):
        m1, m2 = make_string("xY"), make_string("yX")
        result = is_isomorphic(m1, m2)
        assert result.isomorphic and result.certain
        assert is_homomorphism(result.witness, m1, m2)
        assert result.witness.is_invertible()

    def test_x_vs_y(self, make_string):
        result = is_isomorphic(make_string("x"), make_string("y"))
        assert not result
        assert result.certain

    def test_self(self, make_string):
        m = make_string("xYx")
        result = is_isomorphic(m, m)
        assert result.witness == Matrix.identity(m.field, m.dim)

    def test_dimension_mismatch(self, make_string):
        assert is_isomorphic(make_string("x"), make_string("xY")).reason == "dimensions differ"

    def test_conjugate(self, make_string, gf):
        m = make_string("xYxY")
        p = Matrix.random_invertible(gf, m.dim, np.random.default_rng(3))
        assert is_isomorphic(m, conjugate(m, p))

    def test_bands_with_different_eigenvalues(self, make_band):
        assert not is_isomorphic(make_band("xY", 2), make_band("xY", 3))

    def test_band_dual_parameter(self, gf):
        report = band_dual_parameter(parse_band("band(xY)"), BandParam.jordan(2), gf)
        assert report.matches in ("V", "V-inverse")
