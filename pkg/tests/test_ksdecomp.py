"""
Tests for endomorphism algebras, indecomposability certificates and
Krull-Schmidt decomposition.
"""
import numpy as np
import pytest

from app.algebra.ksdecomp import (
    LOCAL_ENDO,
    MONTE_CARLO,
    decompose,
    endo_algebra,
    fitting_split,
    is_indecomposable,
    radical_is_nilpotent,
    radical_of_endo,
    semisimple_quotient,
)
from app.algebra.linalg import FieldSpec, Matrix
from app.algebra.modrep import (
    BandParam,
    ModuleRep,
    conjugate,
    direct_sum,
    is_isomorphic,
    materialize_band,
)
from app.algebra.strings import parse_band
from app.errors import CharacteristicTooSmallError, UsageError


def multiset_matches(result, expected):
    """Each expected (module, multiplicity) pair is matched by exactly one part."""
    if len(result.parts) != len(expected):
        return False
    remaining = list(expected)
    for part in result.parts:
        for i, (module, count) in enumerate(remaining):
            if count == part.multiplicity and is_isomorphic(part.module, module):
                del remaining[i]
                break
        else:
            return False
    return not remaining


class TestEndoAlgebra:
    """endo_algebra() and its radical."""

    def test_simple(self, make_string):
        e = endo_algebra(make_string(""))
        assert e.dim == 1
        assert radical_of_endo(e).cols == 0

    def test_xY_is_local(self, make_string):
        e = endo_algebra(make_string("xY"))
        assert e.dim == 3
        assert e.is_commutative()
        rad = radical_of_endo(e)
        assert rad.cols == 2
        assert radical_is_nilpotent(e, rad)
        assert semisimple_quotient(e, rad).dim == 1

    def test_matrix_algebra(self, make_string):
        k = make_string("")
        e = endo_algebra(direct_sum(k, k))
        assert e.dim == 4
        assert not e.is_commutative()
        assert radical_of_endo(e).cols == 0

    def test_structure_constants_multiply(self, make_string):
        e = endo_algebra(make_string("xYx"))
        for a in e.basis:
            for b in e.basis:
                product = e.multiply(e.coordinates(a), e.coordinates(b))
                assert e.element(product) == a @ b

    @pytest.mark.parametrize("field", [FieldSpec.prime(), FieldSpec.rationals()])
    def test_structure_constants_of_a_sum(self, make_string, field):
        k = make_string("", field)
        e = endo_algebra(direct_sum(k, make_string("x", field), k))
        assert not e.is_commutative()
        for a in e.basis:
            for b in e.basis:
                assert e.element(e.multiply(e.coordinates(a), e.coordinates(b))) == a @ b

    def test_identity_coordinates(self, make_string):
        e = endo_algebra(make_string("xY"))
        assert e.element(e.identity()) == Matrix.identity(e.field, 3)

    def test_characteristic_too_small(self):
        field = FieldSpec.prime(3)
        k = ModuleRep.from_rows(field, [[0]], [[0]])
        with pytest.raises(CharacteristicTooSmallError, match="--field Q"):
            radical_of_endo(endo_algebra(direct_sum(k, k)))

    def test_quotient_of_semisimple_is_nondegenerate(self, make_string):
        k = make_string("")
        e = endo_algebra(direct_sum(k, k))
        assert semisimple_quotient(e, radical_of_endo(e)).trace_form_nondegenerate()


class TestFittingSplit:
    """fitting_split() separates ker φᵈ from im φᵈ."""

    def test_nilpotent(self, make_string):
        m = make_string("xY")
        assert fitting_split(m, m.act_x) is None

    def test_invertible(self, make_string):
        m = make_string("xY")
        assert fitting_split(m, Matrix.identity(m.field, 3)) is None

    def test_projection(self, make_string, gf):
        m = direct_sum(make_string("x"), make_string(""))
        phi = Matrix.from_rows(gf, [[1, 0, 0], [0, 1, 0], [0, 0, 0]])
        split = fitting_split(m, phi)
        assert sorted([split.first.dim, split.second.dim]) == [1, 2]
        assert conjugate(m, split.witness) == direct_sum(split.first, split.second)

    def test_not_an_endomorphism(self, make_string, gf):
        m = make_string("xY")
        with pytest.raises(UsageError, match="endomorphism"):
            fitting_split(m, Matrix.from_rows(gf, [[0, 0, 0], [0, 0, 0], [1, 0, 0]]))


class TestIsIndecomposable:
    """is_indecomposable(): exact splits and honest certificates."""

    def test_simple(self, make_string):
        result = is_indecomposable(make_string(""))
        assert result.indecomposable
        assert result.certificate.kind == LOCAL_ENDO
        assert result.certificate.exact

    def test_xY(self, make_string):
        result = is_indecomposable(make_string("xY"))
        assert result
        assert result.certificate.radical_dim == 2

    def test_k_plus_k_splits(self, make_string):
        k = make_string("")
        result = is_indecomposable(direct_sum(k, k))
        assert not result
        assert result.split.first.dim == result.split.second.dim == 1

    def test_band(self, make_band):
        assert is_indecomposable(make_band("xY", 2, size=2))

    def test_distinct_summands_split_exactly(self, make_string, make_band, gf):
        parts = [make_string("x"), make_band("xY", 5)]
        m = conjugate(direct_sum(*parts), Matrix.random_invertible(gf, 4, np.random.default_rng(3)))
        result = is_indecomposable(m, budget=1)
        assert not result
        assert sorted((result.split.first.dim, result.split.second.dim)) == [2, 2]

    def test_zero_module(self, gf):
        with pytest.raises(UsageError):
            is_indecomposable(ModuleRep.zero(gf))

    def test_irreducible_parameter_over_prime_field(self, gf):
        # t² + 1 stays irreducible modulo 32003, so End/rad is a quadratic field
        v = BandParam.companion((1, 0, 1))
        m = materialize_band(parse_band("band(xY)"), v, gf)
        result = is_indecomposable(m)
        assert result
        assert result.certificate.method == "frobenius-fixed"

    def test_irreducible_parameter_over_rationals(self, qq):
        v = BandParam.companion((1, 0, 1))
        m = materialize_band(parse_band("band(xY)"), v, qq)
        result = is_indecomposable(m, seed=4, budget=5)
        assert result
        assert result.certificate.kind == MONTE_CARLO
        assert result.certificate.samples == 5
        assert 0 < result.certificate.failure_bound < 1e-20


class TestDecompose:
    """decompose() recovers the Krull-Schmidt multiset with a witness."""

    def test_two_strings(self, make_string):
        a, b = make_string("x"), make_string("xY")
        result = decompose(direct_sum(a, b))
        assert multiset_matches(result, [(a, 1), (b, 1)])

    def test_indecomposable_input(self, make_string):
        result = decompose(make_string("xY"))
        assert len(result.parts) == 1
        assert result.parts[0].multiplicity == 1

    def test_repeated_band(self, make_band):
        band = make_band("xY", 2)
        result = decompose(direct_sum(band, band))
        assert multiset_matches(result, [(band, 2)])

    def test_hidden_by_conjugation(self, make_string, make_band, gf):
        parts = [make_string("xY"), make_string("Yx"), make_band("xY", 7), make_string("")]
        m = conjugate(direct_sum(*parts), Matrix.random_invertible(gf, 9, np.random.default_rng(11)))
        result = decompose(m, seed=5)
        assert result.total_dim == 9
        assert result.summand_count == 4
        assert conjugate(m, result.witness) == result.assembled()

    def test_over_rationals(self, make_string, qq):
        a, b = make_string("x", qq), make_string("", qq)
        result = decompose(direct_sum(a, b, b))
        assert multiset_matches(result, [(a, 1), (b, 2)])

    def test_zero_module(self, gf):
        result = decompose(ModuleRep.zero(gf))
        assert result.parts == ()

    def test_deterministic(self, make_string):
        m = direct_sum(make_string("x"), make_string("y"), make_string("x"))
        assert decompose(m, seed=9).witness == decompose(m, seed=9).witness

    def test_multiset_independent_of_seed(self, make_string, make_band, gf):
        a, b, c = make_string("xY"), make_band("xY", 4), make_string("Yx")
        m = conjugate(direct_sum(a, b, a, c), Matrix.random_invertible(gf, 11, np.random.default_rng(2)))
        for seed in range(10):
            assert multiset_matches(decompose(m, seed=seed), [(a, 2), (b, 1), (c, 1)])

    def test_parts_decompose_to_themselves(self, make_string, make_band):
        m = direct_sum(make_string("xYx"), make_band("xY", 6, size=2), make_string("xYx"))
        for part in decompose(m, seed=1).parts:
            again = decompose(part.module, seed=2)
            assert len(again.parts) == 1
            assert again.parts[0].multiplicity == 1
            assert is_isomorphic(again.parts[0].module, part.module)
