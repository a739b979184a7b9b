"""
Tests for parsing and formatting DVR catalog expressions.
"""
import pytest

from app.algebra.classify import DvrCatalogObject
from app.errors import UsageError
from app.utils.dvr_text import format_dvr, parse_dvr


class TestParseDvr:
    """parse_dvr() reads "A^a + Q^b + E^c + [d1,...]" in any order."""

    def test_full_expression(self):
        assert parse_dvr("A^2 + Q^1 + E^3 + [1,3]") == DvrCatalogObject(2, 1, 3, (1, 3))

    def test_exponent_optional(self):
        assert parse_dvr("E") == DvrCatalogObject(c=1)

    def test_any_order(self):
        assert parse_dvr("[2] + E^1 + A^1") == DvrCatalogObject(1, 0, 1, (2,))

    def test_repeats_add(self):
        assert parse_dvr("A + A^2 + [1] + [1,4]") == DvrCatalogObject(3, 0, 0, (1, 1, 4))

    def test_zero(self):
        assert parse_dvr("0").is_zero

    def test_whitespace(self):
        assert parse_dvr("  Q^2+[ 5 , 6 ] ") == DvrCatalogObject(0, 2, 0, (5, 6))

    def test_empty(self):
        with pytest.raises(UsageError, match="write 0"):
            parse_dvr("   ")

    def test_unknown_term(self):
        with pytest.raises(UsageError, match="unrecognised term"):
            parse_dvr("A^1 + B^2")

    def test_dangling_plus(self):
        with pytest.raises(UsageError, match="empty term"):
            parse_dvr("A^1 +")

    def test_zero_length_finite_summand(self):
        with pytest.raises(UsageError, match="d >= 1"):
            parse_dvr("[0]")


class TestFormatDvr:
    """format_dvr() omits zero terms and sorts the finite part."""

    def test_omits_zero_terms(self):
        assert format_dvr(DvrCatalogObject(1, 0, 2, (4, 1))) == "A^1 + E^2 + [1,4]"

    def test_zero_object(self):
        assert format_dvr(DvrCatalogObject()) == "0"

    def test_finite_only(self):
        assert format_dvr(DvrCatalogObject(finite=(3,))) == "[3]"

    def test_parse_reads_back(self):
        o = DvrCatalogObject(0, 3, 1, (2, 2, 5))
        assert parse_dvr(format_dvr(o)) == o
