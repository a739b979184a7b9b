"""
Tests for word parsing, validation and string combinatorics.
"""
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.algebra.strings import (
    DIRECT_CONNECTOR,
    INVERSE_CONNECTOR,
    Letter,
    StringWord,
    canonical_band,
    canonical_form,
    concat_join,
    concat_split,
    cut,
    enumerate_tailed,
    enumerate_words,
    inverse_band,
    inverse_word,
    letter_at,
    normalize_word,
    parse_any,
    parse_band,
    parse_word,
    reverse_inverse,
    serialize_word,
    split_at,
    truncate_end,
    validate,
)
from app.errors import BandError, ForbiddenPairError, UsageError, WordSyntaxError


def w(text):
    return parse_word(text)


class TestParseWord:
    """parse_word() reads finite and stabilising words."""

    def test_finite(self):
        word = w("xY")
        assert word.core == (Letter.X, Letter.Y_INV)
        assert word.left_tail is None and word.right_tail is None
        assert word.vertices == 3

    def test_space_before_tail_marker(self):
        assert w("x ^inf Y") == w("x^inf Y")
        assert w("X^inf y X  ^inf") == w("X^inf y X^inf")

    def test_empty(self):
        word = w("")
        assert word.core == ()
        assert word.vertices == 1

    def test_two_tails(self):
        word = w("x^inf Y^inf")
        assert word.left_tail is Letter.X
        assert word.core == ()
        assert word.right_tail is Letter.Y_INV
        assert not word.is_finite
        assert word.vertices is None

    def test_lone_tail_is_left(self):
        word = w("X^inf")
        assert word.left_tail is Letter.X_INV and word.right_tail is None

    def test_empty_core_marker(self):
        word = w(". X^inf")
        assert word.left_tail is None and word.right_tail is Letter.X_INV

    def test_whitespace_ignored(self):
        assert w(" x  Y x ") == w("xYx")

    def test_relation_pair(self):
        with pytest.raises(ForbiddenPairError) as exc:
            w("xy")
        assert exc.value.kind == "relation"
        assert exc.value.pair == ("x", "y")
        assert exc.value.position == 0

    def test_backtracking_pair(self):
        with pytest.raises(ForbiddenPairError) as exc:
            w("xX")
        assert exc.value.kind == "backtracking"

    def test_permitted_pairs(self):
        assert len(w("xYx")) == 3

    def test_pair_position(self):
        with pytest.raises(ForbiddenPairError) as exc:
            w("xYxy")
        assert exc.value.position == 2

    def test_pair_against_tail(self):
        with pytest.raises(ForbiddenPairError) as exc:
            w("x^inf y")
        assert exc.value.position == -1

    def test_inner_tail(self):
        with pytest.raises(WordSyntaxError, match="tail must start or end"):
            w("x Y^inf x")

    def test_bad_character(self):
        with pytest.raises(WordSyntaxError) as exc:
            w("x?")
        assert exc.value.position == 1

    def test_band_text_rejected(self):
        with pytest.raises(WordSyntaxError, match="parse_band"):
            w("band(xY)")


class TestParseBand:
    """parse_band() checks cyclic validity, primitivity and both symbols."""

    def test_period(self):
        assert parse_band("band(xY)").period == 2

    def test_not_primitive(self):
        with pytest.raises(BandError, match="primitive"):
            parse_band("band(xYxY)")

    def test_single_symbol(self):
        with pytest.raises(BandError, match="no y-letter"):
            parse_band("band(xx)")

    def test_cyclic_pair(self):
        with pytest.raises(ForbiddenPairError):
            parse_band("band(xyX)")

    def test_missing_paren(self):
        with pytest.raises(WordSyntaxError, match=r"missing '\)'"):
            parse_band("band(xY")

    def test_parse_any_dispatches(self):
        assert parse_any("band(xY)").period == 2
        assert parse_any("xY") == w("xY")


class TestValidate:
    """validate() reports instead of raising."""

    def test_ok(self):
        report = validate("xY")
        assert report.ok
        assert report.canonical == "xY"

    def test_forbidden_pair(self):
        report = validate("xy")
        assert not report.ok
        assert report.kind == "relation"
        assert report.pair == ("x", "y")
        assert report.position == 0

    def test_syntax(self):
        report = validate("x!")
        assert report.kind == "syntax"
        assert report.position == 1

    def test_band_error(self):
        report = validate("band(xYxY)")
        assert not report.ok and report.kind == "band"

    def test_band_ok(self):
        assert validate("band(Yx)").canonical == "band(Yx)"


class TestInverseAndCanonical:
    """inverse_word, reverse_inverse and canonical forms."""

    def test_inverse(self):
        assert serialize_word(inverse_word(w("xY"))) == "Xy"

    def test_inverse_empty(self):
        assert inverse_word(w("")) == w("")

    def test_inverse_c_infinity(self):
        assert serialize_word(inverse_word(w("x^inf Y^inf"))) == "X^inf y^inf"

    def test_reverse_inverse(self):
        assert serialize_word(reverse_inverse(w("xY"))) == "yX"

    def test_reverse_inverse_swaps_tails(self):
        # tails trade ends and flip direction
        assert serialize_word(reverse_inverse(w("X^inf y^inf"))) == "Y^inf x^inf"

    def test_canonical(self):
        assert canonical_form(w("xY")) == w("xY")
        assert canonical_form(w("yX")) == w("xY")
        assert canonical_form(w("")) == w("")

    def test_canonical_band(self):
        assert canonical_band(parse_band("band(yX)")) == parse_band("band(xY)")

    def test_inverse_band(self):
        assert inverse_band(parse_band("band(xY)")) == parse_band("band(Xy)")

    @settings(max_examples=60, derandomize=True, deadline=None)
    @given(st.sampled_from(list(enumerate_tailed(3))))
    def test_canonical_idempotent(self, word):
        once = canonical_form(word)
        assert canonical_form(once) == once
        assert reverse_inverse(reverse_inverse(word)) == word


class TestCutting:
    """cut, split_at, concat_split and concat_join."""

    def test_split_inverse_letter(self):
        piece = concat_split(w("xY"), 1)
        assert piece.sub == w("x")
        assert piece.quot == w("")
        assert piece.orientation == INVERSE_CONNECTOR

    def test_split_direct_letter(self):
        piece = concat_split(w("xY"), 0)
        assert piece.sub == w("Y")
        assert piece.quot == w("")
        assert piece.orientation == DIRECT_CONNECTOR

    def test_split_mixed_word(self):
        piece = concat_split(w("X^inf y X^inf"), 0)
        assert piece.sub == w(". X^inf")
        assert piece.quot == w("X^inf")

    def test_split_out_of_range(self):
        with pytest.raises(UsageError):
            concat_split(w("xY"), 2)

    def test_split_inside_tail_needs_split_at(self):
        with pytest.raises(UsageError):
            concat_split(w("X^inf y X^inf"), 1)
        piece = split_at(w("X^inf y X^inf"), 1)
        assert piece.sub == w("X^inf y")
        assert piece.quot == w(". X^inf")

    def test_letter_at_tails(self):
        word = w("x^inf Y x^inf")
        assert letter_at(word, -5) is Letter.X
        assert letter_at(word, 0) is Letter.Y_INV
        assert letter_at(word, 7) is Letter.X

    def test_letter_at_missing_tail(self):
        with pytest.raises(UsageError):
            letter_at(w("xY"), 2)

    def test_cut_left_tail(self):
        left, right, letter = cut(w("X^inf y"), -2)
        assert left == w("X^inf")
        assert right == w("Xy")
        assert letter is Letter.X_INV

    @settings(max_examples=60, derandomize=True, deadline=None)
    @given(st.sampled_from([x for x in enumerate_words(4) if len(x.core)]), st.data())
    def test_join_inverts_split(self, word, data):
        j = data.draw(st.integers(0, len(word.core) - 1))
        assert concat_join(concat_split(word, j)) == word


class TestTruncation:
    """truncate_end() replaces tails by finite runs."""

    def test_c_infinity(self):
        assert truncate_end(w("x^inf Y^inf"), 3) == w("xxxYYY")

    def test_finite_unchanged(self):
        assert truncate_end(w("xY"), 7) == w("xY")

    def test_d_infinity(self):
        assert truncate_end(w("X^inf y^inf"), 2) == inverse_word(w("xxYY"))

    def test_negative_depth(self):
        with pytest.raises(UsageError):
            truncate_end(w("xY"), -1)


class TestEnumeration:
    """enumerate_words() and enumerate_tailed() list every valid word."""

    def test_counts(self):
        # each letter has exactly two permitted successors
        assert len(list(enumerate_words(2))) == 1 + 4 + 8

    def test_all_distinct_and_valid(self):
        words = list(enumerate_words(4))
        assert len(set(words)) == len(words)
        assert all(isinstance(x, StringWord) for x in words)

    def test_tailed_includes_anchors(self):
        words = set(enumerate_tailed(1))
        assert w("x^inf Y^inf") in words
        assert w("X^inf y X^inf") in words

    def test_normalize(self):
        assert normalize_word(w("X^inf X y X X^inf")) == w("X^inf y X^inf")
