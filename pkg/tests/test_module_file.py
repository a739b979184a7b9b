"""
Tests for the module exchange format and module files.
"""
import json

import pytest

from app.algebra.linalg import FieldSpec
from app.algebra.modrep import ModuleRep
from app.errors import ModuleInvariantError, UsageError
from app.models import ModuleDocument, decode_entry, module_to_document
from app.utils.module_file import module_json, parse_module_text, read_module, write_module


def doc_text(field, x, y, dim=None):
    return json.dumps({"field": field, "dim": len(x) if dim is None else dim, "x": x, "y": y})


class TestParseModuleText:
    """parse_module_text() validates shape, entries and the module relations."""

    def test_prime_field(self):
        m = parse_module_text(doc_text({"Fp": 5}, [[0, 0], [1, 0]], [[0, 0], [0, 0]]))
        assert m.field == FieldSpec.prime(5)
        assert m.act_x[1, 0] == 1

    def test_rationals(self):
        m = parse_module_text(doc_text("Q", [[0, 0], ["1/2", 0]], [[0, 0], [0, 0]]))
        assert m.field.is_rational
        assert str(m.act_x[1, 0]) == "1/2"

    def test_wrong_shape(self):
        with pytest.raises(UsageError, match="2x2"):
            parse_module_text(doc_text({"Fp": 5}, [[0, 0], [1, 0]], [[0]], dim=2))

    def test_not_json(self):
        with pytest.raises(UsageError, match="invalid module document"):
            parse_module_text("{not json")

    def test_unreduced_residue(self):
        with pytest.raises(UsageError, match="reduced residue"):
            parse_module_text(doc_text({"Fp": 5}, [[0, 0], [7, 0]], [[0, 0], [0, 0]]))

    def test_fraction_over_prime_field(self):
        with pytest.raises(UsageError, match="integer residue"):
            parse_module_text(doc_text({"Fp": 5}, [[0, 0], ["1/2", 0]], [[0, 0], [0, 0]]))

    def test_composite_characteristic(self):
        with pytest.raises(UsageError, match="prime"):
            parse_module_text(doc_text({"Fp": 6}, [[0]], [[0]]))

    def test_relation_violated(self):
        with pytest.raises(ModuleInvariantError):
            parse_module_text(doc_text({"Fp": 5}, [[0, 0], [1, 0]], [[0, 1], [0, 0]]))

    def test_zero_dimensional(self):
        assert parse_module_text(doc_text("Q", [], [])).dim == 0


class TestDecodeEntry:
    """decode_entry() accepts integers and "num/den" strings."""

    def test_string_fraction(self):
        assert decode_entry(FieldSpec.rationals(), "-3/6") == FieldSpec.rationals().scalar("-1/2")

    def test_garbage(self):
        with pytest.raises(UsageError, match="num/den"):
            decode_entry(FieldSpec.rationals(), "abc")


class TestModuleFiles:
    """write_module() and read_module() keep a module bit-exact."""

    def test_write_then_read(self, tmp_path, make_string, qq):
        m = make_string("xYx", qq)
        path = tmp_path / "m.json"
        write_module(m, path)
        assert read_module(path) == m

    def test_document_layout(self, make_string, gf5):
        doc = json.loads(module_json(make_string("xY", gf5)))
        assert doc == {
            "field": {"Fp": 5},
            "dim": 3,
            "x": [[0, 0, 0], [1, 0, 0], [0, 0, 0]],
            "y": [[0, 0, 0], [0, 0, 1], [0, 0, 0]],
        }

    def test_rational_entries_are_strings(self, qq):
        m = ModuleRep.from_rows(qq, [[0, 0], ["2/3", 0]], [[0, 0], [0, 0]])
        assert module_to_document(m).x == [[0, 0], ["2/3", 0]]

    def test_missing_file(self, tmp_path):
        with pytest.raises(UsageError, match="cannot read"):
            read_module(tmp_path / "absent.json")

    def test_document_model(self):
        doc = ModuleDocument(field="Q", dim=1, x=[[0]], y=[[0]])
        assert doc.field_spec().is_rational
