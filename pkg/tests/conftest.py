"""
Shared pytest fixtures for the matlis-ks test suite.

Provides the two fields every module test runs over, factories for string
and band modules, and a FastAPI TestClient.
"""
import sys
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

# ── Make app importable ───────────────────────────────────────────────────────
ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT))

from app.algebra.linalg import FieldSpec  # noqa: E402
from app.algebra.modrep import BandParam, materialize_band, materialize_string  # noqa: E402
from app.algebra.strings import parse_band, parse_word  # noqa: E402
from app.main import app  # noqa: E402


# ── Fixtures ──────────────────────────────────────────────────────────────────

@pytest.fixture()
def gf():
    """The default prime field GF(32003)."""
    return FieldSpec.prime()


@pytest.fixture()
def gf5():
    """A small prime field for hand-checked examples."""
    return FieldSpec.prime(5)


@pytest.fixture()
def qq():
    """The rationals."""
    return FieldSpec.rationals()


@pytest.fixture()
def client():
    """Yield a FastAPI TestClient."""
    with TestClient(app) as c:
        yield c


# ── Factory helpers ───────────────────────────────────────────────────────────

@pytest.fixture()
def make_string(gf):
    """Factory fixture: string module of a finite word (default field GF(32003))."""

    def _make(word="", field=None):
        return materialize_string(parse_word(word), field or gf)

    return _make


@pytest.fixture()
def make_band(gf):
    """Factory fixture: band module with a Jordan parameter."""

    def _make(cycle="xY", eigenvalue=2, size=1, field=None):
        text = cycle if cycle.startswith("band(") else f"band({cycle})"
        return materialize_band(parse_band(text), BandParam.jordan(eigenvalue, size), field or gf)

    return _make
