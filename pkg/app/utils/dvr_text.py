"""
Utility functions for parsing and formatting DVR catalog objects.
"""
import re

from app.algebra.classify import DvrCatalogObject
from app.errors import UsageError

_TERM = re.compile(r"^(?P<name>[AQE])(?:\^(?P<mult>\d+))?$")
_FINITE = re.compile(r"^\[(?P<body>[\d\s,]*)\]$")


def parse_dvr(text: str) -> DvrCatalogObject:
    """
    Parse the textual form ``"A^a + Q^b + E^c + [d1,d2,...]"``.

    Terms may appear in any order, be repeated (multiplicities add) or be
    left out; an exponent of 1 may be dropped. ``"0"`` is the zero object.

    Examples:
        >>> parse_dvr("A^2 + E + [1,3]")
        DvrCatalogObject(a=2, b=0, c=1, finite=(1, 3))
        >>> parse_dvr("0")
        DvrCatalogObject(a=0, b=0, c=0, finite=())
        >>> parse_dvr("Q^1")
        DvrCatalogObject(a=0, b=1, c=0, finite=())
    """
    if not text or not text.strip():
        raise UsageError("empty DVR catalog expression; write 0 for the zero object")
    if text.strip() == "0":
        return DvrCatalogObject()

    counts = {"A": 0, "Q": 0, "E": 0}
    finite: list[int] = []
    for term in (t.strip() for t in text.split("+")):
        if not term:
            raise UsageError(f"empty term in {text!r}")
        m = _TERM.match(term)
        if m:
            counts[m["name"]] += int(m["mult"]) if m["mult"] is not None else 1
            continue
        m = _FINITE.match(term)
        if m:
            body = [p.strip() for p in m["body"].split(",") if p.strip()]
            finite.extend(int(p) for p in body)
            continue
        raise UsageError(f"unrecognised term {term!r}; expected A^a, Q^b, E^c or [d1,...]")
    return DvrCatalogObject(counts["A"], counts["Q"], counts["E"], tuple(finite))


def format_dvr(o: DvrCatalogObject) -> str:
    """
    Format a catalog object in the textual form, omitting zero terms.

    Examples:
        >>> format_dvr(DvrCatalogObject(1, 0, 2, (4, 1)))
        'A^1 + E^2 + [1,4]'
        >>> format_dvr(DvrCatalogObject())
        '0'
    """
    terms = [f"{name}^{mult}" for name, mult in (("A", o.a), ("Q", o.b), ("E", o.c)) if mult]
    if o.finite:
        terms.append("[" + ",".join(str(d) for d in o.finite) + "]")
    return " + ".join(terms) if terms else "0"
