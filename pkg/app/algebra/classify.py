"""
Chain-condition classification of string modules and the split of a
mixed reflexive string into a noetherian submodule and artinian quotient.

Also holds the catalog of reflexive modules over a complete discrete
valuation ring, where every object is A^a ⊕ Q^b ⊕ E^c ⊕ finite part.
"""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from app.algebra.linalg import FieldSpec, Matrix
from app.algebra.modrep import is_isomorphic, materialize_string, quotient, submodule_generated
from app.algebra.strings import (
    Letter,
    StringWord,
    cut,
    inverse_word,
    normalize_word,
    parse_word,
    split_at,
    truncate_end,
)
from app.errors import UsageError

logger = logging.getLogger(__name__)


class Classification(str, Enum):
    FINITE_LENGTH = "finite-length"
    ARTINIAN = "artinian"
    NOETHERIAN = "noetherian"
    MIXED_REFLEXIVE = "mixed-reflexive"

    def swap(self) -> "Classification":
        """Effect of Matlis duality: artinian and noetherian trade places."""
        if self is Classification.ARTINIAN:
            return Classification.NOETHERIAN
        if self is Classification.NOETHERIAN:
            return Classification.ARTINIAN
        return self


# Anchor strings: M(C_∞) ≅ E(A/m), M(D_∞) ≅ A, and the one-sided pieces.
C_INFINITY = parse_word("x^inf Y^inf")
D_INFINITY = parse_word("X^inf y^inf")
C_X = parse_word(". X^inf")
C_Y = parse_word(". Y^inf")
D_X = parse_word(". x^inf")
D_Y = parse_word(". y^inf")


def c_word(i: int) -> StringWord:
    """C_i = x^i Y^i; M(C_i) is soc^{i+1} E(A/m)."""
    if i < 0:
        raise UsageError(f"C_i needs i >= 0, got {i}")
    return StringWord.finite("x" * i + "Y" * i)


ARTINIAN_TYPE = "artinian"
NOETHERIAN_TYPE = "noetherian"


def tail_type(tail: Letter, side: str) -> str:
    """Direct-left and inverse-right tails are divisible (artinian-type)."""
    if side == "left":
        return NOETHERIAN_TYPE if tail.is_inverse else ARTINIAN_TYPE
    return ARTINIAN_TYPE if tail.is_inverse else NOETHERIAN_TYPE


def classify_word(w: StringWord) -> Classification:
    types = set()
    if w.left_tail is not None:
        types.add(tail_type(w.left_tail, "left"))
    if w.right_tail is not None:
        types.add(tail_type(w.right_tail, "right"))
    if not types:
        return Classification.FINITE_LENGTH
    if types == {ARTINIAN_TYPE}:
        return Classification.ARTINIAN
    if types == {NOETHERIAN_TYPE}:
        return Classification.NOETHERIAN
    return Classification.MIXED_REFLEXIVE


SUB_SIDE = {Classification.NOETHERIAN, Classification.FINITE_LENGTH}
QUOT_SIDE = {Classification.ARTINIAN, Classification.FINITE_LENGTH}

EMPTY_WORD = StringWord(None, (), None)


@dataclass(frozen=True)
class SplitResult:
    """0 → M(sub) → M(w) → M(quot) → 0 with sub noetherian and quot artinian.

    ``split_index`` is None for the trivial split, in which case
    ``whole_side`` names the side carrying the whole word.
    """

    word: StringWord
    sub: StringWord
    quot: StringWord
    split_index: Optional[int] = None
    connector: Optional[Letter] = None
    whole_side: str = "sub"

    @property
    def is_trivial(self) -> bool:
        return self.split_index is None


def letter_is_inverse(w: StringWord, j: int) -> bool:
    return cut(w, j)[2].is_inverse


def is_admissible_cut(w: StringWord, j: int) -> bool:
    """Cutting the letter at ``j`` leaves a noetherian-or-finite sub and an artinian-or-finite quotient."""
    try:
        piece = split_at(w, j)
    except UsageError:
        return False
    return classify_word(piece.sub) in SUB_SIDE and classify_word(piece.quot) in QUOT_SIDE


def admissible_cuts(w: StringWord, window: int = 3) -> list[int]:
    """Admissible positions from ``window`` letters left of the core to ``window`` right of it."""
    n = len(w.core)
    return [j for j in range(-window, n + window) if is_admissible_cut(w, j)]


def _split_result(w: StringWord, j: int) -> SplitResult:
    piece = split_at(w, j)
    return SplitResult(w, piece.sub, piece.quot, j, piece.connector)


def arno_split(w: StringWord) -> SplitResult:
    """Noetherian submodule with artinian quotient; first admissible cut scanning right from the core."""
    kind = classify_word(w)
    if kind is Classification.ARTINIAN:
        return SplitResult(w, EMPTY_WORD, w, whole_side="quot")
    if kind is not Classification.MIXED_REFLEXIVE:
        return SplitResult(w, w, EMPTY_WORD, whole_side="sub")
    j = 0
    while not is_admissible_cut(w, j):
        j += 1
        if j > len(w.core):
            raise AssertionError(f"no admissible cut in mixed word {w}")
    logger.debug("split %s at position %d", w, j)
    return _split_result(w, j)


def rejoin(split: SplitResult) -> StringWord:
    """Glue the two pieces back along the connector; tails absorb repeated letters."""
    if split.is_trivial:
        return split.sub if split.whole_side == "sub" else split.quot
    if split.connector.is_inverse:
        left, right = split.sub, split.quot
    else:
        left, right = split.quot, split.sub
    return normalize_word(
        StringWord(left.left_tail, left.core + (split.connector,) + right.core, right.right_tail)
    )


def same_word(a: StringWord, b: StringWord) -> bool:
    return normalize_word(a) == normalize_word(b)


# ── uniqueness up to finite length ─────────────────────────────────────────

@dataclass(frozen=True)
class UniquenessReport:
    first: int
    second: int
    distance: int
    vertex_difference: int
    nested: bool

    @property
    def ok(self) -> bool:
        return self.nested and self.distance == self.vertex_difference


def _sub_vertices(w: StringWord, j: int, lo: int, hi: int) -> set[int]:
    """Vertex positions of the submodule cut at ``j``, inside the window [lo, hi]."""
    if letter_is_inverse(w, j):
        return set(range(lo, j + 1))
    return set(range(j + 1, hi + 1))


def split_uniqueness_check(w: StringWord, j1: int, j2: int) -> UniquenessReport:
    """Two admissible cuts give submodules that differ by a finite segment of |j1 - j2| vertices."""
    for j in (j1, j2):
        if not is_admissible_cut(w, j):
            raise UsageError(f"position {j} is not an admissible cut of {w}")
    margin = max(abs(j1), abs(j2)) + 2
    lo, hi = -margin, len(w.core) + margin
    s1, s2 = _sub_vertices(w, j1, lo, hi), _sub_vertices(w, j2, lo, hi)
    return UniquenessReport(
        first=j1,
        second=j2,
        distance=abs(j1 - j2),
        vertex_difference=len(s1 ^ s2),
        nested=s1 <= s2 or s2 <= s1,
    )


# ── duality compatibility ──────────────────────────────────────────────────

@dataclass(frozen=True)
class DualCompatReport:
    word: StringWord
    dual_word: StringWord
    classification: Classification
    dual_classification: Classification

    @property
    def ok(self) -> bool:
        return self.dual_classification is self.classification.swap()


def classify_dual_compat(w: StringWord) -> DualCompatReport:
    dual_word = inverse_word(w)
    return DualCompatReport(w, dual_word, classify_word(w), classify_word(dual_word))


# ── materialised shadow of the split ───────────────────────────────────────

@dataclass(frozen=True)
class TruncationReport:
    depth: int
    sub_dim: int
    quot_dim: int
    sub_closed: bool
    sub_matches: bool
    quot_matches: bool
    boundary_correction: int

    @property
    def ok(self) -> bool:
        return self.sub_closed and self.sub_matches and self.quot_matches and self.boundary_correction <= 1


def truncation_consistency(w: StringWord, depth: int, field: FieldSpec, seed: int = 0) -> TruncationReport:
    """Check the split of ``w`` on its depth-``depth`` truncation.

    The sub vertices span a submodule of M(truncate(w)) isomorphic to the
    string module of that segment, the quotient is the string module of the
    remaining segment, and the quotient differs from M(truncate(quot)) by at
    most one vertex at the cut.
    """
    split = arno_split(w)
    finite = truncate_end(w, depth)
    m = materialize_string(finite, field)
    offset = depth if w.left_tail is not None else 0
    last = finite.vertices - 1
    if split.is_trivial:
        sub_positions = list(range(finite.vertices)) if split.whole_side == "sub" else []
    else:
        lo, hi = -offset, last - offset
        sub_positions = sorted(p + offset for p in _sub_vertices(w, split.split_index, lo, hi))
    ident = Matrix.identity(field, m.dim)
    sub, inclusion = submodule_generated(m, [ident.column(p) for p in sub_positions])
    closed = sub.dim == len(sub_positions)
    rest = [p for p in range(finite.vertices) if p not in set(sub_positions)]

    def segment(positions: list[int]) -> Optional[StringWord]:
        if not positions:
            return None
        return StringWord.finite(finite.core[positions[0] : positions[-1]])

    sub_seg, quot_seg = segment(sub_positions), segment(rest)
    sub_matches = sub_seg is None or bool(is_isomorphic(sub, materialize_string(sub_seg, field), seed=seed))
    quot_module = quotient(m, inclusion)
    quot_matches = quot_seg is None or bool(is_isomorphic(quot_module, materialize_string(quot_seg, field), seed=seed))
    if split.is_trivial:
        correction = 0
    else:
        correction = abs(quot_module.dim - truncate_end(split.quot, depth).vertices)
    return TruncationReport(depth, sub.dim, quot_module.dim, closed, sub_matches, quot_matches, correction)


# ── complete DVR catalog ───────────────────────────────────────────────────

@dataclass(frozen=True)
class DvrCatalogObject:
    """A^a ⊕ Q^b ⊕ E^c ⊕ A/m^d1 ⊕ A/m^d2 ⊕ … over a complete DVR."""

    a: int = 0
    b: int = 0
    c: int = 0
    finite: tuple[int, ...] = ()

    def __post_init__(self):
        for name in ("a", "b", "c"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 0:
                raise UsageError(f"multiplicity {name} must be a nonnegative integer, got {value!r}")
        finite = tuple(sorted(int(d) for d in self.finite))
        if any(d < 1 for d in finite):
            raise UsageError(f"finite summands A/m^d need d >= 1, got {list(self.finite)}")
        object.__setattr__(self, "finite", finite)

    @property
    def is_zero(self) -> bool:
        return not (self.a or self.b or self.c or self.finite)

    def multiset(self) -> Counter:
        return Counter(self.finite)


def dvr_dual(o: DvrCatalogObject) -> DvrCatalogObject:
    """A and E trade places; Q and every A/m^d are self-dual."""
    return DvrCatalogObject(o.c, o.b, o.a, o.finite)


def dvr_classify(o: DvrCatalogObject) -> Classification:
    if o.a == o.b == o.c == 0:
        return Classification.FINITE_LENGTH
    if o.b == o.c == 0:
        return Classification.NOETHERIAN
    if o.a == o.b == 0:
        return Classification.ARTINIAN
    return Classification.MIXED_REFLEXIVE


def dvr_add(o1: DvrCatalogObject, o2: DvrCatalogObject) -> DvrCatalogObject:
    return DvrCatalogObject(o1.a + o2.a, o1.b + o2.b, o1.c + o2.c, o1.finite + o2.finite)


def dvr_is_projective(o: DvrCatalogObject) -> bool:
    """Projective in refl A: sums of A and Q."""
    return o.c == 0 and not o.finite


def dvr_is_injective(o: DvrCatalogObject) -> bool:
    """Injective in refl A: sums of E and Q."""
    return o.a == 0 and not o.finite
