"""
Strings over the alphabet {x, y, x⁻, y⁻}: parsing, validation and combinatorics.

Concrete syntax (whitespace ignored)::

    WORD   := TAIL? CORE TAIL? | "band(" CORE ")"
    TAIL   := LETTER "^inf"
    CORE   := "." | LETTER*
    LETTER := "x" | "y" | "X" | "Y"        capital = formal inverse

A leading tail is the left tail and a trailing tail the right tail. A lone
tail is read as a left tail; a word made of a right tail only is written
with the explicit empty-core marker, e.g. ``. X^inf``.

Positions: core letter ``j`` joins core vertices ``j`` and ``j + 1``.
Left-tail letters sit at negative positions, right-tail letters at
positions ``>= len(core)``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Optional, Union

from app.errors import BandError, ForbiddenPairError, MatlisError, UsageError, WordSyntaxError


class Letter(str, Enum):
    X = "x"
    Y = "y"
    X_INV = "X"
    Y_INV = "Y"

    @property
    def symbol(self) -> str:
        return self.value.lower()

    @property
    def is_inverse(self) -> bool:
        return self.value.isupper()

    def inverted(self) -> "Letter":
        return Letter(self.value.swapcase())

    @property
    def rank(self) -> int:
        """Position in the total order x < y < x⁻ < y⁻."""
        return _RANK[self]

    def __str__(self) -> str:
        return self.value


_RANK = {Letter.X: 0, Letter.Y: 1, Letter.X_INV: 2, Letter.Y_INV: 3}

RELATION_PAIRS = frozenset(
    {
        (Letter.X, Letter.Y),
        (Letter.Y, Letter.X),
        (Letter.X_INV, Letter.Y_INV),
        (Letter.Y_INV, Letter.X_INV),
    }
)
BACKTRACKING_PAIRS = frozenset(
    {
        (Letter.X, Letter.X_INV),
        (Letter.X_INV, Letter.X),
        (Letter.Y, Letter.Y_INV),
        (Letter.Y_INV, Letter.Y),
    }
)


def pair_violation(a: Letter, b: Letter) -> Optional[str]:
    """``"relation"``, ``"backtracking"`` or None for an adjacent pair."""
    if (a, b) in RELATION_PAIRS:
        return "relation"
    if (a, b) in BACKTRACKING_PAIRS:
        return "backtracking"
    return None


def _check_sequence(letters: list[Letter], offset: int, cyclic: bool = False) -> None:
    pairs = list(zip(letters, letters[1:]))
    if cyclic and letters:
        pairs.append((letters[-1], letters[0]))
    for i, (a, b) in enumerate(pairs):
        kind = pair_violation(a, b)
        if kind:
            raise ForbiddenPairError((a.value, b.value), kind, i + offset)


@dataclass(frozen=True)
class StringWord:
    """A finite core with optional constant tails repeated to infinity."""

    left_tail: Optional[Letter]
    core: tuple[Letter, ...]
    right_tail: Optional[Letter]

    def __post_init__(self):
        object.__setattr__(self, "core", tuple(Letter(c) for c in self.core))
        for side in ("left_tail", "right_tail"):
            tail = getattr(self, side)
            if tail is not None:
                object.__setattr__(self, side, Letter(tail))
        seq = ([self.left_tail] if self.left_tail else []) + list(self.core)
        seq += [self.right_tail] if self.right_tail else []
        _check_sequence(seq, -1 if self.left_tail else 0)

    @classmethod
    def finite(cls, letters) -> "StringWord":
        return cls(None, tuple(Letter(c) for c in letters), None)

    @property
    def is_finite(self) -> bool:
        return self.left_tail is None and self.right_tail is None

    @property
    def vertices(self) -> Optional[int]:
        return len(self.core) + 1 if self.is_finite else None

    def __str__(self) -> str:
        return serialize_word(self)

    def __len__(self) -> int:
        return len(self.core)


@dataclass(frozen=True)
class PeriodicWord:
    """A primitive cyclic word containing both symbols."""

    cycle: tuple[Letter, ...]

    def __post_init__(self):
        cycle = tuple(Letter(c) for c in self.cycle)
        object.__setattr__(self, "cycle", cycle)
        n = len(cycle)
        if n < 2:
            raise BandError(f"a periodic word needs at least 2 letters, got {n}")
        _check_sequence(list(cycle), 0, cyclic=True)
        symbols = {c.symbol for c in cycle}
        for s in ("x", "y"):
            if s not in symbols:
                raise BandError(f"periodic word contains no {s}-letter, so that action cannot be nilpotent")
        for d in range(1, n):
            if n % d == 0 and cycle == cycle[:d] * (n // d):
                raise BandError(f"periodic word is not primitive: it repeats a block of length {d}")

    @property
    def period(self) -> int:
        return len(self.cycle)

    def __str__(self) -> str:
        return serialize_band(self)


# ── parsing ────────────────────────────────────────────────────────────────

_TOKEN = re.compile(
    r"(?P<tail>[xyXY])\s*\^inf|(?P<letter>[xyXY])|(?P<dot>\.)|(?P<band>band\()|(?P<close>\))"
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    position: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        match = _TOKEN.match(text, pos)
        if match is None:
            raise WordSyntaxError(f"unexpected character {text[pos]!r}", pos)
        tokens.append(_Token(match.lastgroup, match.group(0), pos))
        pos = match.end()
    return tokens


def _letters(tokens: list[_Token]) -> tuple[Letter, ...]:
    out = []
    for tok in tokens:
        if tok.kind != "letter":
            raise WordSyntaxError(f"expected a letter, got {tok.text!r}", tok.position)
        out.append(Letter(tok.text))
    return tuple(out)


def parse_word(text: str) -> StringWord:
    """Parse a finite or stabilising word; raises on syntax or forbidden pairs."""
    tokens = _tokenize(text)
    if tokens and tokens[0].kind == "band":
        raise WordSyntaxError("band(...) names a periodic word; use parse_band", tokens[0].position)
    left = right = None
    if tokens and tokens[0].kind == "tail":
        left = Letter(tokens[0].text[0])
        tokens = tokens[1:]
    if tokens and tokens[-1].kind == "tail":
        right = Letter(tokens[-1].text[0])
        tokens = tokens[:-1]
    if tokens and tokens[0].kind == "dot":
        if len(tokens) > 1:
            raise WordSyntaxError("the empty-core marker '.' stands alone", tokens[1].position)
        tokens = []
    for tok in tokens:
        if tok.kind == "tail":
            raise WordSyntaxError("a tail must start or end the word", tok.position)
    return StringWord(left, _letters(tokens), right)


def parse_band(text: str) -> PeriodicWord:
    tokens = _tokenize(text)
    if not tokens or tokens[0].kind != "band":
        pos = tokens[0].position if tokens else 0
        raise WordSyntaxError("a periodic word is written band(...)", pos)
    if tokens[-1].kind != "close":
        raise WordSyntaxError("missing ')'", len(text))
    return PeriodicWord(_letters(tokens[1:-1]))


def parse_any(text: str) -> Union[StringWord, PeriodicWord]:
    tokens = _tokenize(text)
    if tokens and tokens[0].kind == "band":
        return parse_band(text)
    return parse_word(text)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    canonical: Optional[str] = None
    error: Optional[str] = None
    kind: Optional[str] = None
    position: Optional[int] = None
    pair: Optional[tuple[str, str]] = None


def validate(text: str) -> ValidationReport:
    """Never raises: the outcome, including the offending pair, is the return value."""
    try:
        word = parse_any(text)
    except WordSyntaxError as e:
        return ValidationReport(False, error=str(e), kind="syntax", position=e.position)
    except ForbiddenPairError as e:
        return ValidationReport(False, error=str(e), kind=e.kind, position=e.position, pair=e.pair)
    except MatlisError as e:
        return ValidationReport(False, error=str(e), kind="band")
    spelled = serialize_band(word) if isinstance(word, PeriodicWord) else serialize_word(word)
    return ValidationReport(True, canonical=spelled)


# ── serialisation ──────────────────────────────────────────────────────────

def serialize_word(w: StringWord) -> str:
    core = "".join(c.value for c in w.core)
    if not core and w.right_tail is not None and w.left_tail is None:
        core = "."
    parts = []
    if w.left_tail is not None:
        parts.append(f"{w.left_tail.value}^inf")
    if core:
        parts.append(core)
    if w.right_tail is not None:
        parts.append(f"{w.right_tail.value}^inf")
    return " ".join(parts)


def serialize_band(pw: PeriodicWord) -> str:
    return "band(" + "".join(c.value for c in pw.cycle) + ")"


# ── combinatorics ──────────────────────────────────────────────────────────

def _flip(letter: Optional[Letter]) -> Optional[Letter]:
    return letter.inverted() if letter is not None else None


def inverse_word(w: StringWord) -> StringWord:
    """C ↦ C⁻: every letter changes direction, order kept."""
    return StringWord(_flip(w.left_tail), tuple(c.inverted() for c in w.core), _flip(w.right_tail))


def inverse_band(pw: PeriodicWord) -> PeriodicWord:
    return PeriodicWord(tuple(c.inverted() for c in pw.cycle))


def reverse_inverse(w: StringWord) -> StringWord:
    """Read the diagram backwards; names an isomorphic string module."""
    return StringWord(
        _flip(w.right_tail),
        tuple(c.inverted() for c in reversed(w.core)),
        _flip(w.left_tail),
    )


def _tail_rank(t: Optional[Letter]) -> int:
    return -1 if t is None else t.rank


def _word_key(w: StringWord) -> tuple:
    return (_tail_rank(w.left_tail), _tail_rank(w.right_tail), tuple(c.rank for c in w.core))


def canonical_form(w: StringWord) -> StringWord:
    return min(w, reverse_inverse(w), key=_word_key)


def canonical_band(pw: PeriodicWord) -> PeriodicWord:
    """Least rotation of the cycle or of its reverse-inverse."""
    n = pw.period
    backwards = tuple(c.inverted() for c in reversed(pw.cycle))
    candidates = [seq[i:] + seq[:i] for seq in (pw.cycle, backwards) for i in range(n)]
    return PeriodicWord(min(candidates, key=lambda s: tuple(c.rank for c in s)))


def letter_at(w: StringWord, j: int) -> Letter:
    n = len(w.core)
    if j < 0:
        if w.left_tail is None:
            raise UsageError(f"position {j} lies left of a word without a left tail")
        return w.left_tail
    if j >= n:
        if w.right_tail is None:
            raise UsageError(f"position {j} lies right of a word of {n} letters without a right tail")
        return w.right_tail
    return w.core[j]


def cut(w: StringWord, j: int) -> tuple[StringWord, StringWord, Letter]:
    """Remove the letter at position ``j``; returns (left piece, right piece, letter)."""
    letter = letter_at(w, j)
    n = len(w.core)
    if j < 0:
        left = StringWord(w.left_tail, (), None)
        right = StringWord(None, (w.left_tail,) * (-j - 1) + w.core, w.right_tail)
    elif j >= n:
        left = StringWord(w.left_tail, w.core + (w.right_tail,) * (j - n), None)
        right = StringWord(None, (), w.right_tail)
    else:
        left = StringWord(w.left_tail, w.core[:j], None)
        right = StringWord(None, w.core[j + 1 :], w.right_tail)
    return left, right, letter


INVERSE_CONNECTOR = "inverse-connector"
DIRECT_CONNECTOR = "direct-connector"


@dataclass(frozen=True)
class ConcatSplit:
    """0 → M(sub) → M(w) → M(quot) → 0 obtained by removing one arrow."""

    sub: StringWord
    quot: StringWord
    connector: Letter
    orientation: str


def split_at(w: StringWord, j: int) -> ConcatSplit:
    """Exact sequence from the arrow at any position, tails included."""
    left, right, letter = cut(w, j)
    if letter.is_inverse:
        return ConcatSplit(left, right, letter, INVERSE_CONNECTOR)
    return ConcatSplit(right, left, letter, DIRECT_CONNECTOR)


def concat_split(w: StringWord, j: int) -> ConcatSplit:
    """Split at core letter ``j``; the arrow's direction decides which side is the submodule."""
    if not 0 <= j < len(w.core):
        raise UsageError(f"letter index {j} is not a core letter of a word with {len(w.core)} core letters")
    return split_at(w, j)


def concat_join(split: ConcatSplit) -> StringWord:
    """Inverse of ``split_at``: glue the two pieces back along the connector."""
    if split.orientation == INVERSE_CONNECTOR:
        left, right = split.sub, split.quot
    else:
        left, right = split.quot, split.sub
    if left.right_tail is not None or right.left_tail is not None:
        raise UsageError("pieces with inner tails cannot be glued")
    return StringWord(left.left_tail, left.core + (split.connector,) + right.core, right.right_tail)


def truncate_end(w: StringWord, depth: int) -> StringWord:
    """Replace each tail by ``depth`` copies of its letter."""
    if depth < 0:
        raise UsageError(f"depth must be nonnegative, got {depth}")
    left = (w.left_tail,) * depth if w.left_tail else ()
    right = (w.right_tail,) * depth if w.right_tail else ()
    return StringWord(None, left + w.core + right, None)


def enumerate_words(max_letters: int) -> Iterator[StringWord]:
    """Every valid finite word with at most ``max_letters`` letters."""
    yield StringWord(None, (), None)
    frontier: list[tuple[Letter, ...]] = [(c,) for c in Letter]
    for _ in range(max_letters):
        nxt = []
        for letters in frontier:
            yield StringWord(None, letters, None)
            for c in Letter:
                if pair_violation(letters[-1], c) is None:
                    nxt.append(letters + (c,))
        frontier = nxt


def enumerate_tailed(max_core: int) -> Iterator[StringWord]:
    """Every valid word with core length <= ``max_core`` and every tail combination."""
    tails = [None, *Letter]
    for core_word in enumerate_words(max_core):
        for left in tails:
            for right in tails:
                try:
                    yield StringWord(left, core_word.core, right)
                except ForbiddenPairError:
                    continue


def normalize_word(w: StringWord) -> StringWord:
    """Absorb core letters that repeat an adjacent tail; the infinite word is unchanged."""
    core = list(w.core)
    while core and w.left_tail is not None and core[0] == w.left_tail:
        core.pop(0)
    while core and w.right_tail is not None and core[-1] == w.right_tail:
        core.pop()
    return StringWord(w.left_tail, tuple(core), w.right_tail)
