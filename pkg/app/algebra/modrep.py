"""
Finite-dimensional modules over A_N = k[x,y]/(xy, x^N, y^N).

A module is a pair of commuting-to-zero nilpotent matrices (the actions of
x and y). String and band modules are materialised from words; Matlis
duality on finite length modules is the transpose of both actions.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from typing import Optional, Sequence, Union

import numpy as np

from app.algebra.linalg import (
    FieldSpec,
    Matrix,
    Scalar,
    block_diagonal,
    hstack,
    kernel_basis,
    poly_pow,
    random_combination,
    solve_linear,
    vstack,
)
from app.algebra.strings import (
    PeriodicWord,
    StringWord,
    enumerate_words,
    inverse_band,
)
from app.errors import BandError, ModuleInvariantError, UsageError

logger = logging.getLogger(__name__)

Seed = Union[int, np.random.SeedSequence, None]


@dataclass(frozen=True, eq=False)
class ModuleRep:
    """Actions of x and y on k^dim; xy = yx = 0 and both nilpotent."""

    field: FieldSpec
    act_x: Matrix
    act_y: Matrix

    def __post_init__(self):
        x, y = self.act_x, self.act_y
        if x.field != self.field or y.field != self.field:
            raise UsageError(f"action matrices must live over {self.field}")
        if not x.is_square or x.shape != y.shape:
            raise UsageError(f"actions must be square of equal size, got {x.shape} and {y.shape}")
        if not (x @ y).is_zero() or not (y @ x).is_zero():
            raise ModuleInvariantError("actions violate the relation xy = yx = 0")
        d = x.rows
        if not x.power(d).is_zero():
            raise ModuleInvariantError("the action of x is not nilpotent")
        if not y.power(d).is_zero():
            raise ModuleInvariantError("the action of y is not nilpotent")

    @classmethod
    def from_rows(cls, field: FieldSpec, x_rows, y_rows, dim: Optional[int] = None) -> "ModuleRep":
        return cls(field, Matrix.from_rows(field, x_rows, dim), Matrix.from_rows(field, y_rows, dim))

    @classmethod
    def zero(cls, field: FieldSpec) -> "ModuleRep":
        return cls(field, Matrix.zeros(field, 0, 0), Matrix.zeros(field, 0, 0))

    @property
    def dim(self) -> int:
        return self.act_x.rows

    def action(self, symbol: str) -> Matrix:
        return self.act_x if symbol == "x" else self.act_y

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModuleRep):
            return NotImplemented
        return self.field == other.field and self.act_x == other.act_x and self.act_y == other.act_y

    def __hash__(self) -> int:
        return hash((self.field, self.act_x, self.act_y))

    def __repr__(self) -> str:
        return f"ModuleRep({self.field}, dim={self.dim})"


def _check_same_field(*modules: ModuleRep) -> FieldSpec:
    field = modules[0].field
    for m in modules[1:]:
        if m.field != field:
            raise UsageError(f"field mismatch: {field} vs {m.field}")
    return field


# ── materialisation ────────────────────────────────────────────────────────

def materialize_string(w: StringWord, field: FieldSpec) -> ModuleRep:
    """Basis indexed by the vertices of ``w``; arrows give the actions."""
    if not w.is_finite:
        raise UsageError(f"cannot materialise the infinite word {w}; truncate it first")
    d = len(w.core) + 1
    acts = {"x": field.zeros((d, d)), "y": field.zeros((d, d))}
    for j, letter in enumerate(w.core):
        if letter.is_inverse:
            acts[letter.symbol][j, j + 1] = 1
        else:
            acts[letter.symbol][j + 1, j] = 1
    return ModuleRep(field, Matrix(field, acts["x"]), Matrix(field, acts["y"]))


@dataclass(frozen=True)
class BandParam:
    """A finite length k[t, t⁻¹]-module V; indecomposable unless built with ``direct_sum``."""

    kind: str
    eigenvalue: Optional[Scalar] = None
    size: int = 1
    poly: tuple[Scalar, ...] = ()
    power: int = 1
    parts: tuple["BandParam", ...] = ()

    @classmethod
    def jordan(cls, eigenvalue: Scalar, size: int = 1) -> "BandParam":
        return cls("jordan", eigenvalue=eigenvalue, size=size)

    @classmethod
    def companion(cls, poly: Sequence[Scalar], power: int = 1) -> "BandParam":
        """``poly`` is monic with the constant term first."""
        return cls("companion", poly=tuple(poly), power=power)

    @classmethod
    def direct_sum(cls, *params: "BandParam") -> "BandParam":
        """V ⊕ V′ ⊕ …; t acts block-diagonally."""
        if not params:
            raise BandError("a direct sum of band parameters needs at least one summand")
        return cls("sum", parts=tuple(params))

    def t_matrix(self, field: FieldSpec) -> Matrix:
        if self.kind == "sum":
            return block_diagonal(field, [p.t_matrix(field) for p in self.parts])
        if self.kind == "jordan":
            lam = field.scalar(self.eigenvalue)
            if lam == 0:
                raise BandError("band eigenvalue must be nonzero: t acts invertibly on V")
            if self.size < 1:
                raise BandError(f"Jordan size must be at least 1, got {self.size}")
            a = field.zeros((self.size, self.size))
            for i in range(self.size):
                a[i, i] = lam
                if i + 1 < self.size:
                    a[i + 1, i] = 1
            return Matrix(field, a)
        if self.kind == "companion":
            f = [field.scalar(c) for c in self.poly]
            if len(f) < 2 or f[-1] != 1:
                raise BandError("companion polynomial must be monic of degree at least 1")
            if f[0] == 0:
                raise BandError("companion polynomial must have f(0) != 0: t acts invertibly on V")
            if self.power < 1:
                raise BandError(f"companion power must be at least 1, got {self.power}")
            g = poly_pow(field, f, self.power)
            n = len(g) - 1
            a = field.zeros((n, n))
            for i in range(1, n):
                a[i, i - 1] = 1
            for i in range(n):
                a[i, n - 1] = field.scalar(-g[i])
            return Matrix(field, a)
        raise BandError(f"unknown band parameter kind {self.kind!r}")

    def inverted(self, field: FieldSpec) -> "BandParam":
        """V with t replaced by t⁻¹."""
        if self.kind == "sum":
            return BandParam.direct_sum(*(p.inverted(field) for p in self.parts))
        if self.kind == "jordan":
            return BandParam.jordan(field.inverse(self.eigenvalue), self.size)
        f = [field.scalar(c) for c in self.poly]
        lead = field.inverse(f[0])
        reciprocal = tuple(field.scalar(c * lead) for c in reversed(f))
        return BandParam.companion(reciprocal, self.power)


def materialize_band(pw: PeriodicWord, v: BandParam, field: FieldSpec) -> ModuleRep:
    """M(C, V): one copy of V per vertex of the period, twisted by t at the wrap letter."""
    t = v.t_matrix(field)
    m = t.rows
    n = pw.period
    d = n * m
    acts = {"x": field.zeros((d, d)), "y": field.zeros((d, d))}

    def put(symbol: str, row_vertex: int, col_vertex: int, block: Matrix) -> None:
        acts[symbol][row_vertex * m : (row_vertex + 1) * m, col_vertex * m : (col_vertex + 1) * m] = block.array

    ident = Matrix.identity(field, m)
    for j, letter in enumerate(pw.cycle[:-1]):
        if letter.is_inverse:
            put(letter.symbol, j, j + 1, ident)
        else:
            put(letter.symbol, j + 1, j, ident)
    wrap = pw.cycle[-1]
    if wrap.is_inverse:
        put(wrap.symbol, n - 1, 0, t.inverse())
    else:
        put(wrap.symbol, 0, n - 1, t)
    return ModuleRep(field, Matrix(field, acts["x"]), Matrix(field, acts["y"]))


# ── constructions ──────────────────────────────────────────────────────────

def direct_sum(*modules: ModuleRep) -> ModuleRep:
    if not modules:
        raise UsageError("direct_sum needs at least one module")
    field = _check_same_field(*modules)
    return ModuleRep(
        field,
        block_diagonal(field, [m.act_x for m in modules]),
        block_diagonal(field, [m.act_y for m in modules]),
    )


def conjugate(m: ModuleRep, p: Matrix) -> ModuleRep:
    """The module with actions P⁻¹XP and P⁻¹YP."""
    p_inv = p.inverse()
    return ModuleRep(m.field, p_inv @ m.act_x @ p, p_inv @ m.act_y @ p)


def dual(m: ModuleRep) -> ModuleRep:
    """Hom_A(M, E) on finite length modules: transpose both actions."""
    return ModuleRep(m.field, m.act_x.T, m.act_y.T)


def double_dual_unit(m: ModuleRep) -> Matrix:
    """Matrix of the evaluation map M → M^∨∨ in the standard bases.

    With the dual basis of the dual basis, evaluation sends e_i to e_i and
    the double transpose gives back the original actions, so the unit is the
    identity matrix; the intertwining check still runs.
    """
    mm = dual(dual(m))
    unit = Matrix.identity(m.field, m.dim)
    if unit @ m.act_x != mm.act_x @ unit or unit @ m.act_y != mm.act_y @ unit:
        raise AssertionError("evaluation map does not intertwine")
    return unit


def restrict(m: ModuleRep, basis: Matrix) -> ModuleRep:
    """Actions on the invariant subspace spanned by the columns of ``basis``."""
    k = basis.cols
    if k == 0:
        return ModuleRep.zero(m.field)
    ax = solve_linear(basis, m.act_x @ basis)
    ay = solve_linear(basis, m.act_y @ basis)
    if ax is None or ay is None:
        raise UsageError("subspace is not closed under the actions")
    return ModuleRep(m.field, ax, ay)


# ── spinning ───────────────────────────────────────────────────────────────

class _Echelon:
    """Incremental span membership test over a field."""

    def __init__(self, field: FieldSpec, dim: int):
        self.field = field
        self.dim = dim
        self.rows: list[tuple[int, np.ndarray]] = []

    def reduce(self, v: np.ndarray) -> np.ndarray:
        v = v.copy()
        for pc, row in self.rows:
            if v[pc] != 0:
                v = v - v[pc] * row
        return v

    def add(self, v: np.ndarray) -> bool:
        r = self.reduce(v)
        nz = np.nonzero(r)[0]
        if nz.size == 0:
            return False
        pc = int(nz[0])
        self.rows.append((pc, r / r[pc]))
        return True


@dataclass
class _SpinBasis:
    vectors: list[np.ndarray] = dc_field(default_factory=list)
    records: list[tuple[int, tuple[str, ...]]] = dc_field(default_factory=list)

    def matrix(self, field: FieldSpec, dim: int) -> Matrix:
        if not self.vectors:
            return Matrix.zeros(field, dim, 0)
        return Matrix(field, np.stack(self.vectors, axis=1))


def _spin(m: ModuleRep, generators: Sequence[np.ndarray]) -> _SpinBasis:
    """Basis of the submodule generated by ``generators``, each vector tagged by its word."""
    ech = _Echelon(m.field, m.dim)
    out = _SpinBasis()
    for i, g in enumerate(generators):
        if ech.add(g):
            out.vectors.append(g)
            out.records.append((i, ()))
    k = 0
    while k < len(out.vectors):
        gen, word = out.records[k]
        for symbol in ("x", "y"):
            v = m.action(symbol).array @ out.vectors[k]
            if ech.add(v):
                out.vectors.append(v)
                out.records.append((gen, word + (symbol,)))
        k += 1
    return out


def _column(v: Matrix) -> np.ndarray:
    return v.array[:, 0].copy()


def _as_vectors(m: ModuleRep, vectors: Union[Matrix, Sequence[Matrix]]) -> list[np.ndarray]:
    if isinstance(vectors, Matrix):
        cols = vectors.columns()
    else:
        cols = list(vectors)
    out = []
    for c in cols:
        if c.field != m.field or c.shape != (m.dim, 1):
            raise UsageError(f"vector of shape {c.shape} does not lie in a module of dimension {m.dim}")
        out.append(_column(c))
    return out


def top_generators(m: ModuleRep) -> list[np.ndarray]:
    """Standard basis vectors lifting a basis of M / rad M."""
    rad = radical(m)
    reduced, pivots = hstack([rad, Matrix.identity(m.field, m.dim)]).rref()
    ident = m.field.eye(m.dim)
    return [ident[:, p - rad.cols].copy() for p in pivots if p >= rad.cols]


def submodule_generated(m: ModuleRep, vectors: Union[Matrix, Sequence[Matrix]]) -> tuple[ModuleRep, Matrix]:
    """Closure of the span under x and y, with its inclusion matrix."""
    spun = _spin(m, _as_vectors(m, vectors))
    inclusion = spun.matrix(m.field, m.dim)
    return restrict(m, inclusion), inclusion


def quotient(m: ModuleRep, inclusion: Matrix) -> ModuleRep:
    """Module structure on M / U for U the column span of ``inclusion``."""
    if inclusion.rows != m.dim or inclusion.field != m.field:
        raise UsageError(f"inclusion of shape {inclusion.shape} does not map into dimension {m.dim}")
    sub = inclusion.column_space() if inclusion.cols else inclusion
    for act in (m.act_x, m.act_y):
        if sub.cols and solve_linear(sub, act @ sub) is None:
            raise UsageError("inclusion is not closed under the actions, so no quotient module exists")
    k = sub.cols
    _, pivots = hstack([sub, Matrix.identity(m.field, m.dim)]).rref()
    ident = Matrix.identity(m.field, m.dim)
    complement = [ident.column(p - k) for p in pivots if p >= k]
    if not complement:
        return ModuleRep.zero(m.field)
    p = hstack([sub, *complement]) if k else hstack(complement)
    conj = conjugate(m, p)
    tail = slice(k, m.dim)
    return ModuleRep(m.field, conj.act_x.submatrix(tail, tail), conj.act_y.submatrix(tail, tail))


# ── hom spaces ─────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class HomSpace:
    source: ModuleRep
    target: ModuleRep
    basis: tuple[Matrix, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)


def is_homomorphism(h: Matrix, src: ModuleRep, tgt: ModuleRep) -> bool:
    if h.shape != (tgt.dim, src.dim):
        return False
    return h @ src.act_x == tgt.act_x @ h and h @ src.act_y == tgt.act_y @ h


def hom_basis(src: ModuleRep, tgt: ModuleRep) -> HomSpace:
    """Basis of Hom_A(src, tgt).

    A homomorphism is fixed by the images of generators of ``src``; the
    unknowns are those images, constrained by every linear relation the
    spinning of the generators produces.
    """
    field = _check_same_field(src, tgt)
    d, e = src.dim, tgt.dim
    if d == 0 or e == 0:
        return HomSpace(src, tgt, ())
    gens = top_generators(src)
    t = len(gens)
    spun = _spin(src, gens)
    s = spun.matrix(field, d)
    s_inv = s.inverse()

    words: dict[tuple[str, ...], Matrix] = {(): Matrix.identity(field, e)}

    def word_matrix(word: tuple[str, ...]) -> Matrix:
        if word not in words:
            words[word] = tgt.action(word[-1]) @ word_matrix(word[:-1])
        return words[word]

    index = {rec: k for k, rec in enumerate(spun.records)}
    blocks = []
    for k, (gen, word) in enumerate(spun.records):
        for symbol in ("x", "y"):
            if (gen, word + (symbol,)) in index:
                continue
            image = src.action(symbol).array @ spun.vectors[k]
            coords = s_inv.array @ image
            eq = field.zeros((e, t * e))
            eq[:, gen * e : (gen + 1) * e] += (tgt.action(symbol) @ word_matrix(word)).array
            for l, c in enumerate(coords):
                if c != 0:
                    g_l, w_l = spun.records[l]
                    eq[:, g_l * e : (g_l + 1) * e] -= c * word_matrix(w_l).array
            blocks.append(Matrix(field, eq))
    system = vstack(blocks) if blocks else Matrix.zeros(field, 0, t * e)
    basis = []
    for u in kernel_basis(system):
        cols = []
        for gen, word in spun.records:
            cols.append(word_matrix(word) @ u.submatrix(slice(gen * e, (gen + 1) * e), slice(None)))
        basis.append(hstack(cols) @ s_inv)
    return HomSpace(src, tgt, tuple(basis))


def hom_dim(src: ModuleRep, tgt: ModuleRep) -> int:
    return hom_basis(src, tgt).dim


# ── socle and radical ──────────────────────────────────────────────────────

def socle(m: ModuleRep) -> Matrix:
    """ker x ∩ ker y, as columns."""
    if m.dim == 0:
        return Matrix.zeros(m.field, 0, 0)
    return _columns_or_empty(m, kernel_basis(vstack([m.act_x, m.act_y])))


def radical(m: ModuleRep) -> Matrix:
    """im x + im y, as columns."""
    if m.dim == 0:
        return Matrix.zeros(m.field, 0, 0)
    return hstack([m.act_x, m.act_y]).column_space()


def top_dim(m: ModuleRep) -> int:
    return m.dim - radical(m).cols


def _columns_or_empty(m: ModuleRep, vectors: list[Matrix]) -> Matrix:
    return hstack(vectors) if vectors else Matrix.zeros(m.field, m.dim, 0)


def _socle_bases(m: ModuleRep) -> list[Matrix]:
    layers = []
    current = Matrix.zeros(m.field, m.dim, 0)
    while current.cols < m.dim:
        if current.cols:
            annihilator = hstack(kernel_basis(current.T)).T
        else:
            annihilator = Matrix.identity(m.field, m.dim)
        system = vstack([annihilator @ m.act_x, annihilator @ m.act_y])
        nxt = _columns_or_empty(m, kernel_basis(system))
        if nxt.cols == current.cols:
            raise AssertionError("socle series stalled on a nilpotent module")
        layers.append(nxt)
        current = nxt
    return layers


def socle_series(m: ModuleRep) -> list[int]:
    """dims of soc ⊆ soc² ⊆ … up to dim m."""
    return [b.cols for b in _socle_bases(m)]


def socle_layer(m: ModuleRep, j: int) -> ModuleRep:
    """soc^j(m) as a module (j >= 1; stationary once it reaches m)."""
    if j < 1:
        raise UsageError(f"socle layers start at 1, got {j}")
    bases = _socle_bases(m)
    if not bases:
        return ModuleRep.zero(m.field)
    return restrict(m, bases[min(j, len(bases)) - 1])


def radical_series(m: ModuleRep) -> list[int]:
    """dims of rad⁰ ⊇ rad¹ ⊇ … ⊇ 0."""
    dims = [m.dim]
    current = Matrix.identity(m.field, m.dim)
    while current.cols:
        current = hstack([m.act_x @ current, m.act_y @ current]).column_space()
        dims.append(current.cols)
    return dims


# ── isomorphism ────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class IsoResult:
    isomorphic: bool
    witness: Optional[Matrix] = None
    certain: bool = True
    failure_bound: Optional[float] = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.isomorphic


def _rank_profile(m: ModuleRep) -> tuple:
    out = []
    for act in (m.act_x, m.act_y):
        k = act
        ranks = []
        while True:
            r = k.rank() if m.dim else 0
            ranks.append(r)
            if r == 0:
                break
            k = k @ act
        out.append(tuple(ranks))
    return tuple(out)


def is_isomorphic(m1: ModuleRep, m2: ModuleRep, seed: Seed = 0, budget: int = 20) -> IsoResult:
    """Search for an invertible intertwiner m1 → m2.

    Yes-answers carry the witness. No-answers are certain when an invariant
    differs; otherwise they are Monte Carlo with failure probability at most
    (dim / |sample space|) ** budget.
    """
    field = _check_same_field(m1, m2)
    if m1.dim != m2.dim:
        return IsoResult(False, reason="dimensions differ")
    if m1.dim == 0:
        return IsoResult(True, witness=Matrix.zeros(field, 0, 0), reason="zero modules")
    if m1 == m2:
        return IsoResult(True, witness=Matrix.identity(field, m1.dim), reason="equal actions")
    if _rank_profile(m1) != _rank_profile(m2):
        return IsoResult(False, reason="ranks of powers of x or y differ")
    if socle_series(m1) != socle_series(m2):
        return IsoResult(False, reason="socle series differ")
    forward = hom_basis(m1, m2)
    if forward.dim != hom_dim(m2, m1) or forward.dim != hom_dim(m1, m1):
        return IsoResult(False, reason="hom dimensions are asymmetric")
    for h in forward.basis:
        if h.is_invertible():
            return IsoResult(True, witness=h, reason="basis element is invertible")
    rng = np.random.default_rng(seed)
    for _ in range(budget):
        h = random_combination(field, forward.basis, rng)
        if h.is_invertible():
            return IsoResult(True, witness=h, reason="random combination is invertible")
    bound = (m1.dim / field.sample_space_size) ** budget
    return IsoResult(False, certain=False, failure_bound=bound, reason=f"no invertible map in {budget} draws")


# ── experiments and fixtures ───────────────────────────────────────────────

@dataclass(frozen=True)
class BandDualReport:
    """Which V' gives M(C, V)^∨ ≅ M(C⁻, V'): ``"V"``, ``"V-inverse"`` or None."""

    matches: Optional[str]
    witness: Optional[Matrix]


def band_dual_parameter(pw: PeriodicWord, v: BandParam, field: FieldSpec, seed: Seed = 0) -> BandDualReport:
    target = dual(materialize_band(pw, v, field))
    mirrored = inverse_band(pw)
    for label, param in (("V", v), ("V-inverse", v.inverted(field))):
        result = is_isomorphic(target, materialize_band(mirrored, param, field), seed=seed)
        if result:
            return BandDualReport(label, result.witness)
    return BandDualReport(None, None)


def random_module(field: FieldSpec, dim: int, seed: Seed = 0) -> ModuleRep:
    """Random conjugate of a random sum of string modules of total dimension ``dim``."""
    rng = np.random.default_rng(seed)
    if dim == 0:
        return ModuleRep.zero(field)
    by_size: dict[int, list[StringWord]] = {}
    for w in enumerate_words(min(dim, 6) - 1):
        by_size.setdefault(w.vertices, []).append(w)
    parts = []
    remaining = dim
    while remaining:
        size = int(rng.integers(1, min(remaining, 6) + 1))
        choices = by_size[size]
        parts.append(materialize_string(choices[int(rng.integers(len(choices)))], field))
        remaining -= size
    p = Matrix.random_invertible(field, dim, rng)
    return conjugate(direct_sum(*parts), p)

