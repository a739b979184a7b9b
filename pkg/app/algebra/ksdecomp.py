"""
Krull-Schmidt decomposition of finite-dimensional modules.

End(M) is computed as a hom space, its Jacobson radical through the trace
form, and summands are split off with Fitting's lemma. Every "decomposable"
answer exhibits a split; "indecomposable" answers carry a certificate that
is either exact or Monte Carlo with a stated failure bound.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from app.algebra.linalg import (
    FieldSpec,
    Matrix,
    hstack,
    kernel_basis,
    min_poly,
    poly_eval,
    poly_factor,
    poly_pow,
    random_combination,
)
from app.algebra.modrep import (
    ModuleRep,
    conjugate,
    direct_sum,
    hom_basis,
    is_homomorphism,
    is_isomorphic,
)
from app.errors import CertificationError, CharacteristicTooSmallError, UsageError

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 20

SeedLike = Union[int, np.random.SeedSequence]

LOCAL_ENDO = "local-endo"
MONTE_CARLO = "monte-carlo"


# ── endomorphism algebras ──────────────────────────────────────────────────

@dataclass(frozen=True, eq=False)
class EndoAlgebra:
    """End(M) with structure constants: b_i b_j = sum_k table[i, j, k] b_k."""

    module: ModuleRep
    basis: tuple[Matrix, ...]
    table: np.ndarray
    pivot_rows: tuple[int, ...]
    pivot_inverse: Matrix

    @property
    def field(self) -> FieldSpec:
        return self.module.field

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coordinates(self, h: Matrix) -> np.ndarray:
        flat = h.array.reshape(-1)[list(self.pivot_rows)]
        return self.pivot_inverse.array @ flat

    def element(self, coords) -> Matrix:
        d = self.module.dim
        acc = self.field.zeros((d, d))
        for c, b in zip(coords, self.basis):
            if c != 0:
                acc = acc + c * b.array
        return Matrix(self.field, acc)

    def multiply(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return _multiply(self.table, a, b)

    def identity(self) -> np.ndarray:
        return self.coordinates(Matrix.identity(self.field, self.module.dim))

    def is_commutative(self) -> bool:
        return bool(np.all(self.table == self.table.transpose(1, 0, 2)))


def _multiply(table: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    e = table.shape[0]
    left = (a @ table.reshape(e, e * e)).reshape(e, e)
    return b @ left


def _structure_constants(field: FieldSpec, basis: tuple[Matrix, ...]) -> tuple[np.ndarray, tuple[int, ...], Matrix]:
    e = len(basis)
    d = basis[0].rows
    flat = Matrix(field, np.stack([b.array.reshape(-1) for b in basis], axis=1))
    _, rows = flat.T.rref()
    pivot_inverse = flat.submatrix(rows, slice(None)).inverse()
    right = field.zeros((d, e * d))
    for j, b in enumerate(basis):
        right[:, j * d : (j + 1) * d] = b.array
    # column i*e + j holds the pivot entries of basis[i] @ basis[j]
    products = field.zeros((len(rows), e * e))
    for i, b in enumerate(basis):
        block = (b.array @ right).reshape(d, e, d).transpose(1, 0, 2).reshape(e, d * d)
        products[:, i * e : (i + 1) * e] = block[:, list(rows)].T
    coords = pivot_inverse.array @ products
    table = coords.T.reshape(e, e, e)
    return table, tuple(rows), pivot_inverse


def endo_algebra(m: ModuleRep) -> EndoAlgebra:
    basis = hom_basis(m, m).basis
    if not basis:
        empty = m.field.zeros((0, 0, 0))
        return EndoAlgebra(m, (), empty, (), Matrix.zeros(m.field, 0, 0))
    table, rows, pivot_inverse = _structure_constants(m.field, basis)
    return EndoAlgebra(m, basis, table, rows, pivot_inverse)


def radical_of_endo(e: EndoAlgebra) -> Matrix:
    """Jacobson radical as coordinate columns (dim End × dim rad).

    The radical is the kernel of the trace form (a, b) ↦ Tr(L_a L_b) of the
    left regular representation, valid in characteristic 0 or p > dim End.
    """
    field = e.field
    if not field.is_rational and field.characteristic <= e.dim:
        raise CharacteristicTooSmallError(field.characteristic, e.dim)
    n = e.dim
    if n == 0:
        return Matrix.zeros(field, 0, 0)
    left = e.table.reshape(n, n * n)
    right = e.table.transpose(0, 2, 1).reshape(n, n * n)
    gram = Matrix(field, left @ right.T)
    vectors = kernel_basis(gram)
    return hstack(vectors) if vectors else Matrix.zeros(field, n, 0)


def radical_is_nilpotent(e: EndoAlgebra, rad: Matrix) -> bool:
    """Powers of the ideal ``rad`` reach zero."""
    if rad.cols == 0:
        return True
    gens = [rad.array[:, i] for i in range(rad.cols)]
    current = rad
    for _ in range(e.dim + 1):
        products = [e.multiply(current.array[:, i], g) for i in range(current.cols) for g in gens]
        nxt = Matrix(e.field, np.stack(products, axis=1)).column_space()
        if nxt.cols == 0:
            return True
        if nxt.cols == current.cols:
            return False
        current = nxt
    return False


@dataclass(frozen=True, eq=False)
class SemisimpleQuotient:
    """S = End / rad, with lifts of its basis back into End coordinates."""

    algebra: EndoAlgebra
    table: np.ndarray
    lift: Matrix
    change: Matrix
    radical_dim: int

    @property
    def dim(self) -> int:
        return self.lift.cols

    def project(self, coords: np.ndarray) -> np.ndarray:
        return (self.change.array @ coords)[self.radical_dim :]

    def multiply(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return _multiply(self.table, a, b)

    def identity(self) -> np.ndarray:
        return self.project(self.algebra.identity())

    def power(self, a: np.ndarray, k: int) -> np.ndarray:
        result = self.identity()
        base = a
        while k:
            if k & 1:
                result = self.multiply(result, base)
            base = self.multiply(base, base)
            k >>= 1
        return result

    def is_commutative(self) -> bool:
        return bool(np.all(self.table == self.table.transpose(1, 0, 2)))

    def trace_form_nondegenerate(self) -> bool:
        s = self.dim
        left = self.table.reshape(s, s * s)
        right = self.table.transpose(0, 2, 1).reshape(s, s * s)
        return Matrix(self.algebra.field, left @ right.T).rank() == s


def semisimple_quotient(e: EndoAlgebra, rad: Matrix) -> SemisimpleQuotient:
    field = e.field
    n, r = e.dim, rad.cols
    ident = Matrix.identity(field, n)
    _, pivots = hstack([rad, ident]).rref()
    complement = [ident.column(p - r) for p in pivots if p >= r]
    p = hstack([rad, *complement])
    change = p.inverse()
    lift = hstack(complement) if complement else Matrix.zeros(field, n, 0)
    s = lift.cols
    table = field.zeros((s, s, s))
    for i in range(s):
        for j in range(s):
            prod = e.multiply(lift.array[:, i], lift.array[:, j])
            table[i, j] = (change.array @ prod)[r:]
    return SemisimpleQuotient(e, table, lift, change, r)


# ── Fitting splits ─────────────────────────────────────────────────────────

@dataclass(frozen=True, eq=False)
class FittingSplit:
    """M = first ⊕ second; ``witness`` conjugates M to the block-diagonal sum."""

    first: ModuleRep
    second: ModuleRep
    witness: Matrix


def fitting_split(m: ModuleRep, phi: Matrix) -> Optional[FittingSplit]:
    """M = ker φᵈ ⊕ im φᵈ, or None when one side is zero."""
    if not is_homomorphism(phi, m, m):
        raise UsageError("fitting_split needs an endomorphism of the module")
    d = m.dim
    psi = phi.power(d)
    kernel = kernel_basis(psi)
    image = psi.column_space() if d else psi
    if not kernel or image.cols == 0:
        return None
    p = hstack([*kernel, image])
    conj = conjugate(m, p)
    k = len(kernel)
    head, tail = slice(0, k), slice(k, d)
    first = ModuleRep(m.field, conj.act_x.submatrix(head, head), conj.act_y.submatrix(head, head))
    second = ModuleRep(m.field, conj.act_x.submatrix(tail, tail), conj.act_y.submatrix(tail, tail))
    return FittingSplit(first, second, p)


def _split_by(m: ModuleRep, phi: Matrix) -> Optional[FittingSplit]:
    """Split along a primary component of φ when its minimal polynomial has two coprime parts."""
    factors = poly_factor(m.field, min_poly(phi))
    if len(factors) < 2:
        return None
    f, mult = factors[0]
    return fitting_split(m, poly_eval(poly_pow(m.field, f, mult), phi))


# ── indecomposability ──────────────────────────────────────────────────────

@dataclass(frozen=True)
class Certificate:
    kind: str
    method: str
    endo_dim: int
    radical_dim: int
    samples: int = 0
    failure_bound: float = 0.0

    @property
    def exact(self) -> bool:
        return self.kind == LOCAL_ENDO

    def describe(self) -> str:
        if self.exact:
            return f"{self.kind} ({self.method}, dim End={self.endo_dim}, dim rad={self.radical_dim})"
        return f"{self.kind} ({self.samples} samples, failure <= {self.failure_bound:.3g})"


@dataclass(frozen=True, eq=False)
class IndecomposabilityResult:
    indecomposable: bool
    certificate: Optional[Certificate] = None
    split: Optional[FittingSplit] = None

    def __bool__(self) -> bool:
        return self.indecomposable


def _frobenius_split(m: ModuleRep, quotient: SemisimpleQuotient) -> tuple[bool, Optional[FittingSplit]]:
    """Exact answer for commutative S over GF(p).

    x ↦ x^p is linear on S and its fixed points form GF(p)^r, r the number
    of simple factors of S. Returns (local, split).
    """
    field = m.field
    p = field.characteristic
    s = quotient.dim
    ident = Matrix.identity(field, s)
    columns = [quotient.power(ident.array[:, i], p) for i in range(s)]
    frob = Matrix(field, np.stack(columns, axis=1))
    fixed = kernel_basis(frob - ident)
    if len(fixed) <= 1:
        return True, None
    one = Matrix(field, quotient.identity().reshape(s, 1))
    for v in fixed:
        if hstack([one, v]).rank() == 2:
            phi = quotient.algebra.element(quotient.lift.array @ v.array[:, 0])
            return False, _split_by(m, phi)
    return False, None


def is_indecomposable(m: ModuleRep, seed: SeedLike = 0, budget: int = DEFAULT_BUDGET) -> IndecomposabilityResult:
    if m.dim == 0:
        raise UsageError("the zero module is not indecomposable")
    field = m.field
    algebra = endo_algebra(m)
    rad = radical_of_endo(algebra)
    s_dim = algebra.dim - rad.cols
    if s_dim == 1:
        return IndecomposabilityResult(True, Certificate(LOCAL_ENDO, "dim-one-quotient", algebra.dim, rad.cols))
    quotient = semisimple_quotient(algebra, rad)
    if not field.is_rational and quotient.is_commutative():
        local, split = _frobenius_split(m, quotient)
        if local:
            return IndecomposabilityResult(True, Certificate(LOCAL_ENDO, "frobenius-fixed", algebra.dim, rad.cols))
        if split is not None:
            return IndecomposabilityResult(False, split=split)
    for phi in algebra.basis:
        split = _split_by(m, phi)
        if split is not None:
            return IndecomposabilityResult(False, split=split)
    rng = np.random.default_rng(seed)
    for _ in range(budget):
        split = _split_by(m, random_combination(field, algebra.basis, rng))
        if split is not None:
            return IndecomposabilityResult(False, split=split)
    if not field.is_rational:
        # noncommutative semisimple over a finite field has a matrix factor
        raise CertificationError(
            f"End/rad of dimension {s_dim} is not a field but no split was found in {budget} rounds; "
            f"raise --mc-budget"
        )
    bound = (s_dim / field.sample_space_size) ** budget
    logger.debug("monte carlo indecomposability: dim S=%d, bound=%.3g", s_dim, bound)
    return IndecomposabilityResult(
        True, Certificate(MONTE_CARLO, "random-endomorphisms", algebra.dim, rad.cols, budget, bound)
    )


# ── decomposition ──────────────────────────────────────────────────────────

@dataclass(frozen=True, eq=False)
class DecompositionPart:
    module: ModuleRep
    multiplicity: int
    certificate: Certificate


@dataclass(frozen=True, eq=False)
class DecompositionResult:
    """``witness⁻¹ · X · witness`` is the block sum of the parts, repeated by multiplicity."""

    original: ModuleRep
    parts: tuple[DecompositionPart, ...]
    witness: Matrix

    @property
    def total_dim(self) -> int:
        return sum(p.multiplicity * p.module.dim for p in self.parts)

    @property
    def summand_count(self) -> int:
        return sum(p.multiplicity for p in self.parts)

    def assembled(self) -> ModuleRep:
        blocks = [p.module for p in self.parts for _ in range(p.multiplicity)]
        return direct_sum(*blocks) if blocks else ModuleRep.zero(self.original.field)


def _as_seed_sequence(seed: SeedLike) -> np.random.SeedSequence:
    return seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)


def _leaves(m: ModuleRep, seq: np.random.SeedSequence, budget: int) -> list[tuple[ModuleRep, Matrix, Certificate]]:
    """Indecomposable leaves with embeddings into ``m``."""
    result = is_indecomposable(m, seq, budget)
    if result:
        return [(m, Matrix.identity(m.field, m.dim), result.certificate)]
    split = result.split
    logger.debug("split dim %d into %d + %d", m.dim, split.first.dim, split.second.dim)
    k = split.first.dim
    left_seq, right_seq = seq.spawn(2)
    head = split.witness.submatrix(slice(None), slice(0, k))
    tail = split.witness.submatrix(slice(None), slice(k, m.dim))
    out = [(part, head @ emb, cert) for part, emb, cert in _leaves(split.first, left_seq, budget)]
    out += [(part, tail @ emb, cert) for part, emb, cert in _leaves(split.second, right_seq, budget)]
    return out


def decompose(m: ModuleRep, seed: SeedLike = 0, budget: int = DEFAULT_BUDGET) -> DecompositionResult:
    field = m.field
    if m.dim == 0:
        return DecompositionResult(m, (), Matrix.zeros(field, 0, 0))
    seq = _as_seed_sequence(seed)
    split_seq, match_seq = seq.spawn(2)
    leaves = _leaves(m, split_seq, budget)
    if len(leaves) > m.dim:
        raise AssertionError(f"{len(leaves)} summands exceed dimension {m.dim}")

    groups: list[tuple[ModuleRep, Certificate, list[Matrix]]] = []
    for part, embedding, cert in leaves:
        for rep, _, columns in groups:
            iso = is_isomorphic(rep, part, seed=match_seq, budget=budget)
            if iso:
                columns.append(embedding @ iso.witness)
                break
        else:
            groups.append((part, cert, [embedding]))

    witness = hstack([c for _, _, columns in groups for c in columns])
    parts = tuple(DecompositionPart(rep, len(columns), cert) for rep, cert, columns in groups)
    result = DecompositionResult(m, parts, witness)
    if result.total_dim != m.dim:
        raise AssertionError("part dimensions do not add up")
    if conjugate(m, witness) != result.assembled():
        raise AssertionError("decomposition witness does not conjugate to the block sum")
    logger.info("decomposed dim %d into %d summands (%d classes)", m.dim, result.summand_count, len(parts))
    return result
