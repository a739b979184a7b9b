"""
Exact dense linear algebra over prime fields GF(p) and over the rationals.

Prime-field matrices are carried by ``galois`` field arrays; rational
matrices are numpy object arrays of ``fractions.Fraction``. Every
``Matrix`` is immutable once built, so values can be shared freely.

Over Q, row reduction is fraction-free (Bareiss) until the final
normalisation, which keeps intermediate integers small.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import galois
import numpy as np

from app.errors import UsageError

DEFAULT_PRIME = 32003
RATIONAL_SAMPLE_BOUND = 2**15

Scalar = Union[int, Fraction]


@functools.cache
def _galois_field(p: int):
    return galois.GF(p)


@dataclass(frozen=True)
class FieldSpec:
    """Either GF(p) (``p`` set) or the rationals (``p`` is None)."""

    p: Optional[int] = None

    def __post_init__(self):
        if self.p is not None:
            if self.p < 2 or not galois.is_prime(self.p):
                raise UsageError(f"field characteristic must be a prime, got {self.p}")

    @classmethod
    def prime(cls, p: int = DEFAULT_PRIME) -> "FieldSpec":
        return cls(p=int(p))

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(p=None)

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """``"Q"`` for the rationals, otherwise a decimal prime (``"GF(p)"`` also accepted)."""
        text = str(text).strip()
        if text.upper() == "Q":
            return cls.rationals()
        if text.upper().startswith("GF(") and text.endswith(")"):
            text = text[3:-1]
        try:
            return cls.prime(int(text))
        except ValueError:
            raise UsageError(f"field must be 'Q' or a prime, got {text!r}") from None

    @property
    def is_rational(self) -> bool:
        return self.p is None

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    @property
    def name(self) -> str:
        return "Q" if self.p is None else f"GF({self.p})"

    @property
    def sample_space_size(self) -> int:
        """Number of scalars random draws are taken from."""
        return 2 * RATIONAL_SAMPLE_BOUND + 1 if self.p is None else self.p

    def __str__(self) -> str:
        return self.name

    # ── scalars ────────────────────────────────────────────────────────────

    def scalar(self, value) -> Scalar:
        """Canonical representative: reduced residue or reduced fraction."""
        if self.p is None:
            return Fraction(value)
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise UsageError(f"{value} has no image in GF({self.p})")
            return value.numerator * pow(value.denominator, -1, self.p) % self.p
        return int(value) % self.p

    def inverse(self, value) -> Scalar:
        value = self.scalar(value)
        if value == 0:
            raise UsageError("zero has no inverse")
        if self.p is None:
            return 1 / value
        return pow(value, -1, self.p)

    # ── arrays ─────────────────────────────────────────────────────────────

    def array(self, values, shape: Optional[tuple[int, ...]] = None) -> np.ndarray:
        """Field array from nested values (ints, Fractions or field elements)."""
        if shape is None:
            shape = np.shape(values)
        if self.p is None:
            flat = [Fraction(v) for v in np.asarray(values, dtype=object).ravel()]
            return np.array(flat, dtype=object).reshape(shape)
        GF = _galois_field(self.p)
        if isinstance(values, GF):
            return values.copy().reshape(shape)
        raw = np.asarray(values, dtype=object).ravel()
        if raw.size == 0:
            return GF.Zeros(shape)
        return GF(np.array([self.scalar(v) for v in raw], dtype=np.int64)).reshape(shape)

    def zeros(self, shape: tuple[int, ...]) -> np.ndarray:
        if self.p is None:
            out = np.empty(shape, dtype=object)
            out.fill(Fraction(0))
            return out
        return _galois_field(self.p).Zeros(shape)

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = 1
        return out

    def random_array(self, rng: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
        if self.p is None:
            raw = rng.integers(-RATIONAL_SAMPLE_BOUND, RATIONAL_SAMPLE_BOUND + 1, size=shape)
            return self.array(raw.tolist(), shape)
        return _galois_field(self.p)(rng.integers(0, self.p, size=shape))

    def to_python(self, value) -> Scalar:
        if self.p is None:
            return Fraction(value)
        return int(value)


class Matrix:
    """Immutable dense matrix over a ``FieldSpec``."""

    __slots__ = ("field", "_a")

    def __init__(self, field: FieldSpec, array: np.ndarray):
        if array.ndim != 2:
            raise UsageError(f"matrix data must be 2-dimensional, got shape {array.shape}")
        a = field.array(array, array.shape) if field.is_rational or not isinstance(
            array, galois.FieldArray
        ) else array.copy()
        a.flags.writeable = False
        self.field = field
        self._a = a

    # ── construction ───────────────────────────────────────────────────────

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Sequence[Sequence], cols: Optional[int] = None) -> "Matrix":
        rows = [list(r) for r in rows]
        ncols = cols if cols is not None else (len(rows[0]) if rows else 0)
        if any(len(r) != ncols for r in rows):
            raise UsageError("all rows must have the same length")
        flat = [v for r in rows for v in r]
        return cls(field, field.array(flat, (len(rows), ncols)) if flat else field.zeros((len(rows), ncols)))

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> "Matrix":
        return cls(field, field.zeros((rows, cols)))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Matrix":
        return cls(field, field.eye(n))

    @classmethod
    def random(cls, field: FieldSpec, rows: int, cols: int, rng: np.random.Generator) -> "Matrix":
        return cls(field, field.random_array(rng, (rows, cols)))

    @classmethod
    def random_invertible(cls, field: FieldSpec, n: int, rng: np.random.Generator) -> "Matrix":
        while True:
            m = cls.random(field, n, n, rng)
            if m.rank() == n:
                return m

    # ── shape and entries ──────────────────────────────────────────────────

    @property
    def array(self) -> np.ndarray:
        return self._a

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._a.shape

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    @property
    def entries(self) -> tuple[Scalar, ...]:
        """Row-major canonical entries."""
        return tuple(self.field.to_python(v) for v in self._a.ravel())

    def to_lists(self) -> list[list[Scalar]]:
        return [[self.field.to_python(v) for v in row] for row in self._a]

    def __getitem__(self, key) -> Scalar:
        return self.field.to_python(self._a[key])

    def column(self, j: int) -> "Matrix":
        return Matrix(self.field, self._a[:, j : j + 1])

    def columns(self) -> list["Matrix"]:
        return [self.column(j) for j in range(self.cols)]

    def submatrix(self, rows: Union[slice, Sequence[int]], cols: Union[slice, Sequence[int]]) -> "Matrix":
        a = self._a[rows, :][:, cols]
        return Matrix(self.field, a)

    def is_zero(self) -> bool:
        return not np.any(self._a != 0) if self._a.size else True

    # ── arithmetic ─────────────────────────────────────────────────────────

    def _check(self, other: "Matrix") -> None:
        if not isinstance(other, Matrix):
            raise UsageError("operand is not a Matrix")
        if other.field != self.field:
            raise UsageError(f"field mismatch: {self.field} vs {other.field}")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.cols != other.rows:
            raise UsageError(f"cannot multiply {self.shape} by {other.shape}")
        if self.cols == 0 or self.rows == 0 or other.cols == 0:
            return Matrix.zeros(self.field, self.rows, other.cols)
        return Matrix(self.field, self._a @ other._a)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise UsageError(f"cannot add {self.shape} and {other.shape}")
        return Matrix(self.field, self._a + other._a)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise UsageError(f"cannot subtract {self.shape} and {other.shape}")
        return Matrix(self.field, self._a - other._a)

    def __neg__(self) -> "Matrix":
        return Matrix(self.field, -self._a)

    def scale(self, c) -> "Matrix":
        c = self.field.array([c], (1,))[0]
        return Matrix(self.field, self._a * c)

    @property
    def T(self) -> "Matrix":
        return Matrix(self.field, self._a.T)

    def power(self, k: int) -> "Matrix":
        if not self.is_square:
            raise UsageError("only square matrices have powers")
        result = Matrix.identity(self.field, self.rows)
        base = self
        while k > 0:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.field == other.field
            and self.shape == other.shape
            and bool(np.all(self._a == other._a))
        )

    def __hash__(self) -> int:
        return hash((self.field, self.shape, self.entries))

    def __repr__(self) -> str:
        return f"Matrix({self.field}, {self.to_lists()})"

    # ── elimination ────────────────────────────────────────────────────────

    def rref(self) -> tuple["Matrix", list[int]]:
        """Reduced row echelon form and pivot columns."""
        reduced, pivots = _rref(self.field, self._a)
        return Matrix(self.field, reduced), pivots

    def rank(self) -> int:
        if self.field.is_rational:
            return len(_bareiss_echelon(self._a)[1])
        return len(_rref(self.field, self._a)[1])

    def is_invertible(self) -> bool:
        return self.is_square and self.rank() == self.rows

    def inverse(self) -> "Matrix":
        if not self.is_square:
            raise UsageError("only square matrices have inverses")
        solution = solve_linear(self, Matrix.identity(self.field, self.rows))
        if solution is None:
            raise UsageError("matrix is singular")
        return solution

    def column_space(self) -> "Matrix":
        """Columns of ``self`` at the pivot positions: a basis of the image."""
        _, pivots = self.rref()
        return self.submatrix(slice(None), pivots)


def hstack(blocks: Sequence[Matrix]) -> Matrix:
    field = blocks[0].field
    for b in blocks:
        if b.field != field:
            raise UsageError(f"field mismatch: {field} vs {b.field}")
    rows = blocks[0].rows
    if any(b.rows != rows for b in blocks):
        raise UsageError("hstack needs equal row counts")
    nonempty = [b.array for b in blocks if b.cols]
    if not nonempty:
        return Matrix.zeros(field, rows, 0)
    return Matrix(field, np.hstack(nonempty) if len(nonempty) > 1 else nonempty[0])


def vstack(blocks: Sequence[Matrix]) -> Matrix:
    return hstack([b.T for b in blocks]).T


def block_diagonal(field: FieldSpec, blocks: Sequence[Matrix]) -> Matrix:
    n = sum(b.rows for b in blocks)
    m = sum(b.cols for b in blocks)
    out = field.zeros((n, m))
    r = c = 0
    for b in blocks:
        if b.field != field:
            raise UsageError(f"field mismatch: {field} vs {b.field}")
        if b.rows and b.cols:
            out[r : r + b.rows, c : c + b.cols] = b.array
        r += b.rows
        c += b.cols
    return Matrix(field, out)


def _rref(field: FieldSpec, a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    if field.is_rational:
        return _bareiss_rref(a)
    R = a.copy()
    m, n = R.shape
    pivots: list[int] = []
    row = 0
    for col in range(n):
        if row == m:
            break
        nz = np.nonzero(R[row:, col])[0]
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            R[[row, piv]] = R[[piv, row]]
        R[row] = R[row] / R[row, col]
        factors = R[:, col].copy()
        factors[row] = 0
        R = R - factors[:, None] * R[row][None, :]
        pivots.append(col)
        row += 1
    return R, pivots


def _bareiss_echelon(a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Fraction-free row echelon form of a rational matrix.

    Rows are first scaled to integers; every later division is exact.
    """
    m, n = a.shape
    M = np.empty((m, n), dtype=object)
    for i in range(m):
        lcm = math.lcm(*(Fraction(v).denominator for v in a[i])) if n else 1
        for j in range(n):
            v = Fraction(a[i, j]) * lcm
            M[i, j] = v.numerator
    pivots: list[int] = []
    prev = 1
    row = 0
    for col in range(n):
        if row == m:
            break
        nz = [r for r in range(row, m) if M[r, col] != 0]
        if not nz:
            continue
        piv = nz[0]
        if piv != row:
            M[[row, piv]] = M[[piv, row]]
        p = M[row, col]
        below = M[row + 1 :, col : col + 1]
        M[row + 1 :, col + 1 :] = (p * M[row + 1 :, col + 1 :] - below * M[row, col + 1 :]) // prev
        M[row + 1 :, col] = 0
        prev = p
        pivots.append(col)
        row += 1
    return M, pivots


def _bareiss_rref(a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    M, pivots = _bareiss_echelon(a)
    m, n = a.shape
    R = np.empty((m, n), dtype=object)
    R.fill(Fraction(0))
    rank = len(pivots)
    for i in range(rank):
        R[i] = [Fraction(v) for v in M[i]]
    for i in range(rank - 1, -1, -1):
        col = pivots[i]
        R[i] = R[i] / R[i, col]
        for k in range(i):
            f = R[k, col]
            if f != 0:
                R[k] = R[k] - f * R[i]
    return R, pivots


# ── operations ─────────────────────────────────────────────────────────────

def kernel_basis(m: Matrix) -> list[Matrix]:
    """Basis of the right kernel, one column vector per free variable."""
    reduced, pivots = m.rref()
    pivot_set = set(pivots)
    free = [j for j in range(m.cols) if j not in pivot_set]
    field = m.field
    basis = []
    for f in free:
        v = field.zeros((m.cols, 1))
        v[f, 0] = 1
        for i, pc in enumerate(pivots):
            v[pc, 0] = -reduced.array[i, f]
        basis.append(Matrix(field, v))
    return basis


def solve_linear(a: Matrix, b: Matrix) -> Optional[Matrix]:
    """A solution of ``a @ X == b``, or None when the system is inconsistent."""
    if a.field != b.field:
        raise UsageError(f"field mismatch: {a.field} vs {b.field}")
    if a.rows != b.rows:
        raise UsageError(f"row mismatch: {a.shape} vs {b.shape}")
    reduced, pivots = hstack([a, b]).rref() if b.cols else a.rref()
    if any(p >= a.cols for p in pivots):
        return None
    field = a.field
    x = field.zeros((a.cols, b.cols))
    for i, pc in enumerate(pivots):
        x[pc, :] = reduced.array[i, a.cols :]
    return Matrix(field, x)


def nullity(m: Matrix) -> int:
    return m.cols - m.rank()


def min_poly(m: Matrix) -> tuple[Scalar, ...]:
    """Minimal polynomial, coefficients from the constant term up (monic)."""
    if not m.is_square:
        raise UsageError(f"min_poly needs a square matrix, got {m.shape}")
    n = m.rows
    field = m.field
    if n == 0:
        return (field.scalar(1),)
    flat = [Matrix.identity(field, n).array.reshape(n * n, 1)]
    current = Matrix.identity(field, n)
    for k in range(1, n + 1):
        current = current @ m
        target = Matrix(field, current.array.reshape(n * n, 1))
        basis = Matrix(field, np.hstack(flat) if len(flat) > 1 else flat[0])
        coeffs = solve_linear(basis, target)
        if coeffs is not None:
            low = [field.scalar(-field.to_python(c)) for c in coeffs.array[:, 0]]
            return tuple(low) + (field.scalar(1),)
        flat.append(target.array)
    raise AssertionError("Cayley-Hamilton bound exceeded")


def poly_eval(coeffs: Sequence[Scalar], m: Matrix) -> Matrix:
    """Evaluate a polynomial (constant term first) at a square matrix."""
    n = m.rows
    result = Matrix.zeros(m.field, n, n)
    ident = Matrix.identity(m.field, n)
    for c in reversed(list(coeffs)):
        result = result @ m + ident.scale(c)
    return result


def poly_mul(field: FieldSpec, a: Sequence[Scalar], b: Sequence[Scalar]) -> tuple[Scalar, ...]:
    """Product of two coefficient sequences (constant term first)."""
    out = [field.scalar(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] = field.scalar(out[i + j] + ai * bj)
    return tuple(out)


def poly_pow(field: FieldSpec, a: Sequence[Scalar], k: int) -> tuple[Scalar, ...]:
    out: tuple[Scalar, ...] = (field.scalar(1),)
    for _ in range(k):
        out = poly_mul(field, out, a)
    return out


def poly_factor(field: FieldSpec, coeffs: Sequence[Scalar]) -> list[tuple[tuple[Scalar, ...], int]]:
    """Monic irreducible factors with multiplicities (constant term first)."""
    coeffs = [field.scalar(c) for c in coeffs]
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) <= 1:
        return []
    if field.is_rational:
        return _factor_rational(coeffs)
    poly = galois.Poly(coeffs, field=_galois_field(field.p), order="asc")
    poly = poly // galois.Poly([poly.coeffs[0]], field=_galois_field(field.p))
    factors, mults = poly.factors()
    return [(tuple(int(c) for c in f.coeffs[::-1]), int(e)) for f, e in zip(factors, mults)]


def _factor_rational(coeffs: Sequence[Fraction]) -> list[tuple[tuple[Scalar, ...], int]]:
    import sympy

    t = sympy.Symbol("t")
    desc = [sympy.Rational(c.numerator, c.denominator) for c in reversed(coeffs)]
    poly = sympy.Poly(desc, t, domain=sympy.QQ)
    _, factors = poly.factor_list()
    out = []
    for f, e in factors:
        f = f.monic()
        low = tuple(Fraction(int(c.p), int(c.q)) for c in reversed(f.all_coeffs()))
        out.append((low, int(e)))
    return out


def random_combination(field: FieldSpec, basis: Sequence[Matrix], rng: np.random.Generator) -> Matrix:
    """Uniform field-coefficient combination of ``basis``."""
    if not basis:
        raise UsageError("cannot combine an empty basis")
    coeffs = field.random_array(rng, (len(basis),))
    acc = field.zeros(basis[0].shape)
    for c, b in zip(coeffs, basis):
        acc = acc + c * b.array
    return Matrix(field, acc)
