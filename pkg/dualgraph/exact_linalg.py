"""
Exact rational linear algebra.

Scalars are `fractions.Fraction` (arbitrary precision, always reduced, zero is
0/1). Matrices are immutable row tuples. All elimination uses one pivoting
rule: columns left to right, and in each column the first nonzero entry
scanning rows top-down, so every basis produced here is reproducible.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union
import logging

from dualgraph.errors import DimensionMismatch

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]
Vector = Tuple[Fraction, ...]


def to_rational(value) -> Fraction:
    """Convert an int, Fraction or "p/q" string to a Fraction"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def format_rational(value: Fraction) -> str:
    """Render as "p" or "p/q"."""
    return str(value)


@dataclass(frozen=True)
class Matrix:
    """A rows x cols matrix of rationals"""
    rows: int
    cols: int
    entries: Tuple[Vector, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DimensionMismatch("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows:
            raise DimensionMismatch(f"expected {self.rows} rows, got {len(self.entries)}")
        for row in self.entries:
            if len(row) != self.cols:
                raise DimensionMismatch(f"expected rows of length {self.cols}, got {len(row)}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Scalar]], cols: Optional[int] = None) -> "Matrix":
        entries = tuple(tuple(to_rational(x) for x in row) for row in rows)
        if cols is None:
            cols = len(entries[0]) if entries else 0
        return cls(len(entries), cols, entries)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Scalar]], rows: Optional[int] = None) -> "Matrix":
        columns = [tuple(to_rational(x) for x in col) for col in columns]
        if rows is None:
            rows = len(columns[0]) if columns else 0
        for col in columns:
            if len(col) != rows:
                raise DimensionMismatch(f"expected columns of length {rows}, got {len(col)}")
        entries = tuple(tuple(col[i] for col in columns) for i in range(rows))
        return cls(rows, len(columns), entries)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        zero = Fraction(0)
        return cls(rows, cols, tuple((zero,) * cols for _ in range(rows)))

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, index: Tuple[int, int]) -> Fraction:
        i, j = index
        return self.entries[i][j]

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.entries)

    def columns(self) -> List[Vector]:
        return [self.column(j) for j in range(self.cols)]

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return matmul(self, other)

    def __mul__(self, scalar: Scalar) -> "Matrix":
        return scalar_multiple(self, scalar)

    __rmul__ = __mul__

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot add {self.shape} and {other.shape}")
        return Matrix(self.rows, self.cols, tuple(
            tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)
        ))

    @property
    def T(self) -> "Matrix":
        return transpose(self)


def identity(n: int) -> Matrix:
    one, zero = Fraction(1), Fraction(0)
    return Matrix(n, n, tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)))


def transpose(m: Matrix) -> Matrix:
    return Matrix(m.cols, m.rows, tuple(m.column(j) for j in range(m.cols)))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if a.cols != b.rows:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    b_cols = b.columns()
    return Matrix(a.rows, b.cols, tuple(
        tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in b_cols)
        for row in a.entries
    ))


def scalar_multiple(m: Matrix, scalar: Scalar) -> Matrix:
    c = to_rational(scalar)
    return Matrix(m.rows, m.cols, tuple(tuple(c * x for x in row) for row in m.entries))


def apply(m: Matrix, vector: Sequence[Scalar]) -> Vector:
    """Matrix times column vector"""
    if len(vector) != m.cols:
        raise DimensionMismatch(f"vector of length {len(vector)} does not fit {m.shape}")
    v = [to_rational(x) for x in vector]
    return tuple(sum((a * x for a, x in zip(row, v)), Fraction(0)) for row in m.entries)


def rref(m: Matrix) -> Tuple[Matrix, Tuple[int, ...]]:
    """
    Reduced row echelon form and the pivot columns.

    Pivots are chosen column by column, left to right; in each column the
    first row (top-down, below the rows already used) with a nonzero entry
    becomes the pivot row.
    """
    work = [list(row) for row in m.entries]
    pivots: List[int] = []
    pivot_row = 0
    for col in range(m.cols):
        if pivot_row >= m.rows:
            break
        found = None
        for r in range(pivot_row, m.rows):
            if work[r][col] != 0:
                found = r
                break
        if found is None:
            continue
        if found != pivot_row:
            work[pivot_row], work[found] = work[found], work[pivot_row]
        pivot_value = work[pivot_row][col]
        if pivot_value != 1:
            work[pivot_row] = [x / pivot_value for x in work[pivot_row]]
        for r in range(m.rows):
            if r == pivot_row:
                continue
            factor = work[r][col]
            if factor != 0:
                work[r] = [x - factor * p for x, p in zip(work[r], work[pivot_row])]
        pivots.append(col)
        pivot_row += 1
    return Matrix(m.rows, m.cols, tuple(tuple(row) for row in work)), tuple(pivots)


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def kernel_basis(m: Matrix) -> Matrix:
    """
    Basis of the right kernel as the columns of a cols x k matrix.

    The basis is returned in reduced column-echelon form, which is unique for
    the kernel, so it does not depend on how the kernel was found.
    """
    reduced, pivots = rref(m)
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    raw: List[List[Fraction]] = []
    for f in free:
        vector = [Fraction(0)] * m.cols
        vector[f] = Fraction(1)
        for r, p in enumerate(pivots):
            vector[p] = -reduced[r, f]
        raw.append(vector)
    if not raw:
        return Matrix(m.cols, 0, tuple(() for _ in range(m.cols)))
    # rows of rref(K^T) are the columns of the reduced column-echelon basis
    canonical, _ = rref(Matrix.from_rows(raw, cols=m.cols))
    basis = Matrix.from_columns(canonical.entries, rows=m.cols)
    logger.debug("kernel of %dx%d matrix has dimension %d", m.rows, m.cols, basis.cols)
    return basis


def column_echelon_pivots(basis: Matrix) -> Tuple[int, ...]:
    """Row index of the leading entry of each column of a column-echelon basis"""
    pivots = []
    for j in range(basis.cols):
        for i in range(basis.rows):
            if basis[i, j] != 0:
                pivots.append(i)
                break
    return tuple(pivots)


def solve(m: Matrix, b: Sequence[Scalar]) -> Optional[Vector]:
    """
    Exact solution x of m x = b, or None when the system is inconsistent.

    Free variables are set to zero, so the answer is deterministic.
    """
    if len(b) != m.rows:
        raise DimensionMismatch(f"right-hand side of length {len(b)} does not fit {m.shape}")
    augmented = Matrix(m.rows, m.cols + 1, tuple(
        row + (to_rational(x),) for row, x in zip(m.entries, b)
    ))
    reduced, pivots = rref(augmented)
    if pivots and pivots[-1] == m.cols:
        return None
    x = [Fraction(0)] * m.cols
    for r, p in enumerate(pivots):
        x[p] = reduced[r, m.cols]
    return tuple(x)


def determinant(m: Matrix) -> Fraction:
    if m.rows != m.cols:
        raise DimensionMismatch(f"determinant of non-square {m.shape} matrix")
    work = [list(row) for row in m.entries]
    det = Fraction(1)
    n = m.rows
    for col in range(n):
        found = next((r for r in range(col, n) if work[r][col] != 0), None)
        if found is None:
            return Fraction(0)
        if found != col:
            work[col], work[found] = work[found], work[col]
            det = -det
        pivot = work[col][col]
        det *= pivot
        for r in range(col + 1, n):
            factor = work[r][col] / pivot
            if factor != 0:
                work[r] = [x - factor * p for x, p in zip(work[r], work[col])]
    return det


def inverse(m: Matrix) -> Matrix:
    if m.rows != m.cols:
        raise DimensionMismatch(f"inverse of non-square {m.shape} matrix")
    n = m.rows
    augmented = Matrix(n, 2 * n, tuple(
        row + identity(n).row(i) for i, row in enumerate(m.entries)
    ))
    reduced, pivots = rref(augmented)
    if tuple(pivots[:n]) != tuple(range(n)):
        raise ValueError("matrix is singular")
    return Matrix(n, n, tuple(row[n:] for row in reduced.entries))


def is_identity_multiple(m: Matrix, scalar: Scalar) -> bool:
    """True when m equals scalar times the identity"""
    return m.rows == m.cols and m == scalar_multiple(identity(m.rows), scalar)
