"""Exact dense matrices over the coefficient field or the polynomial ring.

One generic ``Matrix`` covers both uses: group elements carry scalar
entries (Fraction / CycNum), Jacobians carry ``MPoly`` entries.  The
determinant runs fraction-free Bareiss elimination, whose interior
divisions are exact in any integral domain; a cofactor expansion is kept
alongside as the small-matrix route.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

from .cyclotomic import CycNum, Scalar, ScalarLike, as_scalar, scalar_is_zero
from .errors import SingularMatrixError
from .polynomials import MPoly
from .ratfunc import RatFrac

Entry = object  # Fraction | CycNum | MPoly


def _is_zero(v) -> bool:
    if isinstance(v, MPoly):
        return v.is_zero()
    return scalar_is_zero(v)


def _exact_div(a, b):
    if isinstance(a, MPoly):
        return a.divexact(b)
    return a / b


class Matrix:
    """Immutable rectangular matrix; entries share one ring."""

    __slots__ = ("nrows", "ncols", "rows", "_inv", "_det", "_hash")

    def __init__(self, rows: Sequence[Sequence[Entry]]):
        rows = tuple(tuple(r) for r in rows)
        if not rows or not rows[0]:
            raise ValueError("matrix must have at least one row and column")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("ragged rows")
        norm = tuple(
            tuple(e if isinstance(e, MPoly) else as_scalar(e) for e in r)
            for r in rows
        )
        object.__setattr__(self, "nrows", len(norm))
        object.__setattr__(self, "ncols", width)
        object.__setattr__(self, "rows", norm)
        object.__setattr__(self, "_inv", None)
        object.__setattr__(self, "_det", None)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    # -- constructors -------------------------------------------------------

    @staticmethod
    def identity(n: int) -> "Matrix":
        return Matrix([[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)])

    @staticmethod
    def from_columns(cols: Sequence[Sequence[Entry]]) -> "Matrix":
        return Matrix(list(zip(*cols)))

    # -- basics --------------------------------------------------------------

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, key: tuple[int, int]):
        i, j = key
        return self.rows[i][j]

    def transpose(self) -> "Matrix":
        return Matrix(list(zip(*self.rows)))

    def __mul__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.ncols != other.nrows:
            raise ValueError(
                f"cannot multiply {self.nrows}x{self.ncols} by {other.nrows}x{other.ncols}")
        cols = other.transpose().rows
        return Matrix([
            [_dot(row, col) for col in cols]
            for row in self.rows
        ])

    def matvec(self, vec: Sequence[Entry]) -> list[Entry]:
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        return [_dot(row, vec) for row in self.rows]

    def __pow__(self, exponent: int) -> "Matrix":
        if exponent < 0:
            return self.inverse() ** -exponent
        result = Matrix.identity(self.nrows)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def is_identity(self) -> bool:
        if not self.is_square:
            return False
        for i, row in enumerate(self.rows):
            for j, v in enumerate(row):
                if i == j:
                    if v != 1:
                        return False
                elif not _is_zero(v):
                    return False
        return True

    # -- determinants -----------------------------------------------------------

    def det(self):
        """Exact determinant by fraction-free Bareiss elimination."""
        if not self.is_square:
            raise ValueError("determinant of a non-square matrix")
        if self._det is None:
            object.__setattr__(self, "_det", self._det_bareiss())
        return self._det

    def _det_bareiss(self):
        n = self.nrows
        if n == 1:
            return self.rows[0][0]
        if n == 2:
            a, b = self.rows[0]
            c, d = self.rows[1]
            return a * d - b * c
        m = [list(r) for r in self.rows]
        sign = 1
        prev = None
        for k in range(n - 1):
            pivot_row = k
            while pivot_row < n and _is_zero(m[pivot_row][k]):
                pivot_row += 1
            if pivot_row == n:
                return _zero_like(m[0][0])
            if pivot_row != k:
                m[pivot_row], m[k] = m[k], m[pivot_row]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    num = m[k][k] * m[i][j] - m[i][k] * m[k][j]
                    m[i][j] = num if prev is None else _exact_div(num, prev)
                m[i][k] = _zero_like(m[i][k])
            prev = m[k][k]
        result = m[n - 1][n - 1]
        return -result if sign < 0 else result

    def det_cofactor(self):
        """Laplace expansion along the first row; small matrices only."""
        if not self.is_square:
            raise ValueError("determinant of a non-square matrix")
        if self.nrows > 4:
            raise ValueError("cofactor expansion limited to n <= 4")
        return _cofactor(self.rows)

    # -- field-entry routines ------------------------------------------------------

    def inverse(self) -> "Matrix":
        """Gauss-Jordan inverse; entries must lie in the coefficient field."""
        if self._inv is not None:
            return self._inv
        if not self.is_square:
            raise ValueError("inverse of a non-square matrix")
        n = self.nrows
        aug = [list(self.rows[i]) + [Fraction(1 if i == j else 0) for j in range(n)]
               for i in range(n)]
        for col in range(n):
            pivot = next((r for r in range(col, n) if not _is_zero(aug[r][col])), None)
            if pivot is None:
                raise SingularMatrixError("matrix is singular")
            aug[col], aug[pivot] = aug[pivot], aug[col]
            pv = aug[col][col]
            aug[col] = [v / pv for v in aug[col]]
            for r in range(n):
                if r != col and not _is_zero(aug[r][col]):
                    factor = aug[r][col]
                    aug[r] = [v - factor * w for v, w in zip(aug[r], aug[col])]
        inv = Matrix([row[n:] for row in aug])
        object.__setattr__(self, "_inv", inv)
        object.__setattr__(inv, "_inv", self)
        return inv

    def rank(self) -> int:
        """Row rank over the coefficient field."""
        rows = [list(r) for r in self.rows]
        rank = 0
        for col in range(self.ncols):
            pivot = next((r for r in range(rank, self.nrows) if not _is_zero(rows[r][col])), None)
            if pivot is None:
                continue
            rows[rank], rows[pivot] = rows[pivot], rows[rank]
            pv = rows[rank][col]
            rows[rank] = [v / pv for v in rows[rank]]
            for r in range(self.nrows):
                if r != rank and not _is_zero(rows[r][col]):
                    factor = rows[r][col]
                    rows[r] = [v - factor * w for v, w in zip(rows[r], rows[rank])]
            rank += 1
            if rank == self.nrows:
                break
        return rank

    def nullspace(self) -> list[list[Scalar]]:
        """Basis of the right kernel over the coefficient field."""
        rows = [list(r) for r in self.rows]
        n = self.ncols
        pivots: list[int] = []
        rank = 0
        for col in range(n):
            pivot = next((r for r in range(rank, self.nrows) if not _is_zero(rows[r][col])), None)
            if pivot is None:
                continue
            rows[rank], rows[pivot] = rows[pivot], rows[rank]
            pv = rows[rank][col]
            rows[rank] = [v / pv for v in rows[rank]]
            for r in range(self.nrows):
                if r != rank and not _is_zero(rows[r][col]):
                    factor = rows[r][col]
                    rows[r] = [v - factor * w for v, w in zip(rows[r], rows[rank])]
            pivots.append(col)
            rank += 1
        basis = []
        free = [c for c in range(n) if c not in pivots]
        for fc in free:
            vec: list[Scalar] = [Fraction(0)] * n
            vec[fc] = Fraction(1)
            for r, pc in enumerate(pivots):
                vec[pc] = -rows[r][fc]
            basis.append(vec)
        return basis

    # -- comparisons ------------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.nrows, self.ncols) == (other.nrows, other.ncols) and self.rows == other.rows

    def __ne__(self, other):
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(self.rows))
        return self._hash

    def __repr__(self):
        body = "; ".join(", ".join(str(v) for v in row) for row in self.rows)
        return f"Matrix[{body}]"


def _dot(row, col):
    acc = None
    for a, b in zip(row, col):
        term = a * b
        acc = term if acc is None else acc + term
    return acc


def _zero_like(v):
    if isinstance(v, MPoly):
        return MPoly.zero(v.nvars)
    return Fraction(0)


def _cofactor(rows) -> Entry:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = None
    for j in range(n):
        if _is_zero(rows[0][j]):
            continue
        minor = [tuple(r[k] for k in range(n) if k != j) for r in rows[1:]]
        term = rows[0][j] * _cofactor(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return _zero_like(rows[0][0]) if total is None else total


def solve_cramer(m: Matrix, rhs: Sequence[MPoly]) -> list[RatFrac]:
    """Solve m * F = rhs over the polynomial ring by Cramer's rule.

    Every component comes back as a formal fraction with the determinant of
    ``m`` as its denominator.
    """
    if not m.is_square:
        raise ValueError("Cramer's rule needs a square matrix")
    if len(rhs) != m.nrows:
        raise ValueError("right-hand side length mismatch")
    nvars = next((e.nvars for row in m.rows for e in row if isinstance(e, MPoly)), None)
    if nvars is None:
        raise ValueError("solve_cramer expects polynomial entries")
    if all(isinstance(e, MPoly) for row in m.rows for e in row):
        poly_m = m
    else:
        poly_m = Matrix([
            [e if isinstance(e, MPoly) else MPoly.constant(nvars, e) for e in row]
            for row in m.rows
        ])
    rows = poly_m.rows
    rhs = [b if isinstance(b, MPoly) else MPoly.constant(nvars, b) for b in rhs]
    d = poly_m.det()
    if d.is_zero():
        raise SingularMatrixError("coefficient matrix has zero determinant")
    solution = []
    for k in range(m.ncols):
        replaced = [
            [rhs[i] if j == k else rows[i][j] for j in range(m.ncols)]
            for i in range(m.nrows)
        ]
        solution.append(RatFrac(Matrix(replaced).det(), d))
    return solution


def solve_linear_system(a: Sequence[Sequence[Scalar]], b: Sequence[Scalar]) -> list[Scalar] | None:
    """One exact solution of a (possibly rectangular) scalar system, or None
    if inconsistent.  Free variables are set to zero."""
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    rows = [list(r) + [bv] for r, bv in zip(a, b)]
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, nrows) if not _is_zero(rows[r][col])), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pv = rows[rank][col]
        rows[rank] = [v / pv for v in rows[rank]]
        for r in range(nrows):
            if r != rank and not _is_zero(rows[r][col]):
                factor = rows[r][col]
                rows[r] = [v - factor * w for v, w in zip(rows[r], rows[rank])]
        pivots.append(col)
        rank += 1
    for r in range(rank, nrows):
        if not _is_zero(rows[r][ncols]):
            return None
    solution: list[Scalar] = [Fraction(0)] * ncols
    for r, pc in enumerate(pivots):
        solution[pc] = rows[r][ncols]
    return solution
