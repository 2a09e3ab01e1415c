"""Exact rational matrices.

Scalars are :class:`fractions.Fraction`, which already keeps every value in
lowest terms with a positive denominator.  The matrix type here is small and
immutable; it only carries what the dimension computations need (row
reduction, kernels, inverses, determinants, Sylvester checks).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction.

    Floats are rejected; they have no place in the exact paths.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError(f"refusing float {x!r} in exact arithmetic")
    # numpy integers and the like
    try:
        return Fraction(int(x)) if int(x) == x else Fraction(x)
    except (TypeError, ValueError) as exc:
        raise TypeError(f"cannot convert {x!r} to a rational") from exc


def rational_str(x: Fraction) -> str:
    """Serialize as "num/den" (denominator always present)."""
    x = as_rational(x)
    return f"{x.numerator}/{x.denominator}"


def as_vector(v: Iterable) -> tuple[Fraction, ...]:
    return tuple(as_rational(x) for x in v)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    if len(u) != len(v):
        raise ValueError(f"length mismatch {len(u)} != {len(v)}")
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


class Matrix:
    """Dense immutable matrix over the rationals, stored row-major."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Iterable[Iterable], cols: int | None = None):
        rows = [as_vector(r) for r in data]
        if cols is None:
            if not rows:
                raise ValueError("column count required for a matrix with no rows")
            cols = len(rows[0])
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
        self.rows = len(rows)
        self.cols = cols
        self._data = tuple(rows)

    # construction -------------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls([[0] * cols for _ in range(rows)], cols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int | None = None) -> "Matrix":
        columns = [as_vector(c) for c in columns]
        if rows is None:
            if not columns:
                raise ValueError("row count required for a matrix with no columns")
            rows = len(columns[0])
        return cls([[c[i] for c in columns] for i in range(rows)], len(columns))

    @classmethod
    def diagonal(cls, entries: Sequence) -> "Matrix":
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], n)

    # access -------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def entries(self) -> tuple[Fraction, ...]:
        return tuple(x for r in self._data for x in r)

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._data[i]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self._data)

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._data]

    def columns(self) -> list[tuple[Fraction, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix([[self._data[i][j] for j in cols] for i in rows], len(cols))

    # algebra ------------------------------------------------------------

    @property
    def T(self) -> "Matrix":
        return Matrix([self.column(j) for j in range(self.cols)], self.rows)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            ocols = other.columns()
            return Matrix([[dot(r, c) for c in ocols] for r in self._data], other.cols)
        v = as_vector(other)
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(dot(r, v) for r in self._data)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)], self.cols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)], self.cols)

    def __neg__(self) -> "Matrix":
        return Matrix([[-a for a in r] for r in self._data], self.cols)

    def __mul__(self, c) -> "Matrix":
        c = as_rational(c)
        return Matrix([[c * a for a in r] for r in self._data], self.cols)

    __rmul__ = __mul__

    def _check_same(self, other: "Matrix") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._data))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in r) for r in self._data)
        return f"Matrix({self.rows}x{self.cols}: [{body}])"

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self._data[i][j] == self._data[j][i] for i in range(self.rows) for j in range(i)
        )

    # delegations --------------------------------------------------------

    def rref(self) -> tuple["Matrix", int]:
        return rref(self)

    def rank(self) -> int:
        return rank(self)

    def kernel_basis(self) -> "Matrix":
        return kernel_basis(self)


def _rref_rows(data: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    m = [list(r) for r in data]
    nrows = len(m)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        # pivot: largest absolute numerator, only to keep entries small
        best = None
        for i in range(r, nrows):
            x = m[i][c]
            if x and (best is None or abs(x.numerator) > abs(m[best][c].numerator)):
                best = i
        if best is None:
            continue
        m[r], m[best] = m[best], m[r]
        piv = m[r][c]
        if piv != 1:
            m[r] = [x / piv for x in m[r]]
        prow = m[r]
        for i in range(nrows):
            if i != r:
                f = m[i][c]
                if f:
                    m[i] = [a - f * b for a, b in zip(m[i], prow)]
        pivots.append(c)
        r += 1
    return m, pivots


def rref(m: Matrix) -> tuple[Matrix, int]:
    """Reduced row echelon form and rank."""
    data, pivots = _rref_rows([list(r) for r in m._data], m.cols)
    return Matrix(data, m.cols), len(pivots)


def pivot_columns(m: Matrix) -> list[int]:
    return _rref_rows([list(r) for r in m._data], m.cols)[1]


def rank(m: Matrix) -> int:
    return len(pivot_columns(m))


def kernel_basis(m: Matrix) -> Matrix:
    """Columns form a basis of the right null space of ``m``.

    The basis is the canonical one read off the reduced echelon form: one
    column per free variable, with a 1 in that variable's slot.
    """
    data, pivots = _rref_rows([list(r) for r in m._data], m.cols)
    pivset = set(pivots)
    free = [j for j in range(m.cols) if j not in pivset]
    cols = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -data[r][f]
        cols.append(v)
    return Matrix.from_columns(cols, m.cols)


def row_space_basis(m: Matrix) -> Matrix:
    """Nonzero rows of the reduced echelon form."""
    reduced, r = rref(m)
    return Matrix([reduced.row(i) for i in range(r)], m.cols)


def solve(m: Matrix, b: Sequence) -> tuple[Fraction, ...] | None:
    """One exact solution of ``m x = b``, or None when inconsistent."""
    b = as_vector(b)
    if len(b) != m.rows:
        raise ValueError("right-hand side length mismatch")
    aug = [list(r) + [bi] for r, bi in zip(m._data, b)]
    data, pivots = _rref_rows(aug, m.cols + 1)
    if pivots and pivots[-1] == m.cols:
        return None
    x = [Fraction(0)] * m.cols
    for r, p in enumerate(pivots):
        x[p] = data[r][m.cols]
    return tuple(x)


def inverse(m: Matrix) -> Matrix:
    if m.rows != m.cols:
        raise ValueError("inverse of a non-square matrix")
    n = m.rows
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(m._data)]
    data, pivots = _rref_rows(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("matrix is singular")
    return Matrix([r[n:] for r in data], n)


def determinant(m: Matrix) -> Fraction:
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    a = [list(r) for r in m._data]
    n = m.rows
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        piv = a[c][c]
        det *= piv
        for i in range(c + 1, n):
            f = a[i][c] / piv
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


def leading_principal_minors(m: Matrix) -> list[Fraction]:
    """All leading principal minors, via one elimination pass.

    Without pivoting, the k-th minor is the product of the first k pivots;
    once a pivot vanishes the remaining minors are computed directly.
    """
    n = m.rows
    a = [list(r) for r in m._data]
    minors: list[Fraction] = []
    prod = Fraction(1)
    for k in range(n):
        piv = a[k][k]
        if piv == 0:
            minors.extend(determinant(m.submatrix(range(j + 1), range(j + 1))) for j in range(k, n))
            return minors
        prod *= piv
        minors.append(prod)
        for i in range(k + 1, n):
            f = a[i][k] / piv
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return minors


def is_positive_definite(m: Matrix) -> bool:
    """Sylvester's criterion; ``m`` must be symmetric."""
    if not m.is_symmetric():
        raise ValueError("Sylvester's criterion needs a symmetric matrix")
    return all(x > 0 for x in leading_principal_minors(m))


def is_positive_definite_on_subspace(h: Matrix, basis: Matrix) -> bool:
    """Is the quadratic form ``h`` positive definite on the column span of ``basis``?"""
    if not h.is_symmetric():
        raise ValueError("h must be symmetric")
    if basis.rows != h.rows:
        raise ValueError("basis vectors live in the wrong dimension")
    if basis.cols == 0:
        return True
    restricted = basis.T @ h @ basis
    return is_positive_definite(restricted)


def outer(u: Sequence, v: Sequence) -> Matrix:
    u, v = as_vector(u), as_vector(v)
    return Matrix([[a * b for b in v] for a in u], len(v))
