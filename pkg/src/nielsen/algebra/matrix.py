"""Dense exact matrices over the rationals."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from ..errors import DimensionError


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floats are not accepted as exact entries")
    return Fraction(x)


@dataclass(frozen=True)
class QMatrix:
    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise DimensionError(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix",
                module="exact_algebra", operation="QMatrix",
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "QMatrix":
        rows = [list(r) for r in rows]
        n = len(rows)
        m = len(rows[0]) if n else 0
        if any(len(r) != m for r in rows):
            raise DimensionError("ragged rows", module="exact_algebra", operation="QMatrix")
        return cls(n, m, tuple(as_fraction(x) for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        one, zero = Fraction(1), Fraction(0)
        return cls(n, n, tuple(one if i == j else zero for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, n: int, m: int | None = None) -> "QMatrix":
        m = n if m is None else m
        return cls(n, m, (Fraction(0),) * (n * m))

    @classmethod
    def diag(cls, values: Iterable) -> "QMatrix":
        vals = [as_fraction(v) for v in values]
        n = len(vals)
        return cls(n, n, tuple(vals[i] if i == j else Fraction(0) for i in range(n) for j in range(n)))

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i * self.cols + j]

    def to_rows(self) -> list[list[Fraction]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for x in self.entries)

    def _check_same_shape(self, other: "QMatrix", op: str):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionError(
                f"shape mismatch {self.rows}x{self.cols} vs {other.rows}x{other.cols}",
                module="exact_algebra", operation=op,
            )

    def __add__(self, other: "QMatrix") -> "QMatrix":
        self._check_same_shape(other, "add")
        return QMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        self._check_same_shape(other, "sub")
        return QMatrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "QMatrix":
        return QMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, c) -> "QMatrix":
        c = as_fraction(c)
        return QMatrix(self.rows, self.cols, tuple(c * a for a in self.entries))

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.cols != other.rows:
            raise DimensionError(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}",
                module="exact_algebra", operation="matmul",
            )
        n, k, m = self.rows, self.cols, other.cols
        a, b = self.entries, other.entries
        bcols = [b[j::m] for j in range(m)]
        out = []
        for i in range(n):
            row = a[i * k:(i + 1) * k]
            for col in bcols:
                out.append(sum((x * y for x, y in zip(row, col) if x and y), Fraction(0)))
        return QMatrix(n, m, tuple(out))

    def __mul__(self, other):
        if isinstance(other, QMatrix):
            return self @ other
        return self.scale(other)

    __rmul__ = scale

    def trace(self) -> Fraction:
        self._require_square("trace")
        return sum((self[i, i] for i in range(self.rows)), Fraction(0))

    def transpose(self) -> "QMatrix":
        return QMatrix(self.cols, self.rows,
                       tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def _require_square(self, op: str):
        if not self.is_square:
            raise DimensionError(f"{op} needs a square matrix, got {self.rows}x{self.cols}",
                                 module="exact_algebra", operation=op)

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.to_rows())
        return f"QMatrix([{body}])"


def direct_sum(blocks: Sequence[QMatrix]) -> QMatrix:
    n = sum(b.rows for b in blocks)
    out = [[Fraction(0)] * n for _ in range(n)]
    off = 0
    for b in blocks:
        b._require_square("direct_sum")
        for i in range(b.rows):
            for j in range(b.cols):
                out[off + i][off + j] = b[i, j]
        off += b.rows
    return QMatrix(n, n, tuple(x for r in out for x in r))


def det(m: QMatrix) -> Fraction:
    """Exact determinant by Bareiss fraction-free elimination.

    Rational input is first scaled to an integer matrix by the lcm of all
    denominators so that every intermediate quantity stays integral.
    """
    m._require_square("det")
    n = m.rows
    if n == 0:
        return Fraction(1)
    s = lcm(*(x.denominator for x in m.entries))
    a = [[int(x * s) for x in row] for row in m.to_rows()]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        piv = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * piv - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = piv
    return Fraction(sign * a[n - 1][n - 1], s ** n)


def mat_pow(m: QMatrix, k: int) -> QMatrix:
    m._require_square("mat_pow")
    if k < 0:
        raise ValueError("negative exponent")
    result = QMatrix.identity(m.rows)
    base = m
    while k:
        if k & 1:
            result = result @ base
        k >>= 1
        if k:
            base = base @ base
    return result


def companion(monic_coeffs_ascending: Sequence[Fraction]) -> QMatrix:
    """Companion matrix with ones on the subdiagonal and the negated
    coefficients b_r, ..., b_1 down the last column.

    The characteristic polynomial of the result is the given monic polynomial.
    """
    c = [as_fraction(x) for x in monic_coeffs_ascending]
    r = len(c) - 1
    if r < 0 or c[-1] != 1:
        raise ValueError("companion needs a monic polynomial")
    rows = [[Fraction(0)] * r for _ in range(r)]
    for i in range(1, r):
        rows[i][i - 1] = Fraction(1)
    for i in range(r):
        rows[i][r - 1] = -c[i]
    return QMatrix(r, r, tuple(x for row in rows for x in row))


def exterior_power(m: QMatrix, k: int) -> QMatrix:
    """k-th exterior power: the matrix of k x k minors in lexicographic order."""
    from itertools import combinations

    m._require_square("exterior_power")
    idx = list(combinations(range(m.rows), k))
    rows = m.to_rows()
    out = []
    for I in idx:
        for J in idx:
            sub = QMatrix.from_rows([[rows[i][j] for j in J] for i in I]) if k else QMatrix.identity(0)
            out.append(det(sub))
    return QMatrix(len(idx), len(idx), tuple(out))
