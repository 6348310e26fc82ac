"""Dense exact matrices with Scalar entries."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .scalars import ONE, ZERO, Scalar, scalar


class Matrix:
    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable]):
        self.rows = tuple(tuple(scalar(x) for x in row) for row in rows)
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != self.ncols for r in self.rows):
            raise ValueError("ragged matrix")

    @classmethod
    def _wrap(cls, rows) -> "Matrix":
        m = object.__new__(cls)
        m.rows = tuple(tuple(r) for r in rows)
        m.nrows = len(m.rows)
        m.ncols = len(m.rows[0]) if m.rows else 0
        return m

    @classmethod
    def zeros(cls, n: int, m: int | None = None) -> "Matrix":
        m = n if m is None else m
        return cls._wrap([[ZERO] * m for _ in range(n)])

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls._wrap([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def diag(cls, entries) -> "Matrix":
        entries = [scalar(x) for x in entries]
        n = len(entries)
        return cls._wrap([[entries[i] if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def from_entries(cls, n: int, entries: Mapping[tuple[int, int], object], m: int | None = None) -> "Matrix":
        rows = [[ZERO] * (n if m is None else m) for _ in range(n)]
        for (i, j), x in entries.items():
            rows[i][j] = scalar(x)
        return cls._wrap(rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def nonzero_entries(self):
        for i, row in enumerate(self.rows):
            for j, x in enumerate(row):
                if x.num:
                    yield (i, j), x

    def is_zero(self) -> bool:
        return all(not x.num for row in self.rows for x in row)

    def _check(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check(other)
        return Matrix._wrap([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check(other)
        return Matrix._wrap([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        return Matrix._wrap([[-a for a in r] for r in self.rows])

    def scale(self, c) -> "Matrix":
        c = scalar(c)
        if c.is_one():
            return self
        return Matrix._wrap([[c * a if a.num else a for a in r] for r in self.rows])

    def __mul__(self, other):
        if isinstance(other, Matrix):
            return self.matmul(other)
        if isinstance(other, (Scalar, int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (Scalar, int, Fraction)):
            return self.scale(other)
        return NotImplemented

    __matmul__ = __mul__

    def matmul(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        cols = other.ncols
        brows = [[(j, x) for j, x in enumerate(r) if x.num] for r in other.rows]
        out = []
        for row in self.rows:
            acc = [ZERO] * cols
            for k, a in enumerate(row):
                if not a.num:
                    continue
                for j, b in brows[k]:
                    acc[j] = acc[j] + a * b
            out.append(acc)
        return Matrix._wrap(out)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative matrix power")
        out = Matrix.identity(self.nrows)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def transpose(self) -> "Matrix":
        return Matrix._wrap(list(zip(*self.rows)))

    def trace(self) -> Scalar:
        t = ZERO
        for i in range(min(self.shape)):
            t = t + self.rows[i][i]
        return t

    def kron(self, other: "Matrix") -> "Matrix":
        out = []
        for r in self.rows:
            for s in other.rows:
                out.append([a * b if a.num and b.num else ZERO for a in r for b in s])
        return Matrix._wrap(out)

    def map(self, fn) -> "Matrix":
        return Matrix._wrap([[fn(x) for x in r] for r in self.rows])

    def specialize(self, bindings) -> "Matrix":
        return self.map(lambda x: x.specialize(bindings))

    def evaluate(self, point) -> list[list[Fraction]]:
        return [[x.evaluate(point) for x in r] for r in self.rows]

    def variables(self) -> set[str]:
        out = set()
        for r in self.rows:
            for x in r:
                out |= x.variables()
        return out

    def to_text(self) -> list[list[str]]:
        return [[str(x) for x in r] for r in self.rows]

    @classmethod
    def from_text(cls, rows) -> "Matrix":
        return cls._wrap([[Scalar.parse(x) for x in r] for r in rows])

    def __repr__(self):
        return "Matrix(" + repr(self.to_text()) + ")"


def kron(a: Matrix, b: Matrix) -> Matrix:
    return a.kron(b)
