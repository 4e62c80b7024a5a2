"""Dense integer matrices with exact (arbitrary precision) entries."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DimensionError


@dataclass(frozen=True)
class IntMatrix:
    """An immutable ``rows x cols`` integer matrix.

    The shape is stored explicitly so that matrices with zero rows or zero
    columns (boundary maps out of or into an empty chain group) keep their
    other dimension.
    """

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise DimensionError(f"entries do not match shape {self.rows}x{self.cols}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        rows = [tuple(int(x) for x in r) for r in rows]
        if cols is None:
            if not rows:
                raise DimensionError("cannot infer column count of an empty row list")
            cols = len(rows[0])
        return cls(len(rows), cols, tuple(rows))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def diagonal(cls, values: Sequence[int], rows: int, cols: int) -> IntMatrix:
        data = [[0] * cols for _ in range(rows)]
        for i, v in enumerate(values):
            data[i][i] = v
        return cls.from_rows(data, cols)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.entries)

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]

    def transpose(self) -> IntMatrix:
        return IntMatrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else tuple((() for _ in range(self.cols))))

    @property
    def T(self) -> IntMatrix:
        return self.transpose()

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        cols = [other.column(j) for j in range(other.cols)]
        out = tuple(
            tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.entries
        )
        return IntMatrix(self.rows, other.cols, out)

    def apply(self, vector: Sequence[int]) -> tuple[int, ...]:
        """Matrix-vector product."""
        if len(vector) != self.cols:
            raise DimensionError(f"vector of length {len(vector)} for {self.shape} matrix")
        return tuple(sum(a * b for a, b in zip(r, vector)) for r in self.entries)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.entries for x in r)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def __str__(self) -> str:
        if not self.rows:
            return f"<empty {self.rows}x{self.cols}>"
        width = max(len(str(x)) for r in self.entries for x in r) if self.cols else 0
        return "\n".join("[" + " ".join(str(x).rjust(width) for x in r) + "]" for r in self.entries)


def dot(u: Iterable[int], v: Iterable[int]) -> int:
    return sum(a * b for a, b in zip(u, v))
