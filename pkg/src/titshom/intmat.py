"""Sparse integer matrices with exact arithmetic.

Rows are dicts keyed by column index; absent keys are zero. Python ints give
unbounded exact arithmetic, so nothing here can overflow or round.
"""

from __future__ import annotations

from typing import Iterable, Iterator


class SparseIntMatrix:
    __slots__ = ("n_rows", "n_cols", "rows")

    def __init__(self, n_rows: int, n_cols: int, rows: list[dict[int, int]] | None = None):
        if n_rows < 0 or n_cols < 0:
            raise ValueError("negative dimension")
        self.n_rows = n_rows
        self.n_cols = n_cols
        self.rows: list[dict[int, int]] = rows if rows is not None else [dict() for _ in range(n_rows)]
        if len(self.rows) != n_rows:
            raise ValueError("row list length mismatch")

    # -- construction ------------------------------------------------------

    @classmethod
    def from_triplets(cls, n_rows: int, n_cols: int, triplets: Iterable[tuple[int, int, int]]) -> "SparseIntMatrix":
        m = cls(n_rows, n_cols)
        for r, c, v in triplets:
            if not (0 <= r < n_rows and 0 <= c < n_cols):
                raise ValueError(f"triplet ({r},{c}) out of range")
            if v:
                row = m.rows[r]
                w = row.get(c, 0) + v
                if w:
                    row[c] = w
                elif c in row:
                    del row[c]
        return m

    @classmethod
    def from_dense(cls, dense: list[list[int]]) -> "SparseIntMatrix":
        n_rows = len(dense)
        n_cols = len(dense[0]) if dense else 0
        m = cls(n_rows, n_cols)
        for r, drow in enumerate(dense):
            if len(drow) != n_cols:
                raise ValueError("ragged dense input")
            m.rows[r] = {c: v for c, v in enumerate(drow) if v}
        return m

    @classmethod
    def from_columns(cls, n_rows: int, columns: list[dict[int, int]]) -> "SparseIntMatrix":
        m = cls(n_rows, len(columns))
        for c, col in enumerate(columns):
            for r, v in col.items():
                if v:
                    m.rows[r][c] = v
        return m

    @classmethod
    def identity(cls, n: int) -> "SparseIntMatrix":
        m = cls(n, n)
        for i in range(n):
            m.rows[i][i] = 1
        return m

    # -- queries -----------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_rows, self.n_cols)

    def entry(self, r: int, c: int) -> int:
        return self.rows[r].get(c, 0)

    def nnz(self) -> int:
        return sum(len(row) for row in self.rows)

    def is_zero(self) -> bool:
        return all(not row for row in self.rows)

    def column(self, c: int) -> dict[int, int]:
        return {r: row[c] for r, row in enumerate(self.rows) if c in row}

    def columns(self) -> list[dict[int, int]]:
        cols: list[dict[int, int]] = [dict() for _ in range(self.n_cols)]
        for r, row in enumerate(self.rows):
            for c, v in row.items():
                cols[c][r] = v
        return cols

    def to_dense(self) -> list[list[int]]:
        return [[row.get(c, 0) for c in range(self.n_cols)] for row in self.rows]

    def to_triplets(self) -> list[tuple[int, int, int]]:
        out = [(r, c, v) for r, row in enumerate(self.rows) for c, v in row.items()]
        out.sort()
        return out

    def copy(self) -> "SparseIntMatrix":
        return SparseIntMatrix(self.n_rows, self.n_cols, [dict(row) for row in self.rows])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseIntMatrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self) -> int:  # pragma: no cover - matrices are not dict keys
        raise TypeError("SparseIntMatrix is unhashable")

    def __repr__(self) -> str:
        return f"SparseIntMatrix({self.n_rows}x{self.n_cols}, nnz={self.nnz()})"

    # -- algebra -----------------------------------------------------------

    def transpose(self) -> "SparseIntMatrix":
        t = SparseIntMatrix(self.n_cols, self.n_rows)
        for r, row in enumerate(self.rows):
            for c, v in row.items():
                t.rows[c][r] = v
        return t

    def mul(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        if self.n_cols != other.n_rows:
            raise ValueError("shape mismatch in mul")
        out = SparseIntMatrix(self.n_rows, other.n_cols)
        orows = other.rows
        for r, row in enumerate(self.rows):
            acc: dict[int, int] = {}
            for k, v in row.items():
                for c, w in orows[k].items():
                    s = acc.get(c, 0) + v * w
                    if s:
                        acc[c] = s
                    elif c in acc:
                        del acc[c]
            out.rows[r] = acc
        return out

    def mul_vec(self, vec: dict[int, int]) -> dict[int, int]:
        """Matrix times sparse column vector (keys are column indices)."""
        acc: dict[int, int] = {}
        for r, row in enumerate(self.rows):
            s = 0
            if len(row) <= len(vec):
                for c, v in row.items():
                    w = vec.get(c)
                    if w is not None:
                        s += v * w
            else:
                for c, w in vec.items():
                    v = row.get(c)
                    if v is not None:
                        s += v * w
            if s:
                acc[r] = s
        return acc

    def scaled(self, k: int) -> "SparseIntMatrix":
        if k == 0:
            return SparseIntMatrix(self.n_rows, self.n_cols)
        return SparseIntMatrix(self.n_rows, self.n_cols, [{c: k * v for c, v in row.items()} for row in self.rows])

    def added(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch in add")
        out = self.copy()
        for r, row in enumerate(other.rows):
            trow = out.rows[r]
            for c, v in row.items():
                s = trow.get(c, 0) + v
                if s:
                    trow[c] = s
                elif c in trow:
                    del trow[c]
        return out

    def hstack(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        if self.n_rows != other.n_rows:
            raise ValueError("row mismatch in hstack")
        out = self.copy()
        out.n_cols = self.n_cols + other.n_cols
        off = self.n_cols
        for r, row in enumerate(other.rows):
            for c, v in row.items():
                out.rows[r][c + off] = v
        return out

    def vstack(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        if self.n_cols != other.n_cols:
            raise ValueError("col mismatch in vstack")
        rows = [dict(row) for row in self.rows] + [dict(row) for row in other.rows]
        return SparseIntMatrix(self.n_rows + other.n_rows, self.n_cols, rows)

    def submatrix(self, row_ids: list[int], col_ids: list[int]) -> "SparseIntMatrix":
        cmap = {c: j for j, c in enumerate(col_ids)}
        out = SparseIntMatrix(len(row_ids), len(col_ids))
        for i, r in enumerate(row_ids):
            row = self.rows[r]
            out.rows[i] = {cmap[c]: v for c, v in row.items() if c in cmap}
        return out


# -- triplet text format ----------------------------------------------------
# Line 1: "<n_rows> <n_cols>"; following lines: "<row> <col> <value>" with
# 0-based indices. Blank lines and lines starting with '#' are ignored.


def parse_triplet_text(text: str) -> SparseIntMatrix:
    lines: Iterator[str] = (ln.strip() for ln in text.splitlines())
    header = None
    trips: list[tuple[int, int, int]] = []
    for ln in lines:
        if not ln or ln.startswith("#"):
            continue
        parts = ln.split()
        if header is None:
            if len(parts) != 2:
                raise ValueError("triplet header must be '<rows> <cols>'")
            header = (int(parts[0]), int(parts[1]))
        else:
            if len(parts) != 3:
                raise ValueError(f"bad triplet line: {ln!r}")
            trips.append((int(parts[0]), int(parts[1]), int(parts[2])))
    if header is None:
        raise ValueError("empty triplet text")
    return SparseIntMatrix.from_triplets(header[0], header[1], trips)


def emit_triplet_text(m: SparseIntMatrix) -> str:
    out = [f"{m.n_rows} {m.n_cols}"]
    out.extend(f"{r} {c} {v}" for r, c, v in m.to_triplets())
    return "\n".join(out) + "\n"
