"""Exact Gaussian elimination over any exact field (Q, Q(i), towers, F_p).

Rows are stored sparsely as ``{column: value}`` dictionaries, which keeps the
very sparse matrices of this library (contraction maps, Laplacians) cheap.
Pivoting picks the first nonzero column of each incoming row.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from .fields import field_tag, inv

SparseRow = Dict[int, object]


def _as_sparse(row) -> SparseRow:
    if isinstance(row, dict):
        return {j: v for j, v in row.items() if not v == 0}
    return {j: v for j, v in enumerate(row) if not v == 0}


class Echelon:
    """Incrementally maintained reduced row echelon form."""

    def __init__(self, ncols: int) -> None:
        self.ncols = ncols
        self.pivots: Dict[int, SparseRow] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row) -> SparseRow:
        r = _as_sparse(row)
        for c in [c for c in r if c in self.pivots]:
            f = r.get(c)
            if f is None or f == 0:
                continue
            for j, v in self.pivots[c].items():
                nv = r.get(j, 0) - f * v
                if nv == 0:
                    r.pop(j, None)
                else:
                    r[j] = nv
        return r

    def add(self, row) -> Optional[int]:
        """Insert a row; return its new pivot column or None if dependent."""
        r = self.reduce(row)
        if not r:
            return None
        c = min(r)
        s = inv(r[c])
        r = {j: v * s for j, v in r.items()}
        r[c] = 1
        for pc, prow in self.pivots.items():
            f = prow.get(c)
            if f is not None and not f == 0:
                for j, v in r.items():
                    nv = prow.get(j, 0) - f * v
                    if nv == 0:
                        prow.pop(j, None)
                    else:
                        prow[j] = nv
        self.pivots[c] = r
        return c

    def kernel(self) -> List[list]:
        free = [j for j in range(self.ncols) if j not in self.pivots]
        basis = []
        for fcol in free:
            v: list = [0] * self.ncols
            v[fcol] = 1
            for pc, prow in self.pivots.items():
                x = prow.get(fcol)
                if x is not None:
                    v[pc] = -x
            basis.append(v)
        return basis


@dataclass(frozen=True)
class MatrixExact:
    """Rectangular matrix over one exact field."""

    rows: int
    cols: int
    entries: tuple = field(repr=False)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "MatrixExact":
        rows = [tuple(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        tags = {field_tag(x) for r in rows for x in r if not x == 0}
        tags.discard("Q")
        if len(tags) > 1 and not tags <= {"QI", "Tower"}:
            raise ValueError(f"mixed field tags {sorted(tags)}")
        return cls(len(rows), ncols, tuple(rows))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def tolist(self) -> list:
        return [list(r) for r in self.entries]

    def rank(self) -> int:
        return rank(self.entries, self.cols)

    def kernel(self) -> List[list]:
        return kernel(self.entries, self.cols)

    def solve(self, b: Sequence):
        return solve(self.entries, b, self.cols)


def echelon(rows: Sequence, ncols: int) -> Echelon:
    e = Echelon(ncols)
    for r in rows:
        e.add(r)
    return e


def rank(rows: Sequence, ncols: Optional[int] = None) -> int:
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    return echelon(rows, ncols).rank


def kernel(rows: Sequence, ncols: Optional[int] = None) -> List[list]:
    """Basis of {v : M v = 0}."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    return echelon(rows, ncols).kernel()


class InconsistentSystem(ValueError):
    """M x = b has no solution."""


def solve(rows: Sequence, b: Sequence, ncols: Optional[int] = None) -> list:
    """A particular solution of M x = b (free variables set to 0)."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    e = Echelon(ncols + 1)
    for r, bi in zip(rows, b):
        sr = _as_sparse(r)
        if not bi == 0:
            sr[ncols] = bi
        e.add(sr)
    if ncols in e.pivots:
        raise InconsistentSystem("inconsistent linear system")
    x: list = [0] * ncols
    for pc, prow in e.pivots.items():
        x[pc] = prow.get(ncols, 0)
    return x


def rank_kernel_solve(rows: Sequence, b: Optional[Sequence] = None, ncols: Optional[int] = None) -> dict:
    """Rank, kernel basis and (optionally) a particular solution in one call."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    e = echelon(rows, ncols)
    out = {"rank": e.rank, "kernel": e.kernel()}
    if b is not None:
        try:
            out["solution"] = solve(rows, b, ncols)
        except InconsistentSystem:
            out["solution"] = None
    return out


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list:
    n, k = len(a), len(b)
    m = len(b[0]) if b else 0
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            s = 0
            for t in range(k):
                x = a[i][t]
                if not x == 0:
                    y = b[t][j]
                    if not y == 0:
                        s = s + x * y
            row.append(s)
        out.append(row)
    return out


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    out = []
    for row in a:
        s = 0
        for x, y in zip(row, v):
            if not x == 0 and not y == 0:
                s = s + x * y
        out.append(s)
    return out


def transpose(a: Sequence[Sequence]) -> list:
    return [list(col) for col in zip(*a)]


def identity(n: int) -> list:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def determinant(a: Sequence[Sequence]):
    """Exact determinant by elimination."""
    m = [list(r) for r in a]
    n = len(m)
    det = 1
    for c in range(n):
        p = next((r for r in range(c, n) if not m[r][c] == 0), None)
        if p is None:
            return 0
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det = det * m[c][c]
        s = inv(m[c][c])
        for r in range(c + 1, n):
            f = m[r][c]
            if not f == 0:
                f = f * s
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return det
