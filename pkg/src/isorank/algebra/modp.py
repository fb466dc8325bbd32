"""Dense linear algebra over F_p on numpy arrays.

Products go through float64 BLAS and are exact as long as every partial sum
stays below 2**53; the inner dimension is chunked to guarantee that.
"""

from __future__ import annotations

from typing import List, Optional

import numpy as np

_EXACT = float(2**53)


def _chunk(k: int, p: int) -> int:
    return max(1, int(_EXACT // ((p - 1) ** 2 + p)) - 1)


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """(a @ b) mod p for non-negative residues, exact."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    k = a.shape[1]
    step = _chunk(k, p)
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.float64)
    for s in range(0, k, step):
        out += a[:, s : s + step] @ b[s : s + step]
        np.fmod(out, p, out=out)
    return out.astype(np.int64)


def inv_mod(x: int, p: int) -> int:
    return pow(int(x), -1, p)


class ModpEchelon:
    """Reduced row echelon basis over F_p, grown block by block.

    ``add_block`` reports the rank after each inserted row, which gives the
    ranks of all row prefixes of a stacked matrix in a single pass.
    """

    def __init__(self, ncols: int, p: int) -> None:
        self.p = p
        self.ncols = ncols
        self.rows = np.zeros((0, ncols), dtype=np.int64)
        self.piv: List[int] = []

    @property
    def rank(self) -> int:
        return len(self.piv)

    def reduce(self, block: np.ndarray) -> np.ndarray:
        p = self.p
        b = np.mod(np.asarray(block, dtype=np.int64), p)
        if self.piv:
            b = np.mod(b - matmul_mod(b[:, self.piv], self.rows, p), p)
        return b

    def add_block(self, block: np.ndarray) -> List[int]:
        p = self.p
        b = self.reduce(block)
        ranks = []
        new_rows: List[np.ndarray] = []
        new_piv: List[int] = []
        for i in range(b.shape[0]):
            row = b[i]
            nz = np.flatnonzero(row)
            if nz.size:
                c = int(nz[0])
                row = np.mod(row * inv_mod(row[c], p), p)
                if i + 1 < b.shape[0]:
                    f = b[i + 1 :, c].copy()
                    if f.any():
                        b[i + 1 :] = np.mod(b[i + 1 :] - np.outer(f, row) % p, p)
                new_rows.append(row)
                new_piv.append(c)
            ranks.append(self.rank + len(new_piv))
        if new_piv:
            n = np.array(new_rows, dtype=np.int64)
            for j in range(len(new_piv) - 1, -1, -1):
                c = new_piv[j]
                f = n[:j, c].copy()
                if f.any():
                    n[:j] = np.mod(n[:j] - np.outer(f, n[j]) % p, p)
            if self.piv:
                self.rows = np.mod(self.rows - matmul_mod(self.rows[:, new_piv], n, p), p)
            self.rows = np.vstack([self.rows, n])
            self.piv.extend(new_piv)
        return ranks

    def kernel(self) -> np.ndarray:
        """Basis of the right kernel, one vector per row."""
        p = self.p
        pivset = set(self.piv)
        free = [j for j in range(self.ncols) if j not in pivset]
        k = np.zeros((len(free), self.ncols), dtype=np.int64)
        for t, j in enumerate(free):
            k[t, j] = 1
        if self.piv and free:
            # v[piv_i] = -rows[i, free]
            k[:, self.piv] = np.mod(-self.rows[:, free].T, p)
        return k


def rank_mod_p(a: np.ndarray, p: int, block: int = 64) -> int:
    return rank_profile(a, p, block)[-1] if len(a) else 0


def rank_profile(a: np.ndarray, p: int, block: int = 64) -> List[int]:
    """Rank of a[:k] for k = 1..rows."""
    a = np.asarray(a, dtype=np.int64)
    e = ModpEchelon(a.shape[1], p)
    out: List[int] = []
    for s in range(0, a.shape[0], block):
        out.extend(e.add_block(a[s : s + block]))
    return out


def kernel_mod_p(a: np.ndarray, p: int, ncols: Optional[int] = None) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    e = ModpEchelon(a.shape[1] if ncols is None else ncols, p)
    for s in range(0, a.shape[0], 64):
        e.add_block(a[s : s + 64])
    return e.kernel()
