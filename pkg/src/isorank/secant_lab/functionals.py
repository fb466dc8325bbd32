"""Linear functionals on R_d over F_p, as row vectors in the monomial basis.

Columns follow ``algebra.poly.monomials(n + 1, d)`` throughout.
"""

from __future__ import annotations

from functools import lru_cache
from math import factorial
from typing import Dict, Tuple

import numpy as np

from ..algebra.modp import ModpEchelon, kernel_mod_p, matmul_mod
from ..algebra.poly import monomial_index, monomials


@lru_cache(maxsize=64)
def exponent_table(arity: int, d: int) -> np.ndarray:
    t = np.array(monomials(arity, d), dtype=np.int64)
    return t.reshape(-1, arity)


@lru_cache(maxsize=64)
def _index(arity: int, d: int) -> Dict[Tuple[int, ...], int]:
    return monomial_index(arity, d)


def _powers(point: np.ndarray, d: int, p: int) -> np.ndarray:
    """pw[i, k] = point_i^k mod p for k = 0..d."""
    x = np.asarray(point, dtype=np.int64) % p
    pw = np.ones((len(x), d + 1), dtype=np.int64)
    for k in range(1, d + 1):
        pw[:, k] = pw[:, k - 1] * x % p
    return pw


def _eval_exponents(pw: np.ndarray, exps: np.ndarray, p: int) -> np.ndarray:
    out = np.ones(exps.shape[0], dtype=np.int64)
    for i in range(exps.shape[1]):
        out = out * pw[i, exps[:, i]] % p
    return out


def evaluation_row(point: np.ndarray, d: int, p: int) -> np.ndarray:
    exps = exponent_table(len(point), d)
    return _eval_exponents(_powers(point, d, p), exps, p)


def gradient_rows(point: np.ndarray, d: int, p: int) -> np.ndarray:
    """G[i] is the functional f -> (df/dx_i)(P)."""
    n1 = len(point)
    exps = exponent_table(n1, d)
    pw = _powers(point, d, p)
    out = np.zeros((n1, exps.shape[0]), dtype=np.int64)
    for i in range(n1):
        e = exps.copy()
        live = e[:, i] > 0
        e[live, i] -= 1
        val = _eval_exponents(pw, e, p) * (exps[:, i] % p) % p
        out[i] = np.where(live, val, 0)
    return out


def derivative_rows(point: np.ndarray, directions: np.ndarray, d: int, p: int) -> np.ndarray:
    """Functionals f -> (D_v f)(P), one row per direction v."""
    g = gradient_rows(point, d, p)
    v = np.asarray(directions, dtype=np.int64).reshape(-1, len(point)) % p
    # n + 1 products below p^2 each: no int64 overflow for the supported primes
    return (v @ g) % p


@lru_cache(maxsize=64)
def multinomial_mod(arity: int, d: int, p: int) -> np.ndarray:
    exps = exponent_table(arity, d)
    fd = factorial(d)
    return np.array([fd // int(np.prod([factorial(int(a)) for a in e])) % p for e in exps], dtype=np.int64)


@lru_cache(maxsize=64)
def fischer_weights(arity: int, d: int, p: int) -> np.ndarray:
    """e! for each monomial x^e, the diagonal of the Fischer pairing."""
    exps = exponent_table(arity, d)
    return np.array([int(np.prod([factorial(int(a)) for a in e])) % p for e in exps], dtype=np.int64)


def tangent_power_rows(point: np.ndarray, directions: np.ndarray, d: int, p: int) -> np.ndarray:
    """Coefficient vectors of l^{d-1} m for l = point and m over ``directions``.

    The coefficient of x^e in l^{d-1} m is (multinomial(d; e) / d) D_m x^e (l).
    """
    rows = derivative_rows(point, directions, d, p)
    scale = multinomial_mod(len(point), d, p) * pow(d, -1, p) % p
    return rows * scale % p


def contraction_matrix(gram: np.ndarray, d: int, p: int) -> np.ndarray:
    """Matrix (R_d -> R_{d-2}) of the operator sum_ij A_ij d_i d_j."""
    a = np.asarray(gram, dtype=np.int64) % p
    n1 = a.shape[0]
    src = exponent_table(n1, d)
    idx = _index(n1, d - 2)
    out = np.zeros((len(idx), src.shape[0]), dtype=np.int64)
    for col, e in enumerate(src):
        e = [int(x) for x in e]
        for i in range(n1):
            if e[i] == 0:
                continue
            for j in range(i, n1):
                if a[i, j] == 0:
                    continue
                t = list(e)
                if i == j:
                    if t[i] < 2:
                        continue
                    c = t[i] * (t[i] - 1)
                    t[i] -= 2
                else:
                    if t[j] == 0:
                        continue
                    c = 2 * t[i] * t[j]
                    t[i] -= 1
                    t[j] -= 1
                r = idx[tuple(t)]
                out[r, col] = (out[r, col] + c * int(a[i, j])) % p
    return out


def multiplication_matrix(gram: np.ndarray, d: int, p: int) -> np.ndarray:
    """Rows: coefficient vectors of q * x^e for x^e of degree d - 2."""
    a = np.asarray(gram, dtype=np.int64) % p
    n1 = a.shape[0]
    idx = _index(n1, d)
    src = exponent_table(n1, d - 2)
    out = np.zeros((src.shape[0], len(idx)), dtype=np.int64)
    for row, e in enumerate(src):
        for i in range(n1):
            for j in range(i, n1):
                c = int(a[i, j]) * (1 if i == j else 2) % p
                if c == 0:
                    continue
                t = [int(x) for x in e]
                t[i] += 1
                t[j] += 1
                k = idx[tuple(t)]
                out[row, k] = (out[row, k] + c) % p
    return out


def harmonic_kernel(gram: np.ndarray, d: int, p: int) -> np.ndarray:
    """Rows spanning the kernel of sum_ij A_ij d_i d_j on R_d."""
    n1 = np.asarray(gram).shape[0]
    ncols = exponent_table(n1, d).shape[0]
    if d < 2:
        return np.eye(ncols, dtype=np.int64)
    return kernel_mod_p(contraction_matrix(gram, d, p), p, ncols)


def restriction_matrix(basis: np.ndarray, d: int, p: int) -> np.ndarray:
    """Matrix (R_d(x) -> R_d(y)) of f -> f(B y) for B of shape (n+1, m+1)."""
    b = np.asarray(basis, dtype=np.int64) % p
    n1, m1 = b.shape
    # products of the linear forms (row_i of B) . y, degree by degree
    prev = {tuple([0] * n1): np.ones(1, dtype=np.int64)}
    for k in range(1, d + 1):
        up = exponent_table(m1, k - 1)
        tgt = _index(m1, k)
        shift = np.array(
            [[tgt[tuple(int(v) for v in (e + np.eye(m1, dtype=np.int64)[j]))] for j in range(m1)] for e in up],
            dtype=np.int64,
        ).reshape(len(up), m1)
        cur = {}
        for e in exponent_table(n1, k):
            i = int(np.flatnonzero(e)[0])
            parent = list(int(x) for x in e)
            parent[i] -= 1
            vec = prev[tuple(parent)]
            out = np.zeros(len(tgt), dtype=np.int64)
            for j in range(m1):
                if b[i, j]:
                    np.add.at(out, shift[:, j], vec * b[i, j] % p)
            cur[tuple(int(x) for x in e)] = out % p
        prev = cur
    cols = [prev[tuple(int(x) for x in e)] for e in exponent_table(n1, d)]
    return np.array(cols, dtype=np.int64).T.reshape(-1, len(cols))


def section_rows(gram: np.ndarray, basis: np.ndarray, d: int, p: int) -> np.ndarray:
    """Functionals cutting out {f : f(B y) is a multiple of q(B y)} in R_d."""
    b = np.asarray(basis, dtype=np.int64) % p
    m1 = b.shape[1]
    # the annihilator of q_L R_{d-2} under the pairing <x^a, x^b> = a! delta_ab is ker q_L(d)
    restricted = (b.T @ (np.asarray(gram, dtype=np.int64) % p) % p) @ b % p
    k = harmonic_kernel(restricted, d, p)
    if k.size == 0:
        return np.zeros((0, exponent_table(b.shape[0], d).shape[0]), dtype=np.int64)
    k = k * fischer_weights(m1, d, p) % p
    r = restriction_matrix(b, d, p)
    return matmul_mod(k, r, p)


def rank_mod(rows: np.ndarray, p: int) -> int:
    if rows.size == 0:
        return 0
    e = ModpEchelon(rows.shape[1], p)
    for s in range(0, rows.shape[0], 128):
        e.add_block(rows[s : s + 128])
    return e.rank
