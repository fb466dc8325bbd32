"""Quadrics over F_p: presentations, square roots, and seeded point sampling."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Union

import numpy as np

from ..algebra.modp import ModpEchelon, inv_mod, matmul_mod

PRIMES = (32003, 65003, 104729)
DEFAULT_PRIME = PRIMES[0]
SAMPLE_ATTEMPTS = 200


class PresentationError(ValueError):
    """The requested quadric presentation has no usable points over F_p."""


class QuadricPointError(RuntimeError):
    """Point sampling on a quadric section did not succeed."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


def legendre(a: int, p: int) -> int:
    """Euler's criterion: 1, -1 or 0."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def sqrt_mod(a: int, p: int) -> Optional[int]:
    """A square root of a mod an odd prime p (Tonelli-Shanks), or None."""
    a %= p
    if a == 0:
        return 0
    if legendre(a, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while legendre(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


@dataclass
class QuadricFp:
    """q(x) = x^T A x over F_p with A symmetric (entries are residues)."""

    gram: np.ndarray
    p: int
    name: str = "custom"

    def __post_init__(self) -> None:
        self.gram = np.mod(np.asarray(self.gram, dtype=np.int64), self.p)
        if self.gram.ndim != 2 or self.gram.shape[0] != self.gram.shape[1]:
            raise ValueError("Gram matrix must be square")
        if not np.array_equal(self.gram, self.gram.T):
            raise ValueError("Gram matrix must be symmetric")

    @property
    def n(self) -> int:
        return self.gram.shape[0] - 1

    def value(self, x: Sequence[int]) -> int:
        x = np.asarray(x, dtype=np.int64) % self.p
        return int(x @ (self.gram @ x % self.p) % self.p)

    def bilinear(self, x: Sequence[int], y: Sequence[int]) -> int:
        x = np.asarray(x, dtype=np.int64) % self.p
        y = np.asarray(y, dtype=np.int64) % self.p
        return int(x @ (self.gram @ y % self.p) % self.p)

    def is_nondegenerate(self) -> bool:
        e = ModpEchelon(self.gram.shape[1], self.p)
        e.add_block(self.gram)
        return e.rank == self.gram.shape[0]

    def dual_gram(self) -> np.ndarray:
        """A^{-1} mod p, the Gram of the dual operator."""
        n1 = self.gram.shape[0]
        e = ModpEchelon(2 * n1, self.p)
        e.add_block(np.hstack([self.gram, np.eye(n1, dtype=np.int64)]))
        if sorted(e.piv) != list(range(n1)):
            raise ValueError("degenerate quadric has no dual")
        order = np.argsort(e.piv)
        return e.rows[order][:, n1:]

    def restrict(self, basis: np.ndarray) -> "QuadricFp":
        """Gram of q on the span of the columns of ``basis``."""
        b = np.asarray(basis, dtype=np.int64) % self.p
        g = matmul_mod(matmul_mod(b.T, self.gram, self.p), b, self.p)
        return QuadricFp(g, self.p, self.name + "|section")

    def tangent_basis(self, point: Sequence[int]) -> np.ndarray:
        """Basis (rows) of {v : B(P, v) = 0}."""
        row = (self.gram @ (np.asarray(point, dtype=np.int64) % self.p)) % self.p
        e = ModpEchelon(len(row), self.p)
        e.add_block(row[None, :])
        return e.kernel()


def _half(p: int) -> int:
    return inv_mod(2, p)


def presentation(name: str, n: int, p: int, seed: int = 0) -> QuadricFp:
    """Named quadrics on P^n.

    standard    x_0^2 + ... + x_n^2
    hyperbolic  x_0 x_1 + x_2^2 + ... + x_n^2
    appendix    x_{n-1} x_n + x_0^2 + ... + x_{n-2}^2
    random      seeded random nondegenerate symmetric matrix
    """
    if n < 1:
        raise ValueError("n >= 1 required")
    g = np.zeros((n + 1, n + 1), dtype=np.int64)
    if name == "standard":
        np.fill_diagonal(g, 1)
    elif name == "hyperbolic":
        np.fill_diagonal(g, 1)
        g[0, 0] = g[1, 1] = 0
        g[0, 1] = g[1, 0] = _half(p)
    elif name == "appendix":
        np.fill_diagonal(g, 1)
        g[n - 1, n - 1] = g[n, n] = 0
        g[n - 1, n] = g[n, n - 1] = _half(p)
    elif name == "random":
        rng = np.random.default_rng([seed, n, p, 7])
        while True:
            a = rng.integers(0, p, size=(n + 1, n + 1))
            g = np.triu(a) + np.triu(a, 1).T
            quad = QuadricFp(g, p, "random")
            if quad.is_nondegenerate():
                return quad
    else:
        raise ValueError(f"unknown quadric presentation {name!r}")
    return QuadricFp(g, p, name)


def _nonzero(rng: np.random.Generator, p: int) -> int:
    return int(rng.integers(1, p))


def random_quadric_point(n: int, p: int = DEFAULT_PRIME, seed: int = 0, presentation_name: str = "hyperbolic") -> List[int]:
    """Seeded point with q(P) = 0 for the standard or hyperbolic presentation.

    The standard form is parametrised through a square root of -1, so it is
    refused with :class:`PresentationError` when -1 is a non-residue mod p.
    """
    rng = np.random.default_rng([seed, n, p])
    if presentation_name == "hyperbolic":
        if n == 1:
            pt = [_nonzero(rng, p), 0] if rng.integers(2) else [0, _nonzero(rng, p)]
            return pt
        tail = [int(v) for v in rng.integers(0, p, size=n - 1)]
        x1 = _nonzero(rng, p)
        x0 = -sum(t * t for t in tail) * inv_mod(x1, p) % p
        return [x0, x1] + tail
    if presentation_name == "standard":
        i = sqrt_mod(-1, p)
        if i is None:
            raise PresentationError(f"-1 is not a square mod {p}; use the hyperbolic presentation")
        tail = [int(v) for v in rng.integers(0, p, size=n - 1)]
        s = sum(t * t for t in tail) % p
        u = _nonzero(rng, p)
        v = -s * inv_mod(u, p) % p
        h = _half(p)
        x0 = (u + v) * h % p
        x1 = (u - v) * h * inv_mod(i, p) % p
        return [x0, x1] + tail
    raise PresentationError(f"no direct parametrisation for {presentation_name!r}")


def sample_point(quad: QuadricFp, rng: np.random.Generator, basis: Optional[np.ndarray] = None) -> np.ndarray:
    """Random F_p-point of Q (or of Q restricted to the column span of ``basis``).

    Intersects random lines with the quadric; a line whose discriminant is a
    non-residue is discarded.
    """
    p = quad.p
    sub = quad if basis is None else quad.restrict(basis)
    m = sub.gram.shape[0]
    for _ in range(SAMPLE_ATTEMPTS):
        a = rng.integers(0, p, size=m)
        b = rng.integers(0, p, size=m)
        qa, qb, ab = sub.value(a), sub.value(b), sub.bilinear(a, b)
        if qa == 0:
            y = a
        elif qb == 0:
            if ab == 0:
                continue
            # q(a + t b) = qa + 2 t ab
            y = (a + (-qa * inv_mod(2 * ab, p) % p) * b) % p
        else:
            s = sqrt_mod(ab * ab - qa * qb, p)
            if s is None:
                continue
            t = (-ab + (s if rng.integers(2) else -s)) * inv_mod(qb, p) % p
            y = (a + t * b) % p
        if not np.any(y):
            continue
        x = y if basis is None else matmul_mod(np.asarray(basis) % p, y[:, None], p)[:, 0]
        if np.any(x) and quad.value(x) == 0:
            return np.asarray(x, dtype=np.int64)
    raise QuadricPointError(f"no point found on the quadric section after {SAMPLE_ATTEMPTS} lines")


def section_basis(forms: Union[np.ndarray, Sequence[Sequence[int]]], p: int, ncols: int) -> np.ndarray:
    """Columns spanning {x : l(x) = 0 for every form l}."""
    e = ModpEchelon(ncols, p)
    e.add_block(np.asarray(forms, dtype=np.int64).reshape(-1, ncols))
    return e.kernel().T
