"""Apolar action, harmonic forms and tangent spaces of isotropic Veronese varieties.

Both polynomial rings are modelled by :class:`MultiPoly`: ``R`` holds forms in
``x_i`` and ``D`` holds differential operators in ``alpha_i``.  A monomial
``alpha^a`` acts on ``x^e`` as the iterated partial derivative
``prod_i d^{a_i}/dx_i^{a_i}`` (no extra combinatorial prefactor).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import List, Sequence

from .algebra import Echelon, MultiPoly, determinant, inv, monomials, solve

LinearForm = Sequence


class ApolarityError(ValueError):
    """Invalid input to an apolarity operation."""


@dataclass(frozen=True)
class QuadraticFormSpec:
    """A quadratic form omega = sum g_ij alpha_i alpha_j given by its Gram matrix.

    The same matrix measures isotropy and orthogonality of linear forms.  The
    dual quadric q on the R side uses the inverse Gram matrix, so that
    ``R_d = q R_{d-2} + H_d`` is a direct sum.
    """

    gram: tuple

    def __post_init__(self) -> None:
        g = tuple(tuple(r) for r in self.gram)
        object.__setattr__(self, "gram", g)
        n1 = len(g)
        if any(len(r) != n1 for r in g):
            raise ApolarityError("Gram matrix must be square")
        for i in range(n1):
            for j in range(i):
                if not g[i][j] == g[j][i]:
                    raise ApolarityError("Gram matrix must be symmetric")

    @property
    def arity(self) -> int:
        return len(self.gram)

    @property
    def n(self) -> int:
        return len(self.gram) - 1

    @classmethod
    def standard(cls, n: int) -> "QuadraticFormSpec":
        """omega = alpha_0^2 + ... + alpha_n^2."""
        return cls(tuple(tuple(Fraction(int(i == j)) for j in range(n + 1)) for i in range(n + 1)))

    @classmethod
    def hyperbolic(cls, n: int, k: int) -> "QuadraticFormSpec":
        """Squares alpha_0^2..alpha_{s-1}^2 followed by k products alpha_{s+2j} alpha_{s+2j+1}."""
        s = n + 1 - 2 * k
        if k < 0 or s < 0:
            raise ApolarityError(f"cannot fit {k} hyperbolic pairs in {n + 1} variables")
        g = [[Fraction(0)] * (n + 1) for _ in range(n + 1)]
        for i in range(s):
            g[i][i] = Fraction(1)
        for j in range(k):
            a, b = s + 2 * j, s + 2 * j + 1
            g[a][b] = g[b][a] = Fraction(1, 2)
        return cls(tuple(tuple(r) for r in g))

    def is_nondegenerate(self) -> bool:
        return not determinant(self.gram) == 0

    def require_nondegenerate(self) -> None:
        if not self.is_nondegenerate():
            raise ApolarityError("degenerate quadratic form")

    def bilinear(self, u: Sequence, v: Sequence):
        s = 0
        for i, ui in enumerate(u):
            if ui == 0:
                continue
            row = self.gram[i]
            for j, vj in enumerate(v):
                g = row[j]
                if not g == 0 and not vj == 0:
                    s = s + g * ui * vj
        return s

    def omega(self) -> MultiPoly:
        """omega as an element of D_{n,2}."""
        n1 = self.arity
        terms = {}
        for i in range(n1):
            for j in range(i, n1):
                g = self.gram[i][j]
                if g == 0:
                    continue
                e = [0] * n1
                e[i] += 1
                e[j] += 1
                terms[tuple(e)] = g if i == j else 2 * g
        return MultiPoly(n1, 2, terms)

    def dual_gram(self) -> list:
        n1 = self.arity
        self.require_nondegenerate()
        cols = []
        for j in range(n1):
            e = [Fraction(int(i == j)) for i in range(n1)]
            cols.append(solve(self.gram, e, n1))
        return [[cols[j][i] for j in range(n1)] for i in range(n1)]

    def quadric(self) -> MultiPoly:
        """The dual quadric q_n in R_{n,2}."""
        h = self.dual_gram()
        n1 = self.arity
        terms = {}
        for i in range(n1):
            for j in range(i, n1):
                c = h[i][j]
                if c == 0:
                    continue
                e = [0] * n1
                e[i] += 1
                e[j] += 1
                terms[tuple(e)] = c if i == j else 2 * c
        return MultiPoly(n1, 2, terms)


def _falling(e: int, a: int) -> int:
    out = 1
    for k in range(a):
        out *= e - k
    return out


def contract(phi: MultiPoly, f: MultiPoly) -> MultiPoly:
    """phi o f: phi acts on f as a constant-coefficient differential operator."""
    if phi.arity != f.arity:
        raise ApolarityError(f"arity mismatch: {phi.arity} vs {f.arity}")
    if phi.degree > f.degree:
        raise ApolarityError(f"cannot contract degree {phi.degree} into degree {f.degree}")
    out = {}
    for a, c in phi.terms.items():
        for e, v in f.terms.items():
            if all(ei >= ai for ei, ai in zip(e, a)):
                fac = 1
                for ei, ai in zip(e, a):
                    if ai:
                        fac *= _falling(ei, ai)
                ne = tuple(ei - ai for ei, ai in zip(e, a))
                val = c * v * fac
                out[ne] = out[ne] + val if ne in out else val
    return MultiPoly(f.arity, f.degree - phi.degree, out)


def _check_arity(f: MultiPoly, w: QuadraticFormSpec) -> None:
    if f.arity != w.arity:
        raise ApolarityError(f"arity mismatch: polynomial {f.arity}, form {w.arity}")


def is_harmonic(f: MultiPoly, w: QuadraticFormSpec) -> bool:
    _check_arity(f, w)
    if f.degree < 2:
        return True
    return contract(w.omega(), f).is_zero()


def is_isotropic(l: LinearForm, w: QuadraticFormSpec) -> bool:
    if len(l) != w.arity:
        raise ApolarityError("arity mismatch")
    return w.bilinear(l, l) == 0


def is_orthogonal(l1: LinearForm, l2: LinearForm, w: QuadraticFormSpec) -> bool:
    if len(l1) != w.arity or len(l2) != w.arity:
        raise ApolarityError("arity mismatch")
    return w.bilinear(l1, l2) == 0


def _contraction_matrix(phi: MultiPoly, n1: int, d: int) -> tuple:
    """Sparse rows of f -> phi o f from R_d to R_{d-k}, indexed by target monomials."""
    src = monomials(n1, d)
    tgt_index = {e: i for i, e in enumerate(monomials(n1, d - phi.degree))}
    rows = [dict() for _ in tgt_index]
    for j, e in enumerate(src):
        img = contract(phi, MultiPoly.monomial(e))
        for te, v in img.terms.items():
            rows[tgt_index[te]][j] = v
    return rows, src


def harmonic_basis(n: int, d: int, w: QuadraticFormSpec | None = None) -> List[MultiPoly]:
    """A basis of H_{n,d} = ker(omega o -) : R_{n,d} -> R_{n,d-2}."""
    w = w or QuadraticFormSpec.standard(n)
    if w.n != n:
        raise ApolarityError("form arity does not match n")
    w.require_nondegenerate()
    n1 = n + 1
    src = monomials(n1, d)
    if d < 2:
        return [MultiPoly.monomial(e) for e in src]
    rows, src = _contraction_matrix(w.omega(), n1, d)
    ech = Echelon(len(src))
    for r in rows:
        ech.add(r)
    return [MultiPoly.from_vector(n1, d, v, src) for v in ech.kernel()]


def harmonic_dimension(n: int, d: int) -> int:
    """f_{n,d} = C(n+d, n) - C(n+d-2, n)."""
    if d < 0:
        return 0
    return comb(n + d, n) - (comb(n + d - 2, n) if d >= 2 else 0)


def harmonic_project(f: MultiPoly, w: QuadraticFormSpec) -> tuple:
    """Split f = q*g + h with h harmonic; returns (h, g)."""
    _check_arity(f, w)
    w.require_nondegenerate()
    n1, d = f.arity, f.degree
    if d < 2:
        return f, MultiPoly(n1, max(d - 2, 0))
    omega, q = w.omega(), w.quadric()
    basis = monomials(n1, d - 2)
    idx = {e: i for i, e in enumerate(basis)}
    # T: g -> omega o (q g) is an automorphism of R_{d-2}
    cols = [contract(omega, q * MultiPoly.monomial(e)) for e in basis]
    rows = [dict() for _ in basis]
    for j, img in enumerate(cols):
        for e, v in img.terms.items():
            rows[idx[e]][j] = v
    rhs = contract(omega, f).to_vector(basis)
    gvec = solve(rows, rhs, len(basis))
    g = MultiPoly.from_vector(n1, d - 2, gvec, basis)
    h = f - q * g
    return h, g


def perp(span: Sequence[MultiPoly], n: int, d: int) -> List[MultiPoly]:
    """Basis of {phi in D_{n,d} : phi o f = 0 for all f in span}."""
    n1 = n + 1
    basis = monomials(n1, d)
    ech = Echelon(len(basis))
    for f in span:
        if f.arity != n1 or (f.degree != d and not f.is_zero()):
            raise ApolarityError("perp inputs must share arity n+1 and degree d")
        row = {}
        for j, e in enumerate(basis):
            c = f.terms.get(e)
            if c is not None:
                fac = 1
                for a in e:
                    for k in range(2, a + 1):
                        fac *= k
                row[j] = c * fac
        ech.add(row)
    return [MultiPoly.from_vector(n1, d, v, basis) for v in ech.kernel()]


def orthogonal_complement(l: LinearForm, w: QuadraticFormSpec) -> List[list]:
    """Basis of l^perp = {m : omega o (l m) = 0}; l itself first when isotropic."""
    n1 = w.arity
    grow = [w.bilinear(l, [int(i == j) for i in range(n1)]) for j in range(n1)]
    ech = Echelon(n1)
    ech.add(grow)
    kern = ech.kernel()
    out: List[list] = []
    span = Echelon(n1)
    if is_isotropic(l, w):
        span.add(list(l))
        out.append(list(l))
    for v in kern:
        if span.add(v) is not None:
            out.append(v)
    return out


def tangent_space(l: LinearForm, d: int, w: QuadraticFormSpec) -> List[MultiPoly]:
    """Basis {l^{d-1} m : m in l^perp} of the tangent space to Isot_{n,d} at l^d."""
    if d < 1:
        raise ApolarityError("degree must be positive")
    if not is_isotropic(l, w):
        raise ApolarityError("tangent_space needs an isotropic linear form")
    lp = MultiPoly.linear(list(l)) ** (d - 1)
    return [lp * MultiPoly.linear(m) for m in orthogonal_complement(l, w)]


def normalize(v: Sequence) -> list:
    """Scale a vector so its first nonzero entry is 1."""
    for x in v:
        if not x == 0:
            s = inv(x)
            return [y * s for y in v]
    return list(v)


__all__ = [
    "ApolarityError",
    "QuadraticFormSpec",
    "contract",
    "is_harmonic",
    "is_isotropic",
    "is_orthogonal",
    "harmonic_basis",
    "harmonic_dimension",
    "harmonic_project",
    "perp",
    "orthogonal_complement",
    "tangent_space",
    "normalize",
]
