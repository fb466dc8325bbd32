"""Ternary harmonic forms through binary forms of twice the degree.

Coordinates ``u = -(x0 + i x1)/2``, ``v = (x0 - i x1)/2``, ``z = x2`` turn the
standard quadric into ``z^2 - 4uv``.  The linear map

    beta_d : u^a v^b z^(d-a-b)  ->  2^(d-a-b) d! s^(d+a-b) t^(d-a+b)

kills multiples of ``z^2 - 4uv`` and is a bijection from H_{2,d} onto binary
forms of degree 2d.  It sends the isotropic form ``p^2 u + q^2 v + p q z`` to
a multiple of ``(p s + q t)^(2d)``, so Waring decompositions of binary forms
(Sylvester's catalecticant algorithm) give isotropic decompositions.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import List, Optional, Sequence

import numpy as np

from .algebra import (
    Echelon,
    I,
    MultiPoly,
    Tower,
    inv,
    is_exact,
    linear_power,
    monomials,
    qi,
    solve,
    sqrt_adjoin,
    to_complex,
)
from .algebra import univariate as uni
from .apolarity import QuadraticFormSpec, is_harmonic
from .decompose import DecompositionError, IsotropicDecomposition, verify, waring_coefficients
from .numeric import NumericError, lstsq, polished_roots, snap_gaussian

SQUAREFREE_RETRIES = 50
COND_LIMIT = 1e12
RECHART_ATTEMPTS = 5


class TernaryError(ValueError):
    """Invalid input to the ternary/binary machinery."""


@dataclass(frozen=True)
class BinaryForm:
    """sum_j coeffs[j] * s^(D-j) * t^j."""

    coeffs: tuple

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", tuple(self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def to_poly(self) -> MultiPoly:
        d = self.degree
        return MultiPoly(2, d, {(d - j, j): c for j, c in enumerate(self.coeffs)})

    @classmethod
    def from_poly(cls, f: MultiPoly) -> "BinaryForm":
        if f.arity != 2:
            raise TernaryError("binary forms need arity 2")
        d = f.degree
        return cls(tuple(f.coeff((d - j, j)) for j in range(d + 1)))

    def scale(self, c) -> "BinaryForm":
        return BinaryForm(tuple(c * x for x in self.coeffs))

    def __str__(self) -> str:
        return str(self.to_poly()).replace("x0", "s").replace("x1", "t")


# coordinates ----------------------------------------------------------------

_HALF = Fraction(1, 2)
# x -> (u, v, z): x0 = v - u, x1 = i (u + v), x2 = z
_TO_UVZ = [[-1, 1, 0], [I, I, 0], [0, 0, 1]]
# (u, v, z) -> x
_FROM_UVZ = [[-_HALF, -_HALF * I, 0], [_HALF, -_HALF * I, 0], [0, 0, 1]]


def to_uvz(f: MultiPoly) -> MultiPoly:
    """Rewrite a ternary form in the variables (u, v, z)."""
    if f.arity != 3:
        raise TernaryError("to_uvz needs a ternary form")
    return f.substitute(_TO_UVZ)


def from_uvz(g: MultiPoly) -> MultiPoly:
    if g.arity != 3:
        raise TernaryError("from_uvz needs a ternary form")
    return g.substitute(_FROM_UVZ)


def uvz_point_to_x(coeffs: Sequence) -> list:
    """Coefficient vector in x of the linear form a u + b v + c z."""
    a, b, c = coeffs
    return [(b - a) * _HALF, -(a + b) * _HALF * I, c]


def binary_point_to_x(p, q) -> list:
    """The isotropic linear form p^2 u + q^2 v + p q z, in x coordinates."""
    return uvz_point_to_x([p * p, q * q, p * q])


# beta -----------------------------------------------------------------------

def beta(g: MultiPoly, d: Optional[int] = None) -> BinaryForm:
    """The linear map beta_d on a form written in (u, v, z)."""
    d = g.degree if d is None else d
    if g.arity != 3 or (g.degree != d and not g.is_zero()):
        raise TernaryError("beta needs a ternary form of degree d")
    out: list = [0] * (2 * d + 1)
    fd = factorial(d)
    for (a, b, c), x in g.terms.items():
        j = d - a + b
        out[j] = out[j] + x * (2**c * fd)
    return BinaryForm(tuple(out))


def h_dk(d: int, k: int) -> MultiPoly:
    """Divided-power harmonic h_{d,k} in (u, v, z); beta maps it onto s^(d+k) t^(d-k)."""
    if abs(k) > d:
        raise TernaryError("|k| must not exceed d")
    ak = abs(k)
    terms = {}
    for j in range((d - ak) // 2 + 1):
        a, b, c = (ak + k) // 2 + j, (ak - k) // 2 + j, d - ak - 2 * j
        terms[(a, b, c)] = Fraction(1, factorial(a) * factorial(b) * factorial(c))
    return MultiPoly(3, d, terms).scale(Fraction(1, comb(2 * d, k + d)))


def beta_inverse(b: BinaryForm) -> MultiPoly:
    """The unique harmonic (u, v, z)-form mapped to ``b`` by beta."""
    D = b.degree
    if D % 2:
        raise TernaryError("beta_inverse needs even degree")
    d = D // 2
    out = MultiPoly(3, d)
    for j, c in enumerate(b.coeffs):
        if c == 0:
            continue
        k = d - j
        h = h_dk(d, k)
        img = beta(h, d).coeffs[j]
        out = out + h.scale(c * inv(img))
    return out


# Sylvester / Comas-Seiguer -------------------------------------------------

def catalecticant(b: BinaryForm, k: int) -> list:
    """Hankel matrix (D-k+1) x (k+1) of the scaled coefficients c_j / C(D, j)."""
    D = b.degree
    beta_ = [c * Fraction(1, comb(D, j)) for j, c in enumerate(b.coeffs)]
    return [[beta_[m + j] for j in range(k + 1)] for m in range(D - k + 1)]


def _kernel(rows: list, ncols: int) -> list:
    e = Echelon(ncols)
    for r in rows:
        e.add(r)
    return e.kernel()


def binary_form_squarefree(g: Sequence) -> bool:
    """Square-freeness of sum g_j p^(r-j) q^j as a binary form."""
    r = len(g) - 1
    if r <= 1:
        return any(not x == 0 for x in g)
    if g[r] == 0 and g[r - 1] == 0:
        return False
    return uni.is_squarefree(list(g))


def _candidates(kernel: list, seed: int):
    """Kernel elements in a deterministic order: basis, differences, sums, then random."""
    for v in kernel:
        yield v
    m = len(kernel)
    for sign in (-1, 1):
        for i in range(m):
            for j in range(i + 1, m):
                yield [x + sign * y for x, y in zip(kernel[i], kernel[j])]
    rng = random.Random(seed)
    for _ in range(SQUAREFREE_RETRIES):
        cs = [rng.randint(-9, 9) or 1 for _ in range(m)]
        yield [sum(c * v[t] for c, v in zip(cs, kernel)) for t in range(len(kernel[0]))]


def _squarefree_in(kernel: list, seed: int) -> Optional[list]:
    if not kernel:
        return None
    if len(kernel) == 1:
        return kernel[0] if binary_form_squarefree(kernel[0]) else None
    for v in _candidates(kernel, seed):
        if binary_form_squarefree(v):
            return v
    return None


@dataclass
class BinaryRank:
    rank: int
    r0: int
    kernel_form: BinaryForm
    branch: str  # "low" (rank = r0) or "high" (rank = D - r0 + 2)


def binary_rank(b: BinaryForm, seed: int = 0) -> BinaryRank:
    """Waring rank of a binary form by Sylvester's catalecticant algorithm."""
    if b.is_zero():
        raise TernaryError("binary_rank of the zero form")
    if not all(is_exact(c) for c in b.coeffs):
        raise TernaryError("binary_rank needs exact coefficients")
    D = b.degree
    r0 = None
    ker: list = []
    for k in range(1, D + 2):
        ker = _kernel(catalecticant(b, k), k + 1)
        if ker:
            r0 = k
            break
    assert r0 is not None
    g = _squarefree_in(ker, seed)
    if g is not None:
        return BinaryRank(r0, r0, BinaryForm(tuple(g)), "low")
    r = D - r0 + 2
    ker = _kernel(catalecticant(b, r), r + 1)
    g = _squarefree_in(ker, seed)
    if g is None:
        raise DecompositionError("no square-free kernel element found")
    return BinaryRank(r, r0, BinaryForm(tuple(g)), "high")


@dataclass
class BinaryDecomposition:
    """sum coeff * (p s + q t)^D."""

    degree: int
    terms: List[tuple]
    exact: bool
    residual: float = 0.0
    tower: Optional[Tower] = None

    def recompose(self) -> BinaryForm:
        D = self.degree
        out = [0] * (D + 1)
        for c, (p, q) in self.terms:
            for j in range(D + 1):
                out[j] = out[j] + c * comb(D, j) * p ** (D - j) * q**j
        return BinaryForm(tuple(out))


def _exact_roots(g: list) -> Optional[tuple]:
    """All roots of g exactly (Gaussian snapping, binomials, quadratics), else None."""
    g = uni.trim(g)
    roots: list = []
    tower: Optional[Tower] = None
    nz = [j for j, c in enumerate(g) if not c == 0]
    if len(nz) == 2 and nz[0] == 0 and nz[1] == 4:
        w, tower = sqrt_adjoin(-g[0] * inv(g[4]), tower)
        r, tower = sqrt_adjoin(w, tower)
        return [r, -r, I * r, -I * r], tower
    if len(g) > 3:
        try:
            approx = polished_roots(g)
        except NumericError:
            approx = []
        for x in approx:
            if len(g) <= 3:
                break
            y = snap_gaussian(x)
            if y is not None and uni.evaluate(g, y) == 0:
                roots.append(y)
                g = uni.deflate(g, y)
    if len(g) > 3:
        return None
    rest, tower = uni.quadratic_roots(g, tower)
    return roots + rest, tower


def _solve_binary_coeffs(b: BinaryForm, points: list) -> list:
    D = b.degree
    rows = [[comb(D, j) * p ** (D - j) * q**j for (p, q) in points] for j in range(D + 1)]
    return solve(rows, list(b.coeffs), len(points))


def _transform(b: BinaryForm, m: list) -> BinaryForm:
    """b'(s, t) = b(m00 s + m01 t, m10 s + m11 t)."""
    return BinaryForm.from_poly(b.to_poly().substitute(m))


def binary_decompose(b: BinaryForm, info: Optional[BinaryRank] = None, seed: int = 0, _depth: int = 0) -> BinaryDecomposition:
    """Waring decomposition from the roots of the kernel form."""
    info = info or binary_rank(b, seed)
    g = list(info.kernel_form.coeffs)
    r = len(g) - 1
    D = b.degree
    infinite = g[r] == 0
    poly = uni.trim(g)
    ex = _exact_roots(poly)
    if ex is not None:
        roots, tower = ex
        points = [(1, x) for x in roots]
        if infinite:
            points.append((0, 1))
        coeffs = _solve_binary_coeffs(b, points)
        dec = BinaryDecomposition(D, list(zip(coeffs, points)), True, 0.0, tower)
        if dec.recompose().coeffs != b.coeffs:
            raise DecompositionError("exact binary recomposition failed")
        return dec
    roots = polished_roots(poly)
    points = [(1.0 + 0j, x) for x in roots]
    if infinite:
        points.append((0j, 1.0 + 0j))
    normed = []
    for p, q in points:
        s = (abs(p) ** 2 + abs(q) ** 2) ** 0.5
        normed.append((p / s, q / s))
    rows = [[comb(D, j) * p ** (D - j) * q**j for (p, q) in normed] for j in range(D + 1)]
    sol, res, cond = lstsq(rows, b.coeffs)
    if cond > COND_LIMIT:
        if _depth >= RECHART_ATTEMPTS:
            raise NumericError(f"ill-conditioned Vandermonde system (cond {cond:.2e})")
        rng = random.Random(seed * 7919 + _depth + 1)
        while True:
            m = [[rng.randint(-5, 5) for _ in range(2)] for _ in range(2)]
            det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
            if det != 0:
                break
        inner = binary_decompose(_transform(b, m), None, seed, _depth + 1)
        # b(s,t) = b'(M^{-1}(s,t)); a point (p', q') of b' becomes (p', q') M^{-1}
        mi = [[Fraction(m[1][1], det), Fraction(-m[0][1], det)], [Fraction(-m[1][0], det), Fraction(m[0][0], det)]]
        terms = []
        for c, (p, q) in inner.terms:
            terms.append((c, (p * mi[0][0] + q * mi[1][0], p * mi[0][1] + q * mi[1][1])))
        dec = BinaryDecomposition(D, terms, inner.exact, inner.residual, inner.tower)
        return dec
    scale = max(1.0, max(abs(to_complex(c)) for c in b.coeffs))
    return BinaryDecomposition(D, list(zip(sol, normed)), False, res / scale)


# ternary -------------------------------------------------------------------

@dataclass
class TernaryResult:
    decomposition: IsotropicDecomposition
    rank: BinaryRank
    binary: BinaryDecomposition
    exact: bool
    residual: float = 0.0
    notes: List[str] = field(default_factory=list)


def ternary_decompose(h: MultiPoly, seed: int = 0, tol: float = 1e-9) -> TernaryResult:
    """Minimal isotropic decomposition of a harmonic ternary form (standard quadric)."""
    w = QuadraticFormSpec.standard(2)
    if h.arity != 3:
        raise TernaryError("ternary_decompose needs arity 3")
    if h.is_zero():
        raise TernaryError("ternary_decompose of the zero form")
    if not is_harmonic(h, w):
        raise TernaryError("input is not harmonic for x0^2 + x1^2 + x2^2")
    d = h.degree
    b = beta(to_uvz(h), d)
    info = binary_rank(b, seed)
    bdec = binary_decompose(b, info, seed)
    points = [binary_point_to_x(p, q) for _, (p, q) in bdec.terms]
    if bdec.exact:
        coeffs = waring_coefficients(h, points)
        dec = IsotropicDecomposition(d, 3, list(zip(coeffs, points)), w)
        residual = 0.0
    else:
        basis = monomials(3, d)
        cols = [linear_power(p, d).to_vector(basis) for p in points]
        rows = [[cols[j][i] for j in range(len(points))] for i in range(len(basis))]
        coeffs, res, _ = lstsq(rows, h.to_vector(basis))
        dec = IsotropicDecomposition(d, 3, list(zip(coeffs, points)), w)
        residual = res
    rep = verify(dec, h, tol=max(tol, 1e-9))
    if not rep.valid:
        raise DecompositionError("ternary decomposition failed verification: " + "; ".join(rep.failures))
    return TernaryResult(dec, info, bdec, bdec.exact, rep.residual_norm)


def irk_ternary(h: MultiPoly, seed: int = 0) -> int:
    """Isotropic rank of a harmonic ternary form (equals the binary Waring rank)."""
    if not is_harmonic(h, QuadraticFormSpec.standard(2)):
        raise TernaryError("input is not harmonic")
    return binary_rank(beta(to_uvz(h), h.degree), seed).rank


__all__ = [
    "BinaryForm",
    "BinaryRank",
    "BinaryDecomposition",
    "TernaryResult",
    "TernaryError",
    "to_uvz",
    "from_uvz",
    "uvz_point_to_x",
    "binary_point_to_x",
    "beta",
    "beta_inverse",
    "h_dk",
    "catalecticant",
    "binary_form_squarefree",
    "binary_rank",
    "binary_decompose",
    "ternary_decompose",
    "irk_ternary",
]
