"""Harmonic monomials l_0^a_0 ... l_r^a_r in pairwise orthogonal linear forms.

Waring points are taken on a grid ``l_0 + sum_j t_j l_j`` with ``t_j`` running
over a set T_j of size a_j + 1 (l_0 carries a minimal exponent).  The grid's
ideal lies in the apolar ideal of the monomial as soon as the first a_0
elementary symmetric functions of every T_j vanish: roots of unity always
qualify, and for a_0 = 1 any set with zero sum does.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import List, Optional, Sequence

from .algebra import (
    DEFAULT_DEPTH_CAP,
    ExtensionOverflow,
    I,
    MultiPoly,
    Tower,
    inv,
    linear_power,
    monomials,
    rank,
    sqrt_adjoin,
    to_complex,
)
from .apolarity import QuadraticFormSpec
from .decompose import (
    DEFAULT_TOL,
    DecompositionError,
    IsotropicDecomposition,
    double_from_waring,
    verify,
    waring_coefficients,
)
from .numeric import lstsq


class MonomialError(ValueError):
    """Invalid or non-harmonic monomial input."""


@dataclass
class MonomialSpec:
    forms: List[list]
    exponents: List[int]
    form_spec: QuadraticFormSpec

    def __post_init__(self) -> None:
        self.forms = [list(f) for f in self.forms]
        self.exponents = [int(a) for a in self.exponents]
        if not self.forms or len(self.forms) != len(self.exponents):
            raise MonomialError("need one exponent per linear form")
        if any(a < 1 for a in self.exponents):
            raise MonomialError("exponents must be positive")
        n1 = self.form_spec.arity
        if any(len(f) != n1 for f in self.forms):
            raise MonomialError(f"linear forms must have {n1} coefficients")
        if rank(self.forms, n1) != len(self.forms):
            raise MonomialError("linear forms must be linearly independent")

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    def polynomial(self) -> MultiPoly:
        out = MultiPoly.constant(self.form_spec.arity, 1)
        for f, a in zip(self.forms, self.exponents):
            out = out * MultiPoly.linear(f) ** a
        return out

    def norms(self) -> list:
        return [self.form_spec.bilinear(f, f) for f in self.forms]


@dataclass
class HarmonicCheck:
    harmonic: bool
    violations: List[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.harmonic


def is_harmonic_monomial(m: MonomialSpec) -> HarmonicCheck:
    """Pairwise orthogonal forms, and isotropic forms wherever the exponent exceeds 1."""
    w = m.form_spec
    bad: List[str] = []
    for i, (f, a) in enumerate(zip(m.forms, m.exponents)):
        if a > 1 and not w.bilinear(f, f) == 0:
            bad.append(f"form {i} has exponent {a} but is not isotropic")
        for j in range(i):
            if not w.bilinear(f, m.forms[j]) == 0:
                bad.append(f"forms {j} and {i} are not orthogonal")
    return HarmonicCheck(not bad, bad)


@dataclass
class MonomialRank:
    waring_rank: int
    isotropic_rank: int
    non_isotropic: int


def monomial_irk(m: MonomialSpec) -> MonomialRank:
    chk = is_harmonic_monomial(m)
    if not chk:
        raise MonomialError("monomial is not harmonic: " + "; ".join(chk.violations))
    exps = list(m.exponents)
    exps.remove(min(exps))
    waring = prod(a + 1 for a in exps)
    ni = sum(1 for x in m.norms() if not x == 0)
    return MonomialRank(waring, 2 * waring if ni == 1 else waring, ni)


def zero_sum_set(size: int) -> List[Fraction]:
    """Distinct integers with zero sum: -k..k, or the odd numbers +-1, +-3, ..."""
    if size == 1:
        return [Fraction(0)]
    if size % 2:
        k = size // 2
        return [Fraction(t) for t in range(-k, k + 1)]
    return [Fraction(s * (2 * t + 1)) for t in range(size // 2) for s in (1, -1)]


def roots_of_unity(order: int, tower: Optional[Tower] = None, cap: int = DEFAULT_DEPTH_CAP) -> tuple:
    """All roots of x^order = 1: exact for orders dividing 4, 6 or 8, complex otherwise."""
    if order in (1, 2, 4):
        base = [Fraction(1), Fraction(-1), I, -I]
        return base[:order], tower, True
    if order in (3, 6):
        s, tower = sqrt_adjoin(Fraction(-3), tower, cap=cap)
        w = (s - 1) * Fraction(1, 2)
        r3 = [Fraction(1), w, w * w]
        return (r3 if order == 3 else r3 + [-x for x in r3]), tower, True
    if order == 8:
        s, tower = sqrt_adjoin(Fraction(2), tower, cap=cap)
        z = (1 + I) * inv(s)
        out, x = [], Fraction(1)
        for _ in range(8):
            out.append(x)
            x = x * z
        return out, tower, True
    import cmath

    return [cmath.exp(2j * cmath.pi * k / order) for k in range(order)], tower, False


def _grid(sets: Sequence[Sequence]) -> List[list]:
    out: List[list] = [[]]
    for s in sets:
        out = [g + [t] for g in out for t in s]
    return out


def waring_points(m: MonomialSpec, cap: int = DEFAULT_DEPTH_CAP) -> tuple:
    """Grid points realising the Waring rank; isotropic unless exactly one form is not.

    Returns (points, exact).
    """
    norms = m.norms()
    ni = [i for i, x in enumerate(norms) if not x == 0]
    order = sorted(range(len(m.forms)), key=lambda i: (m.exponents[i], i))
    i0 = ni[0] if ni else order[0]
    a0 = m.exponents[i0]
    rest = [i for i in range(len(m.forms)) if i != i0]
    tower: Optional[Tower] = None
    exact = True
    sets = []
    others = [i for i in ni if i != i0]
    for i in rest:
        size = m.exponents[i] + 1
        if i in others:
            # +-c with c^2 N_i = -N_0 / k keeps every grid point isotropic
            c, tower = sqrt_adjoin(-norms[i0] * inv(len(others) * norms[i]), tower, cap=cap)
            sets.append([c, -c])
        elif a0 == 1:
            sets.append(zero_sum_set(size))
        else:
            rts, tower, ok = roots_of_unity(size, tower, cap=cap)
            exact = exact and ok
            sets.append(rts)
    pts = []
    for g in _grid(sets):
        v = list(m.forms[i0])
        for i, t in zip(rest, g):
            v = [x + t * y for x, y in zip(v, m.forms[i])]
        pts.append(v if exact else [to_complex(x) for x in v])
    return pts, exact


def monomial_decompose(m: MonomialSpec, seed: int = 0, tol: float = DEFAULT_TOL, cap: int = DEFAULT_DEPTH_CAP) -> IsotropicDecomposition:
    """Verified isotropic decomposition of size ``monomial_irk(m).isotropic_rank``."""
    info = monomial_irk(m)
    target = m.polynomial()
    d, n1, w = m.degree, m.form_spec.arity, m.form_spec
    pts, exact = waring_points(m, cap=cap)
    if info.non_isotropic == 1:
        try:
            dec = double_from_waring(target, pts, w, rng_seed=seed, depth_cap=cap)
        except ExtensionOverflow:
            dec = double_from_waring(target, pts, w, rng_seed=seed, numeric=True, tol=tol)
    elif exact:
        coeffs = waring_coefficients(target, pts)
        dec = IsotropicDecomposition(d, n1, list(zip(coeffs, pts)), w)
    else:
        basis = monomials(n1, d)
        cols = [linear_power(p, d).to_vector(basis) for p in pts]
        rows = [[cols[j][i] for j in range(len(pts))] for i in range(len(basis))]
        coeffs, _, _ = lstsq(rows, target.to_vector(basis))
        dec = IsotropicDecomposition(d, n1, list(zip(coeffs, pts)), w)
    rep = verify(dec, target, tol=tol)
    if not rep.valid:
        raise DecompositionError("monomial decomposition failed verification: " + "; ".join(rep.failures))
    if dec.size() != info.isotropic_rank:
        raise DecompositionError(f"expected {info.isotropic_rank} terms, produced {dec.size()}")
    return dec


__all__ = [
    "MonomialError",
    "MonomialSpec",
    "HarmonicCheck",
    "MonomialRank",
    "is_harmonic_monomial",
    "monomial_irk",
    "zero_sum_set",
    "roots_of_unity",
    "waring_points",
    "monomial_decompose",
]
