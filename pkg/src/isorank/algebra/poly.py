"""Sparse homogeneous multivariate polynomials with dense exponent tuples."""

from __future__ import annotations

from itertools import combinations_with_replacement
from math import comb, factorial
from typing import Callable, Dict, Iterable, Iterator, Sequence, Tuple

from .fields import format_scalar, power

Exp = Tuple[int, ...]


class PolyError(ValueError):
    """Arity, degree or homogeneity violation."""


def monomials(arity: int, degree: int) -> list:
    """All exponent tuples of the given total degree, in descending lex order."""
    out = []
    for combo in combinations_with_replacement(range(arity), degree):
        e = [0] * arity
        for v in combo:
            e[v] += 1
        out.append(tuple(e))
    return out


def monomial_index(arity: int, degree: int) -> Dict[Exp, int]:
    return {e: k for k, e in enumerate(monomials(arity, degree))}


def multinomial(e: Sequence[int]) -> int:
    out = factorial(sum(e))
    for a in e:
        out //= factorial(a)
    return out


def dim_forms(n: int, d: int) -> int:
    """dim R_{n,d} = C(n+d, n); zero for negative degree."""
    return comb(n + d, n) if d >= 0 else 0


class MultiPoly:
    """Homogeneous polynomial in variables x_0..x_{arity-1}.

    Coefficients may be any scalar type from :mod:`isorank.algebra.fields`
    (or ``complex`` for the float backend); zero coefficients are never stored.
    """

    __slots__ = ("arity", "degree", "terms")

    def __init__(self, arity: int, degree: int, terms: Dict[Exp, object] | None = None) -> None:
        if arity < 1:
            raise PolyError("arity must be positive")
        if degree < 0:
            raise PolyError("degree must be non-negative")
        self.arity = arity
        self.degree = degree
        clean: Dict[Exp, object] = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != arity or sum(e) != degree or min(e) < 0:
                raise PolyError(f"exponent {e} does not fit arity {arity}, degree {degree}")
            if not c == 0:
                clean[e] = c
        self.terms = clean

    # constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, arity: int, degree: int) -> "MultiPoly":
        return cls(arity, degree)

    @classmethod
    def constant(cls, arity: int, c) -> "MultiPoly":
        return cls(arity, 0, {(0,) * arity: c})

    @classmethod
    def var(cls, arity: int, i: int, c=1) -> "MultiPoly":
        e = [0] * arity
        e[i] = 1
        return cls(arity, 1, {tuple(e): c})

    @classmethod
    def linear(cls, coeffs: Sequence) -> "MultiPoly":
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            e = [0] * n
            e[i] = 1
            terms[tuple(e)] = c
        return cls(n, 1, terms)

    @classmethod
    def monomial(cls, exp: Sequence[int], c=1) -> "MultiPoly":
        return cls(len(exp), sum(exp), {tuple(exp): c})

    @classmethod
    def from_vector(cls, arity: int, degree: int, vec: Sequence, basis: Sequence[Exp] | None = None) -> "MultiPoly":
        basis = basis if basis is not None else monomials(arity, degree)
        return cls(arity, degree, {e: c for e, c in zip(basis, vec)})

    # views ----------------------------------------------------------------
    def items(self) -> list:
        """Terms sorted in descending lex order of exponents (canonical order)."""
        return sorted(self.terms.items(), reverse=True)

    def coeff(self, e: Sequence[int]):
        return self.terms.get(tuple(e), 0)

    def to_vector(self, basis: Sequence[Exp] | None = None) -> list:
        basis = basis if basis is not None else monomials(self.arity, self.degree)
        return [self.terms.get(e, 0) for e in basis]

    def is_zero(self) -> bool:
        return not self.terms

    def map_coeffs(self, fn: Callable) -> "MultiPoly":
        return MultiPoly(self.arity, self.degree, {e: fn(c) for e, c in self.terms.items()})

    def __iter__(self) -> Iterator:
        return iter(self.items())

    def __len__(self) -> int:
        return len(self.terms)

    # arithmetic -----------------------------------------------------------
    def _check_same(self, other: "MultiPoly") -> None:
        if self.arity != other.arity:
            raise PolyError(f"arity mismatch: {self.arity} vs {other.arity}")
        if self.degree != other.degree and self.terms and other.terms:
            raise PolyError(f"inhomogeneous sum: degrees {self.degree} and {other.degree}")

    def __add__(self, other):
        if not isinstance(other, MultiPoly):
            if other == 0:
                return self
            return NotImplemented
        self._check_same(other)
        deg = self.degree if self.terms else other.degree
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + c if e in out else c
        return MultiPoly(self.arity, deg, out)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return self.map_coeffs(lambda c: -c)

    def __sub__(self, other):
        if not isinstance(other, MultiPoly):
            if other == 0:
                return self
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "MultiPoly":
        if c == 0:
            return MultiPoly(self.arity, self.degree)
        return MultiPoly(self.arity, self.degree, {e: c * v for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        if self.arity != other.arity:
            raise PolyError(f"arity mismatch: {self.arity} vs {other.arity}")
        out: Dict[Exp, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = c1 * c2
                out[e] = out[e] + v if e in out else v
        return MultiPoly(self.arity, self.degree + other.degree, out)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, c) -> "MultiPoly":
        from .fields import inv

        return self.scale(inv(c))

    def __pow__(self, k: int) -> "MultiPoly":
        if k < 0:
            raise PolyError("negative power")
        result = MultiPoly.constant(self.arity, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            if self.arity != other.arity:
                return False
            if not self.terms and not other.terms:
                return True
            return self.degree == other.degree and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.arity, self.degree, tuple(self.items())))

    # calculus and substitution -------------------------------------------
    def diff(self, i: int, times: int = 1) -> "MultiPoly":
        """Partial derivative with respect to x_i."""
        if times > self.degree:
            return MultiPoly(self.arity, 0)
        out = {}
        for e, c in self.terms.items():
            if e[i] >= times:
                f = 1
                for k in range(times):
                    f *= e[i] - k
                ne = list(e)
                ne[i] -= times
                out[tuple(ne)] = c * f
        return MultiPoly(self.arity, self.degree - times, out)

    def evaluate(self, point: Sequence):
        if len(point) != self.arity:
            raise PolyError(f"point has length {len(point)}, expected {self.arity}")
        total = 0
        for e, c in self.terms.items():
            v = c
            for x, a in zip(point, e):
                if a:
                    v = v * power(x, a)
            total = total + v
        return total

    def substitute(self, images: Sequence[Sequence]) -> "MultiPoly":
        """Linear change of variables x_i -> sum_j images[i][j] * y_j.

        ``images`` has one row per variable of ``self``; its row length is the
        arity of the result.
        """
        if len(images) != self.arity:
            raise PolyError(f"substitution needs {self.arity} rows, got {len(images)}")
        m = len(images[0])
        lin = [MultiPoly.linear(list(row)) for row in images]
        pow_cache: Dict[Tuple[int, int], MultiPoly] = {}

        def pw(i: int, a: int) -> MultiPoly:
            key = (i, a)
            if key not in pow_cache:
                pow_cache[key] = lin[i] ** a
            return pow_cache[key]

        result = MultiPoly(m, self.degree)
        for e, c in self.terms.items():
            term = MultiPoly.constant(m, c)
            for i, a in enumerate(e):
                if a:
                    term = term * pw(i, a)
            result = result + term
        return result

    def restrict(self, basis: Sequence[Sequence]) -> "MultiPoly":
        """Restriction to the span of ``basis`` vectors (parametrized by new variables)."""
        rows = [[b[i] for b in basis] for i in range(self.arity)]
        return self.substitute(rows)

    def __repr__(self) -> str:
        return f"MultiPoly({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.items():
            mono = "*".join(
                f"x{i}" if a == 1 else f"x{i}^{a}" for i, a in enumerate(e) if a
            )
            cs = format_scalar(c)
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def linear_power(coeffs: Sequence, d: int) -> MultiPoly:
    """(sum_i c_i x_i)^d expanded by the multinomial theorem."""
    n = len(coeffs)
    support = [i for i, c in enumerate(coeffs) if not c == 0]
    terms: Dict[Exp, object] = {}
    if not support:
        return MultiPoly(n, d)
    pows = {i: [power(coeffs[i], k) for k in range(d + 1)] for i in support}
    for sub in monomials(len(support), d):
        e = [0] * n
        v = multinomial(sub)
        for i, a in zip(support, sub):
            e[i] = a
            if a:
                v = pows[i][a] * v
        terms[tuple(e)] = v
    return MultiPoly(n, d, terms)


def poly_sum(polys: Iterable[MultiPoly], arity: int, degree: int) -> MultiPoly:
    acc: Dict[Exp, object] = {}
    for p in polys:
        for e, c in p.terms.items():
            acc[e] = acc[e] + c if e in acc else c
    return MultiPoly(arity, degree, acc)
