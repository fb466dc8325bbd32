"""Exact coefficient fields.

Rationals are plain :class:`fractions.Fraction` (or ``int``).  Gaussian
rationals and towers of quadratic extensions over them share one element
type, :class:`Alg`: an element at level ``k`` is ``a + b*t_k`` where
``t_k**2 = c_k`` lies in level ``k-1`` and ``a, b`` are lower-level
elements.  Level 0 is ``Q(i)`` itself (generator ``i`` with square ``-1``
over ``Q``).  Elements are normalized so that ``b != 0``; anything with a
vanishing top coordinate collapses to the level below, which keeps sums of
elements touching different generators sparse.

Prime fields live in :class:`Fp`.  Python ``complex`` is accepted wherever a
scalar is expected and acts as the opt-in floating backend.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional, Union

DEFAULT_DEPTH_CAP = 8


class FieldError(ArithmeticError):
    """Raised on incompatible field tags or illegal operations."""


class ExtensionOverflow(FieldError):
    """Raised when a square-root adjunction would exceed the tower depth cap."""


class Tower:
    """A chain Q(i) = K_0 < K_1 < ... < K_level, each step adjoining one square root."""

    __slots__ = ("parent", "square", "level", "_complex_gen", "_children")

    def __init__(self, parent: Optional["Tower"], square) -> None:
        self.parent = parent
        self.square = square
        self.level = 0 if parent is None else parent.level + 1
        self._complex_gen: Optional[complex] = None
        self._children: dict = {}

    def child(self, square) -> "Tower":
        """The extension by a root of ``square``; interned so equal chains are one object."""
        t = self._children.get(square)
        if t is None:
            t = self._children[square] = Tower(self, square)
        return t

    def is_ancestor_of(self, other: "Tower") -> bool:
        t: Optional[Tower] = other
        while t is not None and t.level >= self.level:
            if t is self:
                return True
            t = t.parent
        return False

    def generators(self) -> list:
        """Squares of the adjoined generators from level 1 upward."""
        out = []
        t: Optional[Tower] = self
        while t is not None and t.level > 0:
            out.append(t.square)
            t = t.parent
        return out[::-1]

    def gen(self) -> "Alg":
        return Alg(self, Fraction(0), Fraction(1))

    def complex_gen(self) -> complex:
        if self._complex_gen is None:
            self._complex_gen = complex(to_complex(self.square)) ** 0.5
        return self._complex_gen

    def __repr__(self) -> str:
        if self.level == 0:
            return "QI"
        return f"Tower(level={self.level}, gens={self.generators()!r})"


QI_TOWER = Tower(None, Fraction(-1))


def _tower_of(x) -> Optional[Tower]:
    return x.tower if isinstance(x, Alg) else None


def _join(s: Optional[Tower], t: Optional[Tower]) -> Optional[Tower]:
    if s is None:
        return t
    if t is None or s is t:
        return s
    if s.level >= t.level:
        if t.is_ancestor_of(s):
            return s
    elif s.is_ancestor_of(t):
        return t
    raise FieldError(f"field-tag mismatch: {s!r} vs {t!r}")


def _split(x, tower: Tower):
    """Coordinates (a, b) of x with respect to the top generator of ``tower``."""
    if isinstance(x, Alg) and x.tower is tower:
        return x.a, x.b
    return x, 0


def _make(tower: Tower, a, b):
    if b == 0:
        return a
    return Alg(tower, a, b)


class Alg:
    """Element of Q(i) or of a quadratic tower over it (see module docstring)."""

    __slots__ = ("tower", "a", "b")

    def __init__(self, tower: Tower, a, b) -> None:
        self.tower = tower
        self.a = a
        self.b = b

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, complex):
            return to_complex(self) + other
        if isinstance(other, Fp):
            return NotImplemented
        t = _join(self.tower, _tower_of(other))
        a1, b1 = _split(self, t)
        a2, b2 = _split(other, t)
        return _make(t, a1 + a2, b1 + b2)

    __radd__ = __add__

    def __neg__(self):
        return Alg(self.tower, -self.a, -self.b)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, complex):
            return to_complex(self) * other
        if isinstance(other, Fp):
            return NotImplemented
        t = _join(self.tower, _tower_of(other))
        a1, b1 = _split(self, t)
        a2, b2 = _split(other, t)
        if b2 == 0:
            return _make(t, a1 * a2, b1 * a2)
        if b1 == 0:
            return _make(t, a1 * a2, a1 * b2)
        return _make(t, a1 * a2 + b1 * b2 * t.square, a1 * b2 + b1 * a2)

    __rmul__ = __mul__

    def inverse(self):
        t = self.tower
        norm = self.a * self.a - self.b * self.b * t.square
        ninv = inv(norm)
        return _make(t, self.a * ninv, -self.b * ninv)

    def __truediv__(self, other):
        if isinstance(other, complex):
            return to_complex(self) / other
        return self * inv(other)

    def __rtruediv__(self, other):
        return other * self.inverse()

    def __pow__(self, e: int):
        return power(self, e)

    # comparison -----------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, Alg):
            return self.tower is other.tower and self.a == other.a and self.b == other.b
        return False

    def __ne__(self, other) -> bool:
        return not self.__eq__(other)

    def __hash__(self) -> int:
        return hash((id(self.tower), self.a, self.b))

    def __complex__(self) -> complex:
        return to_complex(self)

    def conj_top(self) -> "Alg":
        """Galois conjugate flipping the sign of the top generator."""
        return Alg(self.tower, self.a, -self.b)

    def __repr__(self) -> str:
        return format_scalar(self)


I = Alg(QI_TOWER, Fraction(0), Fraction(1))


class Fp:
    """Residue class modulo a prime ``p``."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int) -> None:
        self.v = v % p
        self.p = p

    def _coerce(self, other) -> int:
        if isinstance(other, Fp):
            if other.p != self.p:
                raise FieldError(f"field-tag mismatch: F_{self.p} vs F_{other.p}")
            return other.v
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p)
        raise FieldError(f"field-tag mismatch: F_{self.p} vs {type(other).__name__}")

    def __add__(self, other):
        return Fp(self.v + self._coerce(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return Fp(self.v - self._coerce(other), self.p)

    def __rsub__(self, other):
        return Fp(self._coerce(other) - self.v, self.p)

    def __neg__(self):
        return Fp(-self.v, self.p)

    def __mul__(self, other):
        return Fp(self.v * self._coerce(other), self.p)

    __rmul__ = __mul__

    def inverse(self) -> "Fp":
        if self.v == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return Fp(pow(self.v, -1, self.p), self.p)

    def __truediv__(self, other):
        return self * Fp(self._coerce(other), self.p).inverse()

    def __rtruediv__(self, other):
        return Fp(self._coerce(other), self.p) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return Fp(pow(self.v, e, self.p), self.p)

    def __eq__(self, other) -> bool:
        if isinstance(other, Fp):
            return self.p == other.p and self.v == other.v
        if isinstance(other, int):
            return self.v == other % self.p
        return False

    def __hash__(self) -> int:
        return hash((self.v, self.p))

    def __int__(self) -> int:
        return self.v

    def __repr__(self) -> str:
        return f"{self.v} (mod {self.p})"


Scalar = Union[int, Fraction, Alg, Fp, complex]


# generic helpers -----------------------------------------------------------

def qi(re, im=0):
    """Gaussian rational re + im*i (collapses to a Fraction when im == 0)."""
    re, im = Fraction(re), Fraction(im)
    return _make(QI_TOWER, re, im)


def is_zero(x) -> bool:
    return x == 0


def inv(x):
    if isinstance(x, Alg):
        return x.inverse()
    if isinstance(x, Fp):
        return x.inverse()
    if isinstance(x, complex):
        return 1 / x
    if x == 0:
        raise ZeroDivisionError("division by zero")
    return 1 / Fraction(x)


def power(x, e: int):
    if e < 0:
        return power(inv(x), -e)
    result = 1
    base = x
    while e:
        if e & 1:
            result = result * base
        e >>= 1
        if e:
            base = base * base
    return result


def field_tag(x) -> str:
    if isinstance(x, Fp):
        return f"Fp{x.p}"
    if isinstance(x, complex):
        return "CF"
    if isinstance(x, Alg):
        return "QI" if x.tower.level == 0 else "Tower"
    return "Q"


def is_exact(x) -> bool:
    return not isinstance(x, (complex, float))


def to_complex(x) -> complex:
    if isinstance(x, Alg):
        g = 1j if x.tower.level == 0 else x.tower.complex_gen()
        return to_complex(x.a) + to_complex(x.b) * g
    if isinstance(x, Fp):
        raise FieldError("no complex embedding of F_p")
    return complex(x)


def conjugate(x):
    """Complex conjugation on Q(i); only defined below any adjoined generator."""
    if isinstance(x, Alg):
        if x.tower.level != 0:
            raise FieldError("conjugation only defined on Q(i)")
        return Alg(QI_TOWER, x.a, -x.b)
    if isinstance(x, complex):
        return x.conjugate()
    return x


def re_im(x) -> tuple:
    """Real and imaginary parts of an element of Q(i) as Fractions."""
    if isinstance(x, Alg):
        if x.tower.level != 0:
            raise FieldError("re/im only defined on Q(i)")
        return Fraction(x.a), Fraction(x.b)
    return Fraction(x), Fraction(0)


def tower_of(*xs) -> Tower:
    t: Optional[Tower] = None
    for x in xs:
        t = _join(t, _tower_of(x))
    return t or QI_TOWER


# square roots -------------------------------------------------------------

def _sqrt_rational(c: Fraction) -> Optional[Fraction]:
    c = Fraction(c)
    if c < 0:
        return None
    n, d = c.numerator, c.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _sqrt_in(c, tower: Optional[Tower]):
    """A square root of c inside ``tower`` (None meaning Q), or None."""
    if tower is None:
        if isinstance(c, Alg):
            return None
        return _sqrt_rational(c)
    if c == 0:
        return Fraction(0)
    a, b = _split(c, tower)
    g = tower.square
    if b == 0:
        r = _sqrt_in(a, tower.parent)
        if r is not None:
            return r
        y = _sqrt_in(a * inv(g), tower.parent)
        if y is not None:
            return _make(tower, Fraction(0), y)
        return None
    s = _sqrt_in(a * a - g * b * b, tower.parent)
    if s is None:
        return None
    for sgn in (1, -1):
        x = _sqrt_in((a + sgn * s) * Fraction(1, 2), tower.parent)
        if x is not None and x != 0:
            y = b * inv(2 * x)
            return _make(tower, x, y)
    return None


def sqrt_in(c, tower: Optional[Tower] = None):
    """Square root of c found inside ``tower`` (default: c's own tower), or None."""
    t = _join(tower or QI_TOWER, _tower_of(c))
    return _sqrt_in(c, t)


def sqrt_adjoin(c, tower: Optional[Tower] = None, cap: int = DEFAULT_DEPTH_CAP):
    """Return ``(t, tower')`` with ``t*t == c`` exactly.

    An existing root inside ``tower`` is reused; otherwise a new level with
    generator square ``c`` is stacked on top.  Exceeding ``cap`` adjoined
    levels raises :class:`ExtensionOverflow`.
    """
    if c == 0:
        raise ZeroDivisionError("sqrt_adjoin requires c != 0")
    if isinstance(c, complex):
        return complex(c) ** 0.5, tower
    base = _join(tower or QI_TOWER, _tower_of(c))
    r = _sqrt_in(c, base)
    if r is not None:
        return r, base
    if base.level + 1 > cap:
        raise ExtensionOverflow(f"extension overflow: depth cap {cap} reached")
    new = base.child(c)
    return Alg(new, 0, 1), new


# formatting ---------------------------------------------------------------

def _fmt_frac(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(x) -> str:
    if isinstance(x, Alg):
        if x.tower.level == 0:
            re, im = Fraction(x.a), Fraction(x.b)
            if re == 0:
                return f"{_fmt_frac(im)}*i"
            return f"({_fmt_frac(re)}{'+' if im > 0 else '-'}{_fmt_frac(abs(im))}*i)"
        return f"({format_scalar(x.a)} + {format_scalar(x.b)}*sqrt({format_scalar(x.tower.square)}))"
    if isinstance(x, (Fraction, int)):
        return _fmt_frac(x)
    if isinstance(x, complex):
        return f"({x.real:.12g}{x.imag:+.12g}j)"
    return repr(x)
