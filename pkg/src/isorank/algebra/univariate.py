"""Dense univariate polynomials over exact fields (ascending coefficient lists)."""

from __future__ import annotations

from typing import List, Sequence, Tuple

from .fields import inv, sqrt_adjoin


def trim(a: Sequence) -> list:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def degree(a: Sequence) -> int:
    return len(trim(a)) - 1


def derivative(a: Sequence) -> list:
    return trim([a[j] * j for j in range(1, len(a))])


def divmod_poly(a: Sequence, b: Sequence) -> Tuple[list, list]:
    a, b = trim(a), trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [0] * max(len(a) - len(b) + 1, 1)
    r = list(a)
    lead = inv(b[-1])
    while r and len(r) >= len(b):
        f = r[-1] * lead
        k = len(r) - len(b)
        q[k] = f
        for j, bj in enumerate(b):
            r[k + j] = r[k + j] - f * bj
        r.pop()
        r = trim(r)
    return trim(q), r


def gcd(a: Sequence, b: Sequence) -> list:
    a, b = trim(a), trim(b)
    while b:
        _, r = divmod_poly(a, b)
        a, b = b, r
    if not a:
        return a
    s = inv(a[-1])
    return [x * s for x in a]


def is_squarefree(a: Sequence) -> bool:
    a = trim(a)
    if len(a) <= 2:
        return True
    return degree(gcd(a, derivative(a))) == 0


def evaluate(a: Sequence, x):
    v = 0
    for c in reversed(a):
        v = v * x + c
    return v


def quadratic_roots(a: Sequence, tower=None):
    """Exact roots of a polynomial of degree <= 2, adjoining a square root if needed."""
    a = trim(a)
    if len(a) <= 1:
        return [], tower
    if len(a) == 2:
        return [-a[0] * inv(a[1])], tower
    c0, c1, c2 = a
    disc = c1 * c1 - 4 * c0 * c2
    if disc == 0:
        r = -c1 * inv(2 * c2)
        return [r, r], tower
    s, tower = sqrt_adjoin(disc, tower)
    den = inv(2 * c2)
    return [(-c1 + s) * den, (-c1 - s) * den], tower


def deflate(a: Sequence, root) -> List:
    q, r = divmod_poly(a, [-root, 1])
    if r:
        raise ValueError("not a root")
    return q
