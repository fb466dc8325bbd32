"""Opt-in floating-complex backend: univariate roots and least squares."""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np

from .algebra import qi, to_complex

DEFAULT_POLISH_ITERATIONS = 60
ROOT_RESIDUAL = 1e-10


class NumericError(RuntimeError):
    """Root finding or conditioning failure in the float backend."""


def _horner(coeffs: Sequence[complex], x: complex) -> tuple:
    """Value and derivative of sum coeffs[j] x^j."""
    val, der = 0j, 0j
    for c in reversed(coeffs):
        der = der * x + val
        val = val * x + c
    return val, der


def polished_roots(coeffs: Sequence, iterations: int = DEFAULT_POLISH_ITERATIONS) -> List[complex]:
    """Roots of sum coeffs[j] x^j (ascending order), Newton-polished.

    Raises :class:`NumericError` if a polished root keeps a relative residual
    above ``ROOT_RESIDUAL``.
    """
    c = [to_complex(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    if len(c) <= 1:
        return []
    roots = np.roots(np.array(c[::-1], dtype=complex))
    scale = max(abs(x) for x in c)
    out = []
    for r in roots:
        x = complex(r)
        for _ in range(iterations):
            v, dv = _horner(c, x)
            if dv == 0:
                break
            step = v / dv
            x -= step
            if abs(step) <= 1e-17 * max(1.0, abs(x)):
                break
        v, _ = _horner(c, x)
        mag = sum(abs(cj) * abs(x) ** j for j, cj in enumerate(c))
        if abs(v) > ROOT_RESIDUAL * max(mag, scale * 1e-300):
            raise NumericError(f"root polishing did not converge (residual {abs(v):.3e})")
        out.append(x)
    return out


def snap_gaussian(x: complex, max_den: int = 64, tol: float = 1e-9) -> Optional[object]:
    """Nearest Gaussian rational with small denominators, if within ``tol``."""
    re = Fraction(x.real).limit_denominator(max_den)
    im = Fraction(x.imag).limit_denominator(max_den)
    if abs(complex(float(re), float(im)) - x) <= tol * max(1.0, abs(x)):
        return qi(re, im)
    return None


def lstsq(rows: Sequence[Sequence], rhs: Sequence) -> tuple:
    """Complex least squares; returns (solution, residual max-norm, condition number)."""
    a = np.array([[to_complex(x) for x in r] for r in rows], dtype=complex)
    b = np.array([to_complex(x) for x in rhs], dtype=complex)
    sol, *_ = np.linalg.lstsq(a, b, rcond=None)
    res = a @ sol - b
    cond = float(np.linalg.cond(a)) if a.size else 1.0
    return [complex(v) for v in sol], float(np.abs(res).max()) if res.size else 0.0, cond
