"""Closed-form counts: harmonic dimensions, expected secant dimensions, Horace arithmetic."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Dict, List, Tuple


class ParameterError(ValueError):
    """Out-of-range (n, d, r) parameters."""


@lru_cache(maxsize=None)
def f(n: int, d: int) -> int:
    """dim H_{n,d} = h0(O_Q(d)) for a smooth quadric Q in P^n."""
    if n < 0 or d < 0:
        raise ParameterError("n and d must be non-negative")
    return comb(n + d, n) - (comb(n + d - 2, n) if d >= 2 else 0)


def _check(n: int, d: int, r: int = 1) -> None:
    if n < 1 or d < 1 or r < 1:
        raise ParameterError(f"need n, d, r >= 1, got n={n}, d={d}, r={r}")


def expected_secant_dim(n: int, d: int, r: int) -> int:
    """Projective dimension of the r-th secant of the isotropic Veronese variety."""
    _check(n, d, r)
    full = f(n, d) - 1
    if d == 2:
        if r > n:
            return full
        return min(r * n - comb(r - 1, 2) - 1, full)
    return min(r * n - 1, full)


def generic_irk(n: int, d: int) -> int:
    _check(n, d)
    if d == 2:
        return n + 1
    return -(-f(n, d) // n)


def max_secant_index(n: int, d: int) -> int:
    """Largest r worth testing: the first r at which the secant fills H."""
    return generic_irk(n, d)


# --- Horace arithmetic ----------------------------------------------------------------


def k_delta(n: int) -> Tuple[int, int]:
    """k_n = floor(f(n,3)/n) and delta_n = f(n,3) - n k_n."""
    if n < 1:
        raise ParameterError("n >= 1 required")
    k = f(n, 3) // n
    return k, f(n, 3) - n * k


_K_TABLE = (
    lambda p: (6 * p * p + 6 * p, 5 * p),
    lambda p: (6 * p * p + 8 * p + 2, 0),
    lambda p: (6 * p * p + 10 * p + 3, 3 * p + 1),
    lambda p: (6 * p * p + 12 * p + 5, 2 * p + 1),
    lambda p: (6 * p * p + 14 * p + 7, 3 * p + 2),
    lambda p: (6 * p * p + 16 * p + 10, 0),
)


def k_delta_closed_form(n: int) -> Tuple[int, int]:
    """Table values of (k_n, delta_n) by the residue of n modulo 6."""
    if n < 0:
        raise ParameterError("n >= 0 required")
    p, r = divmod(n, 6)
    return _K_TABLE[r](p)


@dataclass
class HoraceParameters:
    n: int
    d: int
    r: int
    u: int
    eps: int
    k_n: int
    delta_n: int
    checks: Dict[str, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def admissible_r(n: int, d: int) -> List[int]:
    """All r with f(n,d-1) <= r n and r <= ceil(f(n,d)/n), so that u >= 0."""
    lo = -(-f(n, d - 1) // n)
    hi = -(-f(n, d) // n)
    return list(range(max(lo, 1), hi + 1))


def horace_parameters(n: int, d: int, r: int) -> HoraceParameters:
    """u, eps from r n - (n-1) u - eps = f(n,d-1) with 0 <= eps < n-1, and the five inequalities."""
    if n < 4 or d < 4:
        raise ParameterError("the Horace inequalities need n >= 4 and d >= 4")
    if r < 1 or r > -(-f(n, d) // n):
        raise ParameterError(f"r={r} outside 1..ceil(f(n,d)/n)")
    if r * n < f(n, d - 1):
        raise ParameterError(f"r={r} too small: r n < f(n,d-1)")
    u, eps, checks = _horace_checks(n, d, r)
    k, delta = k_delta(n)
    return HoraceParameters(n, d, r, u, eps, k, delta, checks)


def _horace_checks(n: int, d: int, r: int) -> Tuple[int, int, Dict[str, bool]]:
    u, eps = divmod(r * n - f(n, d - 1), n - 1)
    rest = r - u - eps
    checks = {
        "1": (n - 1) * eps + u <= f(n - 1, d - 1),
        "2": f(n, d - 2) <= rest * n,
        "3": rest >= 0,
    }
    if r >= f(n, d) // n:
        checks["4"] = u >= eps
    if d == 4 and n >= 9:
        checks["5"] = rest >= n + 1
    return u, eps, checks


def num_lem_report(n_max: int = 60) -> Dict[str, bool]:
    """Table closed forms and the two difference identities for 1 <= n <= n_max."""
    table = all(k_delta(n) == k_delta_closed_form(n) for n in range(1, n_max + 1))

    def k(n: int) -> int:
        return k_delta_closed_form(n)[0] if n == 0 else k_delta(n)[0]

    first = all(k(n) - k(n - 6) == 2 * n for n in range(6, n_max + 1))
    second = all(k(n) - 2 * k(n - 6) + k(n - 12) == 12 for n in range(12, n_max + 1))
    return {"table": table, "first_difference": first, "second_difference": second}


def num2_report(n_range=range(4, 21), d_range=range(4, 11)) -> Dict[Tuple[int, int, int], HoraceParameters]:
    """Failing (n, d, r) cells of the five inequalities; empty when all hold."""
    bad = {}
    for n in n_range:
        for d in d_range:
            for r in admissible_r(n, d):
                if not all(_horace_checks(n, d, r)[2].values()):
                    bad[(n, d, r)] = horace_parameters(n, d, r)
    return bad
