"""Base cases of the cubic and quartic interpolation inductions, rebuilt over F_p.

Each case is a scheme on a quadric Q in P^n whose on-quadric h0 in degree d
must vanish; the corresponding count of forms on P^n is dim R_{n,d-2}, the
multiples of the quadric itself.
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass
from math import comb
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from .quadric_fp import PRIMES, QuadricFp, QuadricPointError, presentation
from .scheme import (
    CharacteristicError,
    Component,
    DoublePoint,
    LinearSection,
    PartialDoublePoint,
    SchemeSpec,
    SimplePoint,
    postulation_check,
    random_points_on,
    unit,
)

SEED_RETRIES = 3


def _coordinate_forms(n: int, idx: range) -> List[List[int]]:
    return [unit(n, i) for i in idx]


def _doubles(quad: QuadricFp, count: int, rng: np.random.Generator, forms=None) -> List[Component]:
    return [DoublePoint(pt) for pt in random_points_on(quad, count, rng, forms)]


def _units(n: int, idx) -> List[List[int]]:
    return [unit(n, i) for i in idx]


# Every builder returns (quadric, components, degree).
Builder = Callable[[int, np.random.Generator], Tuple[QuadricFp, List[Component], int]]


def _three_sections(n: int, p: int, rng: np.random.Generator) -> Tuple[list, list, list]:
    lf = _coordinate_forms(n, range(0, 6))
    mf = _coordinate_forms(n, range(6, 12))
    nf = _coordinate_forms(n, range(12, 17)) + [rng.integers(0, p, size=n + 1).tolist()]
    return lf, mf, nf


def cubic1(p: int, seed: int):
    n = 16
    rng = np.random.default_rng([seed, 1])
    quad = presentation("random", n, p, seed)
    comps = [LinearSection(fs) for fs in _three_sections(n, p, rng)]
    return n, quad, comps, 2


def cubic2(p: int, seed: int):
    n = 16
    rng = np.random.default_rng([seed, 2])
    quad = presentation("random", n, p, seed)
    comps: List[Component] = []
    for fs in _three_sections(n, p, rng):
        comps.append(LinearSection(fs))
        comps += _doubles(quad, 12, rng, fs)
    return n, quad, comps, 3


def cubic3(n: int) -> Callable:
    def build(p: int, seed: int):
        rng = np.random.default_rng([seed, 3, n])
        quad = presentation("random", n, p, seed)
        comps: List[Component] = []
        for fs in (_coordinate_forms(n, range(0, 6)), _coordinate_forms(n, range(6, 12))):
            comps.append(LinearSection(fs))
            comps += _doubles(quad, 2 * (n - 6), rng, fs)
        comps += _doubles(quad, 12, rng)
        return n, quad, comps, 3

    return build


# (points of L n Q that are sampled, coordinate double point on L, eta point, eta directions)
_CUBIC4 = {
    6: (None, None, 6, (1, 2, 3, 4)),
    7: (0, None, None, ()),
    8: (2, 7, 8, (3, 4, 5)),
    9: (4, 8, 9, (4, 5)),
    10: (6, 9, 10, (3, 4, 5, 8)),
    11: (10, None, None, ()),
}


def cubic4(n: int) -> Callable:
    sampled, extra, eta, eta_dirs = _CUBIC4[n]

    def build(p: int, seed: int):
        rng = np.random.default_rng([seed, 4, n])
        # x_{n-1} x_n + x_0^2 + ... + x_{n-2}^2; on P^1 sections its two points are e_{n-1}, e_n
        quad = presentation("appendix", n, p, seed)
        comps: List[Component] = []
        if sampled is not None:
            lf = _coordinate_forms(n, range(0, 6))
            comps.append(LinearSection(lf))
            if n == 7:
                comps += [DoublePoint(unit(n, 6)), DoublePoint(unit(n, 7))]
            else:
                comps += _doubles(quad, sampled, rng, lf)
            if extra is not None:
                comps.append(DoublePoint(unit(n, extra)))
        comps += _doubles(quad, 2 * n, rng)
        if eta is not None:
            comps.append(PartialDoublePoint(unit(n, eta), _units(n, eta_dirs)))
        return n, quad, comps, 3

    return build


def post3(n: int) -> Callable:
    def build(p: int, seed: int):
        rng = np.random.default_rng([seed, 5, n])
        quad = presentation("hyperbolic", n, p, seed)
        comps: List[Component] = []
        if n <= 4:
            comps.append(DoublePoint(unit(n, 0)))
        comps += _doubles(quad, {2: 2, 3: 4, 4: 6, 5: 10, 6: 12}[n], rng)
        if n in (2, 3):
            comps.append(SimplePoint(unit(n, 1)))
        elif n == 4:
            comps.append(PartialDoublePoint(unit(n, 1), _units(n, [2])))
        elif n == 6:
            comps.append(PartialDoublePoint(unit(n, 1), _units(n, range(3, 7))))
        return n, quad, comps, 3

    return build


def post_fin(n: int) -> Callable:
    def build(p: int, seed: int):
        rng = np.random.default_rng([seed, 6, n])
        quad = presentation("hyperbolic", n, p, seed)
        comps = _doubles(quad, {4: 14, 5: 20, 6: 30}[n], rng)
        if n >= 5:
            comps.append(DoublePoint(unit(n, 0)))
        return n, quad, comps, 4

    return build


def cases() -> Dict[str, Callable]:
    out: Dict[str, Callable] = {"cubic1": cubic1, "cubic2": cubic2}
    for n in range(12, 18):
        out[f"cubic3_n{n}"] = cubic3(n)
    for n in range(6, 12):
        out[f"cubic4_n{n}"] = cubic4(n)
    for n in range(2, 7):
        out[f"post3_n{n}"] = post3(n)
    for n in range(4, 7):
        out[f"post_fin_n{n}"] = post_fin(n)
    return out


@dataclass
class AppendixResult:
    name: str
    n: int
    d: int
    p: int
    seed: int
    length: int
    h0: int
    ambient: int
    printed: int
    seconds: float

    @property
    def ok(self) -> bool:
        return self.h0 == 0 and self.ambient == self.printed

    def to_dict(self) -> dict:
        out = asdict(self)
        out["ok"] = self.ok
        return out


def run_case(name: str, seed: int = 0, primes=PRIMES) -> AppendixResult:
    """Build and check one case; retries fresh seeds, then the next prime."""
    build = cases()[name]
    last: Optional[AppendixResult] = None
    for p in primes:
        for k in range(SEED_RETRIES):
            t0 = time.perf_counter()
            try:
                n, quad, comps, d = build(p, seed + k)
                res = postulation_check(SchemeSpec(n, p, quad, comps, seed + k), d)
            except (CharacteristicError, QuadricPointError):
                break
            multiples = comb(n + d - 2, n)
            last = AppendixResult(name, n, d, p, seed + k, res.length, res.h0, res.h0 + multiples, multiples,
                                  round(time.perf_counter() - t0, 3))
            if last.ok:
                return last
    if last is None:
        raise RuntimeError(f"case {name}: no usable prime")
    return last


def appendix_suite(names: Optional[List[str]] = None, seed: int = 0) -> List[AppendixResult]:
    return [run_case(nm, seed) for nm in (names or list(cases()))]


__all__ = ["AppendixResult", "cases", "run_case", "appendix_suite"]
