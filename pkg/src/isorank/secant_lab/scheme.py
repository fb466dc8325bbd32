"""Zero-dimensional schemes and linear sections on a quadric, and their postulation.

Every component is turned into linear functionals on R_d that kill q R_{d-2};
their rank on a harmonic complement of q R_{d-2} is the number of conditions
imposed on forms of degree d restricted to Q.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np

from ..algebra.modp import ModpEchelon, matmul_mod
from .arithmetic import f
from .functionals import (
    derivative_rows,
    evaluation_row,
    exponent_table,
    harmonic_kernel,
    multiplication_matrix,
    rank_mod,
    section_rows,
)
from .quadric_fp import PRIMES, QuadricFp, presentation, sample_point, section_basis


class SchemeError(ValueError):
    """A component violates the quadric or tangency constraints."""


class CharacteristicError(RuntimeError):
    """The prime is too small for the harmonic complement to have full size."""


def _vec(x: Sequence[int], p: int) -> np.ndarray:
    return np.asarray([int(v) for v in x], dtype=np.int64) % p


@dataclass
class SimplePoint:
    point: List[int]

    def length(self, n: int) -> int:
        return 1


@dataclass
class DoublePoint:
    point: List[int]

    def length(self, n: int) -> int:
        return n


@dataclass
class PartialDoublePoint:
    """The point with first-order data along the listed tangent directions only."""

    point: List[int]
    directions: List[List[int]]

    def length(self, n: int) -> int:
        return 1 + len(self.directions)


@dataclass
class LinearSection:
    """Q cut by the linear forms (coefficient rows)."""

    forms: List[List[int]]

    def length(self, n: int) -> int:
        return 0


Component = Union[SimplePoint, DoublePoint, PartialDoublePoint, LinearSection]


@dataclass
class SchemeSpec:
    n: int
    p: int
    quadric: QuadricFp
    components: List[Component] = field(default_factory=list)
    seed: int = 0

    def __post_init__(self) -> None:
        if self.quadric.n != self.n or self.quadric.p != self.p:
            raise SchemeError("quadric does not match n and p")
        self.validate()

    def validate(self) -> None:
        q, p = self.quadric, self.p
        for k, c in enumerate(self.components):
            if isinstance(c, LinearSection):
                forms = np.asarray(c.forms, dtype=np.int64).reshape(-1, self.n + 1) % p
                if len(forms) > self.n - 1:
                    raise SchemeError(f"component {k}: at most n-1 forms may cut Q")
                if rank_mod(forms, p) != len(forms):
                    raise SchemeError(f"component {k}: section forms are dependent")
                continue
            pt = _vec(c.point, p)
            if len(pt) != self.n + 1 or not pt.any():
                raise SchemeError(f"component {k}: point must be a nonzero vector of length n+1")
            if q.value(pt) != 0:
                raise SchemeError(f"component {k}: point is not on the quadric")
            if isinstance(c, PartialDoublePoint):
                dirs = np.asarray(c.directions, dtype=np.int64).reshape(-1, self.n + 1) % p
                if any(q.bilinear(pt, v) for v in dirs):
                    raise SchemeError(f"component {k}: direction not tangent to Q at the point")
                if rank_mod(np.vstack([pt[None, :], dirs]), p) != len(dirs) + 1:
                    raise SchemeError(f"component {k}: directions are dependent modulo the point")

    def length(self) -> int:
        return sum(c.length(self.n) for c in self.components)


def double_point_directions(quad: QuadricFp, point: np.ndarray) -> np.ndarray:
    """n tangent directions at P, independent modulo P."""
    tb = quad.tangent_basis(point)
    e = ModpEchelon(len(point), quad.p)
    e.add_block(np.asarray(point)[None, :] % quad.p)
    keep = []
    for v in tb:
        before = e.rank
        e.add_block(v[None, :])
        if e.rank > before:
            keep.append(v)
    return np.array(keep, dtype=np.int64).reshape(-1, len(point))


def condition_rows(s: SchemeSpec, d: int) -> np.ndarray:
    """All functionals imposed by the scheme, stacked over the monomials of R_d."""
    p, q = s.p, s.quadric
    ncols = exponent_table(s.n + 1, d).shape[0]
    blocks = [np.zeros((0, ncols), dtype=np.int64)]
    for c in s.components:
        if isinstance(c, LinearSection):
            basis = section_basis(c.forms, p, s.n + 1)
            blocks.append(section_rows(q.gram, basis, d, p))
            continue
        pt = _vec(c.point, p)
        blocks.append(evaluation_row(pt, d, p)[None, :])
        if isinstance(c, DoublePoint):
            dirs = double_point_directions(q, pt)
        elif isinstance(c, PartialDoublePoint):
            dirs = np.asarray(c.directions, dtype=np.int64).reshape(-1, s.n + 1)
        else:
            continue
        if len(dirs):
            blocks.append(derivative_rows(pt, dirs, d, p))
    return np.vstack(blocks)


def harmonic_basis_mod_p(quad: QuadricFp, d: int) -> np.ndarray:
    """Forms killed by the dual operator: a complement of q R_{d-2} in R_d (both checked)."""
    h = harmonic_kernel(quad.dual_gram(), d, quad.p)
    if h.shape[0] != f(quad.n, d):
        raise CharacteristicError(f"harmonic kernel has dimension {h.shape[0]}, expected {f(quad.n, d)}")
    if d >= 2:
        stacked = np.vstack([multiplication_matrix(quad.gram, d, quad.p), h])
        if rank_mod(stacked, quad.p) != stacked.shape[1]:
            raise CharacteristicError(f"harmonic kernel meets q R_(d-2) mod {quad.p}")
    return h


@dataclass
class Postulation:
    h0: int
    conditions_rank: int
    expected_h0: int
    length: int
    p: int


def postulation_check(s: SchemeSpec, d: int) -> Postulation:
    """h0 of the ideal sheaf of the scheme on Q in degree d, and the rank of the conditions."""
    if d < 1:
        raise ValueError("d >= 1 required")
    h = harmonic_basis_mod_p(s.quadric, d)
    rows = condition_rows(s, d)
    rk = rank_mod(matmul_mod(rows, h.T, s.p), s.p) if rows.size else 0
    dim = f(s.n, d)
    return Postulation(dim - rk, rk, max(dim - s.length(), 0), s.length(), s.p)


def conditions_rank_ambient(s: SchemeSpec, d: int) -> int:
    """Rank of the same functionals on all of R_d; equals the harmonic rank."""
    rows = condition_rows(s, d)
    return rank_mod(rows, s.p) if rows.size else 0


# --- construction helpers ------------------------------------------------------------


def random_points_on(quad: QuadricFp, count: int, rng: np.random.Generator,
                     forms: Optional[Sequence[Sequence[int]]] = None) -> List[List[int]]:
    """General F_p-points of Q, or of Q cut by ``forms``."""
    basis = None if forms is None else section_basis(forms, quad.p, quad.n + 1)
    return [[int(v) for v in sample_point(quad, rng, basis)] for _ in range(count)]


def unit(n: int, i: int) -> List[int]:
    v = [0] * (n + 1)
    v[i] = 1
    return v


# --- JSON ----------------------------------------------------------------------------


def _quadric_from_json(obj: Any, n: int, p: int, seed: int) -> QuadricFp:
    if isinstance(obj, str):
        return presentation(obj, n, p, seed)
    if isinstance(obj, dict) and "gram" in obj:
        return QuadricFp(np.array(obj["gram"], dtype=np.int64), p, "custom")
    raise SchemeError("quadric must be a presentation name or {\"gram\": [[...]]}")


def scheme_from_json(data: Dict[str, Any]) -> SchemeSpec:
    """Build a scheme; ``{"type": "double", "random": k, "section": [...]}`` samples k points.

    Component types: simple, double, partial_double, section.  Sections may
    be given by ``forms`` or as ``{"random_codim": c}``.
    """
    try:
        n, p = int(data["n"]), int(data.get("p", PRIMES[0]))
        seed = int(data.get("seed", 0))
        quad = _quadric_from_json(data.get("quadric", "hyperbolic"), n, p, seed)
        rng = np.random.default_rng([seed, n, p, 11])
        comps: List[Component] = []
        for k, c in enumerate(data.get("components", [])):
            kind = c["type"]
            if kind == "section":
                if "random_codim" in c:
                    forms = rng.integers(0, p, size=(int(c["random_codim"]), n + 1)).tolist()
                else:
                    forms = c["forms"]
                comps.append(LinearSection([list(map(int, r)) for r in forms]))
                continue
            if kind not in ("simple", "double", "partial_double"):
                raise SchemeError(f"components[{k}]: unknown type {kind!r}")
            if "random" in c:
                pts = random_points_on(quad, int(c["random"]), rng, c.get("section"))
            else:
                pts = [list(map(int, c["point"]))]
            for pt in pts:
                if kind == "simple":
                    comps.append(SimplePoint(pt))
                elif kind == "double":
                    comps.append(DoublePoint(pt))
                else:
                    comps.append(PartialDoublePoint(pt, [list(map(int, v)) for v in c["directions"]]))
        return SchemeSpec(n, p, quad, comps, seed)
    except (KeyError, TypeError) as exc:
        raise SchemeError(f"malformed scheme description: {exc!r}") from exc


def scheme_from_text(text: str) -> SchemeSpec:
    return scheme_from_json(json.loads(text))


__all__ = [
    "SchemeError",
    "CharacteristicError",
    "SimplePoint",
    "DoublePoint",
    "PartialDoublePoint",
    "LinearSection",
    "SchemeSpec",
    "Postulation",
    "double_point_directions",
    "condition_rows",
    "harmonic_basis_mod_p",
    "postulation_check",
    "conditions_rank_ambient",
    "random_points_on",
    "unit",
    "scheme_from_json",
    "scheme_from_text",
]
