"""Isotropic decompositions: containers, verification, catalecticant bounds, doubling.

A decomposition keeps explicit coefficients, ``h = sum_i c_i * l_i^d``, so it
can stay inside Q(i) and its quadratic towers; over C the coefficients could
be absorbed into the linear forms without changing the number of terms.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .algebra import (
    DEFAULT_DEPTH_CAP,
    QI_TOWER,
    Echelon,
    InconsistentSystem,
    MultiPoly,
    Tower,
    inv,
    is_exact,
    linear_power,
    monomials,
    poly_sum,
    solve,
    sqrt_adjoin,
    to_complex,
    tower_of,
)
from .algebra.serial import ScalarDecoder, SchemaError, scalar_to_json
from .apolarity import QuadraticFormSpec, contract, is_harmonic

DEFAULT_TOL = 1e-9


class DecompositionError(RuntimeError):
    """A constructive decomposition could not be produced."""


@dataclass
class IsotropicDecomposition:
    """``sum c_i * l_i^d`` with every ``l_i`` meant to be isotropic for ``form_spec``."""

    degree: int
    arity: int
    terms: List[Tuple[object, list]]
    form_spec: QuadraticFormSpec

    def size(self) -> int:
        return sum(1 for c, _ in self.terms if not _is_negligible(c))

    def is_exact(self) -> bool:
        return all(is_exact(c) and all(is_exact(x) for x in p) for c, p in self.terms)

    def recompose(self) -> MultiPoly:
        return poly_sum(
            (linear_power(p, self.degree).scale(c) for c, p in self.terms), self.arity, self.degree
        )

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "form": [[scalar_to_json(x) for x in row] for row in self.form_spec.gram],
            "terms": [
                {"coeff": scalar_to_json(c), "point": [scalar_to_json(x) for x in p]}
                for c, p in self.terms
            ],
        }

    @classmethod
    def from_json(cls, obj: dict, decoder: Optional[ScalarDecoder] = None) -> "IsotropicDecomposition":
        dec = decoder or ScalarDecoder()
        for key in ("degree", "form", "terms"):
            if key not in obj:
                raise SchemaError(f"decomposition: missing field '{key}'")
        gram = [[dec(x, f"form[{i}][{j}]") for j, x in enumerate(r)] for i, r in enumerate(obj["form"])]
        spec = QuadraticFormSpec(tuple(tuple(r) for r in gram))
        terms = []
        for k, t in enumerate(obj["terms"]):
            c = dec(t["coeff"], f"terms[{k}].coeff")
            p = [dec(x, f"terms[{k}].point[{j}]") for j, x in enumerate(t["point"])]
            if len(p) != spec.arity:
                raise SchemaError(f"terms[{k}].point: expected {spec.arity} coordinates")
            terms.append((c, p))
        return cls(int(obj["degree"]), spec.arity, terms, spec)


def _is_negligible(c) -> bool:
    if isinstance(c, complex):
        return c == 0
    return c == 0


@dataclass
class VerifyReport:
    valid: bool
    failures: List[str] = field(default_factory=list)
    residual: Optional[MultiPoly] = None
    residual_norm: float = 0.0
    exact: bool = True

    def __bool__(self) -> bool:
        return self.valid


def _abs(x) -> float:
    return abs(to_complex(x))


def verify(dec: IsotropicDecomposition, target: MultiPoly, tol: float = DEFAULT_TOL) -> VerifyReport:
    """Check isotropy of every point and that the terms add up to ``target``."""
    failures: List[str] = []
    if target.arity != dec.arity or (target.degree != dec.degree and not target.is_zero()):
        return VerifyReport(False, ["degree/arity mismatch between decomposition and target"])
    exact = dec.is_exact() and all(is_exact(c) for c in target.terms.values())
    w = dec.form_spec
    for k, (c, p) in enumerate(dec.terms):
        if len(p) != dec.arity:
            failures.append(f"term {k}: point has wrong length")
            continue
        q = w.bilinear(p, p)
        if exact:
            if not q == 0:
                failures.append(f"term {k}: point is not isotropic")
        else:
            scale = max(1.0, sum(_abs(x) ** 2 for x in p))
            if _abs(q) > tol * scale:
                failures.append(f"term {k}: point is not isotropic (|q|={_abs(q):.3e})")
    residual = dec.recompose() - target
    if exact:
        norm = 0.0 if residual.is_zero() else float(max(_abs(c) for c in residual.terms.values()))
        if not residual.is_zero():
            failures.append(f"recomposition differs from target: residual {residual}")
    else:
        norm = max((_abs(c) for c in residual.terms.values()), default=0.0)
        ref = max([1.0] + [_abs(c) for c in target.terms.values()])
        if norm > tol * ref:
            failures.append(f"recomposition residual {norm:.3e} exceeds tolerance")
    return VerifyReport(not failures, failures, residual, norm, exact)


def catalecticant_matrix(h: MultiPoly, k: int) -> list:
    """Rows phi o h for the monomial basis phi of D_{n,k}, as vectors in R_{n,d-k}."""
    if not 0 <= k <= h.degree:
        raise ValueError("split degree must lie in [0, d]")
    basis = monomials(h.arity, h.degree - k)
    return [contract(MultiPoly.monomial(a), h).to_vector(basis) for a in monomials(h.arity, k)]


def catalecticant_lower_bound(h: MultiPoly, k: Optional[int] = None) -> int:
    """Rank of D_{n,k} -> R_{n,d-k}, a lower bound for Waring and isotropic rank."""
    if k is None:
        k = max(1, h.degree // 2)
    if not 1 <= k <= max(1, h.degree - 1):
        raise ValueError("split degree must satisfy 1 <= k <= d-1")
    rows = catalecticant_matrix(h, k)
    if all(is_exact(c) for c in h.terms.values()):
        ech = Echelon(len(rows[0]) if rows else 0)
        for r in rows:
            ech.add(r)
        return ech.rank
    m = np.array([[to_complex(x) for x in r] for r in rows], dtype=complex)
    return int(np.linalg.matrix_rank(m, tol=1e-8 * max(1.0, float(np.abs(m).max()))))


def waring_coefficients(target: MultiPoly, points: Sequence[Sequence]) -> list:
    """Exact coefficients c with sum c_i l_i^d = target; raises if impossible."""
    d = target.degree
    basis = monomials(target.arity, d)
    cols = [linear_power(list(p), d).to_vector(basis) for p in points]
    rows = [[cols[j][i] for j in range(len(points))] for i in range(len(basis))]
    try:
        return solve(rows, target.to_vector(basis), len(points))
    except InconsistentSystem as exc:
        raise DecompositionError("input points cannot express the target") from exc


def normalize_terms(terms, d: int) -> list:
    """Scale points to have leading coordinate 1 and merge proportional points."""
    merged: Dict[tuple, object] = {}
    order: List[tuple] = []
    for c, p in terms:
        if _is_negligible(c):
            continue
        lead = next((x for x in p if not x == 0), None)
        if lead is None:
            continue
        s = inv(lead)
        key = tuple(x * s for x in p)
        val = c * lead**d
        if key in merged:
            merged[key] = merged[key] + val
        else:
            merged[key] = val
            order.append(key)
    return [(merged[k], list(k)) for k in order if not _is_negligible(merged[k])]


def double_from_waring(
    target: MultiPoly,
    waring_points: Sequence[Sequence],
    w: QuadraticFormSpec,
    rng_seed: int = 0,
    max_attempts: int = 100,
    bound: int = 10,
    depth_cap: int = DEFAULT_DEPTH_CAP,
    numeric: bool = False,
    tol: float = DEFAULT_TOL,
) -> IsotropicDecomposition:
    """Turn an r-term Waring decomposition into an isotropic one with at most 2r terms.

    Each non-isotropic point x is replaced by the two points where the line
    through x and a vertex P (off the quadric, never tangent) meets the
    quadric.  With y = x + t P and t+, t- the two roots, the weights
    a = -t-/(t+ - t-), b = t+/(t+ - t-) make x^d - a y+^d - b y-^d divisible
    by P^2; the sum of these differences is harmonic, so it vanishes.

    With ``numeric=True`` the square roots are taken in floating complex
    arithmetic instead of adjoining them to a tower.
    """
    if not is_harmonic(target, w):
        raise DecompositionError("target is not harmonic")
    d, n1 = target.degree, target.arity
    coeffs = waring_coefficients(target, waring_points)
    keep, move = [], []
    for c, x in zip(coeffs, waring_points):
        if c == 0:
            continue
        (keep if w.bilinear(x, x) == 0 else move).append((c, list(x)))
    terms = list(keep)
    if move:
        rng = random.Random(rng_seed)
        vertex = None
        for _ in range(max_attempts):
            cand = [rng.randint(-bound, bound) for _ in range(n1)]
            qp = w.bilinear(cand, cand)
            if qp == 0:
                continue
            discs = []
            for _, x in move:
                b = w.bilinear(x, cand)
                disc = b * b - w.bilinear(x, x) * qp
                if disc == 0:
                    break
                discs.append((b, disc))
            else:
                vertex = cand
                break
        if vertex is None:
            raise DecompositionError(f"no admissible vertex after {max_attempts} attempts")
        qp = w.bilinear(vertex, vertex)
        if numeric:
            move = [(to_complex(c), [to_complex(v) for v in x]) for c, x in move]
            discs = [(to_complex(b), to_complex(disc)) for b, disc in discs]
            terms = [(to_complex(c), [to_complex(v) for v in x]) for c, x in terms]
            qp = to_complex(qp)
        tower: Optional[Tower] = None if numeric else tower_of(*[c for c, _ in move], *[v for _, x in move for v in x])
        qinv = 1 / qp if numeric else inv(qp)
        for (c, x), (b, disc) in zip(move, discs):
            if numeric:
                s = disc**0.5
            else:
                s, tower = sqrt_adjoin(disc, tower, cap=depth_cap)
            tp = (-b + s) * qinv
            tm = (-b - s) * qinv
            den = 1 / (tp - tm) if numeric else inv(tp - tm)
            a_plus = -tm * den
            a_minus = tp * den
            yp = [xi + tp * pi for xi, pi in zip(x, vertex)]
            ym = [xi + tm * pi for xi, pi in zip(x, vertex)]
            terms.append((c * a_plus, yp))
            terms.append((c * a_minus, ym))
    dec = IsotropicDecomposition(d, n1, normalize_terms(terms, d), w)
    rep = verify(dec, target, tol=tol)
    if not rep.valid:
        raise DecompositionError("doubling failed verification: " + "; ".join(rep.failures))
    return dec


__all__ = [
    "DecompositionError",
    "IsotropicDecomposition",
    "VerifyReport",
    "verify",
    "catalecticant_matrix",
    "catalecticant_lower_bound",
    "waring_coefficients",
    "normalize_terms",
    "double_from_waring",
]
