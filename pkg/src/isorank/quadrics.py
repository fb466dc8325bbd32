"""Harmonic quadrics as trace-zero symmetric matrices.

A quadric ``h = x^T H x`` is harmonic for ``x0^2 + ... + xn^2`` exactly when
``tr H = 0``, and an isotropic decomposition ``h = sum c_i (v_i . x)^2`` is a
splitting ``H = sum c_i v_i v_i^T`` with ``v_i^T v_i = 0``.  Classification
needs only ranks and nilpotency; explicit decompositions are built from the
orthogonal normal form, a direct sum of blocks ``S_s(lam)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .algebra import (
    DEFAULT_DEPTH_CAP,
    I,
    MultiPoly,
    Tower,
    determinant,
    inv,
    matmul,
    qi,
    rank,
    sqrt_adjoin,
    tower_of,
    transpose,
)
from .algebra.serial import ScalarDecoder, SchemaError, scalar_to_json
from .apolarity import QuadraticFormSpec
from .decompose import DecompositionError, IsotropicDecomposition, verify

Term = Tuple[object, list]


class QuadricError(ValueError):
    """Invalid matrix or normal sequence."""


class UnsupportedShape(DecompositionError):
    """A normal sequence outside the constructive coverage."""


# matrices -------------------------------------------------------------------

@dataclass(frozen=True)
class TraceZeroSym:
    """A symmetric trace-zero matrix with exact entries."""

    entries: tuple

    def __post_init__(self) -> None:
        rows = tuple(tuple(r) for r in self.entries)
        object.__setattr__(self, "entries", rows)
        n1 = len(rows)
        if any(len(r) != n1 for r in rows):
            raise QuadricError("matrix must be square")
        for i in range(n1):
            for j in range(i):
                if not rows[i][j] == rows[j][i]:
                    raise QuadricError("matrix must be symmetric")
        if not sum((rows[i][i] for i in range(n1)), 0) == 0:
            raise QuadricError("matrix must have trace zero")

    @property
    def size(self) -> int:
        return len(self.entries)

    def tolist(self) -> list:
        return [list(r) for r in self.entries]

    def quadratic_form(self) -> MultiPoly:
        """x^T H x as a polynomial."""
        n1 = self.size
        terms = {}
        for i in range(n1):
            for j in range(i, n1):
                a = self.entries[i][j]
                if a == 0:
                    continue
                e = [0] * n1
                e[i] += 1
                e[j] += 1
                terms[tuple(e)] = a if i == j else 2 * a
        return MultiPoly(n1, 2, terms)

    @classmethod
    def from_form(cls, q: MultiPoly) -> "TraceZeroSym":
        if q.degree != 2:
            raise QuadricError("expected a quadratic form")
        n1 = q.arity
        m = [[Fraction(0)] * n1 for _ in range(n1)]
        for e, c in q.terms.items():
            idx = [i for i, a in enumerate(e) for _ in range(a)]
            i, j = idx
            if i == j:
                m[i][i] = c
            else:
                m[i][j] = m[j][i] = c * Fraction(1, 2)
        return cls(tuple(tuple(r) for r in m))

    def to_json(self) -> dict:
        return {"size": self.size, "entries": [[scalar_to_json(x) for x in r] for r in self.entries]}

    @classmethod
    def from_json(cls, obj: dict, decoder: Optional[ScalarDecoder] = None) -> "TraceZeroSym":
        dec = decoder or ScalarDecoder()
        if "entries" not in obj:
            raise SchemaError("matrix: missing field 'entries'")
        rows = [[dec(x, f"entries[{i}][{j}]") for j, x in enumerate(r)] for i, r in enumerate(obj["entries"])]
        if "size" in obj and int(obj["size"]) != len(rows):
            raise SchemaError("matrix: 'size' disagrees with 'entries'")
        return cls(tuple(tuple(r) for r in rows))


def j_matrix(s: int) -> list:
    """Ones on the first super- and sub-diagonal."""
    return [[Fraction(int(abs(r - c) == 1)) for c in range(s)] for r in range(s)]


def k_matrix(s: int) -> list:
    """+1 on the anti-diagonal r+c = s-2, -1 on r+c = s (0-based indices)."""
    out = [[Fraction(0)] * s for _ in range(s)]
    for r in range(s):
        for c in range(s):
            if r + c == s - 2:
                out[r][c] = Fraction(1)
            elif r + c == s:
                out[r][c] = Fraction(-1)
    return out


def normal_block(lam, s: int) -> list:
    """S_s(lam) = lam I + J/2 + (i/2) K."""
    if s < 1:
        raise QuadricError("block size must be positive")
    j, k = j_matrix(s), k_matrix(s)
    half = Fraction(1, 2)
    return [
        [(lam if r == c else 0) + half * j[r][c] + half * I * k[r][c] for c in range(s)]
        for r in range(s)
    ]


@dataclass(frozen=True)
class NormalSequence:
    """Blocks (lam_j, s_j) of an orthogonal normal form."""

    blocks: tuple

    def __post_init__(self) -> None:
        blocks = tuple((lam, int(s)) for lam, s in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        if any(s < 1 for _, s in blocks):
            raise QuadricError("block sizes must be positive")
        if not sum((lam * s for lam, s in blocks), 0) == 0:
            raise QuadricError("trace constraint violated: sum of lam_j * s_j must be 0")

    @property
    def dimension(self) -> int:
        return sum(s for _, s in self.blocks)

    def to_json(self) -> dict:
        return {"blocks": [{"lambda": scalar_to_json(lam), "size": s} for lam, s in self.blocks]}

    @classmethod
    def from_json(cls, obj: dict, decoder: Optional[ScalarDecoder] = None) -> "NormalSequence":
        dec = decoder or ScalarDecoder()
        if "blocks" not in obj:
            raise SchemaError("normal sequence: missing field 'blocks'")
        out = []
        for k, b in enumerate(obj["blocks"]):
            if "lambda" not in b or "size" not in b:
                raise SchemaError(f"blocks[{k}]: needs 'lambda' and 'size'")
            out.append((dec(b["lambda"], f"blocks[{k}].lambda"), int(b["size"])))
        return cls(tuple(out))

    @classmethod
    def parse(cls, text: str) -> "NormalSequence":
        """Compact notation such as ``0^3,0^2,1^1,-1^1`` (lambda may be ``a+bi``)."""
        out = []
        for part in text.replace(" ", "").split(","):
            if not part:
                continue
            lam, _, s = part.partition("^")
            out.append((_parse_gaussian(lam), int(s or 1)))
        return cls(tuple(out))


def _parse_gaussian(s: str):
    s = s.strip()
    if not s.endswith("i"):
        return Fraction(s)
    body = s[:-1]
    for k in range(len(body) - 1, 0, -1):
        if body[k] in "+-" and body[k - 1] not in "eE/":
            re, im = body[:k], body[k:]
            break
    else:
        re, im = "0", body
    if im in ("", "+", "-"):
        im += "1"
    return qi(Fraction(re), Fraction(im))


def _block_diag(blocks: Sequence[list]) -> list:
    n = sum(len(b) for b in blocks)
    out = [[Fraction(0)] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for r, row in enumerate(b):
            for c, x in enumerate(row):
                out[off + r][off + c] = x
        off += len(b)
    return out


def normal_blocks_matrix(seq: NormalSequence) -> TraceZeroSym:
    blocks = []
    for lam, s in seq.blocks:
        b = normal_block(lam, s)
        if not determinant(b) == lam**s:
            raise AssertionError("block determinant identity failed")
        if lam == 0 and rank(b, s) != s - 1:
            raise AssertionError("nilpotent block rank identity failed")
        blocks.append(b)
    return TraceZeroSym(tuple(tuple(r) for r in _block_diag(blocks)))


# classification -------------------------------------------------------------

@dataclass
class Classification:
    rank: int
    irk: int
    nilpotent: bool
    rank_square: int


def classify_irk(h: TraceZeroSym) -> Classification:
    """irk = rk + 2 when H is nilpotent with rk H^2 = 1, otherwise irk = rk."""
    m = h.tolist()
    n1 = h.size
    r = rank(m, n1)
    sq = matmul(m, m)
    r2 = rank(sq, n1)
    p = [row[:] for row in m]
    for _ in range(n1):
        p = matmul(p, m)
    nil = all(x == 0 for row in p for x in row)
    irk = r + 2 if nil and r2 == 1 else r
    return Classification(r, irk, nil, r2)


def hollow_check(h: TraceZeroSym, q: Sequence[Sequence]) -> bool:
    """True iff Q^T H Q has zero diagonal; Q must be orthogonal."""
    n1 = h.size
    qt = transpose(q)
    if len(q) != n1 or not _is_identity(matmul(qt, q)):
        raise QuadricError("Q is not orthogonal")
    c = matmul(matmul(qt, h.tolist()), q)
    return all(c[i][i] == 0 for i in range(n1))


def _is_identity(m: list) -> bool:
    return all((x == 1) if i == j else (x == 0) for i, row in enumerate(m) for j, x in enumerate(row))


# explicit decompositions ---------------------------------------------------

def _lin(n1: int, *pairs) -> list:
    """Vector with the given (index, coefficient) entries added up."""
    v: list = [0] * n1
    for idx, c in pairs:
        v[idx] = v[idx] + c
    return v


def _add(*vs) -> list:
    return [sum(xs, 0) for xs in zip(*vs)]


def _sc(c, v) -> list:
    return [c * x for x in v]


def _frame_terms(n1: int, a_idx: tuple, b_idx: tuple) -> List[Term]:
    """a*b = ((a+b)^2 - (a-b)^2)/4 for a = x_p - i x_q, b = x_r + i x_s."""
    a = _lin(n1, (a_idx[0], 1), (a_idx[1], -I))
    b = _lin(n1, (b_idx[0], 1), (b_idx[1], I))
    q = Fraction(1, 4)
    return [(q, _add(a, b)), (-q, _add(a, _sc(-1, b)))]


def odd_block_terms(s: int) -> List[Term]:
    """2(k+2) isotropic squares for S_{2k+5}(0)."""
    if s < 5 or s % 2 == 0:
        raise QuadricError("odd block construction needs s = 2k+5")
    k = (s - 5) // 2
    c1, c2 = (1 + I) * Fraction(1, 8), (1 - I) * Fraction(1, 8)
    a = _lin(s, (k, 1), (k + 4, -I))
    terms: List[Term] = [
        (c1, _add(a, _sc(1 + I, _lin(s, (k + 2, 1), (k + 1, -I))))),
        (-c1, _add(a, _sc(1 + I, _lin(s, (k + 2, 1), (k + 1, I))))),
        (c2, _add(a, _sc(-1 - I, _lin(s, (k + 2, 1), (k + 3, -I))))),
        (-c2, _add(a, _sc(-1 - I, _lin(s, (k + 2, 1), (k + 3, I))))),
    ]
    for j in range(1, k + 1):
        terms += _frame_terms(s, (k - j, k + j + 4), (k - j + 1, k + j + 3))
    return terms


def even_block_terms(s: int) -> List[Term]:
    """2k+1 isotropic squares for S_{2(k+1)}(0)."""
    if s < 2 or s % 2:
        raise QuadricError("even block construction needs s = 2(k+1)")
    k = s // 2 - 1
    terms: List[Term] = [(I * Fraction(1, 2), _lin(s, (k, 1), (k + 1, -I)))]
    for j in range(k):
        terms += _frame_terms(s, (k - j - 1, k + j + 2), (k - j, k + j + 1))
    return terms


def s3_pair_terms() -> List[Term]:
    """4 isotropic squares for S_3(0) + S_3(0)."""
    c1, c2 = (1 + I) * Fraction(1, 8), (1 - I) * Fraction(1, 8)
    rows = [
        (c1, [1, 1, -I, -I, I, -1]),
        (-c1, [1, -1, -I, -I, -I, -1]),
        (c2, [1, I, -I, I, 1, 1]),
        (-c2, [1, -I, -I, I, -1, 1]),
    ]
    return [(c, list(v)) for c, v in rows]


def s3_triple_terms() -> List[Term]:
    """6 isotropic squares for S_3(0) + S_3(0) + S_3(0)."""
    q = Fraction(1, 4)
    rows = [
        (I, [1, 1, -I, -1, I, I, -I, 0, -1]),
        (-I, [1, -1, -I, -1, -I, I, -I, 0, -1]),
        (1, [1, 0, -I, I, 1, 1, -I, I, -1]),
        (-1, [1, 0, -I, I, -1, 1, -I, -I, -1]),
        (-I, [1, I, -I, I, 0, 1, -1, 1, I]),
        (I, [1, -I, -I, I, 0, 1, -1, -1, I]),
    ]
    return [(c * q, list(v)) for c, v in rows]


def s3_single_terms() -> List[Term]:
    """4 isotropic squares for S_3(0) alone, with Gaussian-rational points."""
    rows = [
        (I * Fraction(1, 4), [1, 0, I]),
        ((1 - 2 * I) * Fraction(1, 5), [1, I, 0]),
        ((-1 - 2 * I) * Fraction(1, 5), [0, 1, I]),
        (-I * Fraction(1, 20), [1 - 2 * I, -2 - 2 * I, -2 + I]),
    ]
    return [(c, list(v)) for c, v in rows]


def odd_plus_s3_terms(s: int) -> List[Term]:
    """2(k+3) isotropic squares for S_{2k+5}(0) + S_3(0)."""
    if s < 5 or s % 2 == 0:
        raise QuadricError("needs an odd block of size 2k+5")
    k = (s - 5) // 2
    n1 = s + 3
    c1, c2 = (1 + I) * Fraction(1, 8), (1 - I) * Fraction(1, 8)
    p, q, r = k + 1, k + 2, k + 3
    a, b, c = 2 * k + 5, 2 * k + 6, 2 * k + 7
    terms: List[Term] = [
        (c1, _lin(n1, (p, 1), (q, 1), (r, -I), (a, -I), (b, I), (c, -1))),
        (-c1, _lin(n1, (p, 1), (q, -1), (r, -I), (a, -I), (b, -I), (c, -1))),
        (c2, _lin(n1, (p, 1), (q, I), (r, -I), (a, I), (b, 1), (c, 1))),
        (-c2, _lin(n1, (p, 1), (q, -I), (r, -I), (a, I), (b, -1), (c, 1))),
    ]
    for j in range(k + 1):
        terms += _frame_terms(n1, (k - j, k + j + 4), (k - j + 1, k + j + 3))
    return terms


def even_plus_s3_terms(s: int, cap: int = DEFAULT_DEPTH_CAP) -> tuple:
    """2k+3 isotropic squares for S_3(0) + S_{2(k+1)}(0), k >= 1 (S_3(0) first).

    With E = x_k - i x_{k+1}, A = x_{k-1} - i x_{k+2}, B = x_k + i x_{k+1} in
    the even block, its middle part is (i/2) E^2 + A B
    = ((1+i)/2 E)^2 + (A+B)^2/4 - (A-B)^2/4.  The first two squares are
    isotropic and non-orthogonal, so they absorb the S_3(0) part in four
    squares.  Returns (terms, tower).
    """
    if s < 4 or s % 2:
        raise QuadricError("needs an even block of size 2(k+1) >= 4")
    k = s // 2 - 1
    n1 = s + 3
    o = 3
    ev = _lin(n1, (o + k, 1), (o + k + 1, -I))
    av = _lin(n1, (o + k - 1, 1), (o + k + 2, -I))
    bv = _lin(n1, (o + k, 1), (o + k + 1, I))
    m1 = _sc((1 + I) * Fraction(1, 2), ev)
    m2 = _sc(Fraction(1, 2), _add(av, bv))
    terms, tower = s3_plus_two_squares_terms(m1, m2, cap=cap)
    terms.append((-Fraction(1, 4), _add(av, _sc(-1, bv))))
    for j in range(1, k):
        a_idx = (o + k - j - 1, o + k + j + 2)
        b_idx = (o + k - j, o + k + j + 1)
        terms += _frame_terms(n1, a_idx, b_idx)
    return terms, tower


def s3_plus_two_squares_terms(m1: list, m2: list, tower: Optional[Tower] = None, cap: int = DEFAULT_DEPTH_CAP) -> tuple:
    """4 isotropic squares for (1+i)(x0 - i x2) x1 + m1^2 + m2^2.

    ``m1, m2`` are isotropic, non-orthogonal and supported away from x0, x1, x2.
    Returns (terms, tower).
    """
    n1 = len(m1)
    b12 = sum((x * y for x, y in zip(m1, m2)), 0)
    if b12 == 0:
        raise DecompositionError("the two isotropic forms must not be orthogonal")
    # (1+i) x1 - a (m1 + m2) isotropic: 2i + 2 a^2 b12 = 0
    a, tower = sqrt_adjoin(-I * inv(b12), tower, cap=cap)
    w = _lin(n1, (0, 1), (2, -I))
    u = _add(_lin(n1, (1, 1 + I)), _sc(-a, m1), _sc(-a, m2))
    q = Fraction(1, 4)
    a2 = a * a
    terms = [
        (q, _add(_sc(a, w), _sc(2, m1))),
        (q, _add(_sc(a, w), _sc(2, m2))),
        (q, _add(u, _sc((2 - a2) * Fraction(1, 2), w))),
        (-q, _add(u, _sc(-(2 + a2) * Fraction(1, 2), w))),
    ]
    return terms, tower


# diagonal merge -------------------------------------------------------------

def _dot(u: Sequence, v: Sequence):
    return sum((x * y for x, y in zip(u, v)), 0)


def diagonal_merge(
    lambdas: Sequence, vectors: Optional[Sequence[Sequence]] = None, cap: int = DEFAULT_DEPTH_CAP
) -> IsotropicDecomposition:
    """Exactly r isotropic squares for sum_i lam_i (v_i . x)^2 with sum_i lam_i v_i.v_i = 0.

    The v_i must be pairwise orthogonal and non-isotropic (the unit vectors by
    default).  Each step replaces two entries by one on a combination of their
    vectors and emits one isotropic square; the last two entries cancel into
    two isotropic squares.  A step adjoins at most one square root.
    """
    lam = list(lambdas)
    r = len(lam)
    if r < 2:
        raise QuadricError("diagonal merge needs at least two entries")
    if any(x == 0 for x in lam):
        raise QuadricError("diagonal merge needs nonzero entries")
    vecs = [list(v) for v in vectors] if vectors is not None else [
        [Fraction(int(i == j)) for j in range(r)] for i in range(r)
    ]
    n1 = len(vecs[0])
    for i in range(r):
        for j in range(i):
            if not _dot(vecs[i], vecs[j]) == 0:
                raise QuadricError("vectors must be pairwise orthogonal")
    norms = [_dot(v, v) for v in vecs]
    if any(x == 0 for x in norms):
        raise QuadricError("vectors must be non-isotropic")
    if not sum((m * nn for m, nn in zip(lam, norms)), 0) == 0:
        raise QuadricError("entries must have zero trace")
    target = _sum_squares(list(zip(lam, vecs)), n1)
    tower = tower_of(*lam, *[x for v in vecs for x in v])
    items = [(m, v, nn) for m, v, nn in zip(lam, vecs, norms)]
    terms: List[Term] = []
    while len(items) > 2:
        i, j = _merge_pair(items)
        (m0, v0, n0), (m1, v1, n1_) = items[i], items[j]
        b, tower = sqrt_adjoin(-n1_ * inv(n0), tower, cap=cap)
        beta = m1 * inv(m0) * b
        mu = m0 * m1 * inv(m0 * beta * beta + m1)
        w = _add(v0, _sc(beta, v1))
        nw = n0 + beta * beta * n1_
        # remainder (m0 - mu) a^2 - 2 mu beta a b + (m1 - mu beta^2) b^2 has rank one
        r00, r01, r11 = m0 - mu, -mu * beta, m1 - mu * beta * beta
        if not r00 == 0:
            terms.append((inv(r00), _add(_sc(r00, v0), _sc(r01, v1))))
        else:
            terms.append((inv(r11), _add(_sc(r01, v0), _sc(r11, v1))))
        rest = [it for t, it in enumerate(items) if t not in (i, j)]
        items = [(mu, w, nw)] + rest
    (m0, v0, n0), (m1, v1, n1_) = items
    g, tower = sqrt_adjoin(-n0 * inv(n1_), tower, cap=cap)
    half = m0 * Fraction(1, 2)
    terms.append((half, _add(v0, _sc(g, v1))))
    terms.append((half, _add(v0, _sc(-g, v1))))
    dec = IsotropicDecomposition(2, n1, terms, QuadraticFormSpec.standard(n1 - 1))
    rep = verify(dec, target)
    if not rep.valid:
        raise DecompositionError("diagonal merge failed verification: " + "; ".join(rep.failures))
    return dec


def _merge_pair(items: list) -> tuple:
    """First pair whose traces differ (the merged weight is then finite)."""
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            ti = items[i][0] * items[i][2]
            tj = items[j][0] * items[j][2]
            if not ti == tj and not ti + tj == 0:
                return i, j
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if not items[i][0] * items[i][2] == items[j][0] * items[j][2]:
                return i, j
    raise DecompositionError("no admissible merge pair")


def _sum_squares(terms: Sequence[Term], n1: int) -> MultiPoly:
    out = MultiPoly(n1, 2)
    for c, v in terms:
        out = out + MultiPoly.linear(list(v)) ** 2 * c
    return out


# dispatcher -----------------------------------------------------------------

def _embed(terms: Sequence[Term], offsets: Sequence[int], n1: int) -> List[Term]:
    """Place local coordinates j at global index offsets[j]."""
    out = []
    for c, v in terms:
        g: list = [0] * n1
        for j, x in enumerate(v):
            if not x == 0:
                g[offsets[j]] = x
        out.append((c, g))
    return out


def decompose_normal_sequence(seq: NormalSequence, cap: int = DEFAULT_DEPTH_CAP) -> IsotropicDecomposition:
    """Verified isotropic decomposition of size irk for a supported normal sequence."""
    n1 = seq.dimension
    spans, off = [], 0
    for lam, s in seq.blocks:
        spans.append(list(range(off, off + s)))
        off += s
    nonzero = [t for t, (lam, _) in enumerate(seq.blocks) if not lam == 0]
    bad = [seq.blocks[t] for t in nonzero if seq.blocks[t][1] > 1]
    if bad:
        lam, s = bad[0]
        raise UnsupportedShape(f"unsupported normal shape: block {lam}^({s}) (nonzero eigenvalue, size > 1)")
    nil = [t for t, (lam, s) in enumerate(seq.blocks) if lam == 0 and s >= 2]
    s3 = [t for t in nil if seq.blocks[t][1] == 3]
    others = [t for t in nil if seq.blocks[t][1] != 3]
    terms: List[Term] = []
    tower: Optional[Tower] = None
    diag_terms: Optional[List[Term]] = None
    if nonzero:
        lams = [seq.blocks[t][0] for t in nonzero]
        vecs = [[Fraction(int(i == spans[t][0])) for i in range(n1)] for t in nonzero]
        dm = diagonal_merge(lams, vecs, cap=cap)
        diag_terms = list(dm.terms)
        tower = tower_of(*[x for c, v in diag_terms for x in [c, *v]])
    if len(s3) == 1:
        t3 = s3[0]
        odd = [t for t in others if seq.blocks[t][1] % 2 == 1]
        even = [t for t in others if seq.blocks[t][1] % 2 == 0 and seq.blocks[t][1] >= 4]
        if odd:
            t = odd[0]
            terms += _embed(odd_plus_s3_terms(seq.blocks[t][1]), spans[t] + spans[t3], n1)
            others.remove(t)
        elif even:
            t = even[0]
            local, _ = even_plus_s3_terms(seq.blocks[t][1], cap=cap)
            terms += _embed(local, spans[t3] + spans[t], n1)
            others.remove(t)
        elif diag_terms is not None:
            i, j = _nonorthogonal_pair(diag_terms)
            (c1, v1), (c2, v2) = diag_terms[i], diag_terms[j]
            r1, tower = sqrt_adjoin(c1, tower, cap=cap)
            r2, tower = sqrt_adjoin(c2, tower, cap=cap)
            m1 = [r1 * x for x in v1]
            m2 = [r2 * x for x in v2]
            # move the S_3(0) block to the front coordinates and back
            order = spans[t3] + [i_ for i_ in range(n1) if i_ not in spans[t3]]
            local = [[m[g] for g in order] for m in (m1, m2)]
            t4, tower = s3_plus_two_squares_terms(local[0], local[1], tower, cap=cap)
            terms += _embed(t4, order, n1)
            diag_terms = [dt for k_, dt in enumerate(diag_terms) if k_ not in (i, j)]
        else:
            terms += _embed(s3_single_terms(), spans[t3], n1)
    elif len(s3) >= 2:
        groups = []
        rest = list(s3)
        if len(rest) % 2:
            groups.append(rest[:3])
            rest = rest[3:]
        while rest:
            groups.append(rest[:2])
            rest = rest[2:]
        for g in groups:
            local = s3_pair_terms() if len(g) == 2 else s3_triple_terms()
            terms += _embed(local, [i_ for t in g for i_ in spans[t]], n1)
    for t in others:
        s = seq.blocks[t][1]
        local = even_block_terms(s) if s % 2 == 0 else odd_block_terms(s)
        terms += _embed(local, spans[t], n1)
    if diag_terms:
        terms += diag_terms
    target = normal_blocks_matrix(seq).quadratic_form()
    dec = IsotropicDecomposition(2, n1, terms, QuadraticFormSpec.standard(n1 - 1))
    rep = verify(dec, target)
    if not rep.valid:
        raise DecompositionError("normal-sequence decomposition failed verification: " + "; ".join(rep.failures))
    return dec


def _nonorthogonal_pair(terms: Sequence[Term]) -> tuple:
    for i in range(len(terms)):
        for j in range(i + 1, len(terms)):
            if not _dot(terms[i][1], terms[j][1]) == 0:
                return i, j
    raise DecompositionError("all isotropic squares are mutually orthogonal")


def exceptional_gram(k: int) -> list:
    """Gram matrix of e_1, w_0, ..., w_k for S_3(0) + S_2(0)^k.

    w_0 is x0 - i x2 and w_j is x_{2j+1} - i x_{2j+2}; the matrix is
    diag(1, 0, ..., 0), so an isotropic vector of the span has no e_1 part.
    """
    n1 = 2 * k + 3
    vecs = [_lin(n1, (1, 1)), _lin(n1, (0, 1), (2, -I))]
    vecs += [_lin(n1, (2 * j + 1, 1), (2 * j + 2, -I)) for j in range(1, k + 1)]
    return [[_dot(u, v) for v in vecs] for u in vecs]


__all__ = [
    "QuadricError",
    "UnsupportedShape",
    "TraceZeroSym",
    "NormalSequence",
    "Classification",
    "j_matrix",
    "k_matrix",
    "normal_block",
    "normal_blocks_matrix",
    "classify_irk",
    "hollow_check",
    "odd_block_terms",
    "even_block_terms",
    "s3_pair_terms",
    "s3_triple_terms",
    "s3_single_terms",
    "odd_plus_s3_terms",
    "even_plus_s3_terms",
    "s3_plus_two_squares_terms",
    "diagonal_merge",
    "decompose_normal_sequence",
    "exceptional_gram",
]
