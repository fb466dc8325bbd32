from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from generators import cayley_orthogonal
from isorank.algebra import QI_TOWER, I, determinant, identity, matmul, qi, rank, sqrt_adjoin, transpose
from isorank.apolarity import QuadraticFormSpec
from isorank.decompose import IsotropicDecomposition, verify
from isorank.quadrics import (
    NormalSequence,
    QuadricError,
    TraceZeroSym,
    UnsupportedShape,
    classify_irk,
    decompose_normal_sequence,
    diagonal_merge,
    exceptional_gram,
    hollow_check,
    normal_block,
    normal_blocks_matrix,
    s3_pair_terms,
    s3_triple_terms,
)

H = Fraction(1, 2)


def seq(*blocks) -> NormalSequence:
    return NormalSequence(tuple((Fraction(lam) if not hasattr(lam, "tower") else lam, s) for lam, s in blocks))


def diag(*xs) -> TraceZeroSym:
    n = len(xs)
    return TraceZeroSym(tuple(tuple(Fraction(xs[i]) if i == j else Fraction(0) for j in range(n)) for i in range(n)))


def test_s3_block_display():
    m = normal_blocks_matrix(seq((0, 3))).tolist()
    expected = [[0, (1 + I) * H, 0], [(1 + I) * H, 0, (1 - I) * H], [0, (1 - I) * H, 0]]
    assert m == expected


def test_s2_block_display():
    assert normal_blocks_matrix(seq((0, 2))).tolist() == [[I * H, H], [H, -I * H]]


def test_diagonal_sequence():
    assert normal_blocks_matrix(seq((1, 1), (-1, 1))).tolist() == [[1, 0], [0, -1]]


def test_trace_constraint():
    with pytest.raises(QuadricError):
        seq((1, 1), (1, 1))
    with pytest.raises(QuadricError):
        TraceZeroSym(((1, 0), (0, 0)))


@pytest.mark.parametrize("k", range(1, 10))
@pytest.mark.parametrize("lam", [Fraction(0), Fraction(3, 2), qi(1, -2)])
def test_block_determinant_and_rank(k, lam):
    b = normal_block(lam, k)
    assert determinant(b) == lam**k
    if lam == 0:
        assert rank(b, k) == k - 1


def test_classify_examples():
    c = classify_irk(normal_blocks_matrix(seq((0, 3))))
    assert (c.rank, c.irk) == (2, 4)
    c = classify_irk(diag(1, -1))
    assert (c.rank, c.irk) == (2, 2)
    c = classify_irk(normal_blocks_matrix(seq((0, 3), (0, 2), (0, 2))))
    assert (c.rank, c.irk) == (4, 6)


def test_decompose_odd_block():
    dec = decompose_normal_sequence(seq((0, 5)))
    assert dec.size() == 4


def test_decompose_s3_pair_and_triple():
    assert decompose_normal_sequence(seq((0, 3), (0, 3))).size() == 4
    assert len(s3_pair_terms()) == 4 and len(s3_triple_terms()) == 6
    assert decompose_normal_sequence(seq((0, 3), (0, 3), (0, 3))).size() == 6


def test_decompose_exceptional_class():
    dec = decompose_normal_sequence(seq((0, 3), (0, 2), (0, 2)))
    assert dec.size() == 6


def test_decompose_diagonal():
    dec = decompose_normal_sequence(seq((1, 1), (1, 1), (-2, 1)))
    assert dec.size() == 3


def test_unsupported_shape_is_typed():
    with pytest.raises(UnsupportedShape, match="nonzero eigenvalue"):
        decompose_normal_sequence(seq((1, 2), (-2, 1)))


@pytest.mark.parametrize("lams", [(1, -1), (2, -1, -1), (1, 1, 1, -3), (qi(1, 1), qi(-1, -1)), (3, qi(0, 2), qi(-3, -2))])
def test_diagonal_merge(lams):
    lams = [Fraction(x) if not hasattr(x, "tower") else x for x in lams]
    dec = diagonal_merge(lams)
    assert dec.size() == len(lams)
    n = len(lams)
    target = TraceZeroSym(tuple(tuple(lams[i] if i == j else 0 for j in range(n)) for i in range(n)))
    assert verify(dec, target.quadratic_form()).valid


def test_diagonal_merge_rejects_zero():
    with pytest.raises(QuadricError):
        diagonal_merge([Fraction(1), Fraction(0), Fraction(-1)])


def test_hollow_check():
    r2, _ = sqrt_adjoin(Fraction(2), QI_TOWER)
    s = 1 / r2
    q = [[s, -s], [s, s]]
    assert hollow_check(diag(1, -1), q)
    s3 = normal_blocks_matrix(seq((0, 3)))
    assert hollow_check(s3, identity(3))
    with pytest.raises(QuadricError):
        hollow_check(diag(1, -1), [[1, 1], [0, 1]])


@pytest.mark.parametrize("k", range(0, 5))
def test_exceptional_span_obstruction(k):
    g = exceptional_gram(k)
    n = len(g)
    assert g == [[Fraction(int(i == j == 0)) for j in range(n)] for i in range(n)]
    # every isotropic combination c has c^T G c = c_0^2 = 0, hence no e_1 part
    rng = random.Random(k)
    for _ in range(20):
        c = [qi(rng.randint(-3, 3), rng.randint(-3, 3)) for _ in range(n)]
        val = sum((c[i] * g[i][j] * c[j] for i in range(n) for j in range(n)), 0)
        assert (val == 0) == (c[0] == 0)


def conjugate(h: TraceZeroSym, q: list) -> TraceZeroSym:
    return TraceZeroSym(tuple(tuple(r) for r in matmul(matmul(transpose(q), h.tolist()), q)))


SHAPES = [
    ((0, 3),),
    ((0, 3), (0, 2)),
    ((0, 2), (0, 2)),
    ((0, 4), (1, 1), (-1, 1)),
    ((2, 1), (-1, 1), (-1, 1)),
    ((0, 3), (0, 3)),
    ((1, 2), (-2, 1)),
]


@given(st.sampled_from(SHAPES), st.integers(0, 10_000))
def test_classification_is_orthogonally_invariant(shape, seed):
    h = normal_blocks_matrix(seq(*shape))
    q = cayley_orthogonal(random.Random(seed), h.size)
    assert matmul(transpose(q), q) == identity(h.size)
    a, b = classify_irk(h), classify_irk(conjugate(h, q))
    assert (a.rank, a.irk, a.nilpotent, a.rank_square) == (b.rank, b.irk, b.nilpotent, b.rank_square)


def test_matrix_json_round_trip():
    h = normal_blocks_matrix(seq((0, 3), (0, 2)))
    assert TraceZeroSym.from_json(h.to_json()) == h


def test_normal_sequence_parsing():
    s = NormalSequence.parse("0^3,1+i^1,-1-i^1")
    assert s.blocks == ((0, 3), (qi(1, 1), 1), (qi(-1, -1), 1))
    assert NormalSequence.from_json(s.to_json()) == s


def test_s3_single_exact_and_matches_ternary_rank():
    from isorank.quadrics import s3_single_terms
    from isorank.ternary import ternary_decompose

    f = TraceZeroSym(tuple(tuple(r) for r in normal_block(0, 3))).quadratic_form()
    dec = IsotropicDecomposition(2, 3, s3_single_terms(), QuadraticFormSpec.standard(2))
    rep = verify(dec, f)
    assert rep.valid and rep.exact
    assert ternary_decompose(f).rank.rank == dec.size() == 4
