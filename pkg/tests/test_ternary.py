from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from generators import gaussian, random_harmonic
from isorank.algebra import I, MultiPoly, rank, to_complex
from isorank.apolarity import QuadraticFormSpec, harmonic_basis, is_harmonic
from isorank.decompose import catalecticant_lower_bound, verify
from isorank.ternary import (
    BinaryForm,
    TernaryError,
    beta,
    beta_inverse,
    binary_decompose,
    binary_rank,
    catalecticant,
    from_uvz,
    irk_ternary,
    ternary_decompose,
    to_uvz,
)

STD2 = QuadraticFormSpec.standard(2)
X = [MultiPoly.var(3, i) for i in range(3)]
U, V, Z = X  # the same variables read in (u, v, z) coordinates
VZ = MultiPoly.linear([1, -I, 0]) * X[2]


def binary(*coeffs) -> BinaryForm:
    return BinaryForm(tuple(Fraction(c) if not hasattr(c, "tower") else c for c in coeffs))


def test_uvz_examples():
    assert to_uvz(X[2]) == Z
    assert to_uvz(VZ) == (V * Z).scale(2)
    q2 = X[0] ** 2 + X[1] ** 2 + X[2] ** 2
    assert to_uvz(q2) == Z**2 - (U * V).scale(4)


def test_uvz_arity_checked():
    with pytest.raises(TernaryError):
        to_uvz(MultiPoly.var(2, 0))


@given(st.integers(0, 10_000), st.integers(1, 4))
def test_uvz_round_trip(seed, d):
    rng = random.Random(seed)
    from isorank.algebra import monomials

    f = MultiPoly(3, d, {e: gaussian(rng) for e in rng.sample(monomials(3, d), 2)})
    assert from_uvz(to_uvz(f)) == f


def test_beta_kills_quadric():
    assert beta(Z**2 - (U * V).scale(4), 2).is_zero()


def test_beta_of_vz():
    # the displayed monomial rule gives 2^1 * 2! = 4 on s t^3
    assert beta(V * Z, 2).coeffs == (0, 0, 0, 4, 0)


def test_beta_of_u_plus_v():
    assert beta(U + V, 1).coeffs == (1, 0, 1)


@pytest.mark.parametrize("d", range(1, 5))
def test_beta_inverse_is_right_inverse(d):
    for j in range(2 * d + 1):
        e = [0] * (2 * d + 1)
        e[j] = 1
        b = BinaryForm(tuple(e))
        g = beta_inverse(b)
        assert beta(g, d) == b
        assert is_harmonic(from_uvz(g), STD2)


def test_beta_inverse_of_top_power_is_isotropic_power():
    d = 3
    g = beta_inverse(BinaryForm((1,) + (0,) * (2 * d)))
    # s^(2d) comes from u^d alone, the power of an isotropic form
    assert list(g.terms) == [(d, 0, 0)]
    assert beta_inverse(BinaryForm((0, 0, 0))).is_zero()


@pytest.mark.parametrize("d", range(1, 6))
def test_beta_injective_on_harmonics(d):
    rows = [list(beta(to_uvz(h), d).coeffs) for h in harmonic_basis(2, d)]
    assert rank(rows, 2 * d + 1) == 2 * d + 1


def test_binary_rank_examples():
    assert binary_rank(binary(0, 0, 0, 1, 0)).rank == 4
    assert binary_rank(binary(1, 4, 6, 4, 1)).rank == 1
    assert binary_rank(binary(0, 0, 1, 0, 0)).rank == 3


def test_binary_rank_zero_rejected():
    with pytest.raises(TernaryError):
        binary_rank(binary(0, 0, 0))


def test_binary_decompose_st3():
    b = binary(0, 0, 0, 2, 0)
    dec = binary_decompose(b)
    assert len(dec.terms) == 4 and dec.recompose() == b


def test_binary_decompose_single_power():
    b = binary(1, 4, 6, 4, 1)
    dec = binary_decompose(b)
    assert len(dec.terms) == 1
    c, (p, q) = dec.terms[0]
    assert c * p**4 == 1 and q == p


def test_binary_decompose_s2t2():
    b = binary(0, 0, 1, 0, 0)
    dec = binary_decompose(b)
    assert len(dec.terms) == 3
    rec = dec.recompose()
    assert max(abs(to_complex(x) - to_complex(y)) for x, y in zip(rec.coeffs, b.coeffs)) < 1e-10


def test_ternary_vz():
    res = ternary_decompose(VZ)
    assert res.decomposition.size() == 4 and res.exact
    assert verify(res.decomposition, VZ).valid
    assert irk_ternary(VZ) == 4


def test_ternary_isotropic_power():
    l = MultiPoly.linear([1, I, 0])
    res = ternary_decompose(l**4)
    assert res.decomposition.size() == 1


def test_ternary_random_cubic_seed_7():
    h = random_harmonic(random.Random(7), 2, 3)
    res = ternary_decompose(h, seed=7)
    assert 1 <= res.decomposition.size() <= 4
    assert verify(res.decomposition, h, tol=1e-8).valid
    assert res.decomposition.size() == irk_ternary(h)


def test_ternary_rejects_non_harmonic():
    with pytest.raises(TernaryError):
        ternary_decompose(X[0] ** 2)


def sympy_r0(b: BinaryForm) -> int:
    """Least k with a nontrivial kernel of the k-th catalecticant, via sympy."""
    for k in range(1, b.degree + 2):
        m = sp.Matrix([[sp.nsimplify(complex(to_complex(x)).real) + sp.I * sp.nsimplify(complex(to_complex(x)).imag)
                        for x in row] for row in catalecticant(b, k)])
        if m.nullspace():
            return k
    raise AssertionError("unreachable")


@given(st.integers(0, 10_000), st.integers(1, 5))
def test_comas_seiguer_consistency(seed, d):
    rng = random.Random(seed)
    D = 2 * d
    # mix dense and sparse forms so both strata occur
    coeffs = [gaussian(rng, 2) if rng.random() < 0.6 else 0 for _ in range(D + 1)]
    b = BinaryForm(tuple(coeffs))
    if b.is_zero():
        return
    info = binary_rank(b, seed)
    assert info.r0 == sympy_r0(b)
    if info.branch == "low":
        assert info.rank == info.r0 <= d + 1
    else:
        assert info.rank == D - info.r0 + 2 and info.rank > d + 1
    dec = binary_decompose(b, info, seed)
    assert len(dec.terms) == info.rank


@pytest.mark.parametrize("seed", range(20))
def test_ternary_decompositions_verify(seed):
    rng = random.Random(seed)
    d = 2 + seed % 4
    h = random_harmonic(rng, 2, d)
    res = ternary_decompose(h, seed=seed)
    assert verify(res.decomposition, h, tol=1e-8).valid
    assert res.decomposition.size() == res.rank.rank
    assert catalecticant_lower_bound(h) <= res.decomposition.size()
