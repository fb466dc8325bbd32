from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from isorank.algebra import (
    I,
    QI_TOWER,
    ExtensionOverflow,
    Fp,
    InconsistentSystem,
    MultiPoly,
    is_zero,
    kernel,
    matvec,
    qi,
    rank,
    rank_kernel_solve,
    solve,
    sqrt_adjoin,
)
from isorank.algebra.modp import ModpEchelon, matmul_mod
from isorank.algebra.serial import ScalarDecoder, SchemaError, poly_from_json, poly_to_json, scalar_to_json

P = 32003
small = st.integers(-20, 20)
rat = st.builds(Fraction, small, st.integers(1, 9))
gauss = st.builds(qi, rat, rat)
fp = st.builds(lambda v: Fp(v, P), st.integers(0, P - 1))


# --- scalars ---------------------------------------------------------------------------


def test_gaussian_norm():
    assert (1 + I) * (1 - I) == 2


def test_fp_inverse_of_two():
    assert int(Fp(2, P).inverse()) == 16002


def test_sqrt_of_2i_needs_no_extension():
    t, tower = sqrt_adjoin(2 * I, QI_TOWER)
    assert t * t == 2 * I
    assert tower is QI_TOWER
    assert t == 1 + I or t == -(1 + I)


def test_sqrt_adjoin_extends_and_reuses():
    t, tower = sqrt_adjoin(Fraction(2), QI_TOWER)
    assert t * t == 2 and tower.level == 1
    u, tower2 = sqrt_adjoin(Fraction(8), tower)
    assert u * u == 8 and tower2 is tower
    v, tower3 = sqrt_adjoin(2 * I, tower)
    assert v * v == 2 * I and tower3 is tower


def test_tower_depth_cap():
    tower = QI_TOWER
    with pytest.raises(ExtensionOverflow):
        for p in (2, 3, 5, 7):
            _, tower = sqrt_adjoin(Fraction(p), tower, cap=3)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        Fp(0, P).inverse()


@given(gauss, gauss, gauss)
def test_qi_field_axioms(a, b, c):
    assert a + b == b + a and a * b == b * a
    assert (a + b) + c == a + (b + c) and (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == 0
    if not is_zero(a):
        assert a * (1 / a) == 1


@given(fp, fp, fp)
def test_fp_field_axioms(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    if int(a) != 0:
        assert a * a.inverse() == 1


@given(rat, rat, rat, rat)
def test_tower_field_axioms(a, b, c, e):
    t, _ = sqrt_adjoin(Fraction(3), QI_TOWER)
    x = a + b * t + I * c
    y = e - t
    assert x * y == y * x
    assert (x + y) * t == x * t + y * t
    if not is_zero(x):
        assert x * (1 / x) == 1


# --- polynomials -------------------------------------------------------------------------


def test_difference_of_squares():
    x0, x1 = MultiPoly.var(2, 0), MultiPoly.var(2, 1)
    assert (x0 + x1) * (x0 - x1) == x0**2 - x1**2


def test_substitute_diagonal():
    f = MultiPoly.var(2, 0) * MultiPoly.var(2, 1)
    g = f.substitute([[1], [1]])
    assert g == MultiPoly.var(1, 0) ** 2


def test_evaluate():
    f = MultiPoly.var(2, 0) ** 2 * MultiPoly.var(2, 1)
    assert f.evaluate([2, 3]) == 12


def test_inhomogeneous_rejected():
    with pytest.raises(ValueError):
        MultiPoly(2, 2, {(1, 0): 1})


def poly_strategy(arity: int, degree: int):
    from isorank.algebra import monomials

    mons = monomials(arity, degree)
    return st.lists(st.tuples(st.sampled_from(mons), gauss), max_size=6).map(
        lambda ts: MultiPoly(arity, degree, {e: c for e, c in ts if not is_zero(c)})
    )


@given(st.data())
def test_poly_ring_laws(data):
    arity = data.draw(st.integers(1, 5))
    f = data.draw(poly_strategy(arity, data.draw(st.integers(0, 2))))
    g = data.draw(poly_strategy(arity, data.draw(st.integers(0, 2))))
    h = data.draw(poly_strategy(arity, g.degree))
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h


@given(st.data())
def test_substitution_is_homomorphism(data):
    arity = data.draw(st.integers(1, 4))
    f = data.draw(poly_strategy(arity, data.draw(st.integers(0, 2))))
    g = data.draw(poly_strategy(arity, data.draw(st.integers(0, 2))))
    m = data.draw(st.lists(st.lists(small, min_size=2, max_size=2), min_size=arity, max_size=arity))
    assert (f * g).substitute(m) == f.substitute(m) * g.substitute(m)
    if f.degree == g.degree:
        assert (f + g).substitute(m) == f.substitute(m) + g.substitute(m)


# --- exact linear algebra ------------------------------------------------------------------


def test_identity_rank():
    res = rank_kernel_solve([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert res["rank"] == 3 and res["kernel"] == []


def test_rank_one_kernel():
    k = kernel([[1, 2], [2, 4]], 2)
    assert rank([[1, 2], [2, 4]], 2) == 1
    assert len(k) == 1 and k[0][0] == -2 * k[0][1]


def test_solve_reports_inconsistency():
    with pytest.raises(InconsistentSystem):
        solve([[1, 1], [1, 1]], [1, 2], 2)


@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=6))
def test_rank_plus_nullity(rows):
    k = kernel(rows, 4)
    assert rank(rows, 4) + len(k) == 4
    for v in k:
        assert all(x == 0 for x in matvec(rows, v))


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_random_modp_matrix_full_column_rank(seed):
    rng = np.random.default_rng(seed)
    a = rng.integers(0, P, size=(300, 289))
    e = ModpEchelon(289, P)
    e.add_block(a)
    assert e.rank == 289
    # a short slice has a kernel; it must be annihilated exactly
    w = ModpEchelon(289, P)
    w.add_block(a[:250])
    ker = w.kernel()
    assert ker.shape[0] == 289 - 250
    assert not matmul_mod(a[:250], ker.T, P).any()


# --- JSON ------------------------------------------------------------------------------------


def test_poly_json_round_trip():
    f = MultiPoly.linear([1, -I, 0]) * MultiPoly.var(3, 2)
    obj = poly_to_json(f)
    assert poly_from_json(obj) == f


def test_tower_scalar_round_trip():
    t, _ = sqrt_adjoin(Fraction(5), QI_TOWER)
    x = Fraction(1, 2) + I * t
    dec = ScalarDecoder()
    y = dec(scalar_to_json(x))
    assert y * y == x * x


def test_poly_json_degree_mismatch():
    with pytest.raises(SchemaError):
        poly_from_json({"field": "Q", "arity": 2, "degree": 2, "terms": [{"exp": [1, 0], "re": "1"}]})
