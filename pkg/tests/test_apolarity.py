from __future__ import annotations

import random
from fractions import Fraction
from math import comb

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from generators import random_harmonic
from isorank.algebra import I, MultiPoly, monomials
from isorank.apolarity import (
    ApolarityError,
    QuadraticFormSpec,
    contract,
    harmonic_basis,
    harmonic_dimension,
    harmonic_project,
    is_harmonic,
    is_isotropic,
    is_orthogonal,
    orthogonal_complement,
    perp,
    tangent_space,
)

X = [MultiPoly.var(3, i) for i in range(3)]
STD2 = QuadraticFormSpec.standard(2)


def D(arity: int, *exp: int) -> MultiPoly:
    return MultiPoly.monomial(exp)


def test_contract_examples():
    x0 = MultiPoly.var(3, 0)
    assert contract(D(3, 2, 0, 0), x0**3) == x0.scale(6)
    lap = STD2.omega()
    x1 = MultiPoly.var(3, 1)
    assert contract(lap, x0**2 - x1**2).is_zero()
    assert contract(D(2, 1, 1), MultiPoly.var(2, 0) ** 2 * MultiPoly.var(2, 1)) == MultiPoly.var(2, 0).scale(2)


def test_contract_degree_too_high():
    with pytest.raises(ValueError):
        contract(D(2, 3, 0), MultiPoly.var(2, 0) ** 2)


def test_harmonic_examples():
    w1 = QuadraticFormSpec.standard(1)
    y0, y1 = MultiPoly.var(2, 0), MultiPoly.var(2, 1)
    assert is_harmonic(y0**2 - y1**2, w1)
    assert not is_harmonic(y0**2, w1)
    vz = MultiPoly.linear([1, -I, 0]) * X[2]
    assert is_harmonic(vz, STD2)


def test_harmonic_project_x0_squared():
    h, g = harmonic_project(X[0] ** 2, STD2)
    expected = (X[0] ** 2).scale(2) - X[1] ** 2 - X[2] ** 2
    assert h == expected.scale(Fraction(1, 3))
    assert g.degree == 0 and g.coeff((0, 0, 0)) == Fraction(1, 3)
    # independent check of the Laplacian with sympy
    x0, x1, x2 = sp.symbols("x0 x1 x2")
    hs = (2 * x0**2 - x1**2 - x2**2) / 3
    assert sp.simplify(sum(sp.diff(hs, v, 2) for v in (x0, x1, x2))) == 0


def test_harmonic_project_trivial_cases():
    vz = MultiPoly.linear([1, -I, 0]) * X[2]
    h, g = harmonic_project(vz, STD2)
    assert h == vz and g.is_zero()
    h, g = harmonic_project(STD2.quadric(), STD2)
    assert h.is_zero() and g.coeff((0, 0, 0)) == 1


def test_harmonic_project_rejects_degenerate():
    w = QuadraticFormSpec(((1, 0), (0, 0)))
    with pytest.raises(ApolarityError):
        harmonic_project(MultiPoly.var(2, 0) ** 2, w)


def test_isotropy_and_orthogonality():
    assert is_isotropic([1, I, 0], STD2)
    assert not is_isotropic([1, 0, 0], STD2)
    assert is_orthogonal([1, 0, 0], [0, 1, 0], STD2)


@pytest.mark.parametrize("n,d,dim", [(1, 3, 2), (2, 3, 7), (2, 1, 3)])
def test_harmonic_basis_sizes(n, d, dim):
    basis = harmonic_basis(n, d)
    assert len(basis) == dim
    assert all(is_harmonic(b, QuadraticFormSpec.standard(n)) for b in basis)


@pytest.mark.parametrize("n", range(1, 7))
@pytest.mark.parametrize("d", range(1, 7))
def test_harmonic_dimension_formula(n, d):
    assert len(harmonic_basis(n, d)) == comb(n + d, n) - comb(n + d - 2, n) == harmonic_dimension(n, d)


def test_harmonic_basis_hyperbolic():
    w = QuadraticFormSpec.hyperbolic(3, 2)
    basis = harmonic_basis(3, 3, w)
    assert len(basis) == harmonic_dimension(3, 3)
    assert all(is_harmonic(b, w) for b in basis)


def test_perp_examples():
    d = 3
    p = perp([MultiPoly.var(2, 0) ** d], 1, d)
    assert len(p) == d
    assert all(b.coeff((d, 0)) == 0 for b in p)
    assert perp([MultiPoly.monomial(e) for e in monomials(2, 2)], 1, 2) == []
    p = perp([MultiPoly.var(2, 0) * MultiPoly.var(2, 1)], 1, 2)
    assert len(p) == 2 and all(b.coeff((1, 1)) == 0 for b in p)


def test_tangent_space_example():
    l = [1, I, 0]
    ts = tangent_space(l, 3, STD2)
    assert len(ts) == 2
    lp = MultiPoly.linear(l)
    assert ts[0] == lp**3
    assert all(is_harmonic(t, STD2) for t in ts)
    w1 = QuadraticFormSpec.standard(1)
    assert tangent_space([1, I], 2, w1) == [MultiPoly.linear([1, I]) ** 2]


def test_tangent_space_needs_isotropic():
    with pytest.raises(ApolarityError):
        tangent_space([1, 0, 0], 3, STD2)


def test_orthogonal_complement_lists_l_first():
    comp = orthogonal_complement([1, I, 0], STD2)
    assert comp[0] == [1, I, 0] and len(comp) == 2


coeff = st.integers(-4, 4)


@given(st.integers(1, 4), st.data())
def test_leibniz_rule(n, data):
    w = QuadraticFormSpec.standard(n)
    a = data.draw(st.lists(coeff, min_size=n + 1, max_size=n + 1))
    b = data.draw(st.lists(coeff, min_size=n + 1, max_size=n + 1))
    f, g = MultiPoly.linear(a), MultiPoly.linear(b)
    lhs = contract(w.omega(), f * g)
    # both factors are linear, so omega o f = omega o g = 0 and only 2 B(f, g) survives
    assert lhs == MultiPoly.constant(n + 1, 2 * w.bilinear(a, b))


@given(st.integers(0, 10_000), st.integers(1, 3), st.integers(2, 4))
def test_projection_is_projector(seed, n, d):
    rng = random.Random(seed)
    w = QuadraticFormSpec.standard(n)
    f = MultiPoly(n + 1, d, {e: rng.randint(-3, 3) for e in rng.sample(monomials(n + 1, d), 3)})
    h, g = harmonic_project(f, w)
    assert is_harmonic(h, w)
    assert w.quadric() * g + h == f
    h2, g2 = harmonic_project(h, w)
    assert h2 == h and g2.is_zero()


@given(st.integers(0, 10_000), st.integers(2, 5))
def test_tangent_vectors_are_harmonic(seed, d):
    rng = random.Random(seed)
    from generators import isotropic_point

    n = rng.randint(1, 4)
    l = isotropic_point(rng, n) if n >= 2 else [1, I]
    w = QuadraticFormSpec.standard(n)
    ts = tangent_space(l, d, w)
    assert len(ts) == n
    assert all(is_harmonic(t, w) for t in ts)


def test_random_harmonic_generator():
    h = random_harmonic(random.Random(3), 2, 3)
    assert is_harmonic(h, STD2)
