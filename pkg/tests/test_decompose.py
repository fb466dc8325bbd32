from __future__ import annotations

from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from generators import doubling_target
from isorank.algebra import I, MultiPoly
from isorank.apolarity import QuadraticFormSpec
from isorank.decompose import (
    DecompositionError,
    IsotropicDecomposition,
    catalecticant_lower_bound,
    double_from_waring,
    verify,
)
from isorank.ternary import uvz_point_to_x

STD2 = QuadraticFormSpec.standard(2)
VZ = MultiPoly.linear([1, -I, 0]) * MultiPoly.var(3, 2)
# the product v * z with v = (x0 - i x1)/2; the displayed identity is exact for it
VZ_PRODUCT = VZ.scale(Fraction(1, 2))


def vz_displayed() -> IsotropicDecomposition:
    """vz as 1/8, i/8, -1/8, -i/8 times squares of u+v+z, u-v+iz, u+v-z, u-v-iz."""
    pts = [(1, 1, 1), (1, -1, I), (1, 1, -1), (1, -1, -I)]
    cs = [Fraction(1, 8), I / 8, Fraction(-1, 8), -I / 8]
    return IsotropicDecomposition(2, 3, [(c, uvz_point_to_x(p)) for c, p in zip(cs, pts)], STD2)


def test_displayed_vz_decomposition_verifies():
    rep = verify(vz_displayed(), VZ_PRODUCT)
    assert rep.valid and rep.exact
    assert not verify(vz_displayed(), VZ).valid


def test_perturbed_coefficient_fails():
    dec = vz_displayed()
    dec.terms[0] = (dec.terms[0][0] + 1, dec.terms[0][1])
    rep = verify(dec, VZ_PRODUCT)
    assert not rep.valid and not rep.residual.is_zero()


def test_non_isotropic_term_reported():
    dec = IsotropicDecomposition(2, 3, [(1, [1, 0, 0])], STD2)
    rep = verify(dec, MultiPoly.var(3, 0) ** 2)
    assert not rep.valid
    assert any("term 0" in f and "isotropic" in f for f in rep.failures)


def test_catalecticant_examples():
    assert catalecticant_lower_bound(MultiPoly.var(3, 0) ** 4, 2) == 1
    assert catalecticant_lower_bound(VZ, 1) == 2
    y0, y1 = MultiPoly.var(2, 0), MultiPoly.var(2, 1)
    assert catalecticant_lower_bound(y0**2 - y1**2, 1) == 2


def test_catalecticant_vz_against_sympy():
    x0, x1, x2 = sp.symbols("x0 x1 x2")
    f = (x0 - sp.I * x1) * x2
    m = sp.Matrix([[sp.diff(f, a, b) for b in (x0, x1, x2)] for a in (x0, x1, x2)])
    assert m.rank() == 2


def test_doubling_difference_of_squares():
    w = QuadraticFormSpec.standard(1)
    target = MultiPoly.var(2, 0) ** 2 - MultiPoly.var(2, 1) ** 2
    dec = double_from_waring(target, [[1, 0], [0, 1]], w, rng_seed=0)
    assert verify(dec, target).valid and dec.size() <= 4


def test_doubling_keeps_isotropic_points():
    pts = [[1, I, 0], [1, -I, 0], [0, 1, I]]
    cs = [2, -1, 3]
    target = sum((MultiPoly.linear(p) ** 3 * c for p, c in zip(pts[1:], cs[1:])), MultiPoly.linear(pts[0]) ** 3 * cs[0])
    dec = double_from_waring(target, pts, STD2)
    assert dec.size() == 3 and verify(dec, target).valid


def test_doubling_vz_from_isotropic_points():
    pts = [p for _, p in vz_displayed().terms]
    dec = double_from_waring(VZ, pts, STD2)
    assert dec.size() == 4 and verify(dec, VZ).valid


def test_doubling_rejects_inexpressible_target():
    with pytest.raises(DecompositionError):
        double_from_waring(VZ, [[1, I, 0]], STD2)


def test_doubling_rejects_non_harmonic():
    with pytest.raises(DecompositionError):
        double_from_waring(MultiPoly.var(3, 0) ** 2, [[1, 0, 0]], STD2)


def test_json_round_trip():
    dec = vz_displayed()
    back = IsotropicDecomposition.from_json(dec.to_json())
    assert back.recompose() == dec.recompose()


@settings(max_examples=25)
@given(st.integers(0, 10_000))
def test_doubling_property(seed):
    target, pts, w = doubling_target(seed)
    dec = double_from_waring(target, pts, w, rng_seed=seed)
    assert verify(dec, target).valid
    assert dec.size() <= 2 * len(pts)
    assert catalecticant_lower_bound(target) <= dec.size()


def test_lower_bound_linear_form():
    assert catalecticant_lower_bound(MultiPoly.linear([1, I, 2])) == 1
