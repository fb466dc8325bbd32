from __future__ import annotations

import json
from math import comb

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from isorank.secant_lab import (
    PRIMES,
    CharacteristicError,
    DoublePoint,
    LinearSection,
    ParameterError,
    PartialDoublePoint,
    PresentationError,
    SchemeError,
    SchemeSpec,
    SimplePoint,
    admissible_r,
    cases,
    conditions_rank_ambient,
    expected_secant_dim,
    f,
    generic_irk,
    horace_parameters,
    k_delta,
    k_delta_closed_form,
    legendre,
    num2_report,
    num_lem_report,
    postulation_check,
    presentation,
    random_quadric_point,
    run_case,
    sample_point,
    scheme_from_json,
    sqrt_mod,
)
from isorank.secant_lab.appendix import cubic2
from isorank.secant_lab.quadric_fp import is_prime
from isorank.secant_lab.scheme import condition_rows, harmonic_basis_mod_p, random_points_on, unit
from isorank.secant_lab.terracini import ExperimentConfig, terracini_dimension, terracini_grid, terracini_profile

P = 32003


# --- closed forms -----------------------------------------------------------------------


def test_closed_form_examples():
    assert expected_secant_dim(4, 2, 3) == 10
    assert f(3, 4) == 25 and expected_secant_dim(3, 4, 5) == 14
    assert f(2, 3) == 7 and generic_irk(2, 3) == 4


@pytest.mark.parametrize("n", range(1, 8))
def test_quadric_generic_rank(n):
    assert generic_irk(n, 2) == n + 1
    assert expected_secant_dim(n, 2, n + 1) == f(n, 2) - 1


def test_f_matches_harmonic_count():
    for n in range(1, 10):
        for d in range(0, 8):
            assert f(n, d) == comb(n + d, n) - (comb(n + d - 2, n) if d >= 2 else 0)


# --- F_p quadrics -------------------------------------------------------------------------


@pytest.mark.parametrize("p", PRIMES)
def test_primes_are_prime(p):
    assert is_prime(p)


def test_minus_one_is_not_a_square_mod_32003():
    assert P % 4 == 3 and legendre(-1, P) == -1
    with pytest.raises(PresentationError):
        random_quadric_point(3, P, 0, "standard")


def test_standard_presentation_where_minus_one_is_square():
    p = 104729
    assert legendre(-1, p) == 1
    pt = random_quadric_point(4, p, 5, "standard")
    assert presentation("standard", 4, p).value(pt) == 0 and any(pt)


@given(st.integers(1, 10), st.integers(0, 10_000), st.sampled_from(PRIMES))
def test_hyperbolic_points(n, seed, p):
    pt = random_quadric_point(n, p, seed)
    assert presentation("hyperbolic", n, p).value(pt) == 0 and any(pt)
    assert pt == random_quadric_point(n, p, seed)


def test_hyperbolic_line_points():
    for seed in range(10):
        pt = random_quadric_point(1, P, seed)
        assert pt.count(0) == 1


@given(st.integers(0, 10**6), st.sampled_from(PRIMES + (17, 97, 257, 7681)))
def test_tonelli_shanks(a, p):
    r = sqrt_mod(a * a, p)
    assert r is not None and r * r % p == a * a % p
    if legendre(a, p) == -1:
        assert sqrt_mod(a, p) is None


@given(st.sampled_from(["hyperbolic", "appendix", "random"]), st.integers(2, 8), st.integers(0, 1000))
def test_sampled_points_lie_on_quadric(name, n, seed):
    quad = presentation(name, n, P, seed)
    assert quad.is_nondegenerate()
    pt = sample_point(quad, np.random.default_rng(seed))
    assert quad.value(pt) == 0
    tb = quad.tangent_basis(pt)
    assert tb.shape[0] == n and all(quad.bilinear(pt, v) == 0 for v in tb)


def test_dual_gram_is_inverse():
    quad = presentation("random", 5, P, 3)
    a = quad.gram @ quad.dual_gram() % P
    assert np.array_equal(a, np.eye(6, dtype=np.int64))


# --- Terracini -------------------------------------------------------------------------------


@pytest.mark.parametrize("n,d,r,dim", [(4, 2, 3, 10), (3, 3, 1, 2), (4, 3, 6, 23)])
def test_terracini_examples(n, d, r, dim):
    assert terracini_dimension(ExperimentConfig(n, d, r)) == dim


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(3, 3, 0)
    with pytest.raises(ValueError):
        ExperimentConfig(3, 3, 1, p=32001)


@given(st.integers(2, 5), st.integers(2, 4), st.integers(0, 100))
def test_terracini_monotone_and_bounded(n, d, seed):
    prof = terracini_profile(n, d, seed=seed, retries=1)
    assert all(a <= b for a, b in zip(prof.dims, prof.dims[1:]))
    assert all(x <= f(n, d) - 1 for x in prof.dims)
    assert prof.dims[0] == n - 1


def test_grid_parallel_matches_serial():
    a = terracini_grid([3, 4], [3], workers=1)
    b = terracini_grid([3, 4], [3], workers=2)
    assert a == b and all(row.ok for row in a)


# --- postulation ------------------------------------------------------------------------------


def test_one_double_point_on_conic_degree_one():
    quad = presentation("hyperbolic", 2, P)
    s = SchemeSpec(2, P, quad, [DoublePoint(unit(2, 0))])
    assert postulation_check(s, 1).h0 == 1


@pytest.mark.parametrize("n,d", [(2, 3), (3, 4), (5, 2)])
def test_empty_scheme(n, d):
    s = SchemeSpec(n, P, presentation("hyperbolic", n, P), [])
    assert postulation_check(s, d).h0 == f(n, d)


def test_cubic1_has_no_quadrics():
    res = run_case("cubic1")
    assert res.h0 == 0 and res.ambient == 1


@pytest.mark.parametrize("n,d,r", [(3, 3, 3), (4, 3, 5), (3, 4, 6), (4, 2, 4), (5, 3, 7), (2, 5, 5)])
def test_postulation_matches_terracini(n, d, r):
    seed = 0
    quad = presentation("hyperbolic", n, P, seed)
    pts = random_points_on(quad, r, np.random.default_rng([seed, 99]))
    s = SchemeSpec(n, P, quad, [DoublePoint(x) for x in pts])
    res = postulation_check(s, d)
    dim = terracini_dimension(ExperimentConfig(n, d, r, seed=seed))
    assert res.h0 == f(n, d) - 1 - dim
    assert conditions_rank_ambient(s, d) == res.conditions_rank


@given(st.integers(2, 5), st.integers(1, 4), st.integers(0, 6), st.integers(0, 1000))
def test_ambient_rank_equals_harmonic_rank(n, d, r, seed):
    quad = presentation("hyperbolic", n, P, seed)
    rng = np.random.default_rng(seed)
    comps = [DoublePoint(x) for x in random_points_on(quad, r, rng)]
    comps.append(SimplePoint(random_points_on(quad, 1, rng)[0]))
    s = SchemeSpec(n, P, quad, comps)
    res = postulation_check(s, d)
    assert res.h0 >= res.expected_h0
    if n >= 3:
        comps.append(LinearSection([rng.integers(0, P, size=n + 1).tolist()]))
        s = SchemeSpec(n, P, quad, comps)
        res = postulation_check(s, d)
    assert conditions_rank_ambient(s, d) == res.conditions_rank


def test_partial_double_point_length():
    quad = presentation("hyperbolic", 4, P)
    s = SchemeSpec(4, P, quad, [PartialDoublePoint(unit(4, 0), [unit(4, 2), unit(4, 3)])])
    assert s.length() == 3
    assert postulation_check(s, 3).conditions_rank == 3


def test_scheme_validation():
    quad = presentation("hyperbolic", 3, P)
    with pytest.raises(SchemeError, match="not on the quadric"):
        SchemeSpec(3, P, quad, [SimplePoint(unit(3, 2))])
    with pytest.raises(SchemeError, match="not tangent"):
        SchemeSpec(3, P, quad, [PartialDoublePoint(unit(3, 0), [unit(3, 1)])])
    with pytest.raises(SchemeError, match="dependent"):
        SchemeSpec(3, P, quad, [PartialDoublePoint(unit(3, 0), [unit(3, 0)])])
    with pytest.raises(SchemeError, match="n-1"):
        SchemeSpec(3, P, quad, [LinearSection([unit(3, 0), unit(3, 1), unit(3, 2)])])


def test_small_characteristic_detected():
    with pytest.raises(CharacteristicError):
        harmonic_basis_mod_p(presentation("hyperbolic", 2, 5), 3)


def test_scheme_json():
    data = {"n": 3, "d": 3, "quadric": "hyperbolic",
            "components": [{"type": "double", "random": 2}, {"type": "simple", "point": [1, 0, 0, 0]},
                           {"type": "section", "random_codim": 1}]}
    s = scheme_from_json(data)
    assert len(s.components) == 4 and s.length() == 7
    assert scheme_from_json(json.loads(json.dumps(data))).components == s.components
    with pytest.raises(SchemeError):
        scheme_from_json({"n": 3, "components": [{"type": "triple", "point": [1, 0, 0, 0]}]})


# --- appendix ---------------------------------------------------------------------------------


def test_case_names():
    names = set(cases())
    assert {"cubic1", "cubic2", "cubic4_n6", "post3_n2", "post_fin_n6"} <= names
    assert len(names) == 2 + 6 + 6 + 5 + 3


@pytest.mark.parametrize("name", ["post3_n2", "post3_n5", "cubic4_n7", "post_fin_n4"])
def test_small_appendix_cases(name):
    res = run_case(name)
    assert res.ok, res


def test_cubic2_condition_count_bound():
    """The three sections impose 3*275 - 3*30 = 735 conditions on H_{16,3}; a double
    point of Q lying on a section adds at most 16 - 10 = 6 more, so 36 of them leave
    h0 >= 952 - 735 - 216 = 1."""
    n, quad, comps, d = cubic2(P, 0)
    sections = SchemeSpec(n, P, quad, [c for c in comps if isinstance(c, LinearSection)])
    assert postulation_check(sections, d).conditions_rank == 735
    assert sum(isinstance(c, DoublePoint) for c in comps) == 36
    assert f(16, 3) == 952 and 735 + 36 * 6 == 951
    assert postulation_check(SchemeSpec(n, P, quad, comps), d).h0 == 1


# --- Horace arithmetic ---------------------------------------------------------------------------


def test_k6():
    assert k_delta(6) == (12, 5) == k_delta_closed_form(6)


@pytest.mark.parametrize("n", range(12, 31))
def test_k_difference(n):
    k = lambda m: (comb(m + 3, 3) - (m + 1)) // m
    assert k(n) - k(n - 6) == 2 * n


def test_num_lem_report():
    assert all(num_lem_report(60).values())


def test_num2_all_admissible():
    assert num2_report() == {}


def test_horace_parameter_identity():
    for n in range(4, 12):
        for d in range(4, 8):
            for r in admissible_r(n, d):
                hp = horace_parameters(n, d, r)
                assert r * n - (n - 1) * hp.u - hp.eps == f(n, d - 1)
                assert 0 <= hp.eps < n - 1


def test_horace_parameter_errors():
    with pytest.raises(ParameterError):
        horace_parameters(3, 4, 5)
    with pytest.raises(ParameterError):
        horace_parameters(6, 4, 1)
    with pytest.raises(ParameterError):
        horace_parameters(6, 4, 10_000)
