import random
from itertools import product

import pytest
from hypothesis import given, strategies as st

from jacobiseries.combinatorics import Layout, MultiIndex, iter_exponents
from jacobiseries.errors import NegativeIndex
from jacobiseries.hypergeometric import (
    MonomialSpec,
    PhiParams,
    coeff_H,
    corner_phi_coefficient,
    expand_eta_monomial,
    expand_monomial,
    phi_coefficient,
    phi_coefficient_pochhammer,
    phi_term_count,
    phi_truncated,
    u_monomial_as_eta,
)
from jacobiseries.series import TruncatedSeries

SHAPES = [(1, 0), (0, 1), (1, 1), (2, 0), (2, 1), (1, 2), (3, 0), (2, 2), (3, 1)]

shapes = st.sampled_from(SHAPES)


@st.composite
def phi_case(draw):
    r, rt = draw(shapes)
    lay = Layout(r, rt)
    mu = tuple(draw(st.integers(1, 4)) for _ in range(r))
    mut = tuple(draw(st.integers(1, 4)) for _ in range(rt))
    exps = tuple(draw(st.integers(0, 3)) for _ in range(lay.nvars))
    return MultiIndex(lay, exps), PhiParams(mu, mut)


@given(phi_case())
def test_pochhammer_form_agrees(case):
    q, params = case
    assert phi_coefficient(q, params) == phi_coefficient_pochhammer(q, params)


def test_pochhammer_form_needs_positive_parameters():
    with pytest.raises(ValueError):
        phi_coefficient_pochhammer(MultiIndex(Layout(1, 0), (0,)), PhiParams((0,), ()))


def test_phi_constant_term_is_one():
    for r, rt in SHAPES:
        s = phi_truncated(PhiParams((1,) * r, (2,) * rt), r, rt, 2)
        assert s.constant_term() == 1


@st.composite
def monomial_pair(draw):
    r, rt = draw(shapes)
    ex = st.integers(-2, 2)
    a = MonomialSpec(tuple(draw(ex) for _ in range(r)), tuple(draw(ex) for _ in range(rt)))
    b = MonomialSpec(tuple(draw(ex) for _ in range(r)), tuple(draw(ex) for _ in range(rt)))
    return r, rt, a, b


@given(monomial_pair())
def test_monomial_expansion_is_multiplicative(case):
    r, rt, a, b = case
    N = 3
    prod = expand_monomial(a, r, rt, N) * expand_monomial(b, r, rt, N)
    assert expand_monomial(a + b, r, rt, N) == prod
    assert expand_monomial(-a, r, rt, N) * expand_monomial(a, r, rt, N) == TruncatedSeries.one(prod.nvars, N)


@given(monomial_pair())
def test_tilde_symmetry_of_expansions(case):
    r, rt, a, _ = case
    N = 3
    lay = Layout(r, rt)
    mine = expand_monomial(a, r, rt, N, path="generic")
    mirrored = expand_monomial(a.swapped(), rt, r, N, path="generic")
    assert mine.permute(lay.tilde_permutation()) == mirrored


@pytest.mark.parametrize("r,rt", [(r, 0) for r in range(1, 5)] + [(0, rt) for rt in range(1, 5)])
def test_corner_path_equals_generic(r, rt):
    n = max(r, rt)
    for exps in product(range(-1, 3), repeat=n):
        spec = MonomialSpec(exps, ()) if rt == 0 else MonomialSpec((), exps)
        assert expand_monomial(spec, r, rt, 3, path="corner") == expand_monomial(spec, r, rt, 3, path="generic")


def test_signed_catalan():
    s = expand_monomial(MonomialSpec((1,)), 1, 0, 8)
    assert [s.coeff((i,)) for i in range(9)] == [1, -1, 2, -5, 14, -42, 132, -429, 1430]


def test_zero_exponent_is_one():
    assert expand_monomial(MonomialSpec((0, 0), (0,)), 2, 1, 3) == TruncatedSeries.one(7, 3)


def test_three_by_three_middle_branch_first_order():
    # u_1 = 1 - x0 u_1 - y0 ut_1  =>  1 - x0 - y0 + ...
    lay = Layout(1, 1)
    s = expand_monomial(MonomialSpec((1,), (0,)), 1, 1, 1)
    one = TruncatedSeries.one(lay.nvars, 1)
    x = TruncatedSeries.variable(lay.x(0), lay.nvars, 1)
    y = TruncatedSeries.variable(lay.y(0), lay.nvars, 1)
    assert s == one - x - y


@pytest.mark.parametrize("r,rt", [(1, 0), (1, 1), (2, 1), (2, 0), (1, 2)])
def test_coeff_H_against_summed_form(r, rt):
    lay = Layout(r, rt)
    N = 3
    pool = list(product((-1, 0, 1), repeat=lay.nvars))
    if len(pool) > 60:
        pool = random.Random(r * 7 + rt).sample(pool, 60)
    for qp in pool:
        qprime = MultiIndex(lay, qp)
        cap = N + max(qprime.total_degree, 0)
        series = expand_eta_monomial(qprime, cap)
        for e in iter_exponents(lay.nvars, N):
            q = tuple(a + b for a, b in zip(e, qp))
            if sum(q) <= cap:
                assert coeff_H(qprime, MultiIndex(lay, q)) == series.coeff(q)


def test_coeff_H_vanishes_below_qprime():
    lay = Layout(2, 1)
    qprime = MultiIndex(lay, (1, 0, 0, 0, 0, 1, 0))
    assert coeff_H(qprime, MultiIndex(lay, (0, 0, 0, 0, 0, 1, 0))) == 0


@pytest.mark.parametrize("r,rt", [(1, 0), (2, 1), (3, 1), (2, 2), (3, 0), (0, 3)])
def test_u_monomials_as_eta_monomials(r, rt):
    lay = Layout(r, rt)
    N = 4
    for tilded, n in ((False, r), (True, rt)):
        for i in range(1, n + 1):
            spec = MonomialSpec.unit(r, rt, i, tilded)
            qprime, shift = u_monomial_as_eta(spec, lay)
            via_eta = expand_eta_monomial(qprime, N + qprime.total_degree).shift(shift, cap=N)
            assert via_eta == expand_monomial(spec, r, rt, N)


def test_term_count():
    assert phi_term_count(Layout(1, 1)) == 5
    assert phi_term_count(Layout(3, 0)) == 4


def test_corner_coefficient_rejects_negative_indices():
    with pytest.raises(NegativeIndex):
        corner_phi_coefficient((1, -1), (0,), (1, 0))


def test_shape_errors():
    with pytest.raises(ValueError):
        expand_monomial(MonomialSpec((1,), ()), 2, 0, 2)
    with pytest.raises(ValueError):
        expand_monomial(MonomialSpec((1,), (1,)), 1, 1, 2, path="corner")
