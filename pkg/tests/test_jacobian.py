import random
from fractions import Fraction

import pytest

from jacobiseries.combinatorics import Layout
from jacobiseries.errors import DenominatorZero, SingularElimination
from jacobiseries.jacobian import (
    EtaPoint,
    determinant,
    jacobian_closed,
    jacobian_numeric,
    jacobian_sstt,
    jacobian_terms,
    phi_maps,
    random_eta,
    verify_lagrange_system,
)

BRANCHES = [(d, k) for d in range(2, 7) for k in range(1, d + 1)]


@pytest.mark.parametrize("d,k", BRANCHES)
def test_term_count_formula(d, k):
    assert len(jacobian_terms(Layout(d - k, k - 1))) == 2 * d * k - 2 * k * k + 2 * k - d


@pytest.mark.parametrize("d,k", BRANCHES)
def test_closed_form_matches_factored_form_exactly(d, k):
    lay = Layout(d - k, k - 1)
    rng = random.Random(d * 10 + k)
    for _ in range(10):
        eta = random_eta(lay, rng)
        assert jacobian_closed(eta) == jacobian_sstt(eta)


@pytest.mark.parametrize("d,k", BRANCHES)
def test_closed_form_matches_finite_differences(d, k):
    lay = Layout(d - k, k - 1)
    rng = random.Random(k - d)
    for _ in range(10):
        eta = random_eta(lay, rng, scale=Fraction(1, 10), exact=False)
        assert abs(jacobian_closed(eta) - jacobian_numeric(eta)) <= 1e-8


@pytest.mark.parametrize("d,k", BRANCHES)
def test_jacobian_at_origin_and_under_mirror(d, k):
    lay = Layout(d - k, k - 1)
    assert jacobian_closed(EtaPoint.zero(lay)) == 1
    eta = random_eta(lay, random.Random(7))
    assert jacobian_closed(eta.swapped()) == jacobian_closed(eta)


@pytest.mark.parametrize("d,k", BRANCHES)
def test_lagrange_system_exact(d, k):
    lay = Layout(d - k, k - 1)
    rng = random.Random(1000 + d * 10 + k)
    for _ in range(5):
        rep = verify_lagrange_system(random_eta(lay, rng))
        assert rep.all_zero, rep.residuals
        assert rep.max_abs == 0


def test_phi_maps_reject_vanishing_denominators():
    lay = Layout(2, 0)
    eta = EtaPoint(lay, s=(-1, 0), w=(0,))
    with pytest.raises(DenominatorZero):
        phi_maps(eta)


def test_determinant():
    assert determinant([[2.0, 1.0], [1.0, 3.0]]) == pytest.approx(5.0)
    assert determinant([[0.0, 1.0], [1.0, 0.0]]) == pytest.approx(-1.0)
    with pytest.raises(SingularElimination):
        determinant([[1.0, 2.0], [2.0, 4.0]])
