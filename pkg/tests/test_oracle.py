import math
import random
from fractions import Fraction

import numpy as np
import pytest

from jacobiseries.core_model import JacobiMatrix
from jacobiseries.errors import BranchAmbiguity
from jacobiseries.hypergeometric import MonomialSpec, expand_monomial
from jacobiseries.oracle import (
    DensePair,
    cross_validate,
    dense_eigensolve,
    iterate_system,
    match_branch,
    sturm_eigenvalues,
)


def test_iteration_gives_catalan_numbers():
    st = iterate_system(1, 0, 8)
    assert [st.u[0].coeff((i,)) for i in range(9)] == [1, -1, 2, -5, 14, -42, 132, -429, 1430]
    assert st.degree_converged == 8


@pytest.mark.parametrize("r,rt", [(2, 1), (1, 2), (3, 0), (2, 2)])
def test_iteration_matches_closed_form(r, rt):
    st = iterate_system(r, rt, 4)
    for i in range(1, r + 1):
        assert st.u[i - 1] == expand_monomial(MonomialSpec.unit(r, rt, i), r, rt, 4)
    for i in range(1, rt + 1):
        assert st.ut[i - 1] == expand_monomial(MonomialSpec.unit(r, rt, i, True), r, rt, 4)


def test_dense_solver_residuals_on_random_matrices():
    rng = random.Random(3)
    for _ in range(100):
        d = rng.randint(2, 8)
        M = JacobiMatrix(rng.sample(range(-30, 30), d),
                         [rng.uniform(-2, 2) for _ in range(d - 1)],
                         [rng.uniform(-2, 2) for _ in range(d - 1)])
        A = np.array(M.to_dense(), dtype=float)
        norm = np.abs(A).sum(axis=1).max()
        pairs = dense_eigensolve(M)
        assert len(pairs) == d
        for p in pairs:
            v = np.array(p.vector, dtype=complex)
            assert np.abs(v).max() == pytest.approx(1.0)
            assert np.abs(A @ v - complex(p.eigenvalue) * v).max() <= 1e-12 * norm


def test_dense_solver_high_precision_and_sturm():
    rng = random.Random(5)
    for d in range(2, 8):
        alpha = [float(a) for a in rng.sample(range(-10, 10), d)]
        off = [rng.uniform(0.1, 1.5) for _ in range(d - 1)]
        M = JacobiMatrix(alpha, off, off)
        ref = np.linalg.eigvalsh(np.array(M.to_dense(), dtype=float))
        sturm = sturm_eigenvalues(alpha, [b * b for b in off])
        assert np.allclose(sorted(sturm), ref, atol=1e-12)
        hp = dense_eigensolve(M, dps=40)
        assert np.allclose([float(p.eigenvalue) for p in hp], ref, atol=1e-12)


def test_cross_validate_middle_branch_of_five():
    M = JacobiMatrix([0, 2, 5, 9, 14], [Fraction(1, 20), Fraction(-1, 30), Fraction(1, 25), Fraction(1, 40)],
                     [Fraction(1, 30), Fraction(1, 20), Fraction(-1, 50), Fraction(1, 35)])
    cv = cross_validate(M, 3, 3)
    assert cv.ok and cv.coefficient_diff == {}
    # truncation error is far below the branch spacing
    assert cv.gap < 1e-9
    assert abs(cv.eigenvalue_dense - 5) < 1e-2


def test_cross_validate_two_by_two_gap_is_the_truncation_error():
    M = JacobiMatrix([0, 1], [Fraction(1, 10)], [Fraction(1, 10)])
    cv = cross_validate(M, 1, 3, dps=50)
    exact = (1 - math.sqrt(1.04)) / 2
    series = -0.01 * (1 - 0.01 + 2 * 0.01 ** 2 - 5 * 0.01 ** 3)
    assert cv.ok
    assert cv.gap == pytest.approx(abs(exact - series), rel=1e-6)
    assert cv.gap == pytest.approx(1.3593e-9, rel=1e-4)


def test_branch_matching_ambiguity():
    pairs = [DensePair(-1.0, [1.0], 0.0), DensePair(1.0, [1.0], 0.0)]
    assert match_branch(pairs, 0.9).eigenvalue == 1.0
    with pytest.raises(BranchAmbiguity):
        match_branch(pairs, 0.0)
