"""Perturbative eigenpairs of Jacobi matrices as exact hypergeometric series."""

from .combinatorics import Layout, MultiIndex, binom, pochhammer, quadrinom, sigma, trinom
from .core_model import (
    BranchConfig,
    EigenResult,
    ExpansionPoint,
    JacobiMatrix,
    assemble_eigenpair,
    expansion_variables,
    relabel,
    solve_all,
    solve_branch,
)
from .hypergeometric import (
    MonomialSpec,
    PhiParams,
    coeff_H,
    corner_phi_coefficient,
    expand_eta_monomial,
    expand_monomial,
    phi_coefficient,
    phi_truncated,
)
from .jacobian import EtaPoint, jacobian_closed, jacobian_numeric, phi_maps, verify_lagrange_system
from .oracle import cross_validate, dense_eigensolve, iterate_system
from .series import TruncatedSeries
from .verification import run_suites

__version__ = "0.1.0"
