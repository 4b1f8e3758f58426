"""Independent ground truth: series by fixed-point iteration and a dense eigensolver.

Nothing in this module uses the closed-form coefficients; it only knows the
quadratic system in ``u, ut`` and the matrix itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from .combinatorics import Layout
from .errors import BranchAmbiguity, ConvergenceFailure
from .series import TruncatedSeries

__all__ = [
    "IterationState",
    "iterate_system",
    "DensePair",
    "dense_eigensolve",
    "sturm_count",
    "sturm_eigenvalues",
    "CrossValidation",
    "cross_validate",
]


@dataclass
class IterationState:
    layout: Layout
    u: list[TruncatedSeries]
    ut: list[TruncatedSeries]
    sweeps: int
    degree_converged: int


def _sweep(layout: Layout, u, ut, N):
    """One Gauss-Seidel pass: ascending i over u, then over ut."""
    D = layout.nvars
    one = TruncatedSeries.one(D, N)
    var = lambda pos: TruncatedSeries.variable(pos, D, N)

    def side(u, other, xs, ys, zs, n):
        u = list(u)
        for i in range(1, n + 1):
            prev = one if i == 1 else u[i - 2]
            rhs = prev - var(xs(i - 1)) * u[0] * u[i - 1]
            if ys is not None and other:
                rhs = rhs - var(ys(i - 1)) * other[0] * u[i - 1]
            if i < n:
                rhs = rhs + var(zs(i - 1)) * u[i]
            u[i - 1] = rhs
        return u

    has_y = layout.sizes[1] > 0
    has_yt = layout.sizes[4] > 0
    u = side(u, ut, layout.x, layout.y if has_y else None, layout.z, layout.r)
    ut = side(ut, u, layout.xt, layout.yt if has_yt else None, layout.zt, layout.rt)
    return u, ut


def _first_diff_degree(a: list[TruncatedSeries], b: list[TruncatedSeries]) -> int | None:
    worst = None
    for sa, sb in zip(a, b):
        diff = sa - sb
        d = diff.min_degree()
        if d is not None and (worst is None or d < worst):
            worst = d
    return worst


def iterate_system(r: int, rt: int, N: int, max_sweeps: int | None = None) -> IterationState:
    """Solve the quadratic ``u``-system as formal series by substitution.

    Starts from ``u = ut = 1`` and sweeps until a full pass leaves every
    series unchanged at cap ``N``.
    """
    layout = Layout(r, rt)
    D = layout.nvars
    one = TruncatedSeries.one(D, N)
    u = [one] * r
    ut = [one] * rt
    limit = max_sweeps if max_sweeps is not None else N + 3
    for sweep in range(1, limit + 1):
        nu_, nut = _sweep(layout, u, ut, N)
        diff = _first_diff_degree(u + ut, nu_ + nut)
        u, ut = nu_, nut
        if diff is None:
            return IterationState(layout, u, ut, sweep, N)
    raise ConvergenceFailure(f"iteration not stationary after {limit} sweeps (r={r}, rt={rt}, N={N})")


# --------------------------------------------------------------------------
# dense eigensolver


@dataclass
class DensePair:
    eigenvalue: complex | float
    vector: list
    residual: float


def _to_dense(alpha, beta, gamma, ctx=None):
    d = len(alpha)
    if ctx is None:
        a = np.zeros((d, d))
        conv = float
    else:
        a = ctx.matrix(d, d)
        conv = lambda v: ctx.mpf(v.numerator) / v.denominator if isinstance(v, Fraction) else ctx.mpf(v)
    for i in range(d):
        a[i, i] = conv(alpha[i])
    for i in range(d - 1):
        a[i, i + 1] = conv(beta[i])
        a[i + 1, i] = conv(gamma[i])
    return a


def _real_if_close(z, tol):
    return z.real if abs(z.imag) <= tol else z


def dense_eigensolve(M, dps: int | None = None, refine: int = 2) -> list[DensePair]:
    """All eigenpairs of a (generally nonsymmetric) tridiagonal matrix.

    Float mode seeds with LAPACK and polishes each pair by inverse iteration;
    with ``dps`` set, mpmath computes at that many decimal digits.
    Eigenvectors are scaled so their largest-magnitude component is 1.
    Pairs are sorted by real part.
    """
    alpha, beta, gamma = M.alpha, M.beta, M.gamma
    d = len(alpha)
    if dps is not None:
        ctx = mpmath.mp.clone()
        ctx.dps = dps
        A = _to_dense(alpha, beta, gamma, ctx)
        E, ER = ctx.eig(A)
        norm = max(sum(abs(A[i, j]) for j in range(d)) for i in range(d))
        out = []
        for idx in range(d):
            lam = E[idx]
            vec = [ER[i, idx] for i in range(d)]
            big = max(vec, key=abs)
            vec = [v / big for v in vec]
            res = max(abs(sum(A[i, j] * vec[j] for j in range(d)) - lam * vec[i]) for i in range(d))
            tol = ctx.mpf(10) ** (-dps + 5) * max(norm, 1)
            if res > tol:
                raise ConvergenceFailure(f"mpmath residual {res} above {tol}")
            lam = lam.real if abs(lam.imag) <= tol else lam
            vec = [v.real if abs(v.imag) <= tol else v for v in vec] if all(abs(v.imag) <= tol for v in vec) else vec
            out.append(DensePair(lam, vec, float(res)))
        out.sort(key=lambda p: (float(ctx.re(p.eigenvalue)), float(ctx.im(p.eigenvalue))))
        return out

    A = _to_dense(alpha, beta, gamma)
    norm = float(np.abs(A).sum(axis=1).max()) if d else 0.0
    target = 1e-12 * max(norm, np.finfo(float).tiny)
    vals, vecs = np.linalg.eig(A)
    out = []
    for idx in range(d):
        lam = complex(vals[idx])
        v = vecs[:, idx].astype(complex)
        for _ in range(refine):
            # inverse iteration with a slightly shifted pole keeps the solve regular
            shift = lam + 1e-10 * max(norm, 1.0)
            try:
                v = np.linalg.solve(A - shift * np.eye(d), v)
            except np.linalg.LinAlgError:
                break
            v /= v[np.argmax(np.abs(v))]
            lam = complex(np.vdot(v, A @ v) / np.vdot(v, v))
        v = v / v[np.argmax(np.abs(v))]
        res = float(np.abs(A @ v - lam * v).max())
        if res > target:
            raise ConvergenceFailure(f"dense residual {res:.3e} above {target:.3e}")
        tol = 1e-12 * max(norm, 1.0)
        lam_out = _real_if_close(lam, tol)
        vec = [float(x.real) for x in v] if np.all(np.abs(v.imag) <= tol) else list(v)
        out.append(DensePair(lam_out, vec, res))
    out.sort(key=lambda p: (complex(p.eigenvalue).real, complex(p.eigenvalue).imag))
    return out


def sturm_count(alpha: Sequence[float], offdiag_sq: Sequence[float], x: float) -> int:
    """Eigenvalues below ``x`` of a symmetric tridiagonal matrix.

    ``offdiag_sq[i]`` is the squared off-diagonal ``beta_i * gamma_i``.
    """
    count = 0
    q = 1.0
    for i, a in enumerate(alpha):
        q = (a - x) - (offdiag_sq[i - 1] / q if i else 0.0)
        if q == 0.0:
            q = -1e-300
        if q < 0:
            count += 1
    return count


def sturm_eigenvalues(alpha: Sequence[float], offdiag_sq: Sequence[float], tol: float = 1e-14) -> list[float]:
    """All eigenvalues by bisection on the Sturm count (symmetric case)."""
    d = len(alpha)
    off = [math.sqrt(v) for v in offdiag_sq]
    lo = min(alpha[i] - (off[i - 1] if i else 0) - (off[i] if i < d - 1 else 0) for i in range(d))
    hi = max(alpha[i] + (off[i - 1] if i else 0) + (off[i] if i < d - 1 else 0) for i in range(d))
    out = []
    for k in range(d):
        a, b = lo, hi
        while b - a > tol * max(1.0, abs(a), abs(b)):
            mid = 0.5 * (a + b)
            if sturm_count(alpha, offdiag_sq, mid) > k:
                b = mid
            else:
                a = mid
        out.append(0.5 * (a + b))
    return out


# --------------------------------------------------------------------------
# cross validation


@dataclass
class CrossValidation:
    k: int
    N: int
    coefficient_diff: dict = field(default_factory=dict)
    eigenvalue_series: object = None
    eigenvalue_dense: object = None
    gap: float = 0.0
    residual: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.coefficient_diff


def match_branch(pairs: list[DensePair], target, rel_tol: float = 1e-9) -> DensePair:
    """Dense pair whose eigenvalue is nearest ``target``."""
    dist = sorted((abs(complex(p.eigenvalue) - complex(target)), i) for i, p in enumerate(pairs))
    if len(dist) > 1 and abs(dist[0][0] - dist[1][0]) <= rel_tol * max(dist[1][0], 1e-300):
        raise BranchAmbiguity(f"two eigenvalues equidistant from {target}")
    return pairs[dist[0][1]]


def cross_validate(M, k: int, N: int, dps: int | None = None) -> CrossValidation:
    """Compare closed-form series with iteration and the solved eigenvalue with the dense one."""
    from .core_model import relabel, solve_branch
    from .hypergeometric import MonomialSpec, expand_monomial

    cfg = relabel(M, k)
    state = iterate_system(cfg.r, cfg.rt, N)
    diff = {}
    for tilded, series_list, n in ((False, state.u, cfg.r), (True, state.ut, cfg.rt)):
        for i in range(1, n + 1):
            spec = MonomialSpec.unit(cfg.r, cfg.rt, i, tilded)
            closed = expand_monomial(spec, cfg.r, cfg.rt, N)
            delta = closed - series_list[i - 1]
            if not delta.is_zero():
                diff[("ut" if tilded else "u") + str(i)] = dict(delta.terms)
    result = solve_branch(M, k, N)
    pairs = dense_eigensolve(M, dps=dps)
    pair = match_branch(pairs, M.alpha[k - 1])
    if dps is None:
        gap = abs(complex(pair.eigenvalue) - complex(result.eigenvalue))
    else:
        with mpmath.workdps(dps):
            gap = abs(mpmath.mpmathify(pair.eigenvalue) - _mp(result.eigenvalue))
    return CrossValidation(k, N, diff, result.eigenvalue, pair.eigenvalue, float(gap), result.residual)


def _mp(value):
    if isinstance(value, Fraction):
        return mpmath.mpf(value.numerator) / value.denominator
    return mpmath.mpf(value)
