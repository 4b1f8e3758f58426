"""Jacobi matrices, branch relabeling, expansion variables and eigenpair assembly."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Sequence

from .combinatorics import Layout
from .errors import BadIndex, DegreeMismatch, DuplicateDiagonal, InvalidMatrix
from .hypergeometric import MonomialSpec, expand_monomial
from .series import TruncatedSeries

__all__ = [
    "JacobiMatrix",
    "BranchConfig",
    "ExpansionPoint",
    "EigenResult",
    "relabel",
    "expansion_variables",
    "assemble_eigenpair",
    "branch_series",
    "solve_branch",
    "solve_all",
]


def _exact(v):
    if isinstance(v, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(v, (int, Fraction)):
        return v
    if isinstance(v, Rational):
        return Fraction(v.numerator, v.denominator)
    return v


@dataclass(frozen=True)
class JacobiMatrix:
    """Tridiagonal matrix: ``alpha`` on the diagonal, ``beta`` above, ``gamma`` below."""

    alpha: tuple
    beta: tuple
    gamma: tuple

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            object.__setattr__(self, name, tuple(_exact(v) for v in getattr(self, name)))
        d = len(self.alpha)
        if d < 2:
            raise InvalidMatrix(f"alpha: matrix order must be at least 2, got {d}")
        if len(self.beta) != d - 1:
            raise InvalidMatrix(f"beta: expected {d - 1} entries, got {len(self.beta)}")
        if len(self.gamma) != d - 1:
            raise InvalidMatrix(f"gamma: expected {d - 1} entries, got {len(self.gamma)}")
        seen = {}
        for j, a in enumerate(self.alpha, start=1):
            if a in seen:
                raise DuplicateDiagonal(f"alpha: entries {seen[a]} and {j} are equal ({a})")
            seen[a] = j

    @property
    def d(self) -> int:
        return len(self.alpha)

    @property
    def is_exact(self) -> bool:
        return all(isinstance(v, (int, Fraction)) for v in self.alpha + self.beta + self.gamma)

    def rotated(self) -> "JacobiMatrix":
        """180-degree rotation: reverse the diagonals and swap beta with gamma."""
        return JacobiMatrix(self.alpha[::-1], self.gamma[::-1], self.beta[::-1])

    def trace(self):
        return sum(self.alpha)

    def matvec(self, v: Sequence) -> list:
        d = self.d
        out = []
        for i in range(d):
            acc = self.alpha[i] * v[i]
            if i > 0:
                acc = acc + self.gamma[i - 1] * v[i - 1]
            if i < d - 1:
                acc = acc + self.beta[i] * v[i + 1]
            out.append(acc)
        return out

    def to_dense(self) -> list[list]:
        d = self.d
        rows = [[0] * d for _ in range(d)]
        for i in range(d):
            rows[i][i] = self.alpha[i]
        for i in range(d - 1):
            rows[i][i + 1] = self.beta[i]
            rows[i + 1][i] = self.gamma[i]
        return rows

    def scaled_offdiagonal(self, eps) -> "JacobiMatrix":
        return JacobiMatrix(self.alpha, tuple(eps * b for b in self.beta), tuple(eps * c for c in self.gamma))


@dataclass(frozen=True)
class BranchConfig:
    """Problem recentred on diagonal entry ``k`` (1-based) with ``alpha_k`` moved to 0."""

    k: int
    r: int
    rt: int
    a: tuple
    b: tuple
    c: tuple
    at: tuple
    bt: tuple
    ct: tuple
    shift: object

    @property
    def layout(self) -> Layout:
        return Layout(self.r, self.rt)

    @property
    def d(self) -> int:
        return self.r + self.rt + 1


def relabel(M: JacobiMatrix, k: int) -> BranchConfig:
    d = M.d
    if not isinstance(k, int) or not 1 <= k <= d:
        raise BadIndex(f"branch index k={k} outside 1..{d}")
    al, be, ga = M.alpha, M.beta, M.gamma
    c0 = k - 1  # 0-based position of the centre
    r, rt = d - k, k - 1
    ak = al[c0]
    return BranchConfig(
        k=k,
        r=r,
        rt=rt,
        a=tuple(al[c0 + i] - ak for i in range(r + 1)),
        b=tuple(be[c0 + i] for i in range(r)),
        c=tuple(ga[c0 + i] for i in range(r)),
        at=tuple(al[c0 - i] - ak for i in range(rt + 1)),
        bt=tuple(be[c0 - 1 - i] for i in range(rt)),
        ct=tuple(ga[c0 - 1 - i] for i in range(rt)),
        shift=ak,
    )


@dataclass(frozen=True)
class ExpansionPoint:
    layout: Layout
    x: tuple = ()
    y: tuple = ()
    z: tuple = ()
    xt: tuple = ()
    yt: tuple = ()
    zt: tuple = ()

    def as_vector(self) -> tuple:
        return self.layout.join(self.x, self.y, self.z, self.xt, self.yt, self.zt)

    def as_float(self) -> "ExpansionPoint":
        return ExpansionPoint(self.layout, *(tuple(float(v) for v in g) for g in
                                             (self.x, self.y, self.z, self.xt, self.yt, self.zt)))


def _div(a, b):
    return Fraction(a) / b if isinstance(a, int) and isinstance(b, int) else a / b


def expansion_variables(cfg: BranchConfig) -> ExpansionPoint:
    """Small bilinear combinations ``xi`` of the off-diagonal entries."""
    a, b, c, at, bt, ct = cfg.a, cfg.b, cfg.c, cfg.at, cfg.bt, cfg.ct
    r, rt = cfg.r, cfg.rt
    bc0 = b[0] * c[0] if r else 0
    bct0 = bt[0] * ct[0] if rt else 0
    x = tuple(_div(bc0, a[1] * a[i + 1]) for i in range(r))
    y = tuple(_div(bct0, at[1] * a[i + 1]) for i in range(r)) if rt else ()
    z = tuple(_div(b[i + 1] * c[i + 1], a[i + 1] * a[i + 2]) for i in range(r - 1))
    xt = tuple(_div(bct0, at[1] * at[i + 1]) for i in range(rt))
    yt = tuple(_div(bc0, a[1] * at[i + 1]) for i in range(rt)) if r else ()
    zt = tuple(_div(bt[i + 1] * ct[i + 1], at[i + 1] * at[i + 2]) for i in range(rt - 1))
    return ExpansionPoint(cfg.layout, x, y, z, xt, yt, zt)


@dataclass(frozen=True)
class EigenResult:
    k: int
    N: int
    lambda_series: TruncatedSeries
    eigenvalue: object
    v: tuple
    vt: tuple
    residual: float

    @property
    def vector(self) -> tuple:
        """Eigenvector in the original row order; component ``k`` is 1."""
        return tuple(reversed(self.vt[1:])) + self.v

    @property
    def layout(self) -> Layout:
        return Layout(len(self.v) - 1, len(self.vt) - 1)


def _prefactors(num, den):
    """``(-1)^i num_0..num_{i-1} / (den_1..den_i)`` for ``i = 1..len(num)``."""
    out, acc = [], Fraction(1)
    for i in range(len(num)):
        acc = -acc * num[i] / den[i + 1]
        out.append(acc)
    return out


def assemble_eigenpair(
    cfg: BranchConfig,
    u_series: Sequence[TruncatedSeries],
    ut_series: Sequence[TruncatedSeries],
    point: ExpansionPoint,
    N: int,
    M: JacobiMatrix | None = None,
) -> EigenResult:
    """Evaluate the series and rebuild ``lambda`` and ``V`` for branch ``cfg.k``.

    ``point`` may hold exact rationals or floats; evaluation follows its
    type.  The residual ``||M V - Lambda V||_inf`` is computed when the
    original matrix ``M`` is supplied.
    """
    lay = cfg.layout
    if len(u_series) != cfg.r or len(ut_series) != cfg.rt:
        raise ValueError("need one series per u_i and per ut_i")
    for s in list(u_series) + list(ut_series):
        if s.cap != N:
            raise DegreeMismatch(f"series capped at {s.cap}, expected {N}")
        if s.nvars != lay.nvars:
            raise ValueError("series over the wrong number of variables")
    vec = point.as_vector()
    pre = _prefactors(cfg.c, cfg.a)
    pre_t = _prefactors(cfg.bt, cfg.at)
    if isinstance(vec[0] if vec else 0, float):
        pre = [float(p) for p in pre]
        pre_t = [float(p) for p in pre_t]
    u_vals = [s.eval(vec) for s in u_series]
    ut_vals = [s.eval(vec) for s in ut_series]
    v = (1,) + tuple(p * u for p, u in zip(pre, u_vals))
    vt = (1,) + tuple(p * u for p, u in zip(pre_t, ut_vals))
    lam = 0
    if cfg.r:
        lam = lam + cfg.b[0] * v[1]
    if cfg.rt:
        lam = lam + cfg.ct[0] * vt[1]

    # lambda = -a_1 x_0 u_1 - at_1 xt_0 ut_1 as a series in xi, exact through N+1
    D = lay.nvars
    lam_series = TruncatedSeries.zero(D, N + 1)
    if cfg.r:
        e = [0] * D
        e[lay.x(0)] = 1
        lam_series = lam_series + u_series[0].shift(e).scale(-cfg.a[1])
    if cfg.rt:
        e = [0] * D
        e[lay.xt(0)] = 1
        lam_series = lam_series + ut_series[0].shift(e).scale(-cfg.at[1])

    eigenvalue = cfg.shift + lam
    residual = float("nan")
    if M is not None:
        V = tuple(reversed(vt[1:])) + v
        MV = M.matvec(V)
        residual = float(max(abs(mv - eigenvalue * vv) for mv, vv in zip(MV, V)))
    return EigenResult(cfg.k, N, lam_series, eigenvalue, v, vt, residual)


def branch_series(cfg: BranchConfig, N: int, path: str = "auto"):
    """Closed-form series for every ``u_i`` and ``ut_i`` of a branch."""
    u = [expand_monomial(MonomialSpec.unit(cfg.r, cfg.rt, i), cfg.r, cfg.rt, N, path) for i in range(1, cfg.r + 1)]
    ut = [
        expand_monomial(MonomialSpec.unit(cfg.r, cfg.rt, i, True), cfg.r, cfg.rt, N, path)
        for i in range(1, cfg.rt + 1)
    ]
    return u, ut


def solve_branch(M: JacobiMatrix, k: int, N: int, mode: str = "exact", path: str = "auto") -> EigenResult:
    """Eigenpair of branch ``k`` from series truncated at total degree ``N``.

    ``mode="exact"`` keeps rationals end to end (requires an exact matrix);
    ``mode="float"`` evaluates the exact series at a float point.
    """
    if mode not in ("exact", "float"):
        raise ValueError(f"unknown mode {mode!r}")
    if N < 0:
        raise ValueError("degree must be non-negative")
    if mode == "float" and not M.is_exact:
        # floats are binary fractions; lambda(xi) needs exact coefficients
        M_exact = JacobiMatrix(*(tuple(Fraction(v) for v in g) for g in (M.alpha, M.beta, M.gamma)))
    else:
        M_exact = M
    cfg = relabel(M_exact, k)
    point = expansion_variables(cfg)
    if mode == "float":
        point = point.as_float()
        Mf = JacobiMatrix(*(tuple(float(v) for v in g) for g in (M.alpha, M.beta, M.gamma)))
    else:
        if not M.is_exact:
            raise TypeError("exact mode needs integer or rational matrix entries")
        Mf = M
    u, ut = branch_series(cfg, N, path)
    res = assemble_eigenpair(cfg, u, ut, point, N, Mf)
    if mode == "float":
        res = EigenResult(res.k, res.N, res.lambda_series, float(res.eigenvalue), res.v, res.vt, res.residual)
    return res


def solve_all(M: JacobiMatrix, N: int, mode: str = "exact") -> list[EigenResult]:
    return [solve_branch(M, k, N, mode) for k in range(1, M.d + 1)]
