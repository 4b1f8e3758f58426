"""Lagrange-form maps, their Jacobian determinant, and system-equivalence checks.

Everything here works on an :class:`EtaPoint`, the vector of auxiliary
unknowns ``(s, t, w, st, tt, wt)`` that mirrors the expansion variables
``(x, y, z, xt, yt, zt)`` group by group.  Values may be exact rationals or
floats.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .combinatorics import Layout, sigma
from .errors import DenominatorZero, LagrangeDivisionByZero, SingularElimination

__all__ = [
    "EtaPoint",
    "PhiMaps",
    "JacobianTerm",
    "jacobian_terms",
    "phi_maps",
    "jacobian_closed",
    "jacobian_sstt",
    "jacobian_numeric",
    "determinant",
    "LagrangeReport",
    "verify_lagrange_system",
]


@dataclass(frozen=True)
class EtaPoint:
    layout: Layout
    s: tuple = ()
    t: tuple = ()
    w: tuple = ()
    st: tuple = ()
    tt: tuple = ()
    wt: tuple = ()

    def __post_init__(self):
        got = tuple(len(g) for g in self.groups)
        if got != self.layout.sizes:
            raise ValueError(f"EtaPoint group sizes {got} do not match {self.layout}")

    @classmethod
    def from_vector(cls, layout: Layout, vec: Sequence) -> "EtaPoint":
        return cls(layout, *layout.split(vec))

    @classmethod
    def zero(cls, layout: Layout, value=0) -> "EtaPoint":
        return cls.from_vector(layout, [value] * layout.nvars)

    @property
    def groups(self) -> tuple[tuple, ...]:
        return (self.s, self.t, self.w, self.st, self.tt, self.wt)

    def as_vector(self) -> tuple:
        return self.layout.join(*self.groups)

    def swapped(self) -> "EtaPoint":
        """Image under the tilde involution."""
        return EtaPoint(self.layout.swapped(), self.st, self.tt, self.wt, self.s, self.t, self.w)


@dataclass(frozen=True)
class PhiMaps:
    f: tuple
    g: tuple
    h: tuple
    ft: tuple
    gt: tuple
    ht: tuple

    def as_vector(self) -> tuple:
        return self.f + self.g + self.h + self.ft + self.gt + self.ht


@dataclass(frozen=True)
class JacobianTerm:
    """One monomial-type term of ``J = S*St - T*Tt`` in its step-function form.

    ``kind`` is ``"F"`` for a product of an ``S`` term and an ``St`` term, and
    ``"G"`` for a ``T``/``Tt`` product (which enters with sign -1).  ``i`` and
    ``it`` run from -1 (the term without an ``s``/``t`` factor) upward.
    """

    kind: str
    i: int
    it: int

    @property
    def sign(self) -> int:
        return 1 if self.kind == "F" else -1


def jacobian_terms(layout: Layout) -> list[JacobianTerm]:
    """Terms of the closed-form Jacobian; there are ``r*rt + (r+1)*(rt+1)``."""
    terms = [JacobianTerm("F", i, it) for i in range(-1, layout.r) for it in range(-1, layout.rt)]
    terms += [JacobianTerm("G", i, it) for i in range(layout.r) for it in range(layout.rt)]
    return terms


def _side(s, t, w, r):
    """Per-index helpers for one side: ``den_j = 1+s_j+t_j`` and ``w_j`` (0 past the end)."""
    tj = (lambda j: t[j]) if t else (lambda j: 0)
    wj = (lambda j: w[j] if j < len(w) else 0)
    return tj, wj


def _check_denoms(eta: EtaPoint):
    for s, t, w in ((eta.s, eta.t, eta.w), (eta.st, eta.tt, eta.wt)):
        tj, _ = _side(s, t, w, len(s))
        for j in range(len(s)):
            if 1 + s[j] + tj(j) == 0:
                raise DenominatorZero(f"1 + s_{j} + t_{j} vanishes")
        for j, wv in enumerate(w):
            if 1 + wv == 0:
                raise DenominatorZero(f"1 + w_{j} vanishes")


def phi_maps(eta: EtaPoint) -> PhiMaps:
    """Right-hand sides of the Lagrange-form system ``xi_i = eta_i / phi_i(eta)``."""
    _check_denoms(eta)
    lay = eta.layout
    r, rt = lay.r, lay.rt

    def one_side(s, t, w, n):
        if n == 0:
            return None, ()
        tj, wj = _side(s, t, w, n)
        den = [1 + s[j] + tj(j) for j in range(n)]
        head = (1 + wj(0)) / _as_div(den[0])
        h = tuple((1 + wj(i)) * (1 + wj(i + 1)) / _as_div(den[i] * den[i + 1]) for i in range(n - 1))
        return head, h

    head, h = one_side(eta.s, eta.t, eta.w, r)
    head_t, ht = one_side(eta.st, eta.tt, eta.wt, rt)
    f = (head,) * r
    gt = (head,) * lay.sizes[4]
    ft = (head_t,) * rt
    g = (head_t,) * lay.sizes[1]
    return PhiMaps(f, g, h, ft, gt, ht)


def _as_div(x):
    # keep integer arithmetic exact
    return Fraction(x) if isinstance(x, int) else x


def _side_term(s, t, w, r, i, use_t):
    """Step-function product for index ``i`` of S (``use_t`` False) or T."""
    tj, wj = _side(s, t, w, r)
    out = 1
    for j in range(r):
        den = 1 + s[j] + tj(j)
        wv = wj(j)
        if sigma(i, j):
            out = out * wv
        if i == j:
            out = out * (tj(j) if use_t else s[j]) / _as_div(den)
        else:
            out = out / _as_div(1 + wv)
    return out


def jacobian_closed(eta: EtaPoint):
    """Closed form ``S*St - T*Tt`` summed term by term."""
    _check_denoms(eta)
    lay = eta.layout
    total = 0
    for term in jacobian_terms(lay):
        use_t = term.kind == "G"
        a = _side_term(eta.s, eta.t, eta.w, lay.r, term.i, use_t)
        b = _side_term(eta.st, eta.tt, eta.wt, lay.rt, term.it, use_t)
        total = total + term.sign * a * b
    return total


def jacobian_sstt(eta: EtaPoint):
    """Same determinant through the factored ``S, T, W`` expressions."""
    _check_denoms(eta)

    def st(s, t, w, r):
        tj, wj = _side(s, t, w, r)
        W = 1
        for k in range(r - 1):
            W = W * (1 + w[k])
        acc_s, acc_t, pw = 1, 0, 1
        for j in range(r):
            den = _as_div(1 + s[j] + tj(j))
            acc_s = acc_s + s[j] * (1 + wj(j)) / den * pw
            acc_t = acc_t + tj(j) * (1 + wj(j)) / den * pw
            pw = pw * wj(j)
        return acc_s / _as_div(W), acc_t / _as_div(W)

    lay = eta.layout
    S, T = st(eta.s, eta.t, eta.w, lay.r)
    St, Tt = st(eta.st, eta.tt, eta.wt, lay.rt)
    return S * St - T * Tt


def determinant(a: list[list[float]]) -> float:
    """Determinant by Gaussian elimination with partial pivoting."""
    n = len(a)
    m = [list(map(float, row)) for row in a]
    det = 1.0
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(m[r][col]))
        if m[piv][col] == 0.0:
            raise SingularElimination(f"zero pivot in column {col}")
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        p = m[col][col]
        det *= p
        for r in range(col + 1, n):
            fac = m[r][col] / p
            if fac:
                row, prow = m[r], m[col]
                for c in range(col, n):
                    row[c] -= fac * prow[c]
    return det


def jacobian_numeric(eta: EtaPoint, step: float = 1e-6) -> float:
    """``det(delta_jk - (eta_k/phi_j) d phi_j / d eta_k)`` by central differences."""
    lay = eta.layout
    base = [float(v) for v in eta.as_vector()]
    n = len(base)
    if n == 0:
        return 1.0

    def phi(vec):
        return phi_maps(EtaPoint.from_vector(lay, vec)).as_vector()

    phi0 = phi(base)
    cols = []
    for k in range(n):
        up, dn = list(base), list(base)
        up[k] += step
        dn[k] -= step
        fu, fd = phi(up), phi(dn)
        cols.append([(fu[j] - fd[j]) / (2 * step) for j in range(n)])
    mat = [
        [(1.0 if j == k else 0.0) - base[k] / phi0[j] * cols[k][j] for k in range(n)]
        for j in range(n)
    ]
    return determinant(mat)


@dataclass
class LagrangeReport:
    """Residuals of the quadratic ``u``-system and of the defining relations."""

    layout: Layout
    xi: tuple
    u: tuple
    ut: tuple
    residuals: dict = field(default_factory=dict)

    @property
    def all_zero(self) -> bool:
        return all(v == 0 for vals in self.residuals.values() for v in vals)

    @property
    def max_abs(self):
        return max((abs(v) for vals in self.residuals.values() for v in vals), default=0)


def _rebuild_u(head_s, head_x, w, z, n, name):
    """u_1 = s_0/x_0 and u_{i+2} = u_i w_i / z_i, with u_0 = 1."""
    if n == 0:
        return ()
    if head_x == 0 or head_s == 0:
        raise LagrangeDivisionByZero(f"{name}: s_0 = 0 makes u_1 = s_0/x_0 undefined")
    u = [1, head_s / _as_div(head_x)]
    for i in range(n - 1):
        if z[i] == 0:
            raise LagrangeDivisionByZero(f"{name}: w_{i} = 0 makes u_{i + 2} undefined")
        u.append(u[i] * w[i] / _as_div(z[i]))
    return tuple(u[1:])


def verify_lagrange_system(eta: EtaPoint) -> LagrangeReport:
    """Map ``eta`` to ``xi = eta/phi(eta)``, rebuild ``u, ut`` and return residuals.

    All residuals vanish identically when the Lagrange-form system is
    equivalent to the quadratic system; with exact inputs they must be 0.
    """
    lay = eta.layout
    phis = phi_maps(eta).as_vector()
    xi = tuple(e / _as_div(p) for e, p in zip(eta.as_vector(), phis))
    x, y, z, xt, yt, zt = lay.split(xi)
    r, rt = lay.r, lay.rt

    u = _rebuild_u(eta.s[0] if r else 0, x[0] if r else 0, eta.w, z, r, "u")
    ut = _rebuild_u(eta.st[0] if rt else 0, xt[0] if rt else 0, eta.wt, zt, rt, "ut")

    def quad(u, ut, x, y, z, n):
        full = (1,) + u
        u1t = ut[0] if ut else 0
        out = []
        for i in range(1, n + 1):
            rhs = full[i - 1] - x[i - 1] * full[1] * full[i]
            if y:
                rhs = rhs - y[i - 1] * u1t * full[i]
            if i < n:
                rhs = rhs + z[i - 1] * full[i + 1]
            out.append(full[i] - rhs)
        return tuple(out)

    def defs(s, t, w, x, y, z, u, ut):
        full = (1,) + u
        res_s = tuple(s[i] - x[i] * full[1] for i in range(len(s)))
        res_t = tuple(t[i] - y[i] * ut[0] for i in range(len(t)))
        res_w = tuple(w[i] * full[i] - z[i] * full[i + 2] for i in range(len(w)))
        return res_s, res_t, res_w

    rs, rtt, rw = defs(eta.s, eta.t, eta.w, x, y, z, u, ut)
    rst, rtt2, rwt = defs(eta.st, eta.tt, eta.wt, xt, yt, zt, ut, u)
    residuals = {
        "eq_u": quad(u, ut, x, y, z, r),
        "eq_ut": quad(ut, u, xt, yt, zt, rt),
        "def_s": rs,
        "def_t": rtt,
        "def_w": rw,
        "def_st": rst,
        "def_tt": rtt2,
        "def_wt": rwt,
    }
    return LagrangeReport(lay, xi, u, ut, residuals)


def random_eta(layout: Layout, rng, scale=Fraction(1, 8), exact: bool = True, nonzero: bool = True) -> EtaPoint:
    """Random point with entries in ``[-scale, scale]`` (non-zero if requested)."""
    vals = []
    for _ in range(layout.nvars):
        if exact:
            denom = 64
            lim = int(scale * denom)
            v = 0
            while v == 0:
                v = rng.randint(-lim, lim)
                if not nonzero:
                    break
            vals.append(Fraction(v, denom))
        else:
            vals.append(rng.uniform(-float(scale), float(scale)))
    return EtaPoint.from_vector(layout, vals)
