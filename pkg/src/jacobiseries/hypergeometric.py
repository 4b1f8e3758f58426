"""Explicit series for monomials in the eigenvector unknowns.

The universal Horn-type series ``Phi(xi; mu, mut)`` has coefficient

    (-1)^(|m|+|n|+|mt|+|nt|) * prod_j quadrinom(mu_j+m_j+n_j+p_{j-1}+p_j-1; m_j, n_j, p_j)
                             * (same over the tilded groups)

with ``p_{-1} = |m|+|nt|``, ``pt_{-1} = |mt|+|n|`` and ``p_{r-1} = pt_{rt-1} = 0``.
Every monomial ``u^k ut^kt`` (and every Laurent monomial in the auxiliary
unknowns ``eta``) is a finite signed sum of shifted ``Phi`` series, one per
term of the Jacobian.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod
from typing import Sequence

from .combinatorics import Layout, MultiIndex, binom, iter_exponents, pochhammer, quadrinom, sigma, trinom
from .errors import NegativeIndex
from .jacobian import JacobianTerm, jacobian_terms
from .series import TruncatedSeries

__all__ = [
    "PhiParams",
    "MonomialSpec",
    "phi_coefficient",
    "phi_coefficient_pochhammer",
    "phi_truncated",
    "coeff_H",
    "u_monomial_pi",
    "eta_monomial_pi",
    "nu",
    "prefix_exponents",
    "expand_eta_monomial",
    "expand_monomial",
    "expand_monomial_generic",
    "u_monomial_as_eta",
    "corner_phi_coefficient",
    "corner_phi_truncated",
    "expand_monomial_corner",
    "phi_term_count",
]


@dataclass(frozen=True)
class PhiParams:
    mu: tuple[int, ...]
    mut: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "mu", tuple(int(v) for v in self.mu))
        object.__setattr__(self, "mut", tuple(int(v) for v in self.mut))

    def check(self, layout: Layout):
        if len(self.mu) != layout.r or len(self.mut) != layout.rt:
            raise ValueError(f"PhiParams lengths ({len(self.mu)}, {len(self.mut)}) do not fit {layout}")


@dataclass(frozen=True)
class MonomialSpec:
    """Exponents of ``u_1..u_r`` and ``ut_1..ut_rt``; negative entries allowed."""

    k: tuple[int, ...] = ()
    kt: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "k", tuple(int(v) for v in self.k))
        object.__setattr__(self, "kt", tuple(int(v) for v in self.kt))

    @classmethod
    def unit(cls, r: int, rt: int, index: int, tilded: bool = False) -> "MonomialSpec":
        """The monomial ``u_index`` (or ``ut_index``), 1-based."""
        k, kt = [0] * r, [0] * rt
        (kt if tilded else k)[index - 1] = 1
        return cls(tuple(k), tuple(kt))

    def __add__(self, other: "MonomialSpec") -> "MonomialSpec":
        return MonomialSpec(
            tuple(a + b for a, b in zip(self.k, other.k)),
            tuple(a + b for a, b in zip(self.kt, other.kt)),
        )

    def __neg__(self) -> "MonomialSpec":
        return MonomialSpec(tuple(-a for a in self.k), tuple(-a for a in self.kt))

    def swapped(self) -> "MonomialSpec":
        return MonomialSpec(self.kt, self.k)


# --------------------------------------------------------------------------
# Phi coefficients


def _phi_side(mu, m, n, p, p_prev):
    r = len(mu)
    out = 1
    for j in range(r):
        nj = n[j] if n else 0
        pj = p[j] if j < r - 1 else 0
        pjm = p_prev if j == 0 else p[j - 1]
        c = quadrinom(mu[j] + m[j] + nj + pjm + pj - 1, m[j], nj, pj)
        if not c:
            return 0
        out *= c
    return out


def _phi_coeff(layout: Layout, mu, mut, exps) -> int:
    m, n, p, mt, nt, pt = layout.split(exps)
    sm, sn, smt, snt = sum(m), sum(n), sum(mt), sum(nt)
    a = _phi_side(mu, m, n, p, sm + snt)
    if not a:
        return 0
    b = _phi_side(mut, mt, nt, pt, smt + sn)
    if not b:
        return 0
    sign = -1 if (sm + sn + smt + snt) & 1 else 1
    return sign * a * b


def phi_coefficient(q: MultiIndex, params: PhiParams) -> int:
    """Coefficient of ``xi^q`` in ``Phi(xi; mu, mut)``."""
    if any(v < 0 for v in q.exps):
        raise NegativeIndex(f"Phi coefficient requested at negative index {q.exps}")
    params.check(q.layout)
    return _phi_coeff(q.layout, params.mu, params.mut, q.exps)


def phi_coefficient_pochhammer(q: MultiIndex, params: PhiParams) -> Fraction:
    """Same coefficient from the rising-factorial form; needs all ``mu >= 1``."""
    if any(v < 1 for v in params.mu + params.mut):
        raise ValueError("the Pochhammer form needs every mu >= 1")
    if any(v < 0 for v in q.exps):
        raise NegativeIndex(f"negative index {q.exps}")
    lay = q.layout
    m, n, p, mt, nt, pt = q.groups
    sign = -1 if (sum(m) + sum(n) + sum(mt) + sum(nt)) & 1 else 1
    den = prod(factorial(v) for v in q.exps)

    def side(mu, m, n, getp):
        out = Fraction(1)
        for j in range(len(mu)):
            nj = n[j] if n else 0
            pj, pjm = getp(j), getp(j - 1)
            out *= Fraction(pochhammer(mu[j], m[j] + nj + pj + pjm), pochhammer(mu[j], pjm))
        return out

    return sign * side(params.mu, m, n, q.p_at) * side(params.mut, mt, nt, q.pt_at) / den


def phi_truncated(params: PhiParams, r: int, rt: int, N: int) -> TruncatedSeries:
    """``Phi(xi; mu, mut)`` through total degree ``N``."""
    layout = Layout(r, rt)
    params.check(layout)
    return _phi_truncated(layout, params.mu, params.mut, N)


@lru_cache(maxsize=4096)
def _phi_truncated(layout: Layout, mu, mut, N) -> TruncatedSeries:
    D = layout.nvars
    if N < 0:
        return TruncatedSeries.zero(D, N)
    terms = {}
    for exps in iter_exponents(D, N):
        c = _phi_coeff(layout, mu, mut, exps)
        if c:
            terms[exps] = c
    return TruncatedSeries._raw(D, N, terms)


# --------------------------------------------------------------------------
# Explicit Lagrange coefficients for eta monomials


def _fg_side(i, q_m, q_n, q_p, qp_m, qp_n, qp_p, p_prev, r, kind):
    """Product over one side of the F (kind "F") or G (kind "G") coefficient."""
    out = 1
    for j in range(r):
        d = 1 if i == j else 0
        s = sigma(i, j)
        pj = q_p[j] if j < r - 1 else 0
        ppj = qp_p[j] if j < r - 1 else 0
        pjm = p_prev if j == 0 else q_p[j - 1]
        nj = q_n[j] if q_n else 0
        npj = qp_n[j] if qp_n else 0
        if kind == "F":
            lo_m, lo_n = q_m[j] - qp_m[j] - d, nj - npj
        else:
            lo_m, lo_n = q_m[j] - qp_m[j], nj - npj - d
        c = trinom(-pjm - pj - d, lo_m, lo_n)
        if not c:
            return 0
        c *= binom(pjm + pj + d - 1, pj - ppj - s)
        if not c:
            return 0
        out *= c
    return out


def coeff_H(qprime: MultiIndex, q: MultiIndex) -> int:
    """Coefficient of ``xi^q`` in the expansion of ``eta^qprime``.

    Sums products of F/G factors over the Jacobian terms.  ``qprime`` may
    have negative entries; the result is 0 unless ``q >= qprime``.
    """
    lay = q.layout
    if qprime.layout != lay:
        raise ValueError("multi-indices over different layouts")
    m, n, p, mt, nt, pt = q.groups
    m1, n1, p1, mt1, nt1, pt1 = qprime.groups
    p_prev = sum(m) + sum(nt)
    pt_prev = sum(mt) + sum(n)
    total = 0
    for term in jacobian_terms(lay):
        a = _fg_side(term.i, m, n, p, m1, n1, p1, p_prev, lay.r, term.kind)
        if not a:
            continue
        b = _fg_side(term.it, mt, nt, pt, mt1, nt1, pt1, pt_prev, lay.rt, term.kind)
        total += term.sign * a * b
    return total


# --------------------------------------------------------------------------
# Phi-form expansions


def nu(i: int, r: int) -> tuple[int, ...]:
    """Parameter shift ``2*sigma(i, j-1)`` for ``j = 0..r-1``."""
    return tuple(2 * sigma(i, j - 1) for j in range(r))


def u_monomial_pi(k: Sequence[int]) -> tuple[int, ...]:
    """Suffix sums ``k_{j+1} + ... + k_r`` for ``j = 0..r-1``."""
    out, acc = [], 0
    for v in reversed(k):
        acc += v
        out.append(acc)
    return tuple(reversed(out))


def eta_monomial_pi(qprime: MultiIndex) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """``pi_j = p'_{j-1} + p'_j`` for both sides of a Laurent eta monomial."""
    lay = qprime.layout
    pi = tuple(qprime.p_at(j - 1) + qprime.p_at(j) for j in range(lay.r))
    pit = tuple(qprime.pt_at(j - 1) + qprime.pt_at(j) for j in range(lay.rt))
    return pi, pit


def prefix_exponents(layout: Layout, term: JacobianTerm) -> tuple[int, ...]:
    """Exponents of the monomial prefix attached to a Jacobian term."""
    e = [0] * layout.nvars
    head, head_t = (layout.x, layout.xt) if term.kind == "F" else (layout.y, layout.yt)
    if term.i >= 0:
        e[head(term.i)] += 1
        for j in range(term.i):
            e[layout.z(j)] += 1
    if term.it >= 0:
        e[head_t(term.it)] += 1
        for j in range(term.it):
            e[layout.zt(j)] += 1
    return tuple(e)


def _phi_sum(layout: Layout, pi, pit, N: int) -> TruncatedSeries:
    D = layout.nvars
    total = TruncatedSeries.zero(D, N)
    for term in jacobian_terms(layout):
        pre = prefix_exponents(layout, term)
        deg = sum(pre)
        if deg > N:
            continue
        mu = tuple(a + b for a, b in zip(pi, nu(term.i, layout.r)))
        mut = tuple(a + b for a, b in zip(pit, nu(term.it, layout.rt)))
        part = _phi_truncated(layout, mu, mut, N - deg).shift(pre, cap=N)
        total = total + part if term.sign > 0 else total - part
    return total


def expand_eta_monomial(qprime: MultiIndex, N: int) -> TruncatedSeries:
    """Laurent expansion of ``eta^qprime`` in ``xi`` through total degree ``N``."""
    lay = qprime.layout
    pi, pit = eta_monomial_pi(qprime)
    inner = _phi_sum(lay, pi, pit, N - qprime.total_degree)
    return inner.shift(qprime.exps, cap=N)


def expand_monomial_generic(spec: MonomialSpec, r: int, rt: int, N: int) -> TruncatedSeries:
    """``u^k ut^kt`` as a signed double sum of shifted Phi series."""
    layout = Layout(r, rt)
    _check_spec(spec, layout)
    return _phi_sum(layout, u_monomial_pi(spec.k), u_monomial_pi(spec.kt), N)


def expand_monomial(spec: MonomialSpec, r: int, rt: int, N: int, path: str = "auto") -> TruncatedSeries:
    """Power series of ``u^k ut^kt`` in the expansion variables, capped at ``N``.

    ``path`` selects the generic double sum or the single-sum corner form;
    ``"auto"`` uses the corner form whenever one side is empty.
    """
    layout = Layout(r, rt)
    _check_spec(spec, layout)
    if path not in ("auto", "generic", "corner"):
        raise ValueError(f"unknown path {path!r}")
    if path == "generic" or (path == "auto" and not layout.is_corner):
        return expand_monomial_generic(spec, r, rt, N)
    if not layout.is_corner:
        raise ValueError("the corner path needs r == 0 or rt == 0")
    # with r == 0 the variables (xt, zt) sit where (x, z) sit for Layout(rt, 0)
    k = spec.k if rt == 0 else spec.kt
    return expand_monomial_corner(k, N)


def _check_spec(spec: MonomialSpec, layout: Layout):
    if len(spec.k) != layout.r or len(spec.kt) != layout.rt:
        raise ValueError(f"monomial lengths ({len(spec.k)}, {len(spec.kt)}) do not fit {layout}")


def u_monomial_as_eta(spec: MonomialSpec, layout: Layout) -> tuple[MultiIndex, tuple[int, ...]]:
    """Write ``u^k ut^kt`` as ``xi^shift * eta^qprime``.

    Uses ``u_1 = s_0/x_0`` and ``u_{i+2} = u_i w_i / z_i``; returns
    ``(qprime, shift)`` with ``shift = -(x, z exponents of qprime)``.
    """
    _check_spec(spec, layout)

    def side(k, n):
        m0 = sum(k[0::2])
        p = tuple(sum(k[j + 1::2]) for j in range(max(n - 1, 0)))
        return m0, p

    m0, p = side(spec.k, layout.r)
    mt0, pt = side(spec.kt, layout.rt)
    m = tuple([m0] + [0] * (layout.r - 1)) if layout.r else ()
    mt = tuple([mt0] + [0] * (layout.rt - 1)) if layout.rt else ()
    n = (0,) * layout.sizes[1]
    nt = (0,) * layout.sizes[4]
    qprime = MultiIndex.from_groups(layout, m, n, p, mt, nt, pt)
    return qprime, tuple(-v for v in qprime.exps)


def phi_term_count(layout: Layout) -> int:
    return len(jacobian_terms(layout))


# --------------------------------------------------------------------------
# Corner form (one side empty): only x and z variables


def corner_phi_coefficient(m: Sequence[int], p: Sequence[int], mu: Sequence[int]) -> int:
    """``(-1)^|m| prod_j trinom(mu_j+m_j+p_{j-1}+p_j-1; m_j, p_j)``, ``p_{-1} = |m|``."""
    r = len(mu)
    if len(m) != r or len(p) != max(r - 1, 0):
        raise ValueError("corner index lengths must be r and r-1")
    if any(v < 0 for v in list(m) + list(p)):
        raise NegativeIndex(f"negative corner index m={m} p={p}")
    sm = sum(m)
    out = 1
    for j in range(r):
        pj = p[j] if j < r - 1 else 0
        pjm = sm if j == 0 else p[j - 1]
        c = trinom(mu[j] + m[j] + pjm + pj - 1, m[j], pj)
        if not c:
            return 0
        out *= c
    return -out if sm & 1 else out


@lru_cache(maxsize=4096)
def _corner_phi_truncated(mu: tuple, N: int) -> TruncatedSeries:
    r = len(mu)
    D = 2 * r - 1
    terms = {}
    for exps in iter_exponents(D, N):
        c = corner_phi_coefficient(exps[:r], exps[r:], mu)
        if c:
            terms[exps] = c
    return TruncatedSeries._raw(D, N, terms)


def corner_phi_truncated(mu: Sequence[int], N: int) -> TruncatedSeries:
    """Corner ``Phi(x, z; mu)`` through degree ``N`` over variables ``(x, z)``."""
    return _corner_phi_truncated(tuple(int(v) for v in mu), N)


def expand_monomial_corner(k: Sequence[int], N: int) -> TruncatedSeries:
    """``u^k`` for a corner branch: ``sum_i x_i z_0..z_{i-1} Phi(pi + nu^i)``."""
    r = len(k)
    D = 2 * r - 1
    pi = u_monomial_pi(k)
    total = TruncatedSeries.zero(D, N)
    for i in range(-1, r):
        pre = [0] * D
        if i >= 0:
            pre[i] = 1
            for j in range(i):
                pre[r + j] = 1
        deg = sum(pre)
        if deg > N:
            continue
        mu = tuple(a + b for a, b in zip(pi, nu(i, r)))
        total = total + corner_phi_truncated(mu, N - deg).shift(pre, cap=N)
    return total


def clear_caches() -> None:
    """Drop memoized Phi series (used by benchmarks for cold timings)."""
    _phi_truncated.cache_clear()
    _corner_phi_truncated.cache_clear()
