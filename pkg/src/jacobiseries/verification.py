"""Self-check suites: closed forms against independent oracles.

Every suite yields ``CaseResult`` records.  ``run_suites`` gathers them and
picks the smallest failing case (by ``d``, then degree) for reporting.
"""

from __future__ import annotations

import math
import random
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import mpmath

from .combinatorics import Layout, MultiIndex, iter_exponents
from .core_model import JacobiMatrix, expansion_variables, relabel, solve_branch
from .errors import JacobiSeriesError
from . import hypergeometric as hg
from .jacobian import jacobian_closed, jacobian_numeric, jacobian_terms, random_eta, verify_lagrange_system
from .oracle import dense_eigensolve, iterate_system, match_branch

__all__ = [
    "SUITES",
    "VerifyConfig",
    "CaseResult",
    "VerifyReport",
    "ResidualPoint",
    "residual_sweep",
    "fit_slope",
    "run_suites",
]

SUITES = ("oracle", "jacobian", "lagrange", "symmetry", "corner", "residual")


@dataclass(frozen=True)
class VerifyConfig:
    max_d: int = 4
    degree: int = 3
    seed: int = 0
    samples: int = 10
    coeff_degree: int = 3


@dataclass
class CaseResult:
    suite: str
    case: str
    d: int
    degree: int
    ok: bool
    detail: str = ""


@dataclass
class VerifyReport:
    suites: tuple
    cases: list = field(default_factory=list)
    residual_rows: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.cases)

    @property
    def first_failure(self) -> CaseResult | None:
        bad = [c for c in self.cases if not c.ok]
        if not bad:
            return None
        return min(bad, key=lambda c: (c.d, c.degree, SUITES.index(c.suite), c.case))

    def summary(self) -> dict:
        per = {}
        for c in self.cases:
            s = per.setdefault(c.suite, {"cases": 0, "failed": 0})
            s["cases"] += 1
            s["failed"] += 0 if c.ok else 1
        fail = self.first_failure
        return {
            "ok": self.ok,
            "suites": per,
            "first_failure": asdict(fail) if fail else None,
        }


def _branches(max_d):
    for d in range(2, max_d + 1):
        for k in range(1, d + 1):
            yield d, k, d - k, k - 1


def _suite_oracle(cfg: VerifyConfig, rng):
    for d, k, r, rt in _branches(cfg.max_d):
        N = cfg.degree
        state = iterate_system(r, rt, N)
        for tilded, ref, n in ((False, state.u, r), (True, state.ut, rt)):
            for i in range(1, n + 1):
                spec = hg.MonomialSpec.unit(r, rt, i, tilded)
                got = hg.expand_monomial(spec, r, rt, N)
                name = f"{'ut' if tilded else 'u'}{i} k={k}"
                diff = (got - ref[i - 1]).min_degree()
                yield CaseResult("oracle", name, d, N if diff is None else diff, diff is None,
                                 "" if diff is None else f"series differ from degree {diff}")
    # eta-monomial coefficients against the summed Phi form
    for d in range(2, cfg.max_d + 1):
        for k in range(1, d + 1):
            lay = Layout(d - k, k - 1)
            if lay.nvars == 0:
                continue
            qp = tuple(rng.randint(-1, 1) for _ in range(lay.nvars))
            qprime = MultiIndex(lay, qp)
            N = cfg.coeff_degree + max(0, qprime.total_degree)
            series = hg.expand_eta_monomial(qprime, N)
            bad = None
            for e in iter_exponents(lay.nvars, N):
                q = tuple(a + b for a, b in zip(e, qp))
                if sum(q) > N:
                    continue
                want = series.coeff(q)
                got = hg.coeff_H(qprime, MultiIndex(lay, q))
                if got != want:
                    bad = (q, got, want)
                    break
            detail = "" if bad is None else f"coeff_H mismatch at q={bad[0]}: {bad[1]} != {bad[2]}"
            yield CaseResult("oracle", f"coeff_H k={k} q'={qp}", d, N, bad is None, detail)


def _suite_jacobian(cfg: VerifyConfig, rng):
    for d, k, r, rt in _branches(cfg.max_d):
        lay = Layout(r, rt)
        count = len(jacobian_terms(lay))
        want = 2 * d * k - 2 * k * k + 2 * k - d
        yield CaseResult("jacobian", f"term count k={k}", d, 0, count == want, f"{count} terms, expected {want}")
        worst = 0.0
        for _ in range(cfg.samples):
            eta = random_eta(lay, rng, scale=Fraction(1, 10), exact=False)
            worst = max(worst, abs(jacobian_closed(eta) - jacobian_numeric(eta)))
        yield CaseResult("jacobian", f"closed vs numeric k={k}", d, 0, worst <= 1e-8, f"max deviation {worst:.3e}")


def _suite_lagrange(cfg: VerifyConfig, rng):
    for d, k, r, rt in _branches(cfg.max_d):
        lay = Layout(r, rt)
        bad = None
        for _ in range(cfg.samples):
            rep = verify_lagrange_system(random_eta(lay, rng))
            if not rep.all_zero:
                bad = rep
                break
        detail = "" if bad is None else f"nonzero residuals {sorted(k_ for k_, v in bad.residuals.items() if any(v))}"
        yield CaseResult("lagrange", f"k={k}", d, 0, bad is None, detail)


def _random_exact_matrix(d, rng):
    alpha = rng.sample(range(-20, 21), d)
    beta = [Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), 40) for _ in range(d - 1)]
    gamma = [Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), 40) for _ in range(d - 1)]
    return JacobiMatrix(alpha, beta, gamma)


def _suite_symmetry(cfg: VerifyConfig, rng):
    N = cfg.degree
    for d in range(2, cfg.max_d + 1):
        M = _random_exact_matrix(d, rng)
        R = M.rotated()
        for k in range(1, d + 1):
            kk = d + 1 - k
            a = relabel(M, k)
            b = relabel(R, kk)
            same_cfg = (a.a, a.b, a.c, a.at, a.bt, a.ct) == (b.at, b.ct, b.bt, b.a, b.c, b.b)
            p, q = expansion_variables(a), expansion_variables(b)
            same_xi = (p.x, p.y, p.z, p.xt, p.yt, p.zt) == (q.xt, q.yt, q.zt, q.x, q.y, q.z)
            ra, rb = solve_branch(M, k, N), solve_branch(R, kk, N)
            same_pair = ra.eigenvalue == rb.eigenvalue and ra.vector == tuple(reversed(rb.vector))
            perm = a.layout.tilde_permutation()
            same_series = ra.lambda_series.permute(perm) == rb.lambda_series
            ok = same_cfg and same_xi and same_pair and same_series
            detail = "" if ok else f"cfg={same_cfg} xi={same_xi} pair={same_pair} series={same_series}"
            yield CaseResult("symmetry", f"rotation k={k}", d, N, ok, detail)


def _suite_corner(cfg: VerifyConfig, rng):
    N = cfg.degree
    for d in range(2, cfg.max_d + 1):
        for k in (1, d):
            r, rt = d - k, k - 1
            for i in range(1, max(r, rt) + 1):
                spec = hg.MonomialSpec.unit(r, rt, i, tilded=(r == 0))
                a = hg.expand_monomial(spec, r, rt, N, path="corner")
                b = hg.expand_monomial(spec, r, rt, N, path="generic")
                yield CaseResult("corner", f"k={k} index {i}", d, N, a == b)


# --------------------------------------------------------------------------
# residual order


@dataclass(frozen=True)
class ResidualPoint:
    degree: int
    epsilon: Fraction
    residual: float
    gap: float


def fit_slope(xs, ys) -> float:
    """Least-squares slope of ``log10 y`` against ``log10 x``."""
    lx = [math.log10(x) for x in xs]
    ly = [math.log10(y) for y in ys]
    mx, my = sum(lx) / len(lx), sum(ly) / len(ly)
    num = sum((a - mx) * (b - my) for a, b in zip(lx, ly))
    den = sum((a - mx) ** 2 for a in lx)
    return num / den


def residual_sweep(alpha=(0, 1, 3, 7), k=2, degrees=(1, 2, 3),
                   epsilons=(Fraction(1, 100), Fraction(1, 1000), Fraction(1, 10000)),
                   seed=0, dps=80) -> list[ResidualPoint]:
    """Residual and dense-eigenvalue gap as the off-diagonals shrink like ``eps``.

    Off-diagonal signs are drawn from ``seed``; everything is exact except
    the high-precision dense reference.
    """
    rng = random.Random(seed)
    d = len(alpha)
    beta = [rng.choice([-1, 1]) for _ in range(d - 1)]
    gamma = [rng.choice([-1, 1]) for _ in range(d - 1)]
    base = JacobiMatrix(alpha, beta, gamma)
    rows = []
    for eps in epsilons:
        M = base.scaled_offdiagonal(eps)
        dense = dense_eigensolve(M, dps=dps)
        pair = match_branch(dense, M.alpha[k - 1])
        for N in degrees:
            res = solve_branch(M, k, N)
            with mpmath.workdps(dps):
                ev = mpmath.mpf(res.eigenvalue.numerator) / res.eigenvalue.denominator
                gap = float(abs(mpmath.mpmathify(pair.eigenvalue) - ev))
            rows.append(ResidualPoint(N, eps, res.residual, gap))
    rows.sort(key=lambda p: (p.degree, -p.epsilon))
    return rows


def _suite_residual(cfg: VerifyConfig, rng, sink):
    rows = residual_sweep(seed=cfg.seed)
    sink.extend(rows)
    for N in sorted({p.degree for p in rows}):
        pts = [p for p in rows if p.degree == N]
        slope = fit_slope([p.epsilon for p in pts], [p.residual for p in pts])
        gslope = fit_slope([p.epsilon for p in pts], [p.gap for p in pts])
        # decay at least at the nominal order 2(N+1)
        ok = slope >= 2 * (N + 1) - 0.1 and gslope >= 2 * (N + 1) - 0.1
        yield CaseResult("residual", f"order N={N}", 4, N, ok,
                         f"residual slope {slope:.3f}, gap slope {gslope:.3f}")


def run_suites(suites=SUITES, config: VerifyConfig | None = None) -> VerifyReport:
    config = config or VerifyConfig()
    unknown = [s for s in suites if s not in SUITES]
    if unknown:
        raise ValueError(f"unknown suite(s): {', '.join(unknown)}")
    report = VerifyReport(tuple(suites))
    for name in SUITES:
        if name not in suites:
            continue
        rng = random.Random(f"{config.seed}:{name}")
        if name == "residual":
            gen = _suite_residual(config, rng, report.residual_rows)
        else:
            gen = globals()[f"_suite_{name}"](config, rng)
        try:
            report.cases.extend(gen)
        except JacobiSeriesError as exc:
            report.cases.append(CaseResult(name, "raised", 0, 0, False, f"{type(exc).__name__}: {exc}"))
    return report
