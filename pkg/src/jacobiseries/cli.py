"""Command-line front end.

    jacobiseries solve  MATRIX.json --k all --degree 3 [--mode exact|float]
    jacobiseries expand MATRIX.json --k 2 --degree 3 --monomial "1;0"
    jacobiseries verify [--suite oracle,jacobian] [--seed 0]
    jacobiseries bench  [--degree 4] [--max-d 5]

Matrix documents are JSON objects with ``d``, ``alpha``, ``beta`` and
``gamma``; entries are integers or ``"num/den"`` strings (floats only in
float mode).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import __version__
from .combinatorics import Layout
from .core_model import JacobiMatrix, solve_branch
from .errors import BadIndex, InternalLimit, InvalidMatrix, JacobiSeriesError, ParseError
from . import hypergeometric as hg
from .verification import SUITES, VerifyConfig, run_suites

MAX_DEGREE = 12
MAX_ORDER = 16

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_MATRIX, EXIT_LIMIT = 0, 1, 2, 3, 4

_RATIONAL = re.compile(r"\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?")


# --------------------------------------------------------------------------
# input


def parse_rational(value, field: str, allow_float: bool = False):
    if isinstance(value, bool) or value is None:
        raise ParseError(f"{field}: expected a rational, got {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        if not allow_float:
            raise ParseError(f"{field}: float {value!r} not allowed in exact mode; use \"num/den\"")
        return value
    if isinstance(value, str):
        m = _RATIONAL.fullmatch(value)
        if not m:
            raise ParseError(f"{field}: cannot parse {value!r} as num/den")
        num, den = int(m.group(1)), int(m.group(2) or 1)
        if den == 0:
            raise ParseError(f"{field}: zero denominator")
        q = Fraction(num, den)
        return q.numerator if q.denominator == 1 else q
    raise ParseError(f"{field}: expected a rational, got {type(value).__name__}")


def parse_matrix(text: str, mode: str = "exact") -> JacobiMatrix:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"input: not valid JSON ({exc.msg} at line {exc.lineno})") from None
    if not isinstance(doc, dict):
        raise ParseError("input: expected a JSON object")
    allow_float = mode == "float"
    cols = {}
    for name in ("alpha", "beta", "gamma"):
        if name not in doc:
            raise ParseError(f"{name}: missing field")
        if not isinstance(doc[name], list):
            raise ParseError(f"{name}: expected a list")
        cols[name] = [parse_rational(v, f"{name}[{i}]", allow_float) for i, v in enumerate(doc[name])]
    if "d" in doc:
        d = doc["d"]
        if isinstance(d, bool) or not isinstance(d, int):
            raise ParseError(f"d: expected an integer, got {d!r}")
        if d != len(cols["alpha"]):
            raise ParseError(f"d: declared {d} but alpha has {len(cols['alpha'])} entries")
    if len(cols["alpha"]) > MAX_ORDER:
        raise InternalLimit(f"d: order {len(cols['alpha'])} above the cap {MAX_ORDER}")
    return JacobiMatrix(cols["alpha"], cols["beta"], cols["gamma"])


def parse_monomial(text: str, r: int, rt: int) -> hg.MonomialSpec:
    """``"k_1,..,k_r;kt_1,..,kt_rt"``; either side may be empty, exponents may be negative."""
    left, sep, right = text.partition(";")
    try:
        k = [int(t) for t in left.split(",") if t.strip()]
        kt = [int(t) for t in right.split(",") if t.strip()]
    except ValueError:
        raise ParseError(f"--monomial: cannot parse {text!r}") from None
    if not sep and rt and not r:
        k, kt = [], k
    if len(k) != r or len(kt) != rt:
        raise ParseError(f"--monomial: branch needs {r} exponent(s) before ';' and {rt} after, got {text!r}")
    return hg.MonomialSpec(tuple(k), tuple(kt))


def _degree(n: int) -> int:
    if n < 0:
        raise ParseError(f"--degree: must be >= 0, got {n}")
    if n > MAX_DEGREE:
        raise InternalLimit(f"--degree: {n} above the cap {MAX_DEGREE}")
    return n


def _branches(arg: str, d: int) -> list[int]:
    if arg == "all":
        return list(range(1, d + 1))
    try:
        k = int(arg)
    except ValueError:
        raise ParseError(f"--k: expected an integer or 'all', got {arg!r}") from None
    if not 1 <= k <= d:
        raise BadIndex(f"--k: {k} outside 1..{d}")
    return [k]


# --------------------------------------------------------------------------
# output helpers


def fmt_value(v):
    """Exact values as canonical strings, floats as floats."""
    if isinstance(v, bool):
        return v
    if isinstance(v, int):
        return str(v)
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, complex):
        return [v.real, v.imag]
    return float(v)


def _float(v) -> float:
    return float(v)


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


# --------------------------------------------------------------------------
# commands


def _solve_one(job):
    M, k, N, mode = job
    return solve_branch(M, k, N, mode)


def _result_record(res) -> dict:
    lay = res.layout
    return {
        "k": res.k,
        "degree": res.N,
        "eigenvalue": fmt_value(res.eigenvalue),
        "eigenvalue_float": _float(res.eigenvalue),
        "lambda_series": {
            "variables": lay.var_names(),
            "cap": res.lambda_series.cap,
            "terms": res.lambda_series.to_records(),
        },
        "vector": [fmt_value(v) for v in res.vector],
        "residual": res.residual,
    }


def run_solve(args) -> tuple[int, str]:
    N = _degree(args.degree)
    M = parse_matrix(_read(args.input), args.mode)
    ks = _branches(args.k, M.d)
    jobs = [(M, k, N, args.mode) for k in ks]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_solve_one, jobs))
    else:
        results = [_solve_one(j) for j in jobs]

    if args.format == "json":
        return EXIT_OK, _json({"d": M.d, "degree": N, "mode": args.mode,
                               "results": [_result_record(r) for r in results]})
    if args.format == "csv":
        header = ["k", "degree", "eigenvalue", "eigenvalue_float", "residual"] + [f"v{i}" for i in range(1, M.d + 1)]
        rows = [[r.k, r.N, fmt_value(r.eigenvalue), repr(_float(r.eigenvalue)), repr(r.residual)]
                + [fmt_value(v) for v in r.vector] for r in results]
        return EXIT_OK, _csv(rows, header)
    lines = []
    for r in results:
        lines.append(f"branch k={r.k} (degree {r.N}, {args.mode})")
        lines.append(f"  eigenvalue   {fmt_value(r.eigenvalue)}  ~ {_float(r.eigenvalue):.16g}")
        lines.append("  vector       " + "  ".join(str(fmt_value(v)) for v in r.vector))
        lines.append(f"  residual     {r.residual:.6e}")
        names = r.layout.var_names()
        lines.append("  lambda(xi)   " + _series_inline(r.lambda_series, names))
    return EXIT_OK, "\n".join(lines) + "\n"


def _series_inline(s, names) -> str:
    out = ""
    for e, c in sorted(s.terms.items(), key=lambda t: (sum(t[0]), t[0])):
        mono = "*".join(f"{n}^{k}" if k > 1 else n for n, k in zip(names, e) if k)
        mag = fmt_value(abs(Fraction(c)))
        body = mono if mono and mag == "1" else f"{mag}*{mono}" if mono else mag
        sign = "-" if c < 0 else "+"
        out += (f" {sign} " if out else ("-" if c < 0 else "")) + body
    return out or "0"


def run_expand(args) -> tuple[int, str]:
    N = _degree(args.degree)
    M = parse_matrix(_read(args.input), args.mode)
    ks = _branches(args.k, M.d)
    if len(ks) != 1:
        raise ParseError("--k: expand needs a single branch")
    k = ks[0]
    r, rt = M.d - k, k - 1
    if args.monomial is None:
        spec = hg.MonomialSpec.unit(r, rt, 1, tilded=(r == 0))
    else:
        spec = parse_monomial(args.monomial, r, rt)
    series = hg.expand_monomial(spec, r, rt, N)
    names = Layout(r, rt).var_names()
    if args.format == "json":
        return EXIT_OK, _json({
            "d": M.d, "k": k, "degree": N,
            "monomial": {"k": list(spec.k), "kt": list(spec.kt)},
            "variables": names, "nvars": series.nvars, "cap": series.cap, "low": series.low,
            "terms": series.to_records(),
        })
    if args.format == "csv":
        rows = [rec["exponents"] + [rec["coeff"]] for rec in series.to_records()]
        return EXIT_OK, _csv(rows, names + ["coeff"])
    return EXIT_OK, series.to_text()


def _suites(values) -> tuple:
    names = []
    for v in values or ["all"]:
        for part in v.split(","):
            part = part.strip()
            if part == "all":
                names.extend(SUITES)
            elif part in SUITES:
                names.append(part)
            else:
                raise ParseError(f"--suite: unknown suite {part!r} (choose from {', '.join(SUITES)}, all)")
    return tuple(dict.fromkeys(names))


def run_verify(args) -> tuple[int, str]:
    suites = _suites(args.suite)
    if args.max_d > MAX_ORDER:
        raise InternalLimit(f"--max-d: {args.max_d} above the cap {MAX_ORDER}")
    if args.max_d < 2:
        raise ParseError("--max-d: must be at least 2")
    cfg = VerifyConfig(max_d=args.max_d, degree=_degree(args.degree), seed=args.seed, samples=args.samples)
    report = run_suites(suites, cfg)
    code = EXIT_OK if report.ok else EXIT_FAIL
    fail = report.first_failure
    if fail is not None:
        print(f"FAIL {fail.suite}: {fail.case} (d={fail.d}, degree={fail.degree}) {fail.detail}", file=sys.stderr)

    if args.format == "json":
        doc = report.summary()
        doc["config"] = {"max_d": cfg.max_d, "degree": cfg.degree, "seed": cfg.seed, "samples": cfg.samples}
        doc["cases"] = [vars(c) for c in report.cases]
        if report.residual_rows:
            doc["residual_sweep"] = [
                {"degree": p.degree, "epsilon": fmt_value(p.epsilon), "residual": p.residual, "gap": p.gap}
                for p in report.residual_rows
            ]
        return code, _json(doc)
    if args.format == "csv":
        if suites == ("residual",):
            rows = [[p.degree, fmt_value(p.epsilon), repr(p.residual), repr(p.gap)] for p in report.residual_rows]
            return code, _csv(rows, ["degree", "epsilon", "residual", "gap"])
        rows = [[c.suite, c.case, c.d, c.degree, "PASS" if c.ok else "FAIL", c.detail] for c in report.cases]
        return code, _csv(rows, ["suite", "case", "d", "degree", "status", "detail"])
    lines = [f"{'PASS' if c.ok else 'FAIL'} {c.suite:9s} d={c.d} N={c.degree} {c.case}" + (f"  {c.detail}" if c.detail else "")
             for c in report.cases]
    s = report.summary()
    lines.append(f"{sum(v['cases'] for v in s['suites'].values())} cases, "
                 f"{sum(v['failed'] for v in s['suites'].values())} failed")
    return code, "\n".join(lines) + "\n"


def run_bench(args) -> tuple[int, str]:
    N = _degree(args.degree)
    if args.max_d > MAX_ORDER:
        raise InternalLimit(f"--max-d: {args.max_d} above the cap {MAX_ORDER}")
    rows = []
    for d in range(2, args.max_d + 1):
        for k in range(1, d + 1):
            r, rt = d - k, k - 1
            hg.clear_caches()
            t0 = time.perf_counter()
            terms = 0
            for i in range(1, r + 1):
                terms += len(hg.expand_monomial(hg.MonomialSpec.unit(r, rt, i), r, rt, N).terms)
            for i in range(1, rt + 1):
                terms += len(hg.expand_monomial(hg.MonomialSpec.unit(r, rt, i, True), r, rt, N).terms)
            rows.append((d, k, N, Layout(r, rt).nvars, terms, time.perf_counter() - t0))
    if args.format == "json":
        return EXIT_OK, _json([dict(zip(("d", "k", "degree", "nvars", "terms", "seconds"), row)) for row in rows])
    if args.format == "csv":
        return EXIT_OK, _csv([list(r[:5]) + [f"{r[5]:.6f}"] for r in rows], ["d", "k", "degree", "nvars", "terms", "seconds"])
    out = [f"d={d} k={k} N={n} nvars={v} terms={t} {s * 1e3:.1f} ms" for d, k, n, v, t, s in rows]
    return EXIT_OK, "\n".join(out) + "\n"


# --------------------------------------------------------------------------


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"input: cannot read {path!r} ({exc.strerror})") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="jacobiseries", description="Exact perturbative eigenpairs of Jacobi matrices.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, default_format="json"):
        sp.add_argument("--format", choices=("json", "csv", "text"), default=default_format)
        sp.add_argument("--out", help="write output here instead of stdout")

    for name, helptext in (("solve", "eigenpairs for one or all branches"),
                           ("expand", "series of a monomial in u, ut")):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("input", help="matrix JSON document, or - for stdin")
        sp.add_argument("--k", default="all" if name == "solve" else "1", help="branch index or 'all'")
        sp.add_argument("--degree", "-N", type=int, default=3)
        sp.add_argument("--mode", choices=("exact", "float"), default="exact")
        common(sp)
        if name == "solve":
            sp.add_argument("--jobs", type=int, default=1, help="worker processes over branches")
        else:
            sp.add_argument("--monomial", help="exponents 'k1,..,kr;kt1,..,ktrt'")

    sp = sub.add_parser("verify", help="run the self-check suites")
    sp.add_argument("--suite", action="append", help=f"comma-separated subset of {', '.join(SUITES)}, or all")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--degree", "-N", type=int, default=3)
    sp.add_argument("--max-d", type=int, default=4)
    sp.add_argument("--samples", type=int, default=10)
    common(sp, "text")

    sp = sub.add_parser("bench", help="time closed-form coefficient enumeration")
    sp.add_argument("--degree", "-N", type=int, default=4)
    sp.add_argument("--max-d", type=int, default=5)
    common(sp, "text")
    return p


_COMMANDS = {"solve": run_solve, "expand": run_expand, "verify": run_verify, "bench": run_bench}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code, text = _COMMANDS[args.command](args)
    except (ParseError, BadIndex) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InvalidMatrix as exc:
        print(f"error: invalid matrix: {exc}", file=sys.stderr)
        return EXIT_MATRIX
    except InternalLimit as exc:
        print(f"error: limit exceeded: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except JacobiSeriesError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
