"""Sparse truncated multivariate power series with exact rational coefficients.

A :class:`TruncatedSeries` is a map from exponent vectors to coefficients
together with a cap on the total degree.  Every operation discards terms
above the cap of its result, so a series is a faithful representation of
its infinite counterpart through total degree ``cap``.

Coefficients are Python ints whenever they are integral and
:class:`fractions.Fraction` otherwise.  Exponents are bounded below by
``low`` (0 for genuine power series; negative for the Laurent monomials that
appear as intermediate prefactors).
"""

from __future__ import annotations

import re
from collections import defaultdict
from fractions import Fraction
from numbers import Rational
from operator import add
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .errors import DimensionMismatch, ZeroConstantTerm

__all__ = ["TruncatedSeries", "series_add", "series_mul", "series_eval", "series_reciprocal"]


def _norm(c):
    if isinstance(c, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, Rational):
        return _norm(Fraction(c.numerator, c.denominator))
    raise TypeError(f"coefficients must be exact rationals, got {type(c).__name__}")


def _fmt(c) -> str:
    c = Fraction(c)
    return f"{c.numerator}/{c.denominator}"


class TruncatedSeries:
    __slots__ = ("nvars", "cap", "low", "_terms")

    def __init__(self, nvars: int, cap: int, terms: Mapping[Sequence[int], object] | None = None, low: int = 0):
        if nvars < 0:
            raise ValueError("nvars must be >= 0")
        self.nvars = nvars
        self.cap = cap
        self.low = low
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != nvars:
                raise DimensionMismatch(f"exponent {exps} has length {len(exps)}, expected {nvars}")
            if exps and min(exps) < low:
                raise ValueError(f"exponent {exps} below lower bound {low}")
            if sum(exps) > cap:
                continue
            c = _norm(c)
            if c:
                clean[exps] = clean.get(exps, 0) + c
        self._terms = {e: c for e, c in clean.items() if c}

    @classmethod
    def _raw(cls, nvars, cap, terms, low=0) -> "TruncatedSeries":
        # trusted constructor: terms already clean
        s = object.__new__(cls)
        s.nvars, s.cap, s.low, s._terms = nvars, cap, low, terms
        return s

    # constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, nvars: int, cap: int) -> "TruncatedSeries":
        return cls._raw(nvars, cap, {})

    @classmethod
    def constant(cls, value, nvars: int, cap: int) -> "TruncatedSeries":
        return cls(nvars, cap, {(0,) * nvars: value})

    @classmethod
    def one(cls, nvars: int, cap: int) -> "TruncatedSeries":
        return cls.constant(1, nvars, cap)

    @classmethod
    def monomial(cls, exps: Sequence[int], nvars: int, cap: int, coeff=1) -> "TruncatedSeries":
        exps = tuple(exps)
        return cls(nvars, cap, {exps: coeff}, low=min(0, *exps) if exps else 0)

    @classmethod
    def variable(cls, index: int, nvars: int, cap: int) -> "TruncatedSeries":
        exps = [0] * nvars
        exps[index] = 1
        return cls.monomial(exps, nvars, cap)

    # inspection -----------------------------------------------------------
    @property
    def terms(self) -> Mapping[tuple[int, ...], object]:
        return MappingProxyType(self._terms)

    def coeff(self, exps: Sequence[int]):
        return self._terms.get(tuple(exps), 0)

    def constant_term(self):
        return self._terms.get((0,) * self.nvars, 0)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self):
        return iter(sorted(self._terms.items()))

    def min_degree(self) -> int | None:
        return min((sum(e) for e in self._terms), default=None)

    def __repr__(self) -> str:
        return f"TruncatedSeries(nvars={self.nvars}, cap={self.cap}, terms={len(self._terms)})"

    def __eq__(self, other) -> bool:
        if isinstance(other, TruncatedSeries):
            return self.nvars == other.nvars and self.cap == other.cap and self._terms == other._terms
        try:
            c = _norm(other)
        except TypeError:
            return NotImplemented
        return self._terms == ({(0,) * self.nvars: c} if c else {})

    __hash__ = None

    # arithmetic -----------------------------------------------------------
    def _check(self, other: "TruncatedSeries"):
        if self.nvars != other.nvars:
            raise DimensionMismatch(f"series over {self.nvars} and {other.nvars} variables")

    def _coerce(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            self._check(other)
            return other
        return TruncatedSeries.constant(other, self.nvars, self.cap)

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        cap = min(self.cap, other.cap)
        out = {e: c for e, c in self._terms.items() if sum(e) <= cap}
        for e, c in other._terms.items():
            if sum(e) > cap:
                continue
            v = out.get(e, 0) + c
            if v:
                out[e] = _norm(v)
            else:
                out.pop(e, None)
        return TruncatedSeries._raw(self.nvars, cap, out, min(self.low, other.low))

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries._raw(self.nvars, self.cap, {e: -c for e, c in self._terms.items()}, self.low)

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, factor) -> "TruncatedSeries":
        factor = _norm(factor)
        if not factor:
            return TruncatedSeries.zero(self.nvars, self.cap)
        return TruncatedSeries._raw(
            self.nvars, self.cap, {e: _norm(c * factor) for e, c in self._terms.items()}, self.low
        )

    def _buckets(self, cap):
        out = defaultdict(list)
        for e, c in self._terms.items():
            deg = sum(e)
            if deg <= cap:
                out[deg].append((e, c))
        return out

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        self._check(other)
        cap = min(self.cap, other.cap)
        a_min = self.min_degree()
        b_min = other.min_degree()
        if a_min is None or b_min is None:
            return TruncatedSeries.zero(self.nvars, cap)
        # a term of degree da pairs only with partners of degree <= cap - da
        ba = self._buckets(cap - b_min)
        bb = other._buckets(cap - a_min)
        out: dict = {}
        get = out.get
        for da, ta in ba.items():
            for db, tb in bb.items():
                if da + db > cap:
                    continue
                for ea, ca in ta:
                    for eb, cb in tb:
                        e = tuple(map(add, ea, eb))
                        out[e] = get(e, 0) + ca * cb
        terms = {e: _norm(c) for e, c in out.items() if c}
        return TruncatedSeries._raw(self.nvars, cap, terms, min(self.low + other.low, 0))

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.reciprocal() ** (-k)
        result = TruncatedSeries.one(self.nvars, self.cap)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def reciprocal(self) -> "TruncatedSeries":
        """Multiplicative inverse of a power series with non-zero constant term."""
        if self.low < 0 and any(min(e) < 0 for e in self._terms):
            raise ZeroConstantTerm("reciprocal of a Laurent series with negative exponents")
        c0 = self.constant_term()
        if not c0:
            raise ZeroConstantTerm("series has zero constant term")
        inv0 = Fraction(1) / Fraction(c0)
        homog = defaultdict(list)
        for e, c in self._terms.items():
            deg = sum(e)
            if deg > 0:
                homog[deg].append((e, c))
        zero = (0,) * self.nvars
        parts: list[dict] = [{zero: _norm(inv0)}]
        for n in range(1, self.cap + 1):
            acc: dict = {}
            for j in range(1, n + 1):
                sj = homog.get(j)
                if not sj:
                    continue
                for eb, cb in parts[n - j].items():
                    for ea, ca in sj:
                        e = tuple(map(add, ea, eb))
                        acc[e] = acc.get(e, 0) + ca * cb
            parts.append({e: _norm(-c * inv0) for e, c in acc.items() if c})
        terms = {}
        for p in parts:
            terms.update(p)
        return TruncatedSeries._raw(self.nvars, self.cap, terms)

    # structural -----------------------------------------------------------
    def truncate(self, cap: int) -> "TruncatedSeries":
        cap = min(cap, self.cap)
        return TruncatedSeries._raw(
            self.nvars, cap, {e: c for e, c in self._terms.items() if sum(e) <= cap}, self.low
        )

    def shift(self, exps: Sequence[int], cap: int | None = None) -> "TruncatedSeries":
        """Multiply by the monomial ``xi^exps``.

        The product is exact through ``self.cap + sum(exps)``, which is the
        default cap of the result.
        """
        exps = tuple(exps)
        if len(exps) != self.nvars:
            raise DimensionMismatch("shift vector has wrong length")
        new_cap = self.cap + sum(exps) if cap is None else min(cap, self.cap + sum(exps))
        terms = {}
        for e, c in self._terms.items():
            f = tuple(map(add, e, exps))
            if sum(f) <= new_cap:
                terms[f] = c
        low = min([self.low + min(exps, default=0), 0] + [min(f) for f in terms if f])
        return TruncatedSeries._raw(self.nvars, new_cap, terms, low)

    def permute(self, perm: Sequence[int], nvars: int | None = None) -> "TruncatedSeries":
        """Relabel variable ``i`` as ``perm[i]``."""
        nvars = self.nvars if nvars is None else nvars
        terms = {}
        for e, c in self._terms.items():
            f = [0] * nvars
            for i, k in enumerate(e):
                f[perm[i]] = k
            terms[tuple(f)] = c
        return TruncatedSeries._raw(nvars, self.cap, terms, self.low)

    def embed(self, positions: Sequence[int], nvars: int) -> "TruncatedSeries":
        """Place this series' variables at ``positions`` of a larger variable set."""
        return self.permute(positions, nvars)

    # evaluation -----------------------------------------------------------
    def eval(self, point: Sequence):
        if len(point) != self.nvars:
            raise DimensionMismatch(f"point of length {len(point)} for {self.nvars} variables")
        total = 0
        for e, c in self._terms.items():
            term = c
            for x, k in zip(point, e):
                if k:
                    term = term * x ** k
            total = total + term
        return total

    __call__ = eval

    # text form ------------------------------------------------------------
    def to_text(self) -> str:
        """Canonical exact text: a header line then one term per line in lex order."""
        lines = [f"nvars={self.nvars} cap={self.cap} low={self.low}"]
        for e, c in sorted(self._terms.items()):
            mono = " ".join(f"x{i}^{k}" for i, k in enumerate(e) if k)
            lines.append(f"{_fmt(c)} * {mono}" if mono else _fmt(c))
        return "\n".join(lines) + "\n"

    def __str__(self) -> str:
        return self.to_text()

    @classmethod
    def from_text(cls, text: str) -> "TruncatedSeries":
        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty series text")
        head = re.fullmatch(r"nvars=(\d+) cap=(-?\d+) low=(-?\d+)", lines[0])
        if not head:
            raise ValueError(f"bad series header: {lines[0]!r}")
        nvars, cap, low = (int(g) for g in head.groups())
        terms = {}
        for ln in lines[1:]:
            coeff, _, mono = ln.partition("*")
            exps = [0] * nvars
            for tok in mono.split():
                m = re.fullmatch(r"x(\d+)\^(-?\d+)", tok)
                if not m:
                    raise ValueError(f"bad monomial token {tok!r}")
                exps[int(m.group(1))] = int(m.group(2))
            terms[tuple(exps)] = Fraction(coeff.strip())
        return cls(nvars, cap, terms, low=low)

    def to_records(self) -> list[dict]:
        return [{"exponents": list(e), "coeff": _fmt(c)} for e, c in sorted(self._terms.items())]

    @classmethod
    def from_records(cls, records: Iterable[Mapping], nvars: int, cap: int, low: int = 0) -> "TruncatedSeries":
        return cls(nvars, cap, {tuple(r["exponents"]): Fraction(r["coeff"]) for r in records}, low=low)


def series_add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return a + b


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return a * b


def series_eval(s: TruncatedSeries, point: Sequence):
    return s.eval(point)


def series_reciprocal(s: TruncatedSeries) -> TruncatedSeries:
    return s.reciprocal()
