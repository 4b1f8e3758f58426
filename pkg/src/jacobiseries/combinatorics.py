"""Exact integer kernels and multi-index bookkeeping.

The generalised multinomials here are coefficients of ``(1+x)^a``,
``(1+x+y)^a`` and ``(1+x+y+z)^a`` for an arbitrary integer ``a``; they are
evaluated with falling factorials and vanish when any lower index is
negative.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial, prod
from typing import Iterator, Sequence

__all__ = [
    "falling",
    "multinom",
    "binom",
    "trinom",
    "quadrinom",
    "pochhammer",
    "sigma",
    "Layout",
    "MultiIndex",
    "iter_exponents",
    "count_exponents",
]


def falling(a: int, k: int) -> int:
    """a (a-1) ... (a-k+1); 1 for k = 0."""
    out = 1
    for i in range(k):
        out *= a - i
    return out


def multinom(a: int, *lower: int) -> int:
    """Coefficient of ``x1^k1 ... xn^kn`` in ``(1 + x1 + ... + xn)^a``."""
    if any(k < 0 for k in lower):
        return 0
    num = falling(a, sum(lower))
    if num == 0:
        return 0
    # falling(a, K) / prod(k!) = binom(a, K) * K!/prod(k!), always an integer
    return num // prod(factorial(k) for k in lower)


def binom(a: int, m: int) -> int:
    return multinom(a, m)


def trinom(a: int, m: int, n: int) -> int:
    return multinom(a, m, n)


def quadrinom(a: int, m: int, n: int, p: int) -> int:
    return multinom(a, m, n, p)


def pochhammer(a: int, m: int) -> int:
    """Rising factorial a (a+1) ... (a+m-1)."""
    if m < 0:
        raise ValueError("pochhammer needs m >= 0")
    out = 1
    for i in range(m):
        out *= a + i
    return out


def sigma(i: int, j: int) -> int:
    """Step function: 1 if i > j else 0."""
    return 1 if i > j else 0


@dataclass(frozen=True)
class Layout:
    """Shape of the expansion-variable vector for a branch with sides r, rt.

    Variables are ordered in six groups ``(x, y, z, xt, yt, zt)``.  The ``y``
    group only exists when the tilded side is non-empty (it couples to
    ``ut_1``) and ``yt`` only when the untilded side is non-empty.
    """

    r: int
    rt: int

    def __post_init__(self):
        if self.r < 0 or self.rt < 0:
            raise ValueError("r and rt must be non-negative")

    @property
    def sizes(self) -> tuple[int, int, int, int, int, int]:
        r, rt = self.r, self.rt
        return (
            r,
            r if rt >= 1 else 0,
            max(r - 1, 0),
            rt,
            rt if r >= 1 else 0,
            max(rt - 1, 0),
        )

    @property
    def offsets(self) -> tuple[int, int, int, int, int, int]:
        out, acc = [], 0
        for size in self.sizes:
            out.append(acc)
            acc += size
        return tuple(out)

    @property
    def nvars(self) -> int:
        return sum(self.sizes)

    @property
    def d(self) -> int:
        return self.r + self.rt + 1

    @property
    def is_corner(self) -> bool:
        return self.r == 0 or self.rt == 0

    def swapped(self) -> "Layout":
        return Layout(self.rt, self.r)

    # flat positions -------------------------------------------------------
    def x(self, i: int) -> int:
        return self._pos(0, i)

    def y(self, i: int) -> int:
        return self._pos(1, i)

    def z(self, i: int) -> int:
        return self._pos(2, i)

    def xt(self, i: int) -> int:
        return self._pos(3, i)

    def yt(self, i: int) -> int:
        return self._pos(4, i)

    def zt(self, i: int) -> int:
        return self._pos(5, i)

    def _pos(self, group: int, i: int) -> int:
        if not 0 <= i < self.sizes[group]:
            raise IndexError(f"index {i} outside group {_GROUPS[group]} of {self}")
        return self.offsets[group] + i

    def split(self, vec: Sequence) -> tuple[tuple, ...]:
        """Cut a flat vector into its six groups."""
        if len(vec) != self.nvars:
            raise ValueError(f"expected {self.nvars} entries, got {len(vec)}")
        out = []
        for off, size in zip(self.offsets, self.sizes):
            out.append(tuple(vec[off:off + size]))
        return tuple(out)

    def join(self, *groups: Sequence) -> tuple:
        if [len(g) for g in groups] != list(self.sizes):
            raise ValueError(f"group sizes {[len(g) for g in groups]} != {self.sizes}")
        return tuple(v for g in groups for v in g)

    def tilde_permutation(self) -> list[int]:
        """``perm[i]`` is the position in ``self.swapped()`` of variable ``i``."""
        other = self.swapped()
        perm = [0] * self.nvars
        for g in range(6):
            partner = (g + 3) % 6
            for i in range(self.sizes[g]):
                perm[self.offsets[g] + i] = other.offsets[partner] + i
        return perm

    def var_names(self) -> list[str]:
        names = []
        for g, size in zip(_GROUPS, self.sizes):
            names.extend(f"{g}{i}" for i in range(size))
        return names


_GROUPS = ("x", "y", "z", "xt", "yt", "zt")


@dataclass(frozen=True)
class MultiIndex:
    """Exponent vector ``q = (m, n, p, mt, nt, pt)`` over a layout.

    ``p_at(-1)`` and ``pt_at(-1)`` return the derived sums ``|m| + |nt|`` and
    ``|mt| + |n|``; ``p_at(r-1)`` and ``pt_at(rt-1)`` are zero.
    """

    layout: Layout
    exps: tuple[int, ...]

    def __post_init__(self):
        if len(self.exps) != self.layout.nvars:
            raise ValueError(f"multi-index of length {len(self.exps)} for {self.layout}")

    @classmethod
    def from_groups(cls, layout: Layout, m=(), n=(), p=(), mt=(), nt=(), pt=()) -> "MultiIndex":
        return cls(layout, layout.join(m, n, p, mt, nt, pt))

    @property
    def groups(self):
        return self.layout.split(self.exps)

    m = property(lambda self: self.groups[0])
    n = property(lambda self: self.groups[1])
    p = property(lambda self: self.groups[2])
    mt = property(lambda self: self.groups[3])
    nt = property(lambda self: self.groups[4])
    pt = property(lambda self: self.groups[5])

    def n_at(self, j: int) -> int:
        n = self.n
        return n[j] if j < len(n) else 0

    def nt_at(self, j: int) -> int:
        nt = self.nt
        return nt[j] if j < len(nt) else 0

    def p_at(self, j: int) -> int:
        if j == -1:
            return sum(self.m) + sum(self.nt)
        if j == self.layout.r - 1:
            return 0
        return self.p[j]

    def pt_at(self, j: int) -> int:
        if j == -1:
            return sum(self.mt) + sum(self.n)
        if j == self.layout.rt - 1:
            return 0
        return self.pt[j]

    @property
    def total_degree(self) -> int:
        return sum(self.exps)

    def __sub__(self, other: "MultiIndex") -> "MultiIndex":
        return MultiIndex(self.layout, tuple(a - b for a, b in zip(self.exps, other.exps)))


def iter_exponents(nvars: int, max_degree: int, min_degree: int = 0) -> Iterator[tuple[int, ...]]:
    """All non-negative exponent vectors with ``min_degree <= total <= max_degree``.

    Graded order, lexicographically descending inside each degree.
    """
    def rec(n: int, deg: int):
        if n == 1:
            yield (deg,)
            return
        for first in range(deg, -1, -1):
            for rest in rec(n - 1, deg - first):
                yield (first,) + rest

    if nvars == 0:
        if min_degree <= 0 <= max_degree:
            yield ()
        return
    for deg in range(max(min_degree, 0), max_degree + 1):
        yield from rec(nvars, deg)


def count_exponents(nvars: int, max_degree: int) -> int:
    """Number of vectors yielded by ``iter_exponents(nvars, max_degree)``."""
    from math import comb

    if max_degree < 0:
        return 0
    return comb(nvars + max_degree, nvars)
