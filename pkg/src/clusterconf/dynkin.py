"""Finite-type Dynkin data: Cartan matrices, orientations, exchange matrices.

Cartan convention: B_ij = -a_ij when i -> j and B_ij = a_ij when j -> i, so the
row of a short-orbit vertex carries the multiplicity.  Concretely
B_n has a_{n,n-1} = -2, C_n has a_{n-1,n} = -2, G_2 has a_21 = -3 and
F_4 has a_23 = -2.  These are exactly the matrices obtained by folding
D_{n+1}, A_{2n-1}, D_4 and E_6 (see :mod:`clusterconf.folding`).

Vertex labels are 1-based everywhere.  D_n: chain 1..n-2 with n-1 and n
attached to n-2.  E_n: chain 1..n-1 with n attached to 3.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property

SERIES = "ABCDEFG"


@dataclass(frozen=True)
class DynkinType:
    series: str
    rank: int
    dual: bool = False

    def __post_init__(self):
        s, n = self.series, self.rank
        ok = (
            (s == "A" and n >= 1)
            or (s in "BC" and n >= 2)
            or (s == "D" and n >= 4)
            or (s == "E" and n in (6, 7, 8))
            or (s == "F" and n == 4)
            or (s == "G" and n == 2)
        )
        if not ok:
            raise ValueError(f"{s}{n} is not a finite Dynkin type")

    def __str__(self):
        return f"{self.series}{self.rank}" + ("^v" if self.dual else "")

    @property
    def name(self) -> str:
        return str(self)

    @property
    def n(self) -> int:
        return self.rank

    @property
    def simply_laced(self) -> bool:
        return self.series in "ADE"

    @property
    def coxeter_number(self) -> int:
        s, n = self.series, self.rank
        if s == "A":
            return n + 1
        if s in "BC":
            return 2 * n
        if s == "D":
            return 2 * n - 2
        return {"E6": 12, "E7": 18, "E8": 30, "F4": 12, "G2": 6}[f"{s}{n}"]

    h = coxeter_number

    def edges(self) -> list[tuple[int, int]]:
        """Undirected tree edges (i, j) with i < j."""
        s, n = self.series, self.rank
        if s in "ABCFG":
            return [(i, i + 1) for i in range(1, n)]
        if s == "D":
            return [(i, i + 1) for i in range(1, n - 1)] + [(n - 2, n)]
        # E: chain 1..n-1, n attached to 3
        return [(i, i + 1) for i in range(1, n - 1)] + [(3, n)]

    def star(self, i: int) -> int:
        """The involution i -> i* (w0 acting on simple roots, up to sign)."""
        s, n = self.series, self.rank
        if s == "A":
            return n + 1 - i
        if s == "D" and n % 2 == 1 and i >= n - 1:
            return 2 * n - 1 - i
        if s == "E" and n == 6 and i <= 5:
            return 6 - i
        return i

    @cached_property
    def cartan(self) -> tuple[tuple[int, ...], ...]:
        n = self.rank
        a = [[0] * n for _ in range(n)]
        for i in range(n):
            a[i][i] = 2
        for i, j in self.edges():
            a[i - 1][j - 1] = a[j - 1][i - 1] = -1
        s = self.series
        if s == "B":
            a[n - 1][n - 2] = -2
        elif s == "C":
            a[n - 2][n - 1] = -2
        elif s == "F":
            a[1][2] = -2
        elif s == "G":
            a[1][0] = -3
        if self.dual:
            a = [list(r) for r in zip(*a)]
        return tuple(tuple(r) for r in a)

    def dual_type(self) -> "DynkinType":
        return DynkinType(self.series, self.rank, not self.dual)

    @property
    def num_cluster_variables(self) -> int:
        return self.rank * (self.coxeter_number + 2) // 2


def parse_type(text: str) -> DynkinType:
    m = re.fullmatch(r"\s*([A-Ga-g])\s*_?(\d+)\s*", text)
    if not m:
        raise ValueError(f"cannot parse Dynkin type {text!r}")
    return DynkinType(m.group(1).upper(), int(m.group(2)))


def cartan_matrix(dtype: DynkinType) -> list[list[int]]:
    return [list(r) for r in dtype.cartan]


@dataclass(frozen=True)
class Orientation:
    """Directed tree edges; (i, j) means i -> j."""

    arrows: frozenset = field(default_factory=frozenset)

    @classmethod
    def from_pairs(cls, pairs) -> "Orientation":
        return cls(frozenset((int(i), int(j)) for i, j in pairs))

    def __str__(self):
        return ",".join(f"{i}>{j}" for i, j in sorted(self.arrows))

    def has_arrow(self, i: int, j: int) -> bool:
        return (i, j) in self.arrows


def default_orientation(dtype: DynkinType) -> Orientation:
    """Pinned default orientations.

    Type A alternates (odd vertices are sources), which gives 1->2<-3 for A_3.
    Every other type points each edge toward the higher index, which gives
    1->2->3 for B_3.
    """
    arrows = []
    for i, j in dtype.edges():
        if dtype.series == "A" and i % 2 == 0:
            arrows.append((j, i))
        else:
            arrows.append((i, j))
    return Orientation.from_pairs(arrows)


def parse_orientation(text: str, dtype: DynkinType) -> Orientation:
    pairs = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        m = re.fullmatch(r"(\d+)\s*>\s*(\d+)", chunk)
        if not m:
            raise ValueError(f"bad orientation arrow {chunk!r}; expected i>j")
        pairs.append((int(m.group(1)), int(m.group(2))))
    o = Orientation.from_pairs(pairs)
    check_orientation(o, dtype)
    return o


def check_orientation(o: Orientation, dtype: DynkinType) -> None:
    undirected = sorted(tuple(sorted(a)) for a in o.arrows)
    if undirected != sorted(dtype.edges()) or len(o.arrows) != len(dtype.edges()):
        raise ValueError(f"orientation {o} does not orient each edge of {dtype} exactly once")


def exchange_matrix(dtype: DynkinType, orientation: Orientation | None = None) -> list[list[int]]:
    """Square exchange matrix B of the oriented diagram."""
    if orientation is None:
        orientation = default_orientation(dtype)
    check_orientation(orientation, dtype)
    a = dtype.cartan
    n = dtype.rank
    b = [[0] * n for _ in range(n)]
    for i, j in orientation.arrows:
        b[i - 1][j - 1] = -a[i - 1][j - 1]
        b[j - 1][i - 1] = a[j - 1][i - 1]
    return b


def skew_symmetrizer(b: list[list[int]]) -> list[int] | None:
    """Positive integer diagonal d with d_i b_ij = -d_j b_ji, if one exists."""
    from fractions import Fraction
    from math import lcm

    n = len(b)
    d: list[Fraction | None] = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if b[i][j] == 0 and b[j][i] == 0:
                    continue
                if b[i][j] == 0 or b[j][i] == 0 or (b[i][j] > 0) == (b[j][i] > 0):
                    return None
                want = d[i] * b[i][j] / -b[j][i]
                if d[j] is None:
                    d[j] = want
                    stack.append(j)
                elif d[j] != want:
                    return None
    m = lcm(*(x.denominator for x in d))
    return [int(x * m) for x in d]
