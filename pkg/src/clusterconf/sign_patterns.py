"""Consistent sign patterns of u-variables.

A pattern assigns + or - to every u-variable.  It is consistent with
U + U' = 1 unless both monomials are negative.  Only the parity of each
exponent matters, so each side becomes a bitmask and a side is negative
exactly when an odd number of its bits are set in the pattern.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .cluster_engine import label_str
from .u_system import UEquation


@dataclass(frozen=True)
class SignPattern:
    labels: tuple
    negative: frozenset  # labels carrying a minus sign

    def sign(self, label) -> int:
        return -1 if label in self.negative else 1

    def __str__(self):
        return "".join("-" if g in self.negative else "+" for g in self.labels)

    @classmethod
    def from_string(cls, labels: Sequence, text: str) -> "SignPattern":
        if len(text) != len(labels) or set(text) - {"+", "-"}:
            raise ValueError("pattern must be a +/- string with one sign per label")
        return cls(tuple(labels), frozenset(g for g, s in zip(labels, text) if s == "-"))


def check_pattern(pattern: SignPattern, equations: Sequence[UEquation]) -> bool:
    for eq in equations:
        left = 1
        for g, k in eq.left:
            left *= pattern.sign(g) ** k
        right = 1
        for g, k in eq.right:
            right *= pattern.sign(g) ** k
        if left < 0 and right < 0:
            return False
    return True


def parity_constraints(equations: Sequence[UEquation], labels: Sequence) -> list[tuple[int, int]]:
    """Each equation as (left mask, right mask); sides with an even footprint never go negative."""
    idx = {g: i for i, g in enumerate(labels)}
    out = set()
    for eq in equations:
        masks = []
        for side in (eq.left, eq.right):
            m = 0
            for g, k in side:
                if k % 2:
                    m |= 1 << idx[g]
            masks.append(m)
        if masks[0] and masks[1]:
            out.add(tuple(sorted(masks)))
    return sorted(out)


def _odd(x: int) -> int:
    return x.bit_count() & 1


class _Search:
    def __init__(self, nvars: int, constraints: list[tuple[int, int]]):
        self.nvars = nvars
        self.constraints = constraints
        self.watch: list[list[int]] = [[] for _ in range(nvars)]
        for c, (a, b) in enumerate(constraints):
            for v in range(nvars):
                if (a | b) >> v & 1:
                    self.watch[v].append(c)

    def propagate(self, assigned: int, value: int, changed: list[int]):
        """Forced assignments after setting ``changed``; None on conflict."""
        queue = list(changed)
        while queue:
            v = queue.pop()
            for c in self.watch[v]:
                a, b = self.constraints[c]
                for x, y in ((a, b), (b, a)):
                    if x & ~assigned or not _odd(value & x):
                        continue
                    free = y & ~assigned
                    if not free:
                        if _odd(value & y):
                            return None
                    elif free & (free - 1) == 0:
                        u = free.bit_length() - 1
                        assigned |= free
                        if _odd(value & y):
                            value |= free
                        queue.append(u)
        return assigned, value

    def count(self, assigned: int = 0, value: int = 0) -> int:
        full = (1 << self.nvars) - 1
        if assigned == full:
            return 1
        v = (~assigned & full & -(~assigned & full)).bit_length() - 1
        total = 0
        for bit in (0, 1):
            st = self.propagate(assigned | 1 << v, value | bit << v, [v])
            if st is not None:
                total += self.count(*st)
        return total

    def patterns(self, assigned: int = 0, value: int = 0) -> Iterator[int]:
        full = (1 << self.nvars) - 1
        if assigned == full:
            yield value
            return
        v = (~assigned & full & -(~assigned & full)).bit_length() - 1
        for bit in (0, 1):
            st = self.propagate(assigned | 1 << v, value | bit << v, [v])
            if st is not None:
                yield from self.patterns(*st)

    def frontier(self, depth: int) -> list[tuple[int, int]]:
        """Partial states after branching on the first ``depth`` free variables."""
        states = [(0, 0)]
        full = (1 << self.nvars) - 1
        for _ in range(depth):
            nxt = []
            for assigned, value in states:
                if assigned == full:
                    nxt.append((assigned, value))
                    continue
                v = (~assigned & full & -(~assigned & full)).bit_length() - 1
                for bit in (0, 1):
                    st = self.propagate(assigned | 1 << v, value | bit << v, [v])
                    if st is not None:
                        nxt.append(st)
            states = nxt
        return states


def _count_subtree(args) -> int:
    nvars, constraints, assigned, value = args
    return _Search(nvars, constraints).count(assigned, value)


def count_sign_patterns(equations: Sequence[UEquation], labels: Sequence, jobs: int = 1) -> int:
    constraints = parity_constraints(equations, labels)
    search = _Search(len(labels), constraints)
    if jobs <= 1:
        return search.count()
    states = search.frontier(min(8, len(labels)))
    tasks = [(len(labels), constraints, a, v) for a, v in states]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return sum(ex.map(_count_subtree, tasks, chunksize=4))


def enumerate_sign_patterns(equations: Sequence[UEquation], labels: Sequence) -> Iterator[SignPattern]:
    """Consistent patterns in lexicographic order of the canonical label order ('+' < '-')."""
    labels = tuple(labels)
    search = _Search(len(labels), parity_constraints(equations, labels))
    found = [SignPattern(labels, frozenset(g for i, g in enumerate(labels) if value >> i & 1)) for value in search.patterns()]
    yield from sorted(found, key=str)


def count_by_scan(equations: Sequence[UEquation], labels: Sequence, max_vars: int = 24) -> int:
    """Direct check of all 2^|labels| patterns (vectorised); for cross-checks only."""
    n = len(labels)
    if n > max_vars:
        raise ValueError(f"{n} variables is too many for a full scan")
    constraints = parity_constraints(equations, labels)
    pats = np.arange(1 << n, dtype=np.int64)
    bits = [(pats >> i) & 1 for i in range(n)]
    ok = np.ones(1 << n, dtype=bool)
    for a, b in constraints:
        pa = np.zeros(1 << n, dtype=np.int64)
        pb = np.zeros(1 << n, dtype=np.int64)
        for i in range(n):
            if a >> i & 1:
                pa ^= bits[i]
            if b >> i & 1:
                pb ^= bits[i]
        ok &= ~((pa == 1) & (pb == 1))
    return int(ok.sum())


def describe(labels: Sequence) -> str:
    return " ".join(label_str(g) for g in labels)
