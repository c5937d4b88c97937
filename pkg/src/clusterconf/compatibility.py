"""Compatibility degrees and boundary strata.

The degree (omega||gamma) is read off from denominators: expand x_gamma in a
cluster containing x_omega and take the exponent of x_omega in the
denominator.  Re-rooting simply runs another source-mutation walk from that
cluster, identifying new variables through the exchange graph.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .cluster_engine import (
    ARWalkResult,
    ExchangeMatrix,
    Seed,
    _source_order,
    exchange_graph,
    label_str,
    seed_mutation,
)
from .dynkin import DynkinType
from .symbolic import LaurentPolynomial


@dataclass
class CompatibilityTable:
    pi: list
    deg: dict  # (omega, gamma) -> int

    def __call__(self, omega, gamma) -> int:
        return self.deg[(omega, gamma)]

    def compatible(self, a, b) -> bool:
        return self.deg[(a, b)] == 0

    def compatible_set(self, gamma) -> list:
        return [w for w in self.pi if w != gamma and self.deg[(w, gamma)] == 0]

    def exchangeable_pairs(self) -> set:
        out = set()
        for i, a in enumerate(self.pi):
            for b in self.pi[i + 1:]:
                if self.deg[(a, b)] == 1 and self.deg[(b, a)] == 1:
                    out.add(frozenset([a, b]))
        return out

    def rows(self) -> list[list[int]]:
        """Matrix with entry [i][j] = (pi_i || pi_j)."""
        return [[self.deg[(w, g)] for g in self.pi] for w in self.pi]

    def to_csv(self) -> str:
        head = "omega\\gamma," + ",".join(label_str(g) for g in self.pi)
        lines = [head]
        for w in self.pi:
            lines.append(label_str(w) + "," + ",".join(str(self.deg[(w, g)]) for g in self.pi))
        return "\n".join(lines) + "\n"


def _facet_completions(walk: ARWalkResult) -> dict:
    graph = exchange_graph(walk)
    facets: dict = {}
    for c in graph.clusters:
        cs = frozenset(c)
        for g in c:
            facets.setdefault(cs - {g}, set()).add(g)
    return facets


def rerooted_expansions(walk: ARWalkResult, cluster_index: int, facets: dict) -> dict:
    """Coefficient-free expansions of every variable in the cluster at ``cluster_index``."""
    labels = list(walk.cluster_positions[cluster_index])
    b = [list(r) for r in walk.cluster_matrices[cluster_index]]
    n = len(b)
    xs = tuple(f"x{i + 1}" for i in range(n))
    cluster = [LaurentPolynomial.gen(xs, x) for x in xs]
    seed = Seed(ExchangeMatrix(b, []), cluster, labels, ())
    found = {lab: cluster[i] for i, lab in enumerate(labels)}
    order = _source_order(b)
    target = len(walk.pi)
    sweeps = 0
    while len(found) < target:
        sweeps += 1
        if sweeps > 4 * n + 8:
            raise RuntimeError("re-rooted walk did not reach every variable")
        for k in order:
            old = seed.labels[k]
            rest = frozenset(seed.labels) - {old}
            options = facets[rest] - {old}
            if len(options) != 1:
                raise RuntimeError("facet of the cluster complex is not shared by exactly two clusters")
            (new_label,) = options
            seed = seed_mutation(seed, k, new_label)
            found.setdefault(new_label, seed.cluster[k])
    return found


_TABLE_CACHE: dict = {}


def compatibility_table(walk: ARWalkResult) -> CompatibilityTable:
    key = id(walk)
    hit = _TABLE_CACHE.get(key)
    if hit is not None and hit[0] is walk:
        return hit[1]
    facets = _facet_completions(walk)
    deg = {}
    done: set = set()
    for idx, c in enumerate(walk.clusters):
        if c <= done:
            continue
        exps = rerooted_expansions(walk, idx, facets)
        positions = walk.cluster_positions[idx]
        for pos, omega in enumerate(positions):
            if omega in done:
                continue
            for gamma in walk.pi:
                low = min(e[pos] for e in exps[gamma].terms)
                deg[(omega, gamma)] = max(0, -low)
            done.add(omega)
    if done != set(walk.pi):
        raise RuntimeError("walk clusters do not cover every label")
    table = CompatibilityTable(list(walk.pi), deg)
    _TABLE_CACHE[key] = (walk, table)
    return table


def compatibility_degree(omega, gamma, walk: ARWalkResult) -> int:
    return compatibility_table(walk)(omega, gamma)


# -- strata ---------------------------------------------------------------


def classify_component(cartan: Sequence[Sequence[int]]) -> DynkinType:
    """Name the finite type of a connected Cartan matrix (B2 and C2 both give B2)."""
    n = len(cartan)
    if n == 1:
        return DynkinType("A", 1)
    mult = {}
    for i in range(n):
        for j in range(n):
            if i != j and cartan[i][j]:
                mult[(i, j)] = -cartan[i][j]
    degree = [sum(1 for j in range(n) if j != i and cartan[i][j]) for i in range(n)]
    if any(v == 3 for v in mult.values()):
        return DynkinType("G", 2)
    doubles = [(i, j) for (i, j), v in mult.items() if v == 2]
    if doubles:
        (i, j), = doubles  # the row holding the 2
        if n == 2:
            return DynkinType("B", 2)
        if n == 4 and degree[i] == 2 and degree[j] == 2:
            return DynkinType("F", 4)
        return DynkinType("B", n) if degree[i] == 1 else DynkinType("C", n)
    branch = [i for i in range(n) if degree[i] == 3]
    if not branch:
        return DynkinType("A", n)
    (c,) = branch
    arms = []
    for start in range(n):
        if start == c or not cartan[c][start]:
            continue
        length, prev, cur = 1, c, start
        while True:
            nxt = [k for k in range(n) if k not in (prev, cur) and cartan[cur][k]]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    arms.sort()
    if arms[0] == 1 and arms[1] == 1:
        return DynkinType("D", n)
    if arms[:2] == [1, 2] and arms[2] in (2, 3, 4):
        return DynkinType("E", n)
    raise ValueError("not a finite type")


def diagram_components(dtype: DynkinType, removed: int) -> list[DynkinType]:
    a = dtype.cartan
    keep = [i for i in range(1, dtype.rank + 1) if i != removed]
    seen: set = set()
    comps = []
    for v in keep:
        if v in seen:
            continue
        comp, stack = [], [v]
        seen.add(v)
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in keep:
                if w not in seen and a[u - 1][w - 1]:
                    seen.add(w)
                    stack.append(w)
        comp.sort()
        comps.append(classify_component([[a[i - 1][j - 1] for j in comp] for i in comp]))
    return sorted(comps, key=lambda t: (t.series, t.rank))


@dataclass
class StratumDescriptor:
    gamma: tuple
    compatible_set: list
    factors: list


def stratum(gamma, walk: ARWalkResult, table: CompatibilityTable) -> StratumDescriptor:
    """The boundary stratum u_gamma = 0 and its product decomposition."""
    factors = diagram_components(walk.dtype, gamma[1])
    return StratumDescriptor(gamma, table.compatible_set(gamma), factors)
