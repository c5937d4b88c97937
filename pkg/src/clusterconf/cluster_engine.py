"""Seeds, mutation, the source-mutation (AR) walk and the exchange graph.

Labels of cluster variables are pairs ``(t, j)``: ``(0, j)`` is the initial
variable ``x_j`` and ``(t, j)`` is obtained from ``(t-1, j)`` by the t-th
mutation at vertex j during the walk that always mutates at a source.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .dynkin import DynkinType, Orientation, default_orientation, exchange_matrix, skew_symmetrizer
from .symbolic import LaurentPolynomial

Label = tuple  # (t, j)


def label_str(label: Label) -> str:
    return f"({label[0]},{label[1]})"


def parse_label(text: str) -> Label:
    t, j = text.strip().strip("()").split(",")
    return (int(t), int(j))


def sgn(x: int) -> int:
    return (x > 0) - (x < 0)


def matrix_mutation(m: Sequence[Sequence[int]], k: int, n: int | None = None) -> list[list[int]]:
    """Mutate an extended (rows >= columns) matrix in direction k (0-based).

    Only the first ``n`` columns (default: all) are mutable directions; frozen
    rows are carried along by the same rule.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    out = [list(r) for r in m]
    for i in range(rows):
        for j in range(cols):
            if i == k or j == k:
                out[i][j] = -m[i][j]
            else:
                out[i][j] = m[i][j] + sgn(m[i][k]) * max(m[i][k] * m[k][j], 0)
    return out


@dataclass
class ExchangeMatrix:
    """Square block ``b`` plus frozen ``coefficient_rows`` (m x n)."""

    b: list
    coefficient_rows: list = field(default_factory=list)
    dtype: DynkinType | None = None
    orientation: Orientation | None = None

    @property
    def n(self) -> int:
        return len(self.b)

    @property
    def m(self) -> int:
        return len(self.coefficient_rows)

    def full(self) -> list[list[int]]:
        return [list(r) for r in self.b] + [list(r) for r in self.coefficient_rows]

    def mutate(self, k: int) -> "ExchangeMatrix":
        full = matrix_mutation(self.full(), k)
        return ExchangeMatrix(full[: self.n], full[self.n:], self.dtype, self.orientation)

    def is_skew_symmetrizable(self) -> bool:
        return skew_symmetrizer(self.b) is not None


@dataclass
class Seed:
    matrix: ExchangeMatrix
    cluster: list  # LaurentPolynomial per position
    labels: list  # label per position (None when unknown)
    frozen_names: tuple = ()

    @property
    def n(self) -> int:
        return self.matrix.n


def exchange_monomials(matrix: ExchangeMatrix, k: int):
    """The two monomials of the exchange relation in direction k.

    Returns ((mutable_plus, frozen_plus), (mutable_minus, frozen_minus)) where
    mutable_* are exponent lists over positions and frozen_* over frozen rows.
    """
    col = [row[k] for row in matrix.b]
    fcol = [row[k] for row in matrix.coefficient_rows]
    plus = ([max(c, 0) for c in col], [max(c, 0) for c in fcol])
    minus = ([max(-c, 0) for c in col], [max(-c, 0) for c in fcol])
    return plus, minus


def seed_mutation(seed: Seed, k: int, new_label=None) -> Seed:
    variables = seed.cluster[0].variables
    n = seed.n
    nf = len(seed.frozen_names)
    (mp, fp), (mm, fm) = exchange_monomials(seed.matrix, k)
    zeros_x = [0] * (len(variables) - nf)

    def side(mut, fro):
        # coefficient rows without named frozen variables only ride along in the matrix
        term = LaurentPolynomial.monomial(variables, zeros_x + (list(fro) if nf else []))
        for i in range(n):
            if mut[i]:
                term = term * seed.cluster[i] ** mut[i]
        return term

    numerator = side(mp, fp) + side(mm, fm)
    new_var = numerator.divide_exact(seed.cluster[k])
    cluster = list(seed.cluster)
    cluster[k] = new_var
    labels = list(seed.labels)
    labels[k] = new_label
    return Seed(seed.matrix.mutate(k), cluster, labels, seed.frozen_names)


def initial_seed(matrix: ExchangeMatrix, frozen_names: Sequence[str] | None = None) -> Seed:
    n, m = matrix.n, matrix.m
    if frozen_names is None:
        frozen_names = tuple(f"y{i + 1}" for i in range(m)) if m == n else tuple(f"z{i + 1}" for i in range(m))
    variables = tuple(f"x{i + 1}" for i in range(n)) + tuple(frozen_names)
    cluster = [LaurentPolynomial.gen(variables, f"x{i + 1}") for i in range(n)]
    return Seed(matrix, cluster, [(0, i + 1) for i in range(n)], tuple(frozen_names))


def principal_matrix(b: Sequence[Sequence[int]], dtype=None, orientation=None) -> ExchangeMatrix:
    n = len(b)
    ident = [[int(i == j) for j in range(n)] for i in range(n)]
    return ExchangeMatrix([list(r) for r in b], ident, dtype, orientation)


@dataclass
class ClusterVariableRecord:
    label: Label
    expansion: LaurentPolynomial  # in x's and the frozen variables
    f_poly: LaurentPolynomial  # frozen variables only (x -> 1)
    g_vector: tuple | None  # defined for principal coefficients


@dataclass
class PrimitiveExchange:
    """The walk mutation producing ``label`` from ``tau_label``.

    ``neighbors`` lists (label, exponent) of the mutable factors; both frozen
    exponent vectors are given over the frozen rows.
    """

    label: Label
    tau_label: Label
    neighbors: list
    frozen_with_mutable: tuple
    frozen_pure: tuple


@dataclass
class ARWalkResult:
    dtype: DynkinType | None
    orientation: Orientation | None
    b: list
    pi: list
    r: dict
    records: dict
    tau: dict
    clusters: list
    primitive: dict
    frozen_names: tuple
    cluster_matrices: list  # square block at each visited cluster (same order as clusters)
    cluster_positions: list  # labels by position for each visited cluster

    @property
    def n(self) -> int:
        return len(self.b)

    @property
    def pi_plus(self) -> list:
        return [g for g in self.pi if g[0] > 0]

    def index(self) -> dict:
        return {g: i for i, g in enumerate(self.pi)}

    def f_polys(self) -> dict:
        return {g: rec.f_poly for g, rec in self.records.items()}

    def g_vectors(self) -> dict:
        return {g: rec.g_vector for g, rec in self.records.items()}

    def tau_order(self) -> int:
        order = 1
        for g in self.pi:
            k, h = 1, self.tau[g]
            while h != g:
                h, k = self.tau[h], k + 1
            from math import lcm

            order = lcm(order, k)
        return order

    def y_variables(self) -> tuple:
        return self.frozen_names


def g_vector(rec: ClusterVariableRecord, b: Sequence[Sequence[int]]) -> tuple:
    """Degree of a principal-coefficient expansion, checking homogeneity."""
    n = len(b)
    deg = None
    for e in rec.expansion.terms:
        d = list(e[:n])
        for j in range(n):
            if e[n + j]:
                for i in range(n):
                    d[i] -= b[i][j] * e[n + j]
        d = tuple(d)
        if deg is None:
            deg = d
        elif d != deg:
            raise ValueError(f"expansion of {rec.label} is not homogeneous")
    return deg


def _source_order(b: list[list[int]]) -> list[int]:
    """A sweep order in which every vertex is a source when its turn comes."""
    n = len(b)
    cur = [list(r) for r in b]
    done: list[int] = []
    todo = set(range(n))
    while todo:
        for k in sorted(todo):
            if all(cur[k][j] >= 0 for j in range(n)):
                break
        else:
            raise ValueError("exchange matrix is not acyclic")
        done.append(k)
        todo.remove(k)
        cur = matrix_mutation(cur, k)
    return done


def ar_walk_matrix(
    matrix: ExchangeMatrix,
    frozen_names: Sequence[str] | None = None,
    principal: bool = True,
    max_sweeps: int | None = None,
) -> ARWalkResult:
    """Source-mutation walk from an acyclic seed until every variable recurs."""
    seed = initial_seed(matrix, frozen_names)
    n = matrix.n
    b0 = [list(r) for r in matrix.b]
    order = _source_order(b0)
    nf = len(seed.frozen_names)
    keep = seed.frozen_names

    def record(label, poly):
        f = poly.specialize(keep) if nf else LaurentPolynomial.constant((), poly.evaluate([1] * poly.nvars))
        rec = ClusterVariableRecord(label, poly, f, None)
        if principal:
            rec.g_vector = g_vector(rec, b0)
        return rec

    records = {}
    seen = {}
    for j in range(n):
        lab = (0, j + 1)
        records[lab] = record(lab, seed.cluster[j])
        seen[seed.cluster[j]] = lab
    clusters = [frozenset(seed.labels)]
    cluster_matrices = [[list(r) for r in seed.matrix.b]]
    cluster_positions = [list(seed.labels)]
    primitive = {}
    tau = {}
    r = {}
    count = [0] * n
    sweeps = 0
    limit = max_sweeps if max_sweeps is not None else 4 * n + 8
    while len(r) < n:
        sweeps += 1
        if sweeps > limit:
            raise RuntimeError("walk did not close up; not of finite type?")
        for k in order:
            col = [row[k] for row in seed.matrix.b]
            if any(c > 0 for c in col):
                raise RuntimeError("sweep order lost the source property")
            old = seed.labels[k]
            neighbors = [(seed.labels[i], -col[i]) for i in range(n) if col[i] < 0]
            (_, fp), (_, fm) = exchange_monomials(seed.matrix, k)
            new = seed_mutation(seed, k)
            poly = new.cluster[k]
            j = k + 1
            if poly in seen:
                lab = seen[poly]
                if j not in r:
                    r[j] = count[k]
                    if lab[0] != 0:
                        raise RuntimeError(f"vertex {j} recurred at a non-initial variable {lab}")
            else:
                if j in r:
                    raise RuntimeError(f"vertex {j} produced a new variable after recurring")
                count[k] += 1
                lab = (count[k], j)
                records[lab] = record(lab, poly)
                seen[poly] = lab
            if lab not in primitive:
                primitive[lab] = PrimitiveExchange(lab, old, neighbors, tuple(fm), tuple(fp))
                tau[lab] = old
            new.labels[k] = lab
            seed = new
            clusters.append(frozenset(seed.labels))
            cluster_matrices.append([list(row) for row in seed.matrix.b])
            cluster_positions.append(list(seed.labels))
    pi = sorted(records)
    if set(tau) != set(pi):
        raise RuntimeError("tau is not defined on all of Pi")
    uniq, mats, poss = [], [], []
    seen_c = set()
    for c, mtx, pos in zip(clusters, cluster_matrices, cluster_positions):
        if c not in seen_c:
            seen_c.add(c)
            uniq.append(c)
            mats.append(mtx)
            poss.append(pos)
    return ARWalkResult(
        matrix.dtype, matrix.orientation, b0, pi, r, records, tau, uniq, primitive,
        tuple(seed.frozen_names), mats, poss,
    )


@lru_cache(maxsize=None)
def _ar_walk_cached(dtype: DynkinType, orientation: Orientation) -> ARWalkResult:
    b = exchange_matrix(dtype, orientation)
    return ar_walk_matrix(principal_matrix(b, dtype, orientation))


def ar_walk(dtype: DynkinType, orientation: Orientation | None = None) -> ARWalkResult:
    """Principal-coefficient walk for an oriented Dynkin diagram (cached)."""
    if orientation is None:
        orientation = default_orientation(dtype)
    return _ar_walk_cached(dtype, orientation)


def dual_data(dtype: DynkinType, orientation: Orientation | None = None) -> ARWalkResult:
    """Walk for the dual diagram (transposed Cartan matrix, same orientation)."""
    if orientation is None:
        orientation = default_orientation(dtype)
    return ar_walk(dtype.dual_type(), orientation)


@dataclass
class ExchangeRelation:
    pair: frozenset
    left: Label
    right: Label
    plus_mutable: dict
    plus_frozen: tuple
    minus_mutable: dict
    minus_frozen: tuple

    def sides(self):
        return frozenset(
            [
                (tuple(sorted(self.plus_mutable.items())), self.plus_frozen),
                (tuple(sorted(self.minus_mutable.items())), self.minus_frozen),
            ]
        )


@dataclass
class ExchangeGraph:
    clusters: list  # sorted tuples of labels
    seeds: dict  # cluster tuple -> (labels by position, full matrix)
    relations: dict  # frozenset pair -> ExchangeRelation
    edges: int


def exchange_graph(walk: ARWalkResult, coefficient_rows: Sequence[Sequence[int]] = ()) -> ExchangeGraph:
    """Breadth-first enumeration of all seeds reachable from the initial one.

    Cluster variables are identified with walk labels by comparing their
    coefficient-free expansions.  ``coefficient_rows`` (m x n) are carried by
    matrix mutation only and determine the frozen parts of the relations.
    """
    n = walk.n
    xs = tuple(f"x{i + 1}" for i in range(n))
    lookup = {}
    for g, rec in walk.records.items():
        lookup[rec.expansion.specialize(xs)] = g
    if len(lookup) != len(walk.pi):
        raise RuntimeError("coefficient-free expansions are not distinct")
    start = ExchangeMatrix([list(r) for r in walk.b], [list(r) for r in coefficient_rows])
    cluster = [LaurentPolynomial.gen(xs, x) for x in xs]
    seed = Seed(start, cluster, [(0, i + 1) for i in range(n)], ())

    def canon(s: Seed):
        return tuple(sorted(s.labels))

    seeds = {canon(seed): seed}
    queue = deque([seed])
    relations: dict = {}
    edges = 0
    while queue:
        s = queue.popleft()
        for k in range(n):
            t = seed_mutation(s, k)
            lab = lookup.get(t.cluster[k])
            if lab is None:
                raise RuntimeError("mutation produced a variable outside the walk")
            t.labels[k] = lab
            (mp, fp), (mm, fm) = exchange_monomials(s.matrix, k)
            pair = frozenset([s.labels[k], lab])
            rel = ExchangeRelation(
                pair, s.labels[k], lab,
                {s.labels[i]: mp[i] for i in range(n) if mp[i]}, tuple(fp),
                {s.labels[i]: mm[i] for i in range(n) if mm[i]}, tuple(fm),
            )
            if pair in relations:
                if relations[pair].sides() != rel.sides():
                    raise RuntimeError(f"exchange relation for {sorted(pair)} depends on the seed")
            else:
                relations[pair] = rel
            key = canon(t)
            if key not in seeds:
                seeds[key] = t
                queue.append(t)
                edges += 1
            else:
                edges += 1
    clusters = sorted(seeds)
    return ExchangeGraph(clusters, seeds, relations, edges // 2)


def determinant(rows: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant (fraction-free Bareiss)."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]
