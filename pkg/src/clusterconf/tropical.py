"""Tropical evaluation, the delta pairing, mesh relations and fan checks.

Everything is a finite min-attainment computation over exponent sets of
F-polynomials evaluated at integer points; no convex hulls are built.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .cluster_engine import ARWalkResult, ar_walk, determinant, dual_data, exchange_graph, label_str
from .dynkin import DynkinType, Orientation, default_orientation
from .symbolic import AlphabetMonomial, LaurentPolynomial


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


@dataclass
class NewtonData:
    exponents: dict  # label -> sorted list of exponent tuples

    @classmethod
    def from_polys(cls, polys: Mapping) -> "NewtonData":
        data = {g: sorted(p.terms) for g, p in polys.items()}
        for g, es in data.items():
            if not es:
                raise ValueError(f"empty exponent set for {label_str(g)}")
        return cls(data)

    @classmethod
    def from_walk(cls, walk: ARWalkResult) -> "NewtonData":
        return cls.from_polys(walk.f_polys())

    def trop(self, label, g: Sequence[int]) -> int:
        return min(_dot(e, g) for e in self.exponents[label])

    def minimizers(self, label, g: Sequence[int]) -> set:
        vals = {e: _dot(e, g) for e in self.exponents[label]}
        low = min(vals.values())
        return {e for e, v in vals.items() if v == low}

    def minkowski_summands(self) -> list:
        return sorted(self.exponents)


def trop_eval(m: AlphabetMonomial, g: Sequence[int], newton: NewtonData) -> int:
    """Trop of y^a prod F^k: a.g + sum k * min over exponents of F of e.g."""
    total = _dot(m.y_exponents, g)
    for lab, k in m.factor_exponents.items():
        total += k * newton.trop(lab, g)
    return total


def trop_poly(p: LaurentPolynomial, g: Sequence[int]) -> int:
    return min(_dot(e, g) for e in p.terms)


# -- delta pairing ------------------------------------------------------------------


@dataclass
class CheckReport:
    name: str
    ok: bool
    failures: list = field(default_factory=list)
    detail: dict = field(default_factory=dict)

    def line(self) -> str:
        head = f"{self.name}: {'pass' if self.ok else 'FAIL'}"
        if self.failures:
            head += f" ({len(self.failures)} failures, first {self.failures[0]})"
        return head


def delta_pairing_matrix(walk: ARWalkResult, dual: ARWalkResult) -> list[list[int]]:
    """Rows gamma, columns omega: Trop(f_gamma) at -g^vee_omega."""
    from .u_system import f_gamma

    newton = NewtonData.from_walk(walk)
    rows = []
    for gamma in walk.pi:
        f = f_gamma(gamma, walk)
        rows.append([trop_eval(f, [-c for c in dual.records[w].g_vector], newton) for w in walk.pi])
    return rows


def delta_pairing_check(dtype: DynkinType, orientation: Orientation | None = None) -> CheckReport:
    if orientation is None:
        orientation = default_orientation(dtype)
    walk = ar_walk(dtype, orientation)
    dual = dual_data(dtype, orientation)
    mat = delta_pairing_matrix(walk, dual)
    bad = []
    for a, gamma in enumerate(walk.pi):
        for b, omega in enumerate(walk.pi):
            want = int(omega == walk.tau[gamma])
            if mat[a][b] != want:
                bad.append((label_str(gamma), label_str(omega), mat[a][b]))
    return CheckReport("delta pairing", not bad, bad, {"matrix": mat})


# -- mesh relations ---------------------------------------------------------------------


def mesh_residuals(walk: ARWalkResult, p: Mapping, c: Mapping | None = None) -> dict:
    """Left minus right of the c-deformed mesh relation at every (t,j) in pi+.

    ``p`` maps labels to numbers; ``c`` maps labels of pi+ to numbers (default 0).
    """
    from .u_system import walk_label

    c = c or {}
    b = walk.b
    n = walk.n
    out = {}
    for t, j in walk.pi_plus:
        rhs = c.get((t, j), 0)
        for i in range(1, n + 1):
            bij = b[i - 1][j - 1]
            if bij > 0:
                rhs += bij * p[walk_label(walk, t, i)]
            elif bij < 0:
                rhs += -bij * p[walk_label(walk, t - 1, i)]
        out[(t, j)] = p[walk_label(walk, t - 1, j)] + p[(t, j)] - rhs
    return out


def mesh_check(walk: ARWalkResult, p: Mapping, c: Mapping | None = None) -> CheckReport:
    res = mesh_residuals(walk, p, c)
    bad = [(label_str(g), v) for g, v in res.items() if v]
    return CheckReport("mesh", not bad, bad)


def g_vector_mesh_check(walk: ARWalkResult) -> CheckReport:
    """Each coordinate slice of the g-vectors solves the 0-mesh relations."""
    bad = []
    for i in range(walk.n):
        p = {g: walk.records[g].g_vector[i] for g in walk.pi}
        bad += [(i + 1,) + f for f in mesh_check(walk, p).failures]
    return CheckReport("g-vector 0-mesh", not bad, bad)


def universal_weight_mesh_check(walk: ARWalkResult) -> CheckReport:
    """Monomial exponents of F^univ_gamma solve the dual mesh relations with c = e_gamma."""
    from .u_system import universal_walk

    dual = dual_data(walk.dtype, walk.orientation)
    uw = universal_walk(walk)
    bad = []
    for gamma in walk.pi_plus:
        for e in uw.records[gamma].f_poly.terms:
            p = dict(zip(walk.pi, e))
            for w, v in mesh_residuals(dual, p, {gamma: 1}).items():
                if v:
                    bad.append((label_str(gamma), label_str(w), v))
    return CheckReport("universal weight mesh", not bad, bad)


# -- the fan ------------------------------------------------------------------------------


@dataclass
class ClusterFan:
    rays: dict  # label -> g^vee vector
    cones: list  # sorted label tuples (maximal cones)

    @classmethod
    def from_dual(cls, dtype: DynkinType, orientation: Orientation | None = None) -> "ClusterFan":
        dual = dual_data(dtype, orientation)
        graph = exchange_graph(dual)
        return cls({g: rec.g_vector for g, rec in dual.records.items()}, list(graph.clusters))

    def unimodular(self) -> CheckReport:
        bad = []
        for cone in self.cones:
            d = determinant([list(self.rays[g]) for g in cone])
            if abs(d) != 1:
                bad.append((tuple(label_str(g) for g in cone), d))
        return CheckReport("unimodular cones", not bad, bad)


def cluster_unimodularity_check(walk: ARWalkResult) -> CheckReport:
    graph = exchange_graph(walk)
    bad = []
    for cone in graph.clusters:
        d = determinant([list(walk.records[g].g_vector) for g in cone])
        if abs(d) != 1:
            bad.append((tuple(label_str(g) for g in cone), d))
    return CheckReport("unimodular g-vector clusters", not bad, bad, {"clusters": len(graph.clusters)})


def normal_fan_coarsening_check(dtype: DynkinType, orientation: Orientation | None = None) -> CheckReport:
    """Each F_gamma is linear on every negated cone; the Minkowski sum separates all cones."""
    if orientation is None:
        orientation = default_orientation(dtype)
    walk = ar_walk(dtype, orientation)
    fan = ClusterFan.from_dual(dtype, orientation)
    newton = NewtonData.from_walk(walk)
    bad = []
    vertex_of: dict = {}
    coarse = 0
    for cone in fan.cones:
        gens = [[-c for c in fan.rays[w]] for w in cone]
        total = [0] * walk.n
        for gamma in walk.pi_plus:
            common = None
            for v in gens:
                mins = newton.minimizers(gamma, v)
                common = mins if common is None else common & mins
            if not common:
                bad.append((label_str(gamma), tuple(label_str(w) for w in cone)))
                continue
            e = min(common)
            total = [a + x for a, x in zip(total, e)]
        vertex_of.setdefault(tuple(total), []).append(cone)
    shared = [v for v, cones in vertex_of.items() if len(cones) > 1]
    if shared:
        bad.append(("cones with equal Minkowski vertex", len(shared)))
    # a single F_gamma may be linear across neighbouring cones: count those coarsenings
    for gamma in walk.pi_plus:
        seen = set()
        for cone in fan.cones:
            gens = [[-c for c in fan.rays[w]] for w in cone]
            common = None
            for v in gens:
                mins = newton.minimizers(gamma, v)
                common = mins if common is None else common & mins
            if common:
                seen.add(min(common))
        if len(seen) < len(fan.cones):
            coarse += 1
    return CheckReport(
        "normal fan",
        not bad,
        bad,
        {"cones": len(fan.cones), "vertices": len(vertex_of), "coarsening_only": coarse},
    )


def run_checks(dtype: DynkinType, orientation: Orientation | None = None, checks=("delta", "mesh", "fan")) -> list[CheckReport]:
    if orientation is None:
        orientation = default_orientation(dtype)
    walk = ar_walk(dtype, orientation)
    out = []
    if "delta" in checks:
        out.append(delta_pairing_check(dtype, orientation))
    if "mesh" in checks:
        out.append(g_vector_mesh_check(walk))
        out.append(universal_weight_mesh_check(walk))
    if "fan" in checks:
        out.append(cluster_unimodularity_check(walk))
        out.append(ClusterFan.from_dual(dtype, orientation).unimodular())
        out.append(normal_fan_coarsening_check(dtype, orientation))
    return out
