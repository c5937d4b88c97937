"""Foldings of simply-laced diagrams onto multiply-laced ones.

The map on cluster variables is read off from walk labels: with a
Gamma-invariant orientation the source walk is Gamma-equivariant, so
nu(t, j~) = (t, nu(j~)).
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .cluster_engine import ARWalkResult, ar_walk, dual_data
from .compatibility import compatibility_table
from .dynkin import DynkinType, Orientation, default_orientation
from .symbolic import LaurentPolynomial
from .u_system import primitive_equations


def _fold_data(target: DynkinType):
    s, n = target.series, target.rank
    if target.dual:
        raise ValueError("fold onto the undualized type")
    if s == "C":
        m = 2 * n - 1
        source = DynkinType("A", m)
        nu = {i: min(i, 2 * n - i) for i in range(1, m + 1)}
        gens = [{i: 2 * n - i for i in range(1, m + 1)}]
    elif (s, n) == ("B", 2):
        # D3 is A3 with the middle vertex as the branch point
        source = DynkinType("A", 3)
        nu = {1: 2, 2: 1, 3: 2}
        gens = [{1: 3, 2: 2, 3: 1}]
    elif s == "B":
        source = DynkinType("D", n + 1)
        nu = {i: min(i, n) for i in range(1, n + 2)}
        swap = {i: i for i in range(1, n + 2)}
        swap[n], swap[n + 1] = n + 1, n
        gens = [swap]
    elif s == "G":
        source = DynkinType("D", 4)
        nu = {1: 2, 2: 1, 3: 2, 4: 2}
        gens = [{1: 3, 3: 4, 4: 1, 2: 2}]
    elif s == "F":
        source = DynkinType("E", 6)
        nu = {1: 1, 5: 1, 2: 2, 4: 2, 3: 3, 6: 4}
        gens = [{1: 5, 5: 1, 2: 4, 4: 2, 3: 3, 6: 6}]
    elif s in "ADE":
        source = target
        nu = {i: i for i in range(1, n + 1)}
        gens = []
    else:
        raise ValueError(f"no folding onto {target}")
    return source, nu, gens


SUPPORTED_PAIRS = ["A3:C2", "A5:C3", "A3:B2", "D4:B3", "D5:B4", "D4:G2", "E6:F4"]


@dataclass
class FoldingMap:
    source: DynkinType
    target: DynkinType
    source_orientation: Orientation
    target_orientation: Orientation
    gamma_generators: list
    nu_i: dict
    nu_pi: dict = field(default_factory=dict)
    source_walk: ARWalkResult | None = None
    target_walk: ARWalkResult | None = None

    def fiber(self, gamma) -> list:
        return [g for g, h in self.nu_pi.items() if h == gamma]

    def vertex_fiber(self, i: int) -> list:
        return [k for k, v in self.nu_i.items() if v == i]


def build_folding(target: DynkinType, orientation: Orientation | None = None) -> FoldingMap:
    if orientation is None:
        orientation = default_orientation(target)
    source, nu, gens = _fold_data(target)
    arrows = []
    for a, b in source.edges():
        if orientation.has_arrow(nu[a], nu[b]):
            arrows.append((a, b))
        elif orientation.has_arrow(nu[b], nu[a]):
            arrows.append((b, a))
        else:
            raise ValueError("source edge inside a fiber")
    src_or = Orientation.from_pairs(arrows)
    # Cartan compatibility: a_ij = sum over the fiber of i of a~_{i~ j~}
    at, asrc = target.cartan, source.cartan
    for i in range(1, target.rank + 1):
        for j in range(1, target.rank + 1):
            for jt in [k for k in nu if nu[k] == j]:
                total = sum(asrc[it - 1][jt - 1] for it in nu if nu[it] == i)
                if i == j:
                    continue
                if total != at[i - 1][j - 1]:
                    raise RuntimeError(f"folding {source}->{target} breaks Cartan entry ({i},{j})")
    sw = ar_walk(source, src_or)
    tw = ar_walk(target, orientation)
    nu_pi = {(t, j): (t, nu[j]) for t, j in sw.pi}
    if set(nu_pi.values()) != set(tw.pi):
        raise RuntimeError("label map does not land on the target labels")
    return FoldingMap(source, target, src_or, orientation, gens, nu, nu_pi, sw, tw)


def parse_pair(text: str) -> tuple[DynkinType, DynkinType]:
    from .dynkin import parse_type

    a, b = text.split(":")
    return parse_type(a), parse_type(b)


@dataclass
class FoldingReport:
    checks: list  # (name, ok, detail)

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def lines(self) -> list[str]:
        return [f"{name}: {'pass' if ok else 'FAIL'}" + (f" ({detail})" if detail else "") for name, ok, detail in self.checks]


def _y_image(poly: LaurentPolynomial, nu: dict, target_vars: tuple) -> LaurentPolynomial:
    out: dict = {}
    k = len(target_vars)
    for e, c in poly.terms.items():
        img = [0] * k
        for idx, x in enumerate(e):
            img[nu[idx + 1] - 1] += x
        img = tuple(img)
        out[img] = out.get(img, 0) + c
    return LaurentPolynomial(target_vars, out)


def check_folding_identities(fold: FoldingMap, include_universal: bool = True) -> FoldingReport:
    from fractions import Fraction

    sw, tw = fold.source_walk, fold.target_walk
    st, tt = compatibility_table(sw), compatibility_table(tw)
    checks = []

    # (1) Gamma-invariance of the source degrees
    bad = 0
    for g in fold.gamma_generators:
        act = {(t, j): (t, g[j]) for t, j in sw.pi}
        bad += sum(1 for a in sw.pi for b in sw.pi if st(act[a], act[b]) != st(a, b))
    checks.append(("gamma-invariant degrees", bad == 0, f"{bad} mismatches" if bad else ""))

    # (2) (gamma||omega) = sum over the fiber of gamma of (g~||w~), any w~ over omega
    bad = 0
    for gamma in tw.pi:
        fib = fold.fiber(gamma)
        for omega in tw.pi:
            for wt in fold.fiber(omega):
                if sum(st(gt, wt) for gt in fib) != tt(gamma, omega):
                    bad += 1
    checks.append(("degree = fiber sum", bad == 0, f"{bad} mismatches" if bad else ""))

    # (3) F-polynomials map to F-polynomials
    bad = 0
    for gt in sw.pi:
        img = _y_image(sw.records[gt].f_poly, fold.nu_i, tw.frozen_names)
        if img != tw.records[fold.nu_pi[gt]].f_poly:
            bad += 1
    checks.append(("F-polynomials fold", bad == 0, f"{bad} mismatches" if bad else ""))

    if include_universal:
        from .u_system import universal_walk

        su, tu = universal_walk(sw, st), universal_walk(tw, tt)
        sidx = {g: i for i, g in enumerate(sw.pi)}
        tidx = {g: i for i, g in enumerate(tw.pi)}
        zmap = {sidx[g] + 1: tidx[fold.nu_pi[g]] + 1 for g in sw.pi}
        bad = 0
        for gt in sw.pi:
            img = _y_image(su.records[gt].f_poly, zmap, tu.frozen_names)
            if img != tu.records[fold.nu_pi[gt]].f_poly:
                bad += 1
        checks.append(("universal F-polynomials fold", bad == 0, f"{bad} mismatches" if bad else ""))

    # (4) nu(g~) = g and g^vee = nu^vee(sum over the fiber of g~)
    bad = 0
    for gt in sw.pi:
        img = [0] * tw.n
        for idx, x in enumerate(sw.records[gt].g_vector):
            img[fold.nu_i[idx + 1] - 1] += x
        if tuple(img) != tw.records[fold.nu_pi[gt]].g_vector:
            bad += 1
    checks.append(("g-vectors fold", bad == 0, f"{bad} mismatches" if bad else ""))

    dual = dual_data(fold.target, fold.target_orientation)
    bad = 0
    for gamma in tw.pi:
        acc = [Fraction(0)] * tw.n
        for gt in fold.fiber(gamma):
            for idx, x in enumerate(sw.records[gt].g_vector):
                i = fold.nu_i[idx + 1]
                acc[i - 1] += Fraction(x, len(fold.vertex_fiber(i)))
        if tuple(acc) != tuple(Fraction(x) for x in dual.records[gamma].g_vector):
            bad += 1
    checks.append(("dual g-vectors from fiber sums", bad == 0, f"{bad} mismatches" if bad else ""))

    # quotient: images of source primitive equations are target primitive equations
    target_eqs = {eq.key() for eq in primitive_equations(tt)}
    images = {eq.relabel(fold.nu_pi).key() for eq in primitive_equations(st)}
    ok = images == target_eqs
    checks.append(("u-equation images", ok, "" if ok else f"{len(images ^ target_eqs)} differ"))
    return FoldingReport(checks)
