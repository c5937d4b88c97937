"""u-equations: primitive, extended (two routes), local; symbolic verification.

Every u-variable is realised by a rational function f_gamma(y) written as a
Laurent monomial in the y's and the F-polynomials.  An equation
prod u^alpha + prod u^beta = 1 is verified by substituting these monomials
and clearing denominators inside the F-alphabet.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping

from .cluster_engine import (
    ARWalkResult,
    _source_order,
    ar_walk,
    dual_data,
    exchange_graph,
    label_str,
    matrix_mutation,
)
from .compatibility import CompatibilityTable, compatibility_table
from .dynkin import DynkinType, Orientation, default_orientation
from .symbolic import AlphabetMonomial, LaurentPolynomial, expand


@dataclass(frozen=True)
class UEquation:
    """prod u^left + prod u^right = 1 (exponent maps stored as sorted tuples)."""

    left: tuple
    right: tuple
    provenance: str = "primitive"

    @classmethod
    def make(cls, left: Mapping, right: Mapping, provenance: str = "primitive") -> "UEquation":
        left = tuple(sorted((k, v) for k, v in left.items() if v))
        right = tuple(sorted((k, v) for k, v in right.items() if v))
        if not left and not right:
            raise ValueError("both sides of a u-equation are empty")
        if any(v < 0 for _, v in left + right):
            raise ValueError("u-equation exponents must be nonnegative")
        return cls(left, right, provenance)

    @property
    def left_map(self) -> dict:
        return dict(self.left)

    @property
    def right_map(self) -> dict:
        return dict(self.right)

    def key(self) -> frozenset:
        return frozenset([self.left, self.right])

    def labels(self) -> set:
        return {k for k, _ in self.left} | {k for k, _ in self.right}

    def relabel(self, mapping: Mapping, provenance: str | None = None) -> "UEquation":
        def image(side):
            out: dict = {}
            for k, v in side:
                out[mapping[k]] = out.get(mapping[k], 0) + v
            return out

        return UEquation.make(image(self.left), image(self.right), provenance or self.provenance)

    def to_json(self) -> dict:
        return {
            "left": {label_str(k): v for k, v in self.left},
            "right": {label_str(k): v for k, v in self.right},
        }

    def __str__(self):
        def mono(side):
            if not side:
                return "1"
            return "*".join(f"u{label_str(k)}" + (f"^{v}" if v > 1 else "") for k, v in side)

        return f"{mono(self.left)} + {mono(self.right)} = 1"


def dedupe(equations) -> list[UEquation]:
    seen = {}
    for eq in equations:
        seen.setdefault(eq.key(), eq)
    return sorted(seen.values(), key=lambda e: (min(e.left, e.right), max(e.left, e.right)))


# -- primitive equations and f_gamma --------------------------------------------


def primitive_equations(table: CompatibilityTable) -> list[UEquation]:
    out = []
    for g in table.pi:
        right = {w: table(w, g) for w in table.pi if table(w, g)}
        out.append(UEquation.make({g: 1}, right, "primitive"))
    return out


def walk_label(walk: ARWalkResult, t: int, i: int):
    """(t, i) for any integer t, continued periodically through tau."""
    lab = (0, i)
    if t >= 0:
        inv = {v: k for k, v in walk.tau.items()}
        for _ in range(t):
            lab = inv[lab]
    else:
        for _ in range(-t):
            lab = walk.tau[lab]
    return lab


def f_gamma(gamma, walk: ARWalkResult) -> AlphabetMonomial:
    """y_j^[t=0] * prod_{i->j} F_(t,i)^|b_ij| prod_{j->i} F_(t-1,i)^|b_ij| / (F_(t-1,j) F_(t,j))."""
    t, j = gamma
    n = walk.n
    b = walk.b
    y = [0] * n
    if t == 0:
        y[j - 1] = 1
    fac: dict = {}

    def bump(lab, k):
        fac[lab] = fac.get(lab, 0) + k

    for i in range(1, n + 1):
        bij = b[i - 1][j - 1]
        if bij > 0:
            bump(walk_label(walk, t, i), bij)
        elif bij < 0:
            bump(walk_label(walk, t - 1, i), -bij)
    bump(walk_label(walk, t - 1, j), -1)
    bump(gamma, -1)
    return AlphabetMonomial(y, _drop_trivial(fac, walk))


def _drop_trivial(fac: dict, walk: ARWalkResult) -> dict:
    """Drop factors whose F-polynomial is 1 (the initial variables)."""
    return {lab: k for lab, k in fac.items() if k and not walk.records[lab].f_poly.is_one()}


def f_gamma_from_exchange(gamma, walk: ARWalkResult) -> AlphabetMonomial:
    """M / (x_{tau gamma} x_gamma) read off the recorded walk mutation, x -> 1."""
    rec = walk.primitive[gamma]
    fac: dict = {}
    for lab, k in rec.neighbors:
        fac[lab] = fac.get(lab, 0) + k
    fac[rec.tau_label] = fac.get(rec.tau_label, 0) - 1
    fac[gamma] = fac.get(gamma, 0) - 1
    return AlphabetMonomial(rec.frozen_with_mutable, _drop_trivial(fac, walk))


def format_alphabet(m: AlphabetMonomial, y_names: tuple) -> str:
    """y2*F(1,2) / (F(0,2)*F(1,1)^2) style rendering."""

    def part(items):
        return "*".join(name + (f"^{k}" if k > 1 else "") for name, k in items)

    num = [(y_names[i], a) for i, a in enumerate(m.y_exponents) if a > 0]
    den = [(y_names[i], -a) for i, a in enumerate(m.y_exponents) if a < 0]
    for lab in sorted(m.factor_exponents):
        k = m.factor_exponents[lab]
        (num if k > 0 else den).append((f"F{label_str(lab)}", abs(k)))
    top = part(num) or "1"
    if not den:
        return top
    bottom = part(den)
    return f"{top}/({bottom})" if len(den) > 1 else f"{top}/{bottom}"


def f_table(walk: ARWalkResult) -> dict:
    return {g: f_gamma(g, walk) for g in walk.pi}


def monomial_of(side: Mapping, f: Mapping, n: int) -> AlphabetMonomial:
    out = AlphabetMonomial.one(n)
    for lab, k in side.items():
        out = out * f[lab] ** k
    return out


# -- verification ---------------------------------------------------------------


@dataclass
class Certificate:
    ok: bool
    equation: str
    witness: str = ""


class _PowerCache:
    def __init__(self, polys: Mapping, variables):
        self.polys = polys
        self.variables = variables
        self.cache: dict = {}

    def power(self, lab, k: int) -> LaurentPolynomial:
        key = (lab, k)
        hit = self.cache.get(key)
        if hit is None:
            if k == 1:
                hit = self.polys[lab]
            else:
                half = self.power(lab, k // 2)
                hit = half * half
                if k % 2:
                    hit = hit * self.polys[lab]
            self.cache[key] = hit
        return hit

    def product(self, y_exp, fac: Mapping) -> LaurentPolynomial:
        out = LaurentPolynomial.monomial(self.variables, y_exp)
        # multiply small factors first
        items = sorted(((lab, k) for lab, k in fac.items() if k), key=lambda t: len(self.polys[t[0]].terms) * t[1])
        for lab, k in items:
            out = out * self.power(lab, k)
        return out


def _cleared(monos: list[AlphabetMonomial]) -> list[tuple[tuple, dict]]:
    """Shift all monomials by a common factor so every exponent is >= 0 with min 0."""
    n = len(monos[0].y_exponents)
    ylow = [min(m.y_exponents[i] for m in monos) for i in range(n)]
    labs = set()
    for m in monos:
        labs |= set(m.factor_exponents)
    flow = {lab: min(m.factor_exponents.get(lab, 0) for m in monos) for lab in labs}
    out = []
    for m in monos:
        y = tuple(m.y_exponents[i] - ylow[i] for i in range(n))
        fac = {lab: m.factor_exponents.get(lab, 0) - flow[lab] for lab in labs}
        out.append((y, {k: v for k, v in fac.items() if v}))
    return out


def verify_monomial_identity(terms: list[AlphabetMonomial], coeffs: list[int], cache: _PowerCache) -> tuple[bool, str]:
    """Check sum coeff_k * term_k == 0 as rational functions."""
    cleared = _cleared(terms)
    total = LaurentPolynomial.constant(cache.variables, 0)
    for (y, fac), c in zip(cleared, coeffs):
        total = total + cache.product(y, fac) * c
    if total.is_zero():
        return True, ""
    lead = max(total.terms)
    return False, f"nonzero remainder with {len(total.terms)} terms; e.g. coefficient {total.terms[lead]} at y^{lead}"


def verify_equation(eq: UEquation, f: Mapping, walk: ARWalkResult, cache: _PowerCache | None = None) -> Certificate:
    n = walk.n
    if cache is None:
        cache = _PowerCache(walk.f_polys(), walk.frozen_names)
    u = monomial_of(eq.left_map, f, n)
    v = monomial_of(eq.right_map, f, n)
    ok, why = verify_monomial_identity([u, v, AlphabetMonomial.one(n)], [1, 1, -1], cache)
    return Certificate(ok, str(eq), why)


def verify_all(equations, walk: ARWalkResult, f: Mapping | None = None) -> list[Certificate]:
    if f is None:
        f = f_table(walk)
    cache = _PowerCache(walk.f_polys(), walk.frozen_names)
    return [verify_equation(eq, f, walk, cache) for eq in equations]


def _verify_chunk(args) -> list[Certificate]:
    dtype, orientation, kind, eqs = args
    walk = ar_walk(dtype, orientation)
    if kind == "local":
        return verify_local(walk, eqs)
    return verify_all(eqs, walk)


def verify_many(equations, dtype: DynkinType, orientation: Orientation | None = None, jobs: int = 1) -> list[Certificate]:
    """Verify u-equations or local equations, optionally across worker processes; order is preserved."""
    if orientation is None:
        orientation = default_orientation(dtype)
    equations = list(equations)
    if not equations:
        return []
    kind = "local" if isinstance(equations[0], XEquation) else "u"
    if jobs <= 1:
        return _verify_chunk((dtype, orientation, kind, equations))
    from concurrent.futures import ProcessPoolExecutor

    size = max(1, -(-len(equations) // (4 * jobs)))
    chunks = [equations[i:i + size] for i in range(0, len(equations), size)]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        parts = ex.map(_verify_chunk, [(dtype, orientation, kind, c) for c in chunks])
        return [c for part in parts for c in part]


# -- universal coefficients ----------------------------------------------------


@dataclass
class UniversalSeedData:
    rows: list  # one row per label of pi
    pi: list
    sign: int

    def frozen_names(self) -> tuple:
        return tuple(f"z{t}_{j}" for t, j in self.pi)


def _primitive_columns(walk: ARWalkResult, rows) -> dict:
    """Frozen columns of the walk mutations on the extended matrix [B; rows]."""
    n = walk.n
    full = [list(r) for r in walk.b] + [list(r) for r in rows]
    order = _source_order([list(r) for r in walk.b])
    labels = [(0, i + 1) for i in range(n)]
    inv = {v: k for k, v in walk.tau.items()}
    out = {}
    # mutating away x_gamma gives the primitive relation of gamma
    while len(out) < len(walk.pi):
        for k in order:
            old = labels[k]
            col = [full[i][k] for i in range(n, len(full))]
            out.setdefault(old, col)
            full = matrix_mutation(full, k)
            labels[k] = inv[old]
    return out


def universal_seed_data(walk: ARWalkResult, table: CompatibilityTable | None = None) -> UniversalSeedData:
    """Bottom rows +-g^vee, the sign fixed by the shape of the primitive exchange relations."""
    if table is None:
        table = compatibility_table(walk)
    dual = dual_data(walk.dtype, walk.orientation)
    if list(dual.pi) != list(walk.pi):
        raise RuntimeError("dual walk has a different label set")
    idx = {g: i for i, g in enumerate(walk.pi)}
    for sign in (1, -1):
        rows = [[sign * c for c in dual.records[g].g_vector] for g in walk.pi]
        cols = _primitive_columns(walk, rows)
        good = True
        for g, col in cols.items():
            with_mutable = [max(-c, 0) for c in col]
            pure = [max(c, 0) for c in col]
            want_with = [int(i == idx[g]) for i in range(len(walk.pi))]
            want_pure = [table(w, g) for w in walk.pi]
            if with_mutable != want_with or pure != want_pure:
                good = False
                break
        if good:
            return UniversalSeedData(rows, list(walk.pi), sign)
    raise RuntimeError("neither sign of the dual g-vectors reproduces the primitive exchange relations")


def extended_equations_universal(walk: ARWalkResult, table: CompatibilityTable | None = None) -> list[UEquation]:
    """One equation per exchangeable pair: the exchange relation with mutable variables set to 1."""
    data = universal_seed_data(walk, table)
    graph = exchange_graph(walk, data.rows)
    eqs = []
    for rel in graph.relations.values():
        left = {data.pi[i]: e for i, e in enumerate(rel.plus_frozen) if e}
        right = {data.pi[i]: e for i, e in enumerate(rel.minus_frozen) if e}
        eqs.append(UEquation.make(left, right, "universal"))
    return dedupe(eqs)


def universal_walk(walk: ARWalkResult, table: CompatibilityTable | None = None) -> ARWalkResult:
    """The source-mutation walk with universal coefficients z_gamma (expansions in x and z)."""
    from .cluster_engine import ExchangeMatrix, ar_walk_matrix

    data = universal_seed_data(walk, table)
    m = ExchangeMatrix([list(r) for r in walk.b], data.rows, walk.dtype, walk.orientation)
    return ar_walk_matrix(m, data.frozen_names(), principal=False)


# -- closed-form families ----------------------------------------------------------


def extended_equations_family(dtype: DynkinType, orientation: Orientation | None = None) -> list[UEquation]:
    """The polygon families of types A, D and their folds to C, B, G2."""
    from . import polygons
    from .folding import build_folding

    if orientation is None:
        orientation = default_orientation(dtype)
    s, n = dtype.series, dtype.rank
    if s == "A":
        walk = ar_walk(dtype, orientation)
        model = polygons.PolygonA(n + 3)
        phi = polygons.match_labels(walk, compatibility_table(walk), model)
        inv = {v: k for k, v in phi.items()}
        raw = polygons.family_a(model)
    elif s == "D":
        walk = ar_walk(dtype, orientation)
        model = polygons.PolygonD(n)
        phi = polygons.match_labels(walk, compatibility_table(walk), model)
        inv = {v: k for k, v in phi.items()}
        raw = polygons.family_d(model)
    elif s in "BCG" and not dtype.dual:
        fold = build_folding(dtype, orientation)
        source = extended_equations_family(fold.source, fold.source_orientation)
        return dedupe(eq.relabel(fold.nu_pi, "family") for eq in source)
    else:
        raise NotImplementedError(f"no closed-form family for {dtype}")
    eqs = [UEquation.make({inv[k]: v for k, v in l.items()}, {inv[k]: v for k, v in r.items()}, "family") for l, r in raw]
    return dedupe(eqs)


# -- local equations -------------------------------------------------------------------


@dataclass(frozen=True)
class XEquation:
    """X_a X_b = prod (1 + X_c)^{e_c}."""

    left: tuple  # (tau gamma, gamma)
    right: tuple  # sorted (label, exponent)

    def __str__(self):
        lhs = "*".join(f"X{label_str(g)}" for g in self.left)
        rhs = "*".join(f"(1+X{label_str(k)})" + (f"^{v}" if v > 1 else "") for k, v in self.right) or "1"
        return f"{lhs} = {rhs}"

    def to_json(self) -> dict:
        return {"left": [label_str(g) for g in self.left], "right": {label_str(k): v for k, v in self.right}}


def local_equations(walk: ARWalkResult) -> list[XEquation]:
    out = []
    n = walk.n
    b = walk.b
    for g in walk.pi:
        t, j = g
        rhs: dict = {}
        for i in range(1, n + 1):
            bij = b[i - 1][j - 1]
            if bij > 0:
                lab = walk_label(walk, t, i)
            elif bij < 0:
                lab = walk_label(walk, t - 1, i)
            else:
                continue
            rhs[lab] = rhs.get(lab, 0) + abs(bij)
        out.append(XEquation((walk.tau[g], g), tuple(sorted(rhs.items()))))
    return out


def verify_local_equation(eq: XEquation, walk: ARWalkResult, f: Mapping, cache: _PowerCache) -> Certificate:
    """Substitute X = u/(1-u), u = num/den, and cross-multiply."""
    n = walk.n
    parts = {}

    def nd(lab):
        if lab not in parts:
            m = f[lab]
            num, den = expand(m, walk.f_polys(), walk.frozen_names)
            parts[lab] = (num, den, den - num)
        return parts[lab]

    a, b = eq.left
    na, _, da = nd(a)
    nb, _, db = nd(b)
    lhs = na * nb
    rhs = da * db
    for lab, k in eq.right:
        num, den, diff = nd(lab)
        lhs = lhs * diff ** k
        rhs = rhs * den ** k
    ok = lhs == rhs
    return Certificate(ok, str(eq), "" if ok else "cross-multiplied sides differ")


def verify_local(walk: ARWalkResult, equations=None) -> list[Certificate]:
    f = f_table(walk)
    cache = _PowerCache(walk.f_polys(), walk.frozen_names)
    if equations is None:
        equations = local_equations(walk)
    return [verify_local_equation(eq, walk, f, cache) for eq in equations]
