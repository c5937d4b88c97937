"""Polygon models of cluster variables and their compatibility degrees.

Each model exposes ``labels()``, ``degree(omega, gamma)`` (the exponent of
u_omega in R_gamma), ``rotate(label)`` (the combinatorial tau) and
``kind(label)``.  :func:`match_labels` finds a label dictionary between a
walk and a model from the zero pattern of the degrees plus tau-equivariance
alone, so the nonzero values remain an independent check.

Models:

* ``PolygonA(n)``  -- type A_{n-3}, diagonals (i, j) of an n-gon.
* ``PolygonC(n)`` / ``PolygonB(n)`` -- types C_{n-1} / B_{n-1}, centrally
  symmetric classes of diagonals of a 2n-gon with vertices 1..n, 1'..n'.
* ``PolygonD(n)``  -- type D_n, arcs of a once-punctured n-gon; computed on
  the branched double cover (a 2n-gon), where arcs become symmetric pairs of
  diagonals and arcs to the puncture become diameters.
* ``OctagonG2()``  -- the eight G_2 variables a1, b1, ..., a4, b4 around an
  octagon; only the zero pattern is modelled.
"""
from __future__ import annotations

from itertools import combinations
from typing import Iterable


def chords_cross(a: tuple, b: tuple) -> bool:
    """Interior crossing of two chords of a convex polygon (positions)."""
    p, q = sorted(a)
    r, s = sorted(b)
    if len({p, q, r, s}) < 4:
        return False
    return (p < r < q) != (p < s < q)


class PolygonA:
    def __init__(self, n: int):
        if n < 4:
            raise ValueError("need an n-gon with n >= 4")
        self.n = n

    def labels(self) -> list:
        n = self.n
        return [(i, j) for i in range(1, n + 1) for j in range(i + 2, n + 1) if not (i == 1 and j == n)]

    def degree(self, omega, gamma) -> int:
        return int(chords_cross(omega, gamma))

    def rotate(self, label, k: int = 1):
        n = self.n
        return tuple(sorted(((v - 1 + k) % n) + 1 for v in label))

    def kind(self, label):
        return 0

    def name(self, label) -> str:
        return f"{label[0]},{label[1]}"

    def u(self, i: int, j: int):
        """Label of the diagonal {i, j} or None for a side."""
        i, j = sorted((i, j))
        lab = (i, j)
        return lab if lab in set(self.labels()) else None


class _Polygon2n:
    """Shared machinery for the centrally symmetric 2n-gon."""

    def __init__(self, n: int):
        if n < 3:
            raise ValueError("need n >= 3")
        self.n = n
        self._labels = self._build()

    def _is_side(self, p, q):
        m = 2 * self.n
        return (p - q) % m in (1, m - 1)

    def _build(self):
        m = 2 * self.n
        seen = {}
        for p in range(m):
            for q in range(p + 1, m):
                if self._is_side(p, q):
                    continue
                orbit = frozenset(
                    [tuple(sorted((p, q))), tuple(sorted(((p + self.n) % m, (q + self.n) % m)))]
                )
                seen[orbit] = None
        return list(seen)

    def labels(self) -> list:
        return list(self._labels)

    def diagonal_label(self, p: int, q: int):
        """Label containing the diagonal between positions p and q (None for sides)."""
        m = 2 * self.n
        p, q = p % m, q % m
        if p == q or self._is_side(p, q):
            return None
        return frozenset([tuple(sorted((p, q))), tuple(sorted(((p + self.n) % m, (q + self.n) % m)))])

    def position(self, vertex: str) -> int:
        if vertex.endswith("'"):
            return self.n + int(vertex[:-1]) - 1
        return int(vertex) - 1

    def bracket(self, a: str, b: str):
        """Label [a, b] with vertex names like '2' or "3'"."""
        return self.diagonal_label(self.position(a), self.position(b))

    def crossings(self, diag: tuple, label) -> int:
        return sum(chords_cross(diag, d) for d in label)

    def rotate(self, label, k: int = 1):
        m = 2 * self.n
        return frozenset(tuple(sorted(((p + k) % m, (q + k) % m))) for p, q in label)

    def kind(self, label):
        return "diameter" if len(label) == 1 else "pair"

    def _vname(self, p):
        return str(p + 1) if p < self.n else f"{p - self.n + 1}'"

    def name(self, label) -> str:
        p, q = min(label)
        return f"[{self._vname(p)},{self._vname(q)}]"


class PolygonC(_Polygon2n):
    """(omega||gamma): crossings of one diagonal of gamma with those of omega."""

    def degree(self, omega, gamma) -> int:
        if omega == gamma:
            return 0
        return self.crossings(min(gamma), omega)


class PolygonB(_Polygon2n):
    """(omega||gamma): crossings of one diagonal of omega with those of gamma."""

    def degree(self, omega, gamma) -> int:
        if omega == gamma:
            return 0
        return self.crossings(min(omega), gamma)


class PolygonD:
    """Punctured n-gon, vertices clockwise 1..n.

    Labels: ("arc", i, j) for the arc from i to j winding counterclockwise
    around the puncture (i != j, i != j+1 mod n), and ("tag", i, 0|1) for the
    plain and notched arcs [i], [i~] from i to the puncture.
    """

    def __init__(self, n: int):
        if n < 4:
            raise ValueError("need n >= 4")
        self.n = n

    def labels(self) -> list:
        n = self.n
        out = []
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if i != j and (i - j) % n != 1:
                    out.append(("arc", i, j))
        for i in range(1, n + 1):
            out.append(("tag", i, 0))
            out.append(("tag", i, 1))
        return out

    def lift(self, label) -> list:
        """Chords on the double cover (positions 0..2n-1) above a label."""
        n, m = self.n, 2 * self.n
        if label[0] == "tag":
            i = label[1]
            return [(i - 1, i - 1 + n)]
        _, i, j = label
        k = (i - j) % n
        p = i - 1
        q = (p - k) % m
        return [tuple(sorted((p, q))), tuple(sorted(((p + n) % m, (q + n) % m)))]

    def degree(self, omega, gamma) -> int:
        if omega == gamma:
            return 0
        if omega[0] == "tag" and gamma[0] == "tag":
            return int(omega[1] != gamma[1] and omega[2] != gamma[2])
        if omega[0] == "tag":
            omega, gamma = gamma, omega
        # omega is an arc now
        lo = self.lift(omega)[0]
        return sum(chords_cross(lo, d) for d in self.lift(gamma))

    def rotate(self, label, k: int = 1):
        n = self.n
        r = lambda v: ((v - 1 + k) % n) + 1
        if label[0] == "tag":
            return ("tag", r(label[1]), (label[2] + k) % 2)
        return ("arc", r(label[1]), r(label[2]))

    def kind(self, label):
        return 0

    def name(self, label) -> str:
        if label[0] == "tag":
            return f"{label[1]}" + ("~" if label[2] else "")
        return f"{label[1]},{label[2]}"

    def arc(self, i: int, j: int):
        lab = ("arc", i, j)
        return lab if i != j and (i - j) % self.n != 1 else None


class OctagonG2:
    """G_2 variables around an octagon a1 b1 a2 b2 a3 b3 a4 b4; neighbours are compatible."""

    order = ["a1", "b1", "a2", "b2", "a3", "b3", "a4", "b4"]

    def labels(self) -> list:
        return list(self.order)

    def degree(self, omega, gamma) -> int:
        if omega == gamma:
            return 0
        i, j = self.order.index(omega), self.order.index(gamma)
        return 0 if (i - j) % 8 in (1, 7) else 1  # zero pattern only

    def rotate(self, label, k: int = 1):
        return self.order[(self.order.index(label) + 2 * k) % 8]

    def kind(self, label):
        return label[0]

    def name(self, label) -> str:
        return label


def match_labels(walk, table, model, vertex_kind: dict | None = None) -> dict:
    """Find a bijection walk label -> model label.

    Constraints: phi(tau g) = rotate(phi(g)) (either rotation direction),
    kinds follow ``vertex_kind`` (vertex j -> model kind), and
    (deg == 0) agrees on all pairs.  Raises LookupError if none exists.
    """
    pi = list(walk.pi)
    tau = walk.tau
    orbits = []
    seen = set()
    for g in pi:
        if g in seen:
            continue
        orb = [g]
        seen.add(g)
        h = tau[g]
        while h != g:
            orb.append(h)
            seen.add(h)
            h = tau[h]
        orbits.append(orb)
    targets = model.labels()
    zero_model = {(a, b): model.degree(a, b) == 0 for a in targets for b in targets}

    for direction in (1, -1):
        phi: dict = {}
        used: set = set()

        def consistent(new_pairs):
            for g, lab in new_pairs:
                for h, lab2 in phi.items():
                    if (table(g, h) == 0) != zero_model[(lab, lab2)]:
                        return False
                    if (table(h, g) == 0) != zero_model[(lab2, lab)]:
                        return False
            return True

        def place(idx):
            if idx == len(orbits):
                return True
            orb = orbits[idx]
            for cand in targets:
                if cand in used:
                    continue
                images = []
                lab = cand
                ok = True
                for g in orb:
                    if vertex_kind is not None and model.kind(lab) != vertex_kind[g[1]]:
                        ok = False
                        break
                    images.append((g, lab))
                    lab = model.rotate(lab, direction)
                if not ok or lab != cand:
                    continue
                labs = [x for _, x in images]
                if len(set(labs)) != len(labs) or used & set(labs):
                    continue
                # pairs within the orbit itself
                if any(
                    (table(g, h) == 0) != zero_model[(a, b)]
                    for g, a in images
                    for h, b in images
                    if g != h
                ):
                    continue
                if not consistent(images):
                    continue
                for g, x in images:
                    phi[g] = x
                    used.add(x)
                if place(idx + 1):
                    return True
                for g, x in images:
                    del phi[g]
                    used.discard(x)
            return False

        if place(0):
            return dict(phi)
    raise LookupError("no tau-equivariant label dictionary preserves the zero pattern")


# -- closed-form extended-equation families (model labels) ---------------------


def _cyclic_cuts(n: int, k: int) -> Iterable[list[list[int]]]:
    """All decompositions of 1..n into k nonempty cyclic intervals, in order."""
    for cuts in combinations(range(1, n + 1), k):
        parts = []
        for a, b in zip(cuts, cuts[1:] + (cuts[0] + n,)):
            parts.append([((v - 1) % n) + 1 for v in range(a, b)])
        yield parts


def _rotations(parts: list) -> Iterable[list]:
    for s in range(len(parts)):
        yield parts[s:] + parts[:s]


def _mono(pairs) -> dict:
    out: dict = {}
    for lab in pairs:
        if lab is None:
            continue
        out[lab] = out.get(lab, 0) + 1
    return out


def family_a(model: PolygonA) -> list[tuple[dict, dict]]:
    """U_{A,C} + U_{B,D} = 1 over cyclic decompositions A, B, C, D."""
    out = []
    for a, b, c, d in _cyclic_cuts(model.n, 4):
        left = _mono(model.u(i, j) for i in a for j in c)
        right = _mono(model.u(i, j) for i in b for j in d)
        out.append((left, right))
    return out


def family_a_on_2n_gon(model: _Polygon2n) -> list[tuple[dict, dict]]:
    """The type A_{2n-3} family on the 2n-gon, each diagonal replaced by its class."""
    m = 2 * model.n
    out = []
    for a, b, c, d in _cyclic_cuts(m, 4):
        left = _mono(model.diagonal_label(i - 1, j - 1) for i in a for j in c)
        right = _mono(model.diagonal_label(i - 1, j - 1) for i in b for j in d)
        out.append((left, right))
    return out


def family_d(model: PolygonD) -> list[tuple[dict, dict]]:
    """The two D_n families built from U_{I,J}, U_I and its notched variant."""
    n = model.n

    def uij(i_set, j_set):
        return [model.arc(i, j) for i in i_set for j in j_set]

    def u_int(i_set, notched):
        pairs = [model.arc(a, b) for x, a in enumerate(i_set) for b in i_set[x + 1:]]
        pairs += [("tag", i, int(notched)) for i in i_set]
        return pairs

    out = []
    # first family: A, B, C nonempty, D possibly empty
    for k, empty_d in ((4, False), (3, True)):
        for parts in _cyclic_cuts(n, k):
            for rot in _rotations(parts):
                a, b, c = rot[0], rot[1], rot[2]
                d = [] if empty_d else rot[3]
                left = _mono(uij(c, a))
                right = _mono(
                    uij(d, b) + uij(a, b) + uij(b, c) + uij(b, d) + u_int(b, False) + u_int(b, True)
                )
                out.append((left, right))
    # second family: A, C nonempty, B possibly empty; with B nonempty the
    # tag-swapped equation is new, with B empty it is another rotation
    for k, empty_b in ((3, False), (2, True)):
        for parts in _cyclic_cuts(n, k):
            for rot in _rotations(parts):
                if empty_b:
                    a, b, c = rot[0], [], rot[1]
                else:
                    a, b, c = rot
                notches = [(False, True)] if empty_b else [(False, True), (True, False)]
                for na, nc in notches:
                    left = _mono(u_int(a, na) + uij(a, b))
                    right = _mono(u_int(c, nc) + uij(b, c))
                    out.append((left, right))
    return out
