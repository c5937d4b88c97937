"""Hand-transcribed primitive u-equation systems in polygon names.

Each entry lists representative equations; the full system is their closure
under the model's rotation (and, for D, the global plain/notched swap).
"""
from clusterconf import polygons as P
from clusterconf.cluster_engine import ar_walk
from clusterconf.compatibility import compatibility_table
from clusterconf.dynkin import parse_type
from clusterconf.u_system import primitive_equations


def _eq(lhs, rhs: dict):
    return frozenset([(lhs, 1)]), frozenset(rhs.items())


def closure(eqs, moves):
    out = set(eqs)
    todo = list(eqs)
    while todo:
        left, right = todo.pop()
        for mv in moves:
            img = (frozenset((mv(g), k) for g, k in left), frozenset((mv(g), k) for g, k in right))
            if img not in out:
                out.add(img)
                todo.append(img)
    return out


def _c2():
    m = P.PolygonC(3)
    b = m.bracket
    reps = [
        _eq(b("1", "1'"), {b("2", "2'"): 1, b("3", "3'"): 1, b("2", "3'"): 2}),
        _eq(b("2", "3'"), {b("1", "1'"): 1, b("1", "3"): 1, b("1", "2'"): 1}),
    ]
    return m, None, reps, [m.rotate]


def _b2():
    m = P.PolygonB(3)
    b = m.bracket
    reps = [
        _eq(b("1", "1'"), {b("2", "2'"): 1, b("3", "3'"): 1, b("2", "3'"): 1}),
        _eq(b("2", "3'"), {b("1", "1'"): 2, b("1", "3"): 1, b("1", "2'"): 1}),
    ]
    return m, None, reps, [m.rotate]


def _d4():
    m = P.PolygonD(4)
    a = m.arc

    def t(i, notched=0):
        return ("tag", i, notched)

    def swap(x):
        return ("tag", x[1], 1 - x[2]) if x[0] == "tag" else x

    reps = [
        _eq(a(1, 2), {t(3): 1, t(3, 1): 1, t(4): 1, t(4, 1): 1, a(3, 4): 2, a(2, 3): 1, a(2, 4): 1, a(4, 1): 1, a(3, 1): 1}),
        _eq(a(1, 3), {t(4): 1, t(4, 1): 1, a(4, 1): 1, a(4, 2): 1, a(2, 4): 1, a(3, 4): 1}),
        _eq(t(1), {t(2, 1): 1, t(3, 1): 1, t(4, 1): 1, a(2, 3): 1, a(3, 4): 1, a(2, 4): 1}),
    ]
    return m, None, reps, [m.rotate, swap]


def _b3():
    m = P.PolygonB(4)
    b = m.bracket
    reps = [
        _eq(b("1", "2'"), {b("3", "3'"): 2, b("4", "4'"): 2, b("3", "4'"): 2, b("2", "3'"): 1, b("2", "4'"): 1, b("1", "4"): 1, b("1", "3"): 1}),
        _eq(b("1", "3'"), {b("4", "4'"): 2, b("1", "4"): 1, b("2", "4"): 1, b("2", "4'"): 1, b("3", "4'"): 1}),
        _eq(b("1", "1'"), {b("2", "2'"): 1, b("3", "3'"): 1, b("4", "4'"): 1, b("2", "3'"): 1, b("3", "4'"): 1, b("2", "4'"): 1}),
    ]
    return m, None, reps, [m.rotate]


def _g2():
    m = P.OctagonG2()
    reps = [
        _eq("a1", {"a2": 1, "b2": 1, "a3": 2, "b3": 1, "a4": 1}),
        _eq("b1", {"b2": 1, "a3": 3, "b3": 2, "a4": 3, "b4": 1}),
    ]
    # vertex 1 carries the b-variables, vertex 2 the a-variables
    return m, {1: "b", 2: "a"}, reps, [m.rotate]


SYSTEMS = {"C2": _c2, "B2": _b2, "D4": _d4, "B3": _b3, "G2": _g2}


def compare(type_name: str):
    """(reference system, generated system in model names)."""
    model, kinds, reps, moves = SYSTEMS[type_name]()
    walk = ar_walk(parse_type(type_name))
    table = compatibility_table(walk)
    phi = P.match_labels(walk, table, model, kinds)
    generated = {
        (frozenset((phi[g], k) for g, k in eq.left), frozenset((phi[g], k) for g, k in eq.right))
        for eq in primitive_equations(table)
    }
    return closure(reps, moves), generated
