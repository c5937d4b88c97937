import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from helpers import parse_poly

from clusterconf import polygons as P
from clusterconf.cluster_engine import ar_walk
from clusterconf.compatibility import compatibility_table
from clusterconf.dynkin import parse_type
from clusterconf.symbolic import expand
from clusterconf.u_system import (
    UEquation,
    dedupe,
    extended_equations_family,
    extended_equations_universal,
    f_gamma,
    f_gamma_from_exchange,
    f_table,
    local_equations,
    primitive_equations,
    universal_seed_data,
    verify_all,
    verify_local,
    verify_many,
)


def _setup(name):
    walk = ar_walk(parse_type(name))
    return walk, compatibility_table(walk)


def _model_keys(eqs, phi):
    return {frozenset([frozenset((phi[g], k) for g, k in e.left), frozenset((phi[g], k) for g, k in e.right)]) for e in eqs}


def _key(left: dict, right: dict):
    return frozenset([frozenset(left.items()), frozenset(right.items())])


def test_primitive_shape():
    walk, t = _setup("A3")
    eqs = primitive_equations(t)
    assert len(eqs) == 9
    for eq, g in zip(eqs, walk.pi):
        assert eq.left == ((g, 1),)
        assert dict(eq.right) == {w: t(w, g) for w in walk.pi if t(w, g)}


def test_f_gamma_examples():
    walk, _ = _setup("A3")
    F = walk.f_polys()
    y = walk.frozen_names
    assert expand(f_gamma((0, 2), walk), F, y) == (parse_poly("y2"), parse_poly("1+y2"))
    num, den = expand(f_gamma((2, 2), walk), F, y)
    assert num == parse_poly("1+y1+y1*y2") * parse_poly("1+y3+y2*y3")
    assert den == parse_poly("1+y2") * parse_poly("1+y1+y3+y1*y3+y1*y2*y3")
    b3, _ = _setup("B3")
    assert expand(f_gamma((1, 1), b3), b3.f_polys(), b3.frozen_names) == (parse_poly("1"), parse_poly("1+y1"))


@pytest.mark.parametrize("name", ["A3", "B3", "C3", "D4", "G2", "F4"])
def test_f_gamma_agrees_with_exchange_route(name):
    walk, _ = _setup(name)
    for g in walk.pi:
        assert f_gamma(g, walk) == f_gamma_from_exchange(g, walk)


@pytest.mark.parametrize("name", ["A3", "A4", "B2", "B3", "C2", "C3", "D4", "G2", "F4", "E6"])
def test_primitive_equations_verify(name):
    walk, t = _setup(name)
    assert all(c.ok for c in verify_all(primitive_equations(t), walk))


def test_negative_control_gives_witness():
    walk, t = _setup("A3")
    eq = primitive_equations(t)[4]
    right = eq.right_map
    right[next(iter(right))] += 1
    cert = verify_all([UEquation.make(eq.left_map, right)], walk)[0]
    assert not cert.ok and "nonzero remainder" in cert.witness


@pytest.mark.parametrize("name,count", [("A3", 15), ("A4", 35), ("D4", 52), ("B3", 22), ("C3", 22), ("G2", 8), ("F4", 98)])
def test_universal_counts(name, count):
    walk, t = _setup(name)
    assert len(extended_equations_universal(walk, t)) == count


@pytest.mark.parametrize("name,count", [("A2", 5), ("A3", 15), ("A4", 35), ("A5", 70), ("C2", 9), ("C3", 38), ("B2", 9), ("B3", 34), ("B4", 90), ("D4", 52), ("D5", 130), ("G2", 18)])
def test_family_counts(name, count):
    assert len(extended_equations_family(parse_type(name))) == count


@pytest.mark.parametrize("name", ["A2", "A3", "A4", "A5", "D4", "D5"])
def test_universal_equals_family_in_simply_laced(name):
    walk, t = _setup(name)
    uni = {e.key() for e in extended_equations_universal(walk, t)}
    fam = {e.key() for e in extended_equations_family(walk.dtype)}
    assert uni == fam


@pytest.mark.parametrize("name", ["B2", "B3", "B4", "C2", "C3", "G2"])
def test_universal_inside_family(name):
    walk, t = _setup(name)
    uni = {e.key() for e in extended_equations_universal(walk, t)}
    fam = {e.key() for e in extended_equations_family(walk.dtype)}
    assert uni <= fam and len(fam) > len(uni)


@pytest.mark.parametrize("name", ["A3", "B3", "C3", "D4", "G2", "F4"])
def test_extended_contain_primitive(name):
    walk, t = _setup(name)
    prim = {e.key() for e in primitive_equations(t)}
    assert prim <= {e.key() for e in extended_equations_universal(walk, t)}


def test_universal_rows_are_negated_dual_g_vectors():
    from clusterconf.cluster_engine import dual_data

    walk, t = _setup("B3")
    data = universal_seed_data(walk, t)
    dual = dual_data(walk.dtype)
    assert data.sign == -1
    assert all(tuple(data.rows[k]) == tuple(-x for x in dual.records[g].g_vector) for k, g in enumerate(walk.pi))


def test_c2_family_contains_mixed_equation():
    walk, t = _setup("C2")
    m = P.PolygonC(3)
    phi = P.match_labels(walk, t, m)
    b = m.bracket
    want = _key({b("1", "1'"): 1, b("1", "2'"): 1}, {b("2", "3'"): 1, b("3", "3'"): 1})
    assert want in _model_keys(extended_equations_family(walk.dtype), phi)


def test_d4_family_contains_radius_equation():
    walk, t = _setup("D4")
    m = P.PolygonD(4)
    phi = P.match_labels(walk, t, m)
    a = m.arc
    want = _key({a(3, 1): 1, a(4, 1): 1}, {a(1, 2): 1, a(2, 3): 1, a(2, 4): 1, ("tag", 2, 0): 1, ("tag", 2, 1): 1})
    assert want in _model_keys(extended_equations_family(walk.dtype), phi)


def test_b3_non_primitive_equations_are_rotation_orbits():
    walk, t = _setup("B3")
    m = P.PolygonB(4)
    phi = P.match_labels(walk, t, m)
    prim = {e.key() for e in primitive_equations(t)}
    keys = _model_keys([e for e in extended_equations_family(walk.dtype) if e.key() not in prim], phi)
    assert len(keys) == 22

    def rot(key):
        return frozenset(frozenset((m.rotate(lab), k) for lab, k in side) for side in key)

    sizes, seen = [], set()
    for key in keys:
        if key in seen:
            continue
        orbit, x = {key}, rot(key)
        while x not in orbit:
            assert x in keys
            orbit.add(x)
            x = rot(x)
        seen |= orbit
        sizes.append(len(orbit))
    assert sorted(sizes) == [2, 4, 4, 4, 4, 4]


def test_a_family_is_cross_ratio_pairs():
    walk, t = _setup("A3")
    m = P.PolygonA(6)
    phi = P.match_labels(walk, t, m)
    keys = _model_keys(extended_equations_family(walk.dtype), phi)
    assert len(keys) == 15
    for key in keys:
        sides = [dict(s) for s in key]
        for s in sides:
            assert all(k == 1 for k in s.values())


@pytest.mark.parametrize("name", ["A4", "B3", "C3", "D4", "G2", "F4"])
def test_extended_equations_verify(name):
    walk, t = _setup(name)
    eqs = extended_equations_universal(walk, t)
    try:
        eqs += extended_equations_family(walk.dtype)
    except NotImplementedError:
        pass
    assert all(c.ok for c in verify_all(dedupe(eqs), walk))


@pytest.mark.parametrize("name", ["A3", "A5", "B3", "C3", "D4", "D5", "G2", "F4", "E6"])
def test_local_equations_verify(name):
    walk, _ = _setup(name)
    eqs = local_equations(walk)
    assert len(eqs) == len(walk.pi)
    assert all(c.ok for c in verify_local(walk, eqs))


def test_local_a_type_skinny_quadrilaterals():
    walk, t = _setup("A4")
    m = P.PolygonA(7)
    phi = P.match_labels(walk, t, m)
    n = m.n
    labels = set(m.labels())
    for eq in local_equations(walk):
        a, b = (phi[g] for g in eq.left)
        assert P.chords_cross(a, b)
        pts = sorted(set(a) | set(b))
        # two opposite sides of the quadrilateral are polygon edges, the other two carry the right side
        sides = [(pts[k], pts[(k + 1) % 4]) for k in range(4)]
        edge = [(s[1] - s[0]) % n in (1, n - 1) for s in sides]
        pair = next(k for k in (0, 1) if edge[k] and edge[k + 2])
        others = {tuple(sorted(sides[k])) for k in (1 - pair, 3 - pair)}
        assert {phi[g] for g, _ in eq.right} == others & labels


def test_local_d_type_radius_relation():
    walk, t = _setup("D4")
    m = P.PolygonD(4)
    phi = P.match_labels(walk, t, m)
    shapes = set()
    for eq in local_equations(walk):
        left = sorted(phi[g] for g in eq.left)
        if all(x[0] == "tag" for x in left):
            right = [phi[g] for g, _ in eq.right]
            shapes.add((tuple(left), tuple(right)))
    assert shapes, "expected radius relations"
    for (a, b), right in shapes:
        assert a[2] != b[2] and (a[1] - b[1]) % 4 in (1, 3)
        assert len(right) == 1 and right[0][0] == "arc"


@pytest.mark.parametrize("name", ["A3", "B3", "C3", "D4", "G2"])
def test_zero_forces_one(name):
    walk, t = _setup(name)
    prim = {e.left[0][0]: e.right_map for e in primitive_equations(t)}
    for g in walk.pi:
        for w in walk.pi:
            if t(w, g):
                assert prim[w].get(g, 0) > 0


def test_verify_many_matches_serial_and_keeps_order():
    walk, t = _setup("D4")
    eqs = extended_equations_universal(walk, t)
    serial = verify_many(eqs, walk.dtype)
    parallel = verify_many(eqs, walk.dtype, jobs=2)
    assert [c.equation for c in serial] == [c.equation for c in parallel] == [str(e) for e in eqs]
    assert all(c.ok for c in parallel)


def test_unsupported_family():
    with pytest.raises(NotImplementedError):
        extended_equations_family(parse_type("F4"))
    with pytest.raises(NotImplementedError):
        extended_equations_family(parse_type("E6"))


def test_u_equation_validation_and_format():
    with pytest.raises(ValueError):
        UEquation.make({}, {})
    with pytest.raises(ValueError):
        UEquation.make({(0, 1): -1}, {(0, 2): 1})
    eq = UEquation.make({(0, 1): 1}, {(1, 2): 2, (0, 3): 1})
    assert str(eq) == "u(0,1) + u(0,3)*u(1,2)^2 = 1"
    assert eq.to_json() == {"left": {"(0,1)": 1}, "right": {"(0,3)": 1, "(1,2)": 2}}


@settings(max_examples=25, deadline=None)
@given(st.permutations(list(range(15))))
def test_dedupe_is_order_independent(perm):
    walk, t = _setup("A3")
    eqs = extended_equations_universal(walk, t)
    swapped = [UEquation.make(e.right_map, e.left_map) if i % 2 else e for i, e in enumerate(eqs)]
    shuffled = [swapped[i] for i in perm] + eqs[:3]
    assert [e.key() for e in dedupe(shuffled)] == [e.key() for e in dedupe(eqs)]


def test_f_table_covers_pi():
    walk, _ = _setup("G2")
    assert set(f_table(walk)) == set(walk.pi)
