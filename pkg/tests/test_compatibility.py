import pytest

from clusterconf import polygons as P
from clusterconf.cluster_engine import ar_walk, exchange_graph
from clusterconf.compatibility import compatibility_degree, compatibility_table, stratum
from clusterconf.dynkin import DynkinType, parse_type

TYPES = "A1 A2 A3 A4 A5 B2 B3 B4 C2 C3 C4 D4 D5 E6 F4 G2".split()


def _table(name):
    walk = ar_walk(parse_type(name))
    return walk, compatibility_table(walk)


@pytest.mark.parametrize("name", TYPES)
def test_zero_symmetry_and_diagonal(name):
    _, t = _table(name)
    for a in t.pi:
        assert t(a, a) == 0
        for b in t.pi:
            assert (t(a, b) == 0) == (t(b, a) == 0)
            assert t(a, b) >= 0


@pytest.mark.parametrize("name", TYPES)
def test_tau_invariance(name):
    walk, t = _table(name)
    tau = walk.tau
    assert all(t(tau[a], tau[b]) == t(a, b) for a in t.pi for b in t.pi)


@pytest.mark.parametrize("name", ["A3", "A4", "D4", "D5", "E6"])
def test_symmetric_in_simply_laced_types(name):
    _, t = _table(name)
    assert all(t(a, b) == t(b, a) for a in t.pi for b in t.pi)


MODELS = {
    "A3": lambda: P.PolygonA(6),
    "A4": lambda: P.PolygonA(7),
    "A5": lambda: P.PolygonA(8),
    "B2": lambda: P.PolygonB(3),
    "B3": lambda: P.PolygonB(4),
    "C2": lambda: P.PolygonC(3),
    "C3": lambda: P.PolygonC(4),
    "D4": lambda: P.PolygonD(4),
    "D5": lambda: P.PolygonD(5),
}


@pytest.mark.parametrize("name", sorted(MODELS))
def test_polygon_oracle_agrees(name):
    # the dictionary is fitted on zero patterns only, so the values are an independent check
    walk, t = _table(name)
    model = MODELS[name]()
    phi = P.match_labels(walk, t, model)
    assert all(t(a, b) == model.degree(phi[a], phi[b]) for a in t.pi for b in t.pi)


def test_c2_asymmetry_direction():
    walk, t = _table("C2")
    m = P.PolygonC(3)
    inv = {v: k for k, v in P.match_labels(walk, t, m).items()}
    a, b = inv[m.bracket("1", "1'")], inv[m.bracket("2", "3'")]
    assert t(a, b) == 1 and t(b, a) == 2


def test_b3_multiplicity_two():
    walk, t = _table("B3")
    m = P.PolygonB(4)
    inv = {v: k for k, v in P.match_labels(walk, t, m).items()}
    assert t(inv[m.bracket("4", "4'")], inv[m.bracket("1", "3'")]) == 2


def test_d4_second_equation_exponents():
    walk, t = _table("D4")
    m = P.PolygonD(4)
    inv = {v: k for k, v in P.match_labels(walk, t, m).items()}
    gamma = inv[m.arc(1, 3)]
    support = {w: t(w, gamma) for w in t.pi if t(w, gamma)}
    want = [("tag", 4, 0), ("tag", 4, 1), m.arc(4, 1), m.arc(4, 2), m.arc(2, 4), m.arc(3, 4)]
    assert support == {inv[x]: 1 for x in want}


def test_a_type_crossing_rule():
    m = P.PolygonA(6)
    assert m.degree((1, 3), (2, 4)) == 1
    assert m.degree((1, 3), (3, 5)) == 0
    assert m.degree((1, 4), (1, 3)) == 0


def test_pointwise_degree_matches_table():
    walk, t = _table("B3")
    for a in walk.pi[:4]:
        for b in walk.pi:
            assert compatibility_degree(a, b, walk) == t(a, b)


def test_exchangeable_pairs_match_exchange_graph():
    for name in ("A3", "B3", "C3", "D4", "G2"):
        walk, t = _table(name)
        assert t.exchangeable_pairs() == set(exchange_graph(walk).relations)


def test_strata():
    walk, t = _table("D4")
    center = next(i for i in range(1, 5) if sum(1 for e in walk.dtype.edges() if i in e) == 3)
    s = stratum((0, center), walk, t)
    assert s.factors == [DynkinType("A", 1)] * 3
    walk1, t1 = _table("A1")
    assert stratum((0, 1), walk1, t1).factors == []


@pytest.mark.parametrize("name", ["A3", "A4", "B3", "C3", "D4", "D5", "F4", "G2", "E6"])
def test_stratum_sizes_add_up(name):
    walk, t = _table(name)
    for g in walk.pi:
        s = stratum(g, walk, t)
        assert len(s.factors) <= 3
        assert len(s.compatible_set) == sum(len(ar_walk(f).pi) for f in s.factors)


def test_csv_shape():
    _, t = _table("C2")
    lines = t.to_csv().splitlines()
    assert len(lines) == 7 and lines[0].startswith("omega\\gamma,(0,1)")
