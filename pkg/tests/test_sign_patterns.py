import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clusterconf.cluster_engine import ar_walk
from clusterconf.compatibility import compatibility_table
from clusterconf.dynkin import parse_type
from clusterconf.sign_patterns import (
    SignPattern,
    check_pattern,
    count_by_scan,
    count_sign_patterns,
    enumerate_sign_patterns,
    parity_constraints,
)
from clusterconf.u_system import UEquation, extended_equations_family, primitive_equations


def _system(name):
    walk = ar_walk(parse_type(name))
    return list(walk.pi), extended_equations_family(walk.dtype)


@pytest.mark.parametrize("name,count", [("A2", 12), ("A3", 60), ("C2", 16), ("B2", 16), ("G2", 25), ("C3", 120)])
def test_counts(name, count):
    labels, eqs = _system(name)
    assert count_sign_patterns(eqs, labels) == count


@pytest.mark.parametrize("name", ["A2", "A3", "B2", "C2", "G2", "A4", "D4", "B3", "C3"])
def test_search_matches_full_scan(name):
    labels, eqs = _system(name)
    assert count_sign_patterns(eqs, labels) == count_by_scan(eqs, labels)


@pytest.mark.parametrize("n", [2, 3])
def test_c_series_formula(n):
    from math import factorial

    labels, eqs = _system(f"C{n}")
    assert count_sign_patterns(eqs, labels) == 2 ** (n - 1) * (n + 2) * factorial(n)


def test_jobs_do_not_change_count():
    labels, eqs = _system("D4")
    assert count_sign_patterns(eqs, labels, jobs=2) == count_sign_patterns(eqs, labels) == 547


def test_all_plus_is_consistent_and_double_minus_is_not():
    labels, eqs = _system("A3")
    assert check_pattern(SignPattern(tuple(labels), frozenset()), eqs)
    eq = eqs[0]
    bad = SignPattern(tuple(labels), frozenset([eq.left[0][0], eq.right[0][0]]))
    # each side has an odd footprint in this equation only if its first label has odd exponent
    if eq.left[0][1] % 2 and eq.right[0][1] % 2 and len(eq.left) == len(eq.right) == 1:
        assert not check_pattern(bad, [eq])
    single = UEquation.make({labels[0]: 1}, {labels[1]: 1})
    assert not check_pattern(SignPattern(tuple(labels), frozenset(labels[:2])), [single])


def test_enumeration_agrees_with_checker():
    labels, eqs = _system("C2")
    found = list(enumerate_sign_patterns(eqs, labels))
    assert len(found) == 16 and len({str(p) for p in found}) == 16
    assert [str(p) for p in found] == sorted(str(p) for p in found)
    assert all(check_pattern(p, eqs) for p in found)
    every = [SignPattern.from_string(labels, format(v, "06b").replace("0", "+").replace("1", "-")) for v in range(64)]
    assert sum(check_pattern(p, eqs) for p in every) == 16


def test_even_exponent_sides_never_constrain():
    labels = [(0, 1), (0, 2), (1, 1)]
    eq = UEquation.make({(0, 1): 2}, {(0, 2): 1})
    assert parity_constraints([eq], labels) == []


@settings(max_examples=20, deadline=None)
@given(st.randoms(use_true_random=False))
def test_order_independence(rng):
    labels, eqs = _system("G2")
    base = count_sign_patterns(eqs, labels)
    eqs, labels = list(eqs), list(labels)
    rng.shuffle(eqs)
    rng.shuffle(labels)
    eqs = [UEquation.make(e.right_map, e.left_map) if rng.random() < 0.5 else e for e in eqs]
    assert count_sign_patterns(eqs, labels) == base


def test_from_string_round_trip_and_validation():
    labels = [(0, 1), (0, 2), (1, 1)]
    p = SignPattern.from_string(labels, "+-+")
    assert str(p) == "+-+" and p.sign((0, 2)) == -1 and p.sign((0, 1)) == 1
    with pytest.raises(ValueError):
        SignPattern.from_string(labels, "+-")
    with pytest.raises(ValueError):
        SignPattern.from_string(labels, "+x+")


def test_primitive_system_is_a_weaker_constraint():
    walk = ar_walk(parse_type("A3"))
    prim = primitive_equations(compatibility_table(walk))
    assert count_sign_patterns(prim, list(walk.pi)) >= 60
