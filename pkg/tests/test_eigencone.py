import dataclasses
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from multcone import eigencone as ec
from multcone.root_system import CartanPoint, Weight, build_root_system

A1 = build_root_system("A", 1)
B2 = build_root_system("B", 2)


def pt(*coords):
    return CartanPoint(tuple(Fraction(c) for c in coords))


@pytest.fixture(scope="module")
def a1_n3():
    return ec.generate_inequalities(A1, 3)


def test_a1_counts():
    assert len(ec.generate_inequalities(A1, 3)) == 4
    assert len(ec.generate_inequalities(A1, 4)) == 8
    assert len(ec.generate_inequalities(A1, 5)) == 16


@pytest.mark.parametrize("n", [3, 4, 5])
def test_a1_odd_subset_shape(n):
    # each inequality flips an odd-size subset of factors to +1 and the
    # rest to -1, with right side (size-1)/2; all such sign patterns occur
    seen = set()
    for q in ec.generate_inequalities(A1, n):
        signs = tuple(w.coords[0] for w in q.lhs_weights)
        assert set(signs) <= {1, -1}
        plus = signs.count(1)
        assert plus % 2 == 1
        assert q.rhs == (plus - 1) // 2
        assert q.d == q.rhs
        seen.add(signs)
    assert len(seen) == 2 ** (n - 1)


def test_generation_deterministic(a1_n3):
    assert ec.generate_inequalities(A1, 3) == a1_n3


def test_membership_verdicts(a1_n3):
    v = ec.membership(A1, 3, [pt("1/2")] * 3, a1_n3)
    assert v == ec.MembershipVerdict("inside", (), ())
    v = ec.membership(A1, 3, [pt(1)] * 3, a1_n3)
    assert v.status == "outside"
    assert [(q.words, q.d) for q in v.violated] == [(((), (), ()), 1)]
    v = ec.membership(A1, 3, [pt(1), pt(1), pt(0)], a1_n3)
    assert v.status == "boundary"
    assert len(v.tight) == 3


def test_membership_validation(a1_n3):
    with pytest.raises(ValueError, match="expected 3 points, got 1"):
        ec.membership(A1, 3, [pt(0)], a1_n3)
    with pytest.raises(ValueError, match="point 1 is not in the fundamental"):
        ec.membership(A1, 3, [pt(2), pt(0), pt(0)], a1_n3)
    with pytest.raises(ValueError, match="has 2 coordinates"):
        ec.membership(A1, 3, [pt(0, 0), pt(0), pt(0)], a1_n3)


def test_slack_values(a1_n3):
    points = [pt("1/2")] * 3
    by_shape = {(q.words, q.d): q for q in a1_n3}
    assert by_shape[(((), (), ()), 1)].slack(A1, points) == Fraction(1, 4)
    assert by_shape[((((), (1,), (1,))), 0)].slack(A1, points) == \
        Fraction(1, 4)


def test_irredundancy_a1(a1_n3):
    rep = ec.irredundancy_check(A1, 3, a1_n3)
    assert len(rep.certificates) == 4
    assert all(c.certified for c in rep.certificates)
    assert all(c.method == "separating-point" for c in rep.certificates)
    for c in rep.certificates:
        # the witness is a flat coordinate vector violating its own
        # inequality and no other
        points = [CartanPoint((m,)) for m in c.witness]
        v = ec.membership(A1, 3, points, a1_n3)
        assert v.status == "outside"
        assert v.violated == (c.inequality,)


def test_irredundancy_detects_slack_inequality(a1_n3):
    loose = dataclasses.replace(a1_n3[-1], rhs=2)
    rep = ec.irredundancy_check(A1, 3, list(a1_n3) + [loose])
    by_q = {c.inequality: c for c in rep.certificates}
    assert not by_q[loose].certified
    assert by_q[loose].method == "dominated"
    # the genuine sum inequality stays in the pool and caps the optimum
    assert by_q[loose].optimum == 1
    assert all(c.certified for q, c in by_q.items() if q != loose)


def test_irredundancy_workers_match(a1_n3):
    seq = ec.irredundancy_check(A1, 3, a1_n3)
    par = ec.irredundancy_check(A1, 3, a1_n3, workers=2)
    assert seq == par


def test_small_n_warns(a1_n3):
    qs = ec.generate_inequalities(A1, 2)
    with pytest.warns(UserWarning, match="fewer than three factors"):
        ec.irredundancy_check(A1, 2, qs)


def test_distinctness(a1_n3):
    assert ec.distinctness_check(a1_n3).pairs == ()
    q = a1_n3[0]
    assert ec.distinctness_check([q, q]).pairs == ((0, 1),)
    doubled = dataclasses.replace(
        q,
        lhs_weights=tuple(Weight(tuple(2 * c for c in w.coords))
                          for w in q.lhs_weights),
        rhs=2 * q.rhs)
    assert ec.distinctness_check([q, doubled]).pairs == ((0, 1),)


def test_baseline_superset():
    key = lambda q: (q.parabolic, q.words, q.d)
    a1_base = {key(q) for q in ec.baseline_inequalities(A1, 3)}
    a1_def = {key(q) for q in ec.generate_inequalities(A1, 3)}
    assert a1_def == a1_base
    b2_base = {key(q) for q in ec.baseline_inequalities(B2, 3)}
    b2_def = {key(q) for q in ec.generate_inequalities(B2, 3)}
    assert b2_def < b2_base


def test_structure_table_cached():
    assert ec.structure_table(B2, 1) is ec.structure_table(B2, 1)


def test_inequality_json_round_trip(a1_n3):
    for q in a1_n3:
        obj = ec.inequality_to_obj(A1, 3, q)
        assert ec.inequality_from_obj(A1, obj) == q
    with pytest.raises(ValueError, match="different root system"):
        ec.inequality_from_obj(B2, ec.inequality_to_obj(A1, 3, a1_n3[0]))


def test_points_json_round_trip():
    points = [pt("1/3"), pt("2/3")]
    assert ec.points_from_obj(A1, ec.points_to_obj(points)) == points
    with pytest.raises(ValueError, match='"points" list'):
        ec.points_from_obj(A1, {"pts": []})
    with pytest.raises(ValueError, match="has 2 coordinates"):
        ec.points_from_obj(A1, {"points": [["1/3", "1/3"]]})
    with pytest.raises(ValueError, match="point 1"):
        ec.points_from_obj(A1, {"points": ["x"]})


RATIONAL = st.fractions(min_value=0, max_value=1, max_denominator=8)


@settings(max_examples=60, deadline=None)
@given(ms=st.tuples(*[RATIONAL] * 6), lam=RATIONAL)
def test_region_is_convex(ms, lam):
    qs = ec.generate_inequalities(A1, 3)
    p = [pt(m) for m in ms[:3]]
    q = [pt(m) for m in ms[3:]]
    vp = ec.membership(A1, 3, p, qs)
    vq = ec.membership(A1, 3, q, qs)
    if "outside" in (vp.status, vq.status):
        return
    mix = [CartanPoint((lam * a.coords[0] + (1 - lam) * b.coords[0],))
           for a, b in zip(p, q)]
    assert ec.membership(A1, 3, mix, qs).status != "outside"


@settings(max_examples=40, deadline=None)
@given(ms=st.tuples(*[RATIONAL] * 3), perm=st.permutations([0, 1, 2]))
def test_membership_symmetric_in_points(ms, perm):
    qs = ec.generate_inequalities(A1, 3)
    points = [pt(m) for m in ms]
    base = ec.membership(A1, 3, points, qs).status
    shuffled = [points[i] for i in perm]
    assert ec.membership(A1, 3, shuffled, qs).status == base
