import numpy as np
import pytest

from collective_stopping.coalitions import (RuleError, SamplingRegion,
                                            chairperson_rule, classify_players,
                                            collective_region, is_blocking,
                                            is_decisive, normalize_rule,
                                            player_envelopes, quota_rule,
                                            unanimity_rule, unilateral_rule)
from collective_stopping.grid import build_grid


GRID = build_grid(101, 1e-3, pinned=[0.2, 0.3, 0.4, 0.6, 0.7, 0.8])


def region(*intervals):
    return SamplingRegion.from_intervals(GRID, list(intervals))


def test_antichain_reduction():
    rule = normalize_rule([{1}, {1, 2}], n=2)
    assert rule.minimal_coalitions == (frozenset({1}),)


def test_quota_antichain():
    rule = quota_rule(2, 3)
    assert set(rule.minimal_coalitions) == {frozenset({1, 2}), frozenset({1, 3}),
                                            frozenset({2, 3})}


def test_chairperson_antichain():
    rule = chairperson_rule(2, 1, 3)
    assert set(rule.minimal_coalitions) == {frozenset({1, 2}), frozenset({1, 3})}


def test_empty_rule_rejected():
    with pytest.raises(RuleError):
        normalize_rule([], n=2)


def test_decisiveness():
    assert is_decisive(unanimity_rule(3), {1, 2, 3})
    assert not is_decisive(quota_rule(2, 3), {2})
    assert is_decisive(quota_rule(2, 3), {1, 3})


def test_decisiveness_monotone_in_family():
    smaller = quota_rule(3, 4)
    larger = quota_rule(2, 4)  # more decisive coalitions
    for s in ({1, 2, 3}, {2, 4}, {1, 4}, {2, 3, 4}):
        if is_decisive(smaller, s):
            assert is_decisive(larger, s)


def test_blocking_sets():
    rule = quota_rule(2, 3)
    assert is_blocking(rule, {1, 2})
    assert not is_blocking(rule, {1})


def test_collective_same_region_any_rule():
    r = region((0.3, 0.7))
    for rule in (unilateral_rule(3), unanimity_rule(3), quota_rule(2, 3)):
        assert collective_region(rule, [r, r, r]) == r


def test_collective_unilateral_intersects():
    rule = unilateral_rule(2)
    got = collective_region(rule, [region((0.2, 0.6)), region((0.4, 0.8))])
    assert got == region((0.4, 0.6))


def test_collective_unanimity_unions():
    rule = unanimity_rule(2)
    got = collective_region(rule, [region((0.2, 0.6)), region((0.4, 0.8))])
    assert got == region((0.2, 0.8))


def test_envelopes_two_player_unilateral():
    rule = unilateral_rule(2)
    outer, inner = player_envelopes(rule, 1, {2: region((0.3, 0.7))})
    assert outer == region((0.3, 0.7))
    assert inner.is_empty()


def test_envelopes_two_player_unanimity():
    rule = unanimity_rule(2)
    outer, inner = player_envelopes(rule, 1, {2: region((0.3, 0.7))})
    assert outer == SamplingRegion.full_interior(GRID)
    assert inner == region((0.3, 0.7))


def test_envelopes_quota_three_players():
    rule = quota_rule(2, 3)
    o2, o3 = region((0.3, 0.7)), region((0.4, 0.6))
    outer, inner = player_envelopes(rule, 1, {2: o2, 3: o3})
    assert outer == region((0.3, 0.7))  # union of the others
    assert inner == region((0.4, 0.6))  # intersection of the others


def test_inner_always_inside_outer():
    rng = np.random.default_rng(11)
    anchors = [0.2, 0.3, 0.4, 0.6, 0.7, 0.8]
    rules = [unilateral_rule(3), unanimity_rule(3), quota_rule(2, 3),
             chairperson_rule(2, 1, 3)]
    for _ in range(200):
        prof = {}
        for j in (1, 2, 3):
            lo, hi = sorted(rng.choice(anchors, size=2, replace=False))
            prof[j] = region((lo, hi))
        rule = rules[rng.integers(len(rules))]
        i = int(rng.integers(1, 4))
        others = {j: r for j, r in prof.items() if j != i}
        outer, inner = player_envelopes(rule, i, others, grid=GRID)
        assert inner.issubset(outer)


def test_classify_players():
    assert classify_players(unilateral_rule(2)) == ({1, 2}, set())
    assert classify_players(unanimity_rule(2)) == (set(), {1, 2})
    assert classify_players(quota_rule(2, 3)) == (set(), set())
    n_uni, n_una = classify_players(chairperson_rule(2, 1, 3))
    assert n_uni == set() and n_una == {1}


def test_region_roundtrip_and_set_ops():
    r = region((0.2, 0.4), (0.6, 0.8))
    assert SamplingRegion.from_intervals(GRID, r.intervals()) == r
    # overlapping intervals merge; abutting open intervals keep the shared
    # endpoint as a stopping point
    assert r.union(region((0.3, 0.7))) == region((0.2, 0.8))
    assert r.union(region((0.4, 0.6))) == region((0.2, 0.4), (0.4, 0.6), (0.6, 0.8))
    assert r.intersection(region((0.3, 0.7))) == region((0.3, 0.4), (0.6, 0.7))
    assert region((0.3, 0.4)).issubset(r)
    assert not r.issubset(region((0.3, 0.4)))


def test_union_never_shrinks_coalition_unions():
    # enlarging one member's region can only enlarge every union it enters
    rule = quota_rule(2, 3)
    prof = [region((0.3, 0.7)), region((0.4, 0.6)), region((0.2, 0.4))]
    base = collective_region(rule, prof)
    bigger = [region((0.2, 0.8)), prof[1], prof[2]]
    assert base.issubset(collective_region(rule, bigger))
