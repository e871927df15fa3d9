import itertools

import pytest

from schottky_pants.cover import (
    LiftOutcome,
    UnbalancedWord,
    all_balanced_words,
    intersection_measure,
    minimal_disjoint_sheets,
    minimal_region_sheets,
    region_separation_ok,
    separating_sheets_loops,
    separating_sheets_regions,
    simulate_lift,
    twist_normalize,
)


def test_measure_examples():
    assert intersection_measure([]) == 0
    assert intersection_measure([1, -1]) == 1
    assert intersection_measure([1, 1, -1, -1]) == 2
    assert intersection_measure([1, -1, 1, -1]) == 1


def test_measure_unbalanced():
    with pytest.raises(UnbalancedWord):
        intersection_measure([1, 1])


def test_measure_matches_exhaustive_interval_search():
    for word in all_balanced_words(8):
        best = 0
        for i in range(len(word)):
            for j in range(i, len(word) + 1):
                best = max(best, abs(sum(word[i:j])))
        assert intersection_measure(word) == best


def test_measure_cyclic_invariance():
    for word in all_balanced_words(8):
        for r in range(len(word)):
            rotated = word[r:] + word[:r]
            assert intersection_measure(rotated) == intersection_measure(word)


def test_simulate_documented_examples():
    assert simulate_lift([1, -1], 3, 2).disjoint
    out = simulate_lift([1, -1], 1, 0)
    assert not out.disjoint
    assert out.collision_step == 1


def test_simulate_unclosed_walk():
    out = simulate_lift([1, 1, -1], 5, 2)
    assert not out.disjoint
    assert not out.closed


def test_loop_separation_trivial():
    assert separating_sheets_loops([]) == 1
    assert separating_sheets_loops([1, -1]) == 3
    assert separating_sheets_loops([1, 1, -1, -1]) == 5


def test_loop_separation_property_sweep():
    # every balanced word of length <= 10 lifts disjointly on 2n+1 sheets
    # starting from the middle sheet
    for word in all_balanced_words(10):
        n = intersection_measure(word)
        assert simulate_lift(word, 2 * n + 1, n + 1).disjoint


def test_minimal_sheets_never_exceed_bound():
    for word in all_balanced_words(10):
        n = intersection_measure(word)
        minimal = minimal_disjoint_sheets(word)
        assert minimal is not None
        assert minimal <= 2 * n + 1


def test_region_separation_trivial():
    assert separating_sheets_regions([]) == 4
    assert minimal_region_sheets([]) == 3  # the bound is not tight here
    assert separating_sheets_regions([1, -1]) == 6


def test_region_separation_sweep():
    for word in all_balanced_words(10):
        n = intersection_measure(word)
        assert region_separation_ok(word, 2 * n + 4, n + 2)


def test_minimal_region_sheets_never_exceed_bound():
    for word in all_balanced_words(8):
        n = intersection_measure(word)
        minimal = minimal_region_sheets(word)
        assert minimal is not None
        assert minimal <= 2 * n + 4


def test_twist_normalize():
    m, balanced = twist_normalize([1, 1, -1, 1])
    assert m == -2
    assert sum(balanced) == 0
    assert balanced[:4] == (1, 1, -1, 1)
    m2, balanced2 = twist_normalize([1, -1])
    assert m2 == 0 and balanced2 == (1, -1)
    # the balanced word always admits disjoint lifts
    separating_sheets_loops(balanced)
