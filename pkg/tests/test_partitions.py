from fractions import Fraction as F
from math import comb, perm

import pytest
from hypothesis import given
from hypothesis import strategies as st

from composite_bethe.errors import RangeError
from composite_bethe.partitions import all_partitions_2, partitions_with_cardinality, single_picks, singleton_partitions
from composite_bethe.ratfun import ParamSet

small_sets = st.lists(st.fractions(min_value=-9, max_value=9, max_denominator=5), unique=True, max_size=5).map(
    lambda xs: ParamSet.of(xs, "u"))


@given(small_sets)
def test_all_partitions_cover_the_set(S):
    parts = list(all_partitions_2(S))
    assert len(parts) == 2 ** len(S)
    for p in parts:
        assert sorted(p.part_I.elems + p.part_II.elems) == sorted(S.elems)
    assert len({p.part_I.elems for p in parts}) == len(parts), "every subset appears once"


@given(small_sets, st.integers(min_value=0, max_value=5))
def test_cardinality_counts(S, n):
    if n > len(S):
        with pytest.raises(RangeError):
            list(partitions_with_cardinality(S, n))
        return
    parts = list(partitions_with_cardinality(S, n))
    assert len(parts) == comb(len(S), n)
    assert all(len(p.part_I) == n for p in parts)


@given(small_sets, st.integers(min_value=0, max_value=3))
def test_singleton_counts(S, k):
    if k > len(S):
        with pytest.raises(RangeError):
            list(singleton_partitions(S, k))
        return
    parts = list(singleton_partitions(S, k))
    assert len(parts) == perm(len(S), k)
    for p in parts:
        assert len(p.rest) == len(S) - k
        assert set(p.singletons).isdisjoint(p.rest.elems)


def test_canonical_order():
    S = ParamSet.of([F(1), F(2), F(3)], "v")
    first = next(all_partitions_2(S))
    assert first.part_I.elems == () and first.part_II.elems == S.elems
    assert [p.part_I.elems for p in partitions_with_cardinality(S, 2)] == [(1, 2), (1, 3), (2, 3)]
    assert [p.singletons for p in singleton_partitions(S, 1)] == [(1,), (2,), (3,)]


def test_subsets_keep_source_order():
    S = ParamSet.of([F(5), F(-1), F(2)], "u")
    p = list(partitions_with_cardinality(S, 2))[1]
    assert p.part_I.elems == (5, 2)
    assert p.part_II.elems == (-1,)
    assert p.part_I.label == "u"


def test_negative_cardinality():
    with pytest.raises(RangeError):
        list(partitions_with_cardinality(ParamSet(), -1))


def test_single_picks():
    assert list(single_picks(ParamSet())) == []
    S = ParamSet.of([F(1), F(2), F(3)], "v")
    picks = list(single_picks(S))
    assert [x for x, _ in picks] == [1, 2, 3]
    assert picks[1][1].elems == (1, 3)
    with pytest.raises(RangeError):
        list(singleton_partitions(ParamSet(), 1))
