"""Ordered set partitions over which every sum runs.

Subsets keep the source order and the iteration order is canonical, so a
failing term can be replayed exactly.
"""

from __future__ import annotations
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import Iterator, Tuple

from .errors import RangeError
from .ratfun import ParamSet


@dataclass(frozen=True)
class Partition2:
    part_I: ParamSet
    part_II: ParamSet


@dataclass(frozen=True)
class PartitionWithSingletons:
    singletons: Tuple[Fraction, ...]
    rest: ParamSet


def _pick(S: ParamSet, chosen) -> Partition2:
    chosen = set(chosen)
    part_I = tuple(x for k, x in enumerate(S.elems) if k in chosen)
    part_II = tuple(x for k, x in enumerate(S.elems) if k not in chosen)
    return Partition2(ParamSet(part_I, S.label), ParamSet(part_II, S.label))


def all_partitions_2(S: ParamSet) -> Iterator[Partition2]:
    n = len(S)
    for mask in range(1 << n):
        yield _pick(S, (k for k in range(n) if mask >> k & 1))


def partitions_with_cardinality(S: ParamSet, n: int) -> Iterator[Partition2]:
    if n < 0 or n > len(S):
        raise RangeError(f"cardinality {n} out of range for a set of size {len(S)}")
    for chosen in combinations(range(len(S)), n):
        yield _pick(S, chosen)


def singleton_partitions(S: ParamSet, k: int) -> Iterator[PartitionWithSingletons]:
    if k < 0 or k > len(S):
        raise RangeError(f"cannot pick {k} singletons from a set of size {len(S)}")
    for picks in permutations(range(len(S)), k):
        singles = tuple(S.elems[p] for p in picks)
        rest = tuple(x for i, x in enumerate(S.elems) if i not in picks)
        yield PartitionWithSingletons(singles, ParamSet(rest, S.label))


def single_picks(S: ParamSet) -> Iterator[Tuple[Fraction, ParamSet]]:
    """Each element of S with the rest; nothing for an empty S."""
    if not len(S):
        return
    for p in singleton_partitions(S, 1):
        yield p.singletons[0], p.rest
