"""Partitions, their statistics, partial orders and bounded enumeration.

Partitions are plain tuples of positive integers in non-increasing order;
the empty tuple is the zero partition.  The canonical total order used by
every Gram-Schmidt flag in this package is graded lexicographic: sort by
weight first, then lexicographically on the parts.  It refines both the
containment order (which increases weight) and the dominance order (which
preserves it).
"""

from __future__ import annotations

from itertools import permutations
from math import comb
from typing import Iterable, Iterator, NamedTuple

Partition = tuple  # tuple[int, ...]


def as_partition(parts: Iterable[int]) -> Partition:
    """Validate and normalize an iterable into a partition tuple."""
    lam = tuple(int(x) for x in parts if int(x) != 0)
    if any(x < 0 for x in lam):
        raise ValueError(f"negative part in {lam}")
    if any(lam[i] < lam[i + 1] for i in range(len(lam) - 1)):
        raise ValueError(f"parts not non-increasing: {lam}")
    return lam


def weight(lam: Partition) -> int:
    return sum(lam)


def rank(lam: Partition) -> int:
    """Number of nonzero parts."""
    return len(lam)


def height(lam: Partition) -> int:
    """Largest part (0 for the zero partition)."""
    return lam[0] if lam else 0


def conjugate(lam: Partition) -> Partition:
    """Transpose of the Young diagram."""
    if not lam:
        return ()
    return tuple(sum(1 for x in lam if x >= j) for j in range(1, lam[0] + 1))


def nstat(lam: Partition) -> int:
    """The statistic n(lam) = sum (i-1) lam_i (rows counted from 1)."""
    return sum(i * x for i, x in enumerate(lam))


class PartitionStats(NamedTuple):
    conjugate: Partition
    weight: int
    nstat: int
    rank: int
    height: int


def stats(lam: Partition) -> PartitionStats:
    """All five basic statistics of a partition at once."""
    lam = as_partition(lam)
    return PartitionStats(conjugate(lam), weight(lam), nstat(lam), rank(lam), height(lam))


def leq_contain(lam: Partition, mu: Partition) -> bool:
    """Containment of Young diagrams: lam_i <= mu_i for all i."""
    if len(lam) > len(mu):
        return False
    return all(x <= y for x, y in zip(lam, mu))


def leq_dominance(lam: Partition, mu: Partition) -> bool:
    """Dominance: equal weights and partial sums of lam bounded by mu's."""
    if weight(lam) != weight(mu):
        return False
    acc_l = acc_m = 0
    for i in range(max(len(lam), len(mu))):
        acc_l += lam[i] if i < len(lam) else 0
        acc_m += mu[i] if i < len(mu) else 0
        if acc_l > acc_m:
            return False
    return True


def glex_key(lam: Partition):
    """Sort key for the graded lexicographic total order."""
    return (sum(lam), lam)


def partitions_of(w: int, max_parts: int | None = None, max_height: int | None = None) -> Iterator[Partition]:
    """All partitions of weight w with the given bounds, lexicographic order."""
    if w == 0:
        yield ()
        return
    cap = w if max_height is None else min(w, max_height)
    parts_cap = w if max_parts is None else max_parts
    if parts_cap <= 0 or cap <= 0:
        return

    def rec(remaining: int, largest: int, slots: int):
        if remaining == 0:
            yield ()
            return
        if slots == 0:
            return
        for first in range(min(remaining, largest), 0, -1):
            for rest in rec(remaining - first, first, slots - 1):
                yield (first,) + rest

    yield from rec(w, cap, parts_cap)


def enumerate_partitions(m: int, k: int) -> list:
    """All partitions with at most m parts, each part at most k, graded-lex.

    The count is binomial(m + k, m).
    """
    if m < 0 or k < 0:
        raise ValueError("m and k must be nonnegative")
    out = []
    for w in range(m * k + 1):
        out.extend(sorted(partitions_of(w, max_parts=m, max_height=k)))
    assert len(out) == comb(m + k, m)
    return out


def bar(lam: Partition, k: int) -> Partition:
    """Level truncation: cap every part at k - 1 (drop the k-th conjugate row)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return tuple(x for x in (min(p, k - 1) for p in lam) if x > 0)


def distinct_permutations(lam: Partition, m: int) -> Iterator[tuple]:
    """Distinct rearrangements of lam padded with zeros to length m."""
    if len(lam) > m:
        raise ValueError(f"{lam} has more than {m} parts")
    padded = tuple(lam) + (0,) * (m - len(lam))
    seen = set()
    for eta in permutations(padded):
        if eta not in seen:
            seen.add(eta)
            yield eta
