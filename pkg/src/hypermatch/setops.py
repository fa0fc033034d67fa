"""Set algebra over ascending, duplicate-free integer sequences."""

from __future__ import annotations

import heapq
from bisect import bisect_left
from typing import Sequence


def merge_intersect(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Two-pointer intersection."""
    out = []
    i = j = 0
    na, nb = len(a), len(b)
    while i < na and j < nb:
        x, y = a[i], b[j]
        if x == y:
            out.append(x)
            i += 1
            j += 1
        elif x < y:
            i += 1
        else:
            j += 1
    return out


def gallop_intersect(small: Sequence[int], large: Sequence[int]) -> list[int]:
    """Intersection probing ``large`` by binary search from a moving lower bound.

    Cost is O(|small| log |large|), which wins when the sizes are skewed.
    """
    if len(small) > len(large):
        small, large = large, small
    out = []
    lo = 0
    n = len(large)
    for x in small:
        lo = bisect_left(large, x, lo)
        if lo == n:
            break
        if large[lo] == x:
            out.append(x)
            lo += 1
    return out


def intersect_all(lists: Sequence[Sequence[int]]) -> list[int]:
    """Intersect many sorted lists, smallest first."""
    if not lists:
        return []
    ordered = sorted(lists, key=len)
    acc = list(ordered[0])
    for other in ordered[1:]:
        if not acc:
            break
        if len(other) > 8 * len(acc):
            acc = gallop_intersect(acc, other)
        else:
            acc = merge_intersect(acc, other)
    return acc


def union_all(lists: Sequence[Sequence[int]]) -> list[int]:
    """k-way merge union without duplicates."""
    if len(lists) == 1:
        return list(lists[0])
    out: list[int] = []
    last = None
    for x in heapq.merge(*lists):
        if x != last:
            out.append(x)
            last = x
    return out
