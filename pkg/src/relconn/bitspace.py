"""Bit-level engine for subsets of the n-dimensional hypercube.

A subset S of {0,1}^n is stored as a single Python int whose bit i is set
iff the assignment with index i belongs to S.  Index convention: bit j of
the index i (j = 0 is least significant) holds coordinate n - j, i.e. the
first coordinate is the most significant bit.  All graph operations treat
two indices as adjacent iff they differ in exactly one bit.
"""

from __future__ import annotations

from functools import lru_cache


@lru_cache(maxsize=None)
def full_mask(n: int) -> int:
    """All 2^n indices."""
    return (1 << (1 << n)) - 1


@lru_cache(maxsize=None)
def coord_mask(n: int, pos: int) -> int:
    """Indices whose bit `pos` is 1 (pos counted from the least significant bit)."""
    if not 0 <= pos < n:
        raise ValueError(f"bit position {pos} out of range for {n} coordinates")
    period = 1 << (pos + 1)
    block = ((1 << (1 << pos)) - 1) << (1 << pos)  # one period: low half 0s, high half 1s
    width = 1 << n
    mask = block
    length = period
    while length < width:
        mask |= mask << length
        length *= 2
    return mask & full_mask(n)


def neighbors(s: int, n: int) -> int:
    """Union of all single-bit flips of the members of s."""
    out = 0
    for pos in range(n):
        step = 1 << pos
        hi = coord_mask(n, pos)
        lo = full_mask(n) ^ hi
        out |= ((s & lo) << step) | ((s & hi) >> step)
    return out


def spread(seed: int, space: int, n: int) -> int:
    """Connected component(s) of `space` reachable from the seed set."""
    comp = seed & space
    while True:
        grown = comp | (neighbors(comp, n) & space)
        if grown == comp:
            return comp
        comp = grown


def component_masks(space: int, n: int) -> list[int]:
    """Connected components of `space`, ordered by smallest member index."""
    comps = []
    rest = space
    while rest:
        seed = rest & -rest
        comp = spread(seed, rest, n)
        comps.append(comp)
        rest ^= comp
    return comps


def bfs_levels(seed: int, space: int, n: int) -> list[int]:
    """Level sets of a breadth-first search from the seed set inside `space`."""
    levels = [seed & space]
    seen = levels[0]
    while True:
        frontier = neighbors(levels[-1], n) & space & ~seen
        if not frontier:
            return levels
        levels.append(frontier)
        seen |= frontier


def eccentricity(src_bit: int, space: int, n: int) -> int:
    """Greatest BFS distance from one vertex to its component."""
    return len(bfs_levels(src_bit, space, n)) - 1


def iter_bits(s: int):
    """Yield the set bit indices of s in ascending order."""
    while s:
        low = s & -s
        yield low.bit_length() - 1
        s ^= low


def index_of_tuple(bits: str) -> int:
    """Index of a coordinate tuple written as a bitstring, first coordinate first."""
    return int(bits, 2)


def tuple_of_index(idx: int, n: int) -> str:
    """Bitstring of an index, first coordinate as the most significant bit."""
    return format(idx, f"0{n}b")
