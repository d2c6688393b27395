"""Edge types of a d-partite k-uniform hypergraph and their exchange lattice.

An edge type is an ordered d-tuple of non-negative integers summing to k:
coordinate i counts the edge's vertices in part i.  Two types are adjacent
when one is obtained from the other by moving a single vertex between parts
(L1 distance exactly 2).  The canonical enumeration order is lexicographically
descending, so (k, 0, ..., 0) comes first and (0, ..., 0, k) last.
"""

from __future__ import annotations

from math import comb

TypeTuple = tuple[int, ...]


class ParameterError(ValueError):
    """A precondition on (k, ell, d) or on an argument's shape is violated."""


class DataError(ValueError):
    """Input data (edges, partitions, files) is malformed or inconsistent."""


class CapacityError(RuntimeError):
    """An exact computation would exceed its configured state cap."""


def enumerate_types(k: int, d: int) -> list[TypeTuple]:
    """All d-tuples of non-negative integers summing to k, lex descending."""
    if d < 1 or k < 0:
        raise ParameterError(f"need d >= 1 and k >= 0, got k={k}, d={d}")

    def gen(total: int, parts: int):
        if parts == 1:
            yield (total,)
            return
        for first in range(total, -1, -1):
            for rest in gen(total - first, parts - 1):
                yield (first,) + rest

    out = list(gen(k, d))
    assert len(out) == comb(k + d - 1, d - 1)
    return out


def _check_pair(x: TypeTuple, y: TypeTuple) -> None:
    if len(x) != len(y):
        raise ParameterError(f"mixed dimensions: {x} vs {y}")
    if sum(x) != sum(y):
        raise ParameterError(f"mixed levels: {x} vs {y}")


def are_adjacent(x: TypeTuple, y: TypeTuple) -> bool:
    """True when y = x - e_i + e_j for some i != j."""
    _check_pair(x, y)
    return sum(abs(a - b) for a, b in zip(x, y)) == 2


def neighbors(x: TypeTuple) -> list[TypeTuple]:
    """All types adjacent to x, i.e. x - e_i + e_j over i != j with x_i > 0."""
    d = len(x)
    out = []
    for i in range(d):
        if x[i] == 0:
            continue
        for j in range(d):
            if i == j:
                continue
            y = list(x)
            y[i] -= 1
            y[j] += 1
            out.append(tuple(y))
    return out


def connected_components(types) -> list[frozenset[TypeTuple]]:
    """Components of the adjacency graph induced on the given type set.

    Two types are adjacent exactly when they share a common "drop"
    x - e_i, so components are found by unioning over drop buckets
    instead of a pairwise scan.  Components are ordered by their first
    member under the enumeration order (lex descending), so the output
    is deterministic.
    """
    pool = set(types)
    if pool:
        d = len(next(iter(pool)))
        lvl = sum(next(iter(pool)))
        for t in pool:
            if len(t) != d or sum(t) != lvl or min(t) < 0:
                raise ParameterError(f"type {t} not in the lattice of the others")
    parent: dict[TypeTuple, TypeTuple] = {t: t for t in pool}

    def find(t: TypeTuple) -> TypeTuple:
        root = t
        while parent[root] != root:
            root = parent[root]
        while parent[t] != root:
            parent[t], t = root, parent[t]
        return root

    buckets: dict[TypeTuple, TypeTuple] = {}
    for t in pool:
        for i, ti in enumerate(t):
            if ti:
                drop = t[:i] + (ti - 1,) + t[i + 1:]
                other = buckets.setdefault(drop, t)
                if other is not t:
                    parent[find(other)] = find(t)
    groups: dict[TypeTuple, set[TypeTuple]] = {}
    for t in pool:
        groups.setdefault(find(t), set()).add(t)
    return [
        frozenset(comp)
        for comp in sorted(groups.values(), key=max, reverse=True)
    ]


def edge_type(edge, partition: dict[int, int], d: int) -> TypeTuple:
    """Count vector of an edge under a vertex -> part labelling (parts 1..d)."""
    counts = [0] * d
    for v in edge:
        try:
            lab = partition[v]
        except KeyError:
            raise DataError(f"vertex {v} has no part label") from None
        if not 1 <= lab <= d:
            raise DataError(f"vertex {v} has part label {lab} outside 1..{d}")
        counts[lab - 1] += 1
    return tuple(counts)
