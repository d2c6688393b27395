"""Blow-up hypergraphs, codegree, and exact tight-cycle detection.

Detection runs at two levels.  The label level works on part labels only:
a cycle certificate is a cyclic label sequence whose k-windows all have
count vectors in the family (the minus variant allows one bad window, fixed
by rotation to be window 1).  The vertex level works on a concrete
hypergraph through its consecution digraph, whose nodes are ordered
(k-1)-tuples of distinct vertices and whose arcs append one vertex forming
an edge.  Both levels share one certificate validator.

Label-level search is exact per adjacency component of the family's types:
a sliding-window counting identity excludes components outright whenever
some index set has constant window sum v with k not dividing ell*v
(resp. ell*v != 0, +-1 mod k for the minus variant when gcd(k, ell) = 1);
singleton components without an exclusion yield an explicit gcd-periodic
certificate; anything else falls to a bounded digraph search.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations
from math import comb, gcd
from typing import Callable, Iterable, Optional

import numpy as np

from .family import TypeFamily, index_sets
from .lattice import (
    CapacityError,
    DataError,
    ParameterError,
    TypeTuple,
    connected_components,
    edge_type,
    enumerate_types,
)

DEFAULT_STATE_CAP = 5000
_MATERIALIZE_LIMIT = 500_000


# ---------------------------------------------------------------------------
# hypergraphs


class Hypergraph:
    """k-uniform hypergraph on vertices 1..n.

    Edges are stored as sorted tuples.  A blow-up may defer materializing
    its edge set (edges=None) and answer membership through its family and
    partition instead; operations that truly need the edge list raise
    CapacityError in that case.
    """

    def __init__(
        self,
        n: int,
        k: int,
        edges: Optional[Iterable[tuple[int, ...]]] = None,
        partition: Optional[dict[int, int]] = None,
        family: Optional[TypeFamily] = None,
    ):
        if n < 1 or k < 2:
            raise ParameterError(f"need n >= 1, k >= 2, got n={n}, k={k}")
        self.n = n
        self.k = k
        self.partition = dict(partition) if partition else None
        self.family = family
        if edges is None and family is None:
            edges = []
        if edges is not None:
            norm = set()
            for e in edges:
                t = tuple(sorted(e))
                if len(t) != k or len(set(t)) != k:
                    raise DataError(f"edge {e} is not {k} distinct vertices")
                if t[0] < 1 or t[-1] > n:
                    raise DataError(f"edge {e} leaves 1..{n}")
                norm.add(t)
            self.edges: Optional[frozenset[tuple[int, ...]]] = frozenset(norm)
        else:
            self.edges = None

    def is_edge(self, vertices) -> bool:
        vs = tuple(sorted(vertices))
        if len(vs) != self.k or len(set(vs)) != self.k:
            return False
        if self.edges is not None:
            return vs in self.edges
        assert self.family is not None and self.partition is not None
        return edge_type(vs, self.partition, self.family.d) in self.family.types

    def edge_list(self) -> list[tuple[int, ...]]:
        if self.edges is None:
            raise CapacityError("edge set was not materialized for this blow-up")
        return sorted(self.edges)

    @property
    def num_edges(self) -> int:
        return len(self.edge_list())


def complete_hypergraph(n: int, k: int) -> Hypergraph:
    return Hypergraph(n, k, edges=combinations(range(1, n + 1), k))


def balanced_sizes(n: int, d: int) -> tuple[int, ...]:
    """Part sizes as equal as possible; the first n mod d parts get the extra."""
    base, extra = divmod(n, d)
    return tuple(base + 1 if i < extra else base for i in range(d))


def blow_up(
    fam: TypeFamily,
    part_sizes,
    materialize: Optional[bool] = None,
) -> Hypergraph:
    """Hypergraph whose edges are exactly the k-sets with type in the family.

    Parts are consecutive vertex ranges: part 1 is 1..s_1, and so on.
    """
    sizes = tuple(part_sizes)
    if len(sizes) != fam.d or any(s < 0 for s in sizes):
        raise ParameterError(f"part sizes {sizes} do not fit d={fam.d}")
    n = sum(sizes)
    if n < fam.k:
        raise ParameterError(f"only {n} vertices for k={fam.k}")
    partition = {}
    v = 1
    for i, s in enumerate(sizes, start=1):
        for _ in range(s):
            partition[v] = i
            v += 1
    if materialize is None:
        materialize = comb(n, fam.k) <= _MATERIALIZE_LIMIT
    if not materialize:
        return Hypergraph(n, fam.k, edges=None, partition=partition, family=fam)
    edges = [
        e
        for e in combinations(range(1, n + 1), fam.k)
        if edge_type(e, partition, fam.d) in fam.types
    ]
    return Hypergraph(n, fam.k, edges=edges, partition=partition, family=fam)


def min_codegree(H: Hypergraph) -> tuple[int, tuple[int, ...]]:
    """Minimum over (k-1)-sets S of |{v : S + v is an edge}|, with a witness S.

    For blow-ups the codegree of S depends only on S's count vector, so the
    minimum is taken over (k-1)-level types and a concrete witness is built
    from the first vertices of each part.
    """
    k = H.k
    if H.family is not None and H.partition is not None:
        fam = H.family
        sizes = [0] * fam.d
        first: dict[int, list[int]] = {i: [] for i in range(1, fam.d + 1)}
        for v in sorted(H.partition):
            sizes[H.partition[v] - 1] += 1
            first[H.partition[v]].append(v)
        best = None
        for y in enumerate_types(k - 1, fam.d):
            if any(y[i] > sizes[i] for i in range(fam.d)):
                continue
            deg = 0
            for j in range(fam.d):
                bumped = y[:j] + (y[j] + 1,) + y[j + 1:]
                if bumped in fam.types:
                    deg += sizes[j] - y[j]
            if best is None or deg < best[0]:
                witness = []
                for i in range(1, fam.d + 1):
                    witness.extend(first[i][: y[i - 1]])
                best = (deg, tuple(sorted(witness)))
        assert best is not None
        return best
    edges = H.edge_list()
    edge_set = set(edges)
    best = None
    for S in combinations(range(1, H.n + 1), k - 1):
        sset = set(S)
        deg = sum(
            1
            for v in range(1, H.n + 1)
            if v not in sset and tuple(sorted(S + (v,))) in edge_set
        )
        if best is None or deg < best[0]:
            best = (deg, S)
    assert best is not None
    return best


# ---------------------------------------------------------------------------
# certificates and the shared validator


@dataclass(frozen=True)
class WalkCertificate:
    kind: str  # "open-walk" | "cycle" | "cycle-minus"
    sequence: tuple[int, ...]
    missing_window: Optional[int] = None  # 1-based, cycle-minus only

    def __post_init__(self):
        if self.kind not in ("open-walk", "cycle", "cycle-minus"):
            raise DataError(f"unknown certificate kind {self.kind!r}")
        if self.kind == "cycle-minus" and self.missing_window is None:
            raise DataError("cycle-minus certificate needs its missing window index")

    @property
    def length(self) -> int:
        return len(self.sequence)


def _windows(cert: WalkCertificate, k: int):
    """(index, window) pairs the certificate must satisfy."""
    seq = cert.sequence
    if cert.kind == "open-walk":
        if len(seq) < k:
            raise DataError(f"open walk shorter than k={k}")
        for i in range(len(seq) - k + 1):
            yield i + 1, seq[i : i + k]
    else:
        if len(seq) <= k:
            raise DataError(f"cycle of length {len(seq)} not longer than k={k}")
        ext = seq + seq[: k - 1]
        for i in range(len(seq)):
            if cert.kind == "cycle-minus" and i + 1 == cert.missing_window:
                continue
            yield i + 1, ext[i : i + k]


def validate_certificate(
    cert: WalkCertificate,
    k: int,
    window_ok: Callable[[tuple[int, ...]], bool],
    distinct: bool,
) -> bool:
    """Single source of truth for accepting walk/cycle certificates.

    window_ok receives each required k-window; vertex-level callers set
    distinct=True so windows must also consist of k distinct symbols.
    """
    for _, w in _windows(cert, k):
        if distinct and len(set(w)) != k:
            return False
        if not window_ok(w):
            return False
    return True


def validate_vertex_certificate(cert: WalkCertificate, H: Hypergraph) -> bool:
    return validate_certificate(cert, H.k, H.is_edge, distinct=True)


def validate_label_certificate(cert: WalkCertificate, fam: TypeFamily) -> bool:
    def ok(w):
        counts = [0] * fam.d
        for lab in w:
            if not 1 <= lab <= fam.d:
                return False
            counts[lab - 1] += 1
        return tuple(counts) in fam.types

    return validate_certificate(cert, fam.k, ok, distinct=False)


# ---------------------------------------------------------------------------
# label-level detection


def _component_exclusion(comp, d: int, k: int, ell: int, minus: bool) -> bool:
    """True when the counting identity rules out any (minus-)cycle whose
    in-family windows all lie in this component.

    If sum_{i in I} x_i = v on the component then summing window sums around
    the cycle gives k | ell*v; with one free window the defect is 0 when
    g = gcd(k, ell) > 1 (the g-spaced subsequences force the free window's
    sum to v as well) and at most 1 in absolute value when g = 1.
    """
    members = list(comp)
    g = gcd(k, ell)
    for idx in index_sets(d):
        sums = {sum(x[i - 1] for i in idx) for x in members}
        if len(sums) != 1:
            continue
        v = sums.pop()
        r = (ell * v) % k
        if not minus:
            if r != 0:
                return True
        else:
            if g > 1:
                if r != 0:
                    return True
            else:
                if r not in (0, 1, k - 1):
                    return True
    return False


def _multiset_arrangements(counts: TypeTuple) -> int:
    total = sum(counts)
    out = 1
    rem = total
    for c in counts:
        out *= comb(rem, c)
        rem -= c
    return out


def _component_states(comp, d: int, k: int, cap: int) -> list[tuple[int, ...]]:
    """Ordered (k-1)-label-tuples whose count vector is a member minus one."""
    window_counts = set()
    for t in comp:
        for j in range(d):
            if t[j] > 0:
                window_counts.add(t[:j] + (t[j] - 1,) + t[j + 1:])
    total = sum(_multiset_arrangements(c) for c in window_counts)
    if total > cap:
        raise CapacityError(
            f"{total} label states exceed the cap of {cap}; no counting "
            f"exclusion applies to this component"
        )
    states = set()
    for c in window_counts:
        symbols = []
        for i in range(1, d + 1):
            symbols.extend([i] * c[i - 1])
        states.update(permutations(symbols))
    return sorted(states)


def _bool_power(A: np.ndarray, e: int) -> np.ndarray:
    result = None
    sq = A
    while e:
        if e & 1:
            result = sq if result is None else _bool_mul(result, sq)
        e >>= 1
        if e:
            sq = _bool_mul(sq, sq)
    assert result is not None
    return result


def _bool_mul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return (A.astype(np.float32) @ B.astype(np.float32)) > 0


def _exact_path(adj_out, n_states, length, start, end):
    """A path of exactly `length` arcs from start to end, via layered
    reachability; returns the state index sequence or None."""
    layers = [np.zeros(n_states, dtype=bool)]
    layers[0][start] = True
    for _ in range(length):
        cur = layers[-1]
        nxt = np.zeros(n_states, dtype=bool)
        for s in np.nonzero(cur)[0]:
            for t in adj_out[s]:
                nxt[t] = True
        layers.append(nxt)
    if not layers[length][end]:
        return None
    path = [end]
    cur = end
    for step in range(length - 1, -1, -1):
        prev = None
        for s in np.nonzero(layers[step])[0]:
            if cur in adj_out[s]:
                prev = int(s)
                break
        assert prev is not None
        path.append(prev)
        cur = prev
    return path[::-1]


class _LabelDigraph:
    def __init__(self, comp, d: int, k: int, cap: int):
        self.states = _component_states(comp, d, k, cap)
        self.index = {s: i for i, s in enumerate(self.states)}
        self.comp = set(comp)
        self.d = d
        n = len(self.states)
        self.adj_out: list[list[int]] = [[] for _ in range(n)]
        self.A = np.zeros((n, n), dtype=bool)
        for i, s in enumerate(self.states):
            base = [0] * d
            for lab in s:
                base[lab - 1] += 1
            for lab in range(1, d + 1):
                base[lab - 1] += 1
                if tuple(base) in self.comp:
                    tgt = self.index.get(s[1:] + (lab,))
                    if tgt is not None:
                        self.adj_out[i].append(tgt)
                        self.A[i, tgt] = True
                base[lab - 1] -= 1


def _component_label_cycle(comp, d, k, ell, cap) -> Optional[WalkCertificate]:
    if _component_exclusion(comp, d, k, ell, minus=False):
        return None
    g = gcd(k, ell)
    q = k // g
    if len(comp) == 1:
        # no exclusion means every coordinate is divisible by q (take I={i});
        # a g-periodic sequence with one q-th of the type per period works
        (x,) = comp
        assert all(c % q == 0 for c in x)
        block = []
        for i in range(1, d + 1):
            block.extend([i] * (x[i - 1] // q))
        cert = WalkCertificate("cycle", tuple(block * (ell // g)))
        return cert
    dig = _LabelDigraph(comp, d, k, cap)
    n = len(dig.states)
    if n == 0:
        return None
    P = _bool_power(dig.A, ell)
    diag = np.nonzero(np.diagonal(P))[0]
    if diag.size == 0:
        return None
    start = int(diag[0])
    path = _exact_path(dig.adj_out, n, ell, start, start)
    assert path is not None
    seq = tuple(dig.states[s][0] for s in path[:ell])
    return WalkCertificate("cycle", seq)


def _component_label_minus(comp, d, k, ell, cap) -> Optional[WalkCertificate]:
    if _component_exclusion(comp, d, k, ell, minus=True):
        return None
    dig = _LabelDigraph(comp, d, k, cap)
    n = len(dig.states)
    if n == 0:
        return None
    P = _bool_power(dig.A, ell - 1)
    for i1, z1 in enumerate(dig.states):
        for lab in range(1, d + 1):
            i2 = dig.index.get(z1[1:] + (lab,))
            if i2 is not None and P[i2, i1]:
                path = _exact_path(dig.adj_out, n, ell - 1, i2, i1)
                assert path is not None
                # path carries states z_2 .. z_ell, z_1; labels w_i = head(z_i)
                seq = (z1[0],) + tuple(dig.states[s][0] for s in path[:-1])
                return WalkCertificate("cycle-minus", seq, missing_window=1)
    return None


_COMPONENTS_CACHE: dict[frozenset, list] = {}


def _components_of(types: frozenset):
    if types not in _COMPONENTS_CACHE:
        if len(_COMPONENTS_CACHE) >= 64:
            _COMPONENTS_CACHE.clear()
        _COMPONENTS_CACHE[types] = connected_components(types)
    return _COMPONENTS_CACHE[types]


def _label_detect(fam: TypeFamily, ell: int, minus: bool, cap: int):
    if ell <= fam.k:
        raise ParameterError(f"need ell > k, got ell={ell}, k={fam.k}")
    per_comp = _component_label_minus if minus else _component_label_cycle
    for comp in _components_of(fam.types):
        cert = per_comp(comp, fam.d, fam.k, ell, cap)
        if cert is not None:
            assert validate_label_certificate(cert, fam)
            return cert
    return None


def has_type_cycle(
    fam: TypeFamily, ell: int, state_cap: int = DEFAULT_STATE_CAP
) -> Optional[WalkCertificate]:
    """Cyclic label sequence of length ell with every k-window in the family,
    or None (exact)."""
    return _label_detect(fam, ell, minus=False, cap=state_cap)


def has_type_cycle_minus(
    fam: TypeFamily, ell: int, state_cap: int = DEFAULT_STATE_CAP
) -> Optional[WalkCertificate]:
    """Cyclic label sequence with at least ell-1 of its ell windows in the
    family (rotated so the free window is window 1), or None (exact)."""
    return _label_detect(fam, ell, minus=True, cap=state_cap)


# ---------------------------------------------------------------------------
# vertex-level detection


class ConsecutionDigraph:
    """Nodes: ordered (k-1)-tuples of distinct vertices contained in an edge;
    arc u -> v when v drops u's head, shifts, and appends a vertex forming
    an edge with all of u."""

    def __init__(self, H: Hypergraph, state_cap: int = DEFAULT_STATE_CAP):
        k = H.k
        edges = H.edge_list()
        subsets = set()
        for e in edges:
            for S in combinations(e, k - 1):
                subsets.add(S)
        n_states = len(subsets) * _factorial(k - 1)
        if n_states > state_cap:
            raise CapacityError(
                f"{n_states} consecution states exceed the cap of {state_cap}"
            )
        nbrs: dict[tuple[int, ...], list[int]] = {S: [] for S in subsets}
        for e in edges:
            es = set(e)
            for S in combinations(e, k - 1):
                (v,) = es - set(S)
                nbrs[S].append(v)
        states = sorted(p for S in subsets for p in permutations(S))
        self.states = states
        self.index = {s: i for i, s in enumerate(states)}
        self.adj_out: list[list[int]] = [[] for _ in states]
        for i, s in enumerate(states):
            key = tuple(sorted(s))
            for v in nbrs[key]:
                tgt = self.index.get(s[1:] + (v,))
                if tgt is not None:
                    self.adj_out[i].append(tgt)
        for lst in self.adj_out:
            lst.sort()


def _factorial(m: int) -> int:
    out = 1
    for i in range(2, m + 1):
        out *= i
    return out


def _scc_periods(adj_out) -> tuple[np.ndarray, dict[int, int]]:
    """Strong components and, for each component with an internal arc, the
    gcd of its cycle lengths (via BFS level differences)."""
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import connected_components as cc

    n = len(adj_out)
    rows, cols = [], []
    for i, outs in enumerate(adj_out):
        for j in outs:
            rows.append(i)
            cols.append(j)
    if not rows:
        return np.zeros(n, dtype=int), {}
    A = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))
    _, labels = cc(A, directed=True, connection="strong")
    periods: dict[int, int] = {}
    members: dict[int, list[int]] = {}
    for i, lab in enumerate(labels):
        members.setdefault(int(lab), []).append(i)
    for lab, verts in members.items():
        vset = set(verts)
        level = {verts[0]: 0}
        queue = [verts[0]]
        per = 0
        while queue:
            u = queue.pop()
            for w in adj_out[u]:
                if w not in vset:
                    continue
                if w in level:
                    per = gcd(per, level[u] + 1 - level[w])
                else:
                    level[w] = level[u] + 1
                    queue.append(w)
        if per:
            periods[lab] = abs(per)
    return labels, periods


def _dfs_exact_loop(adj_out, allowed, start, length, budget):
    """Exact-length closed walk start -> start using only allowed states.

    Memoizes failed (state, remaining) pairs; returns (path | None, spent),
    where path is the state sequence of length `length` beginning at start.
    A budget of 0 means unlimited.
    """
    failed: set[tuple[int, int]] = set()
    path = [start]
    spent = 0

    def rec(state, remaining):
        nonlocal spent
        spent += 1
        if budget and spent > budget:
            raise CapacityError("detection budget exhausted")
        if remaining == 0:
            return state == start
        if (state, remaining) in failed:
            return False
        for nxt in adj_out[state]:
            if nxt in allowed:
                path.append(nxt)
                if rec(nxt, remaining - 1):
                    return True
                path.pop()
        failed.add((state, remaining))
        return False

    import sys

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, length + 100))
    try:
        if rec(start, length):
            return path[:length], spent
        return None, spent
    finally:
        sys.setrecursionlimit(old)


def has_hom_tight_cycle(
    H: Hypergraph, ell: int, state_cap: int = DEFAULT_STATE_CAP
) -> Optional[WalkCertificate]:
    """Homomorphic tight cycle of length exactly ell (a cyclic vertex
    sequence whose ell k-windows are all edges), or None (exact)."""
    if ell <= H.k:
        raise ParameterError(f"need ell > k, got ell={ell}, k={H.k}")
    dig = ConsecutionDigraph(H, state_cap)
    labels, periods = _scc_periods(dig.adj_out)
    candidate_sccs = {lab for lab, per in periods.items() if ell % per == 0}
    if not candidate_sccs:
        return None
    allowed = {i for i in range(len(dig.states)) if int(labels[i]) in candidate_sccs}
    budget = 500_000
    pending_exact = False
    for start in sorted(allowed):
        try:
            path, _ = _dfs_exact_loop(dig.adj_out, allowed, start, ell, budget)
        except CapacityError:
            pending_exact = True
            continue
        if path is not None:
            seq = tuple(dig.states[s][0] for s in path)
            cert = WalkCertificate("cycle", seq)
            assert validate_vertex_certificate(cert, H)
            return cert
    if not pending_exact:
        return None
    # exact fallback: boolean matrix power on the candidate subgraph
    idx = sorted(allowed)
    pos = {s: i for i, s in enumerate(idx)}
    n = len(idx)
    A = np.zeros((n, n), dtype=bool)
    sub_adj: list[list[int]] = [[] for _ in range(n)]
    for i, s in enumerate(idx):
        for t in dig.adj_out[s]:
            if t in allowed:
                A[i, pos[t]] = True
                sub_adj[i].append(pos[t])
    P = _bool_power(A, ell)
    diag = np.nonzero(np.diagonal(P))[0]
    if diag.size == 0:
        return None
    start = int(diag[0])
    path = _exact_path(sub_adj, n, ell, start, start)
    assert path is not None
    seq = tuple(dig.states[idx[s]][0] for s in path[:ell])
    cert = WalkCertificate("cycle", seq)
    assert validate_vertex_certificate(cert, H)
    return cert


def has_hom_tight_cycle_minus(
    H: Hypergraph, ell: int, state_cap: int = DEFAULT_STATE_CAP
) -> Optional[WalkCertificate]:
    """Homomorphic copy of the length-ell tight cycle minus one edge: all
    windows except window 1 must be edges.  Exact; None when absent."""
    if ell <= H.k:
        raise ParameterError(f"need ell > k, got ell={ell}, k={H.k}")
    dig = ConsecutionDigraph(H, state_cap)
    n = len(dig.states)
    if n == 0:
        return None
    A = np.zeros((n, n), dtype=bool)
    for i, outs in enumerate(dig.adj_out):
        for j in outs:
            A[i, j] = True
    P = _bool_power(A, ell - 1)
    k = H.k
    for i1, z1 in enumerate(dig.states):
        body = set(z1[1:])
        for v in range(1, H.n + 1):
            if v in body:
                continue
            i2 = dig.index.get(z1[1:] + (v,))
            if i2 is not None and P[i2, i1]:
                path = _exact_path(dig.adj_out, n, ell - 1, i2, i1)
                assert path is not None
                seq = (z1[0],) + tuple(dig.states[s][0] for s in path[:-1])
                cert = WalkCertificate("cycle-minus", seq, missing_window=1)
                assert validate_vertex_certificate(cert, H)
                return cert
    return None
