"""Walk machinery and structural analysis of dense tight-cycle-free graphs.

The walk side realizes vertex permutations of an edge as tight walks:
exchangeable pairs give length-2k elementary walks, arbitrary permutations
compose them along paths in the exchangeability graph, and the cycle
certificate builder closes a cyclic-shift walk to an exact target length.
The analysis side extracts the bipartite-like skeleton: the auxiliary graph
of non-exchangeable pairs, link graphs, tight components with their traces,
and the global odd-intersecting bipartition when one exists.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import gcd
from typing import Optional

from .hypergraph import (
    Hypergraph,
    WalkCertificate,
    has_hom_tight_cycle,
    min_codegree,
    validate_vertex_certificate,
)
from .lattice import ParameterError

# ---------------------------------------------------------------------------
# exchangeability and elementary walks


def is_exchangeable(H: Hypergraph, e, u: int, v: int) -> Optional[int]:
    """Smallest w outside e with both (e - u) + w and (e - v) + w edges."""
    es = set(e)
    if u not in es or v not in es or u == v:
        raise ParameterError(f"{u}, {v} must be two distinct vertices of {e}")
    for w in range(1, H.n + 1):
        if w in es:
            continue
        if H.is_edge((es - {u}) | {w}) and H.is_edge((es - {v}) | {w}):
            return w
    return None


def forming_good_walk(H, e_tuple, sigma, i: int, j: int, w: int) -> WalkCertificate:
    """Tight walk of length exactly 2k from sigma(e) to ((i j) . sigma)(e).

    e_tuple is the ordered edge (v_1, ..., v_k); sigma is a permutation of
    1..k given as a tuple with sigma[a-1] = sigma(a); w must witness the
    exchangeability of v_i and v_j.
    """
    k = H.k
    e = tuple(e_tuple)
    if len(e) != k or not H.is_edge(e):
        raise ParameterError(f"{e} is not an ordered edge")
    if sorted(sigma) != list(range(1, k + 1)):
        raise ParameterError(f"{sigma} is not a permutation of 1..{k}")
    es = set(e)
    vi, vj = e[i - 1], e[j - 1]
    if w in es or not H.is_edge((es - {vi}) | {w}) or not H.is_edge((es - {vj}) | {w}):
        raise ParameterError(f"{w} does not witness exchangeability of {vi}, {vj}")
    a = sigma.index(i)  # 0-based position holding v_i
    b = sigma.index(j)
    if a > b:
        a, b = b, a
        i, j = j, i
        vi, vj = vj, vi
    block1 = [e[s - 1] for s in sigma]
    block2 = list(block1)
    block2[a] = w
    block2[b] = vi
    block3 = list(block1)
    block3[a] = vj
    block3[b] = vi
    cert = WalkCertificate("open-walk", tuple(block1 + block2 + block3))
    assert validate_vertex_certificate(cert, H)
    return cert


def _compose(tau: tuple[int, int], sigma: tuple[int, ...]) -> tuple[int, ...]:
    """(tau . sigma) as a position tuple, tau a value transposition."""
    i, j = tau
    swap = {i: j, j: i}
    return tuple(swap.get(s, s) for s in sigma)


def _transposition_decomposition(sigma: tuple[int, ...]) -> list[tuple[int, int]]:
    """Value transpositions tau_m ... tau_1 whose left-to-right product is
    sigma (apply tau_1 first)."""
    k = len(sigma)
    taus: list[tuple[int, int]] = []
    cur = list(range(1, k + 1))
    # greedily fix positions: place sigma's value at each position via swaps
    for pos in range(k):
        want = sigma[pos]
        have = cur[pos]
        if have != want:
            taus.append((have, want))
            at = cur.index(want)
            cur[pos], cur[at] = cur[at], cur[pos]
    return taus


def exchangeability_graph(H: Hypergraph, e_tuple):
    """Adjacency (on positions 1..k) and witnesses for exchangeable pairs."""
    k = H.k
    e = tuple(e_tuple)
    adj: dict[int, set[int]] = {i: set() for i in range(1, k + 1)}
    witness: dict[tuple[int, int], int] = {}
    for a, b in combinations(range(1, k + 1), 2):
        w = is_exchangeable(H, e, e[a - 1], e[b - 1])
        if w is not None:
            adj[a].add(b)
            adj[b].add(a)
            witness[(a, b)] = witness[(b, a)] = w
    return adj, witness


def realize_permutation_walk(H, e_tuple, sigma) -> Optional[WalkCertificate]:
    """Tight walk from e to sigma(e), composed of length-2k elementary walks.

    Each required transposition routes along a shortest path in the
    exchangeability graph of e ((a,b) expands to the palindrome
    (a,x1)(x1,x2)...(x_{r-1},b)...(x1,x2)(a,x1)); None when some pair
    needed by sigma is not connected there.
    """
    k = H.k
    e = tuple(e_tuple)
    if len(e) != k or not H.is_edge(e):
        raise ParameterError(f"{e} is not an ordered edge")
    if sorted(sigma) != list(range(1, k + 1)):
        raise ParameterError(f"{sigma} is not a permutation of 1..{k}")
    identity = tuple(range(1, k + 1))
    if tuple(sigma) == identity:
        return WalkCertificate("open-walk", e)
    adj, witness = exchangeability_graph(H, e)

    def shortest_path(a, b):
        prev = {a: None}
        queue = [a]
        while queue:
            nxt = []
            for u in queue:
                for v in sorted(adj[u]):
                    if v not in prev:
                        prev[v] = u
                        if v == b:
                            path = [b]
                            while prev[path[-1]] is not None:
                                path.append(prev[path[-1]])
                            return path[::-1]
                        nxt.append(v)
            queue = nxt
        return None

    elementary: list[tuple[int, int]] = []
    for a, b in _transposition_decomposition(tuple(sigma)):
        path = shortest_path(a, b)
        if path is None:
            return None
        fwd = [(path[t], path[t + 1]) for t in range(len(path) - 2)]
        elementary.extend(fwd + [(path[-2], path[-1])] + fwd[::-1])

    cur = identity
    seq = list(e)
    for (x, y) in elementary:
        step = forming_good_walk(H, e, cur, x, y, witness[(x, y)])
        assert step.sequence[:k] == tuple(seq[-k:])
        seq.extend(step.sequence[k:])
        cur = _compose((x, y), cur)
    if cur != tuple(sigma):
        raise RuntimeError("transposition plan did not compose to sigma")
    cert = WalkCertificate("open-walk", tuple(seq))
    assert validate_vertex_certificate(cert, H)
    return cert


def build_cycle_certificate(H: Hypergraph, ell: int, B) -> Optional[WalkCertificate]:
    """Homomorphic tight cycle of length exactly ell built from an edge
    meeting B in k/gcd(k, ell) vertices, or None.

    Orders the edge so B-vertices sit at positions divisible by g, realizes
    the cyclic shift by k - (ell mod k) as a permutation walk, closes with
    one wrap block, and pads with stationary loops.  When ell is too short
    for that route (each transposition costs 2k), falls back to the exact
    consecution-digraph search.
    """
    k = H.k
    t = ell % k
    if t == 0:
        raise ParameterError(f"k={k} divides ell={ell}")
    if ell <= k:
        raise ParameterError(f"need ell > k, got ell={ell}")
    g = gcd(k, ell)
    s = k // g
    Bset = set(B)
    chosen = None
    for e in H.edge_list():
        if len(Bset & set(e)) == s:
            chosen = e
            break
    if chosen is None:
        return None
    inside = sorted(v for v in chosen if v in Bset)
    outside = sorted(v for v in chosen if v not in Bset)
    arranged = []
    for pos in range(1, k + 1):
        arranged.append(inside.pop(0) if pos % g == 0 else outside.pop(0))
    e_vec = tuple(arranged)
    shift = tuple((a + k - t - 1) % k + 1 for a in range(1, k + 1))

    walk = realize_permutation_walk(H, e_vec, shift)
    if walk is not None:
        L = walk.length - k
        if L + t <= ell and (ell - L - t) % k == 0:
            seq = list(walk.sequence)
            seq.extend(e_vec[k - t:])  # wrap block: back to e_vec as endpoint
            while len(seq) - k < ell:
                seq.extend(e_vec)
            cycle = WalkCertificate("cycle", tuple(seq[:ell]))
            if validate_vertex_certificate(cycle, H):
                return cycle
    return has_hom_tight_cycle(H, ell, state_cap=200_000)


# ---------------------------------------------------------------------------
# structural analysis


@dataclass
class PartitionCertificate:
    B: frozenset[int]
    intersections: dict[tuple[int, ...], int] = field(default_factory=dict)


@dataclass
class PartitionOutcome:
    certificate: Optional[PartitionCertificate]
    failure_stage: Optional[str] = None
    warning: Optional[str] = None


def auxiliary_graph(H: Hypergraph, e) -> set[tuple[int, int]]:
    """Non-exchangeable pairs of the edge e, as sorted vertex pairs."""
    e = tuple(sorted(e))
    if not H.is_edge(e):
        raise ParameterError(f"{e} is not an edge")
    return {
        (u, v)
        for u, v in combinations(e, 2)
        if is_exchangeable(H, e, u, v) is None
    }


def is_complete_bipartite(vertices, pairs) -> Optional[tuple[frozenset, frozenset]]:
    """Bipartition (one side possibly empty) when the graph (vertices, pairs)
    is complete bipartite; None otherwise."""
    vs = sorted(vertices)
    es = {tuple(sorted(p)) for p in pairs}
    comp_adj = {
        u: {v for v in vs if v != u and tuple(sorted((u, v))) not in es} for u in vs
    }
    comps = []
    seen: set[int] = set()
    for u in vs:
        if u in seen:
            continue
        stack, comp = [u], {u}
        while stack:
            x = stack.pop()
            for y in comp_adj[x]:
                if y not in comp:
                    comp.add(y)
                    stack.append(y)
        seen |= comp
        comps.append(comp)
    if len(comps) > 2:
        return None
    for comp in comps:  # each side must be pair-free
        for u, v in combinations(sorted(comp), 2):
            if tuple(sorted((u, v))) in es:
                return None
    if len(comps) == 1:
        return frozenset(comps[0]), frozenset()
    a, b = comps
    for u in a:
        for v in b:
            if tuple(sorted((u, v))) not in es:
                return None
    return frozenset(a), frozenset(b)


def link_graph(H: Hypergraph, A) -> tuple[list[int], set[tuple[int, ...]]]:
    """Vertices V - A and the links e - A of edges containing A."""
    Aset = set(A)
    verts = [v for v in range(1, H.n + 1) if v not in Aset]
    links = {
        tuple(sorted(set(e) - Aset))
        for e in H.edge_list()
        if Aset <= set(e)
    }
    return verts, links


def _two_color(verts, pairs) -> Optional[tuple[bool, dict[int, int]]]:
    """(connected, coloring) for a 2-graph; None when an odd cycle exists."""
    adj: dict[int, set[int]] = {v: set() for v in verts}
    for u, v in pairs:
        adj[u].add(v)
        adj[v].add(u)
    color: dict[int, int] = {}
    pieces = 0
    for start in verts:
        if start in color:
            continue
        pieces += 1
        color[start] = 0
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y in color:
                    if color[y] == color[x]:
                        return None
                else:
                    color[y] = 1 - color[x]
                    stack.append(y)
    return pieces == 1, color


def tight_components(H: Hypergraph) -> list[frozenset[tuple[int, ...]]]:
    """Edge classes under the transitive closure of sharing k-1 vertices."""
    edges = H.edge_list()
    parent = list(range(len(edges)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    buckets: dict[tuple[int, ...], list[int]] = {}
    for i, e in enumerate(edges):
        for S in combinations(e, H.k - 1):
            buckets.setdefault(S, []).append(i)
    for members in buckets.values():
        for other in members[1:]:
            ra, rb = find(members[0]), find(other)
            if ra != rb:
                parent[rb] = ra
    groups: dict[int, set] = {}
    for i, e in enumerate(edges):
        groups.setdefault(find(i), set()).add(e)
    return sorted((frozenset(gp) for gp in groups.values()), key=lambda gp: min(gp))


def trace(component) -> frozenset[tuple[int, ...]]:
    """All (k-1)-subsets of the edges of a tight component."""
    out = set()
    for e in component:
        out.update(combinations(e, len(e) - 1))
    return frozenset(out)


def find_structural_partition(H: Hypergraph, ell: Optional[int] = None) -> PartitionOutcome:
    """Vertex set B with every edge meeting both B and its complement an odd
    number of times, extracted from the first edge carrying a
    non-exchangeable pair; failures name the stage reached."""
    n, k = H.n, H.k
    warning = None
    deg, _ = min_codegree(H) if H.edges is not None or H.family else (None, None)
    if deg is not None and 3 * deg <= n:
        warning = f"minimum codegree {deg} is not above n/3 = {n/3:.2f}"

    edges = H.edge_list()
    chosen = None
    for e in edges:
        pairs = auxiliary_graph(H, e)
        if pairs:
            chosen = (e, sorted(pairs)[0], pairs)
            break
    if chosen is None:
        return PartitionOutcome(None, "no non-exchangeable pair", warning)
    e, (u, v), pairs = chosen

    sides = is_complete_bipartite(e, pairs)
    if sides is None:
        return PartitionOutcome(None, "auxiliary graph not complete bipartite", warning)
    E_u = sides[0] if u in sides[0] else sides[1]

    A = tuple(sorted(set(e) - {u, v}))
    verts, links = link_graph(H, A)
    colored = _two_color(verts, links)
    if colored is None or not colored[0]:
        return PartitionOutcome(None, "link not connected-bipartite", warning)
    _, color = colored
    P = {x for x in verts if color.get(x) == color[u]}

    B = frozenset(E_u | P)
    inter = {}
    for f in edges:
        c = len(B & set(f))
        inter[f] = c
        if c % 2 == 0 or (k - c) % 2 == 0:
            return PartitionOutcome(None, "global parity violated", warning)
    if not (n <= 3 * len(B) <= 2 * n):
        return PartitionOutcome(None, "size bounds violated", warning)
    return PartitionOutcome(PartitionCertificate(B, inter), None, warning)
