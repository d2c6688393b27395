"""Exhaustive search for (k, ell; d)-families.

Counts (or finds) ALL subsets of the level-k type lattice satisfying the
extension property (P1) and the component-invariant property (P2).  No
symmetry quotient is applied; the convention tag below is embedded in
results and checkpoints so counts are comparable across runs.

Two independent routes: a bitmask sweep over all subsets (small lattices
only), and a depth-first search over types in canonical order, branching
include-before-exclude, pruning on (a) a (k-1)-level type losing its last
potential cover and (b) an included component whose certificate candidates
are exhausted (sound because constancy of an index-set sum only degrades
as a component grows).  Long runs checkpoint their decision path and can
resume.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import combinations
from typing import Optional

import numpy as np

from .family import TypeFamily, derived_parameters, verify_family
from .lattice import CapacityError, ParameterError, TypeTuple, enumerate_types

CONVENTION = "all-subsets/P1P2/include-first-dfs"
CHECKPOINT_VERSION = 1
BRUTE_FORCE_LIMIT = 25


@dataclass
class SearchResult:
    mode: str  # "enumerate" | "exists" | "brute-force"
    k: int
    ell: int
    d: int
    count: int
    example: Optional[frozenset[TypeTuple]]
    nodes: int
    complete: bool
    convention: str = CONVENTION
    elapsed: float = 0.0

    @property
    def status(self) -> str:
        if not self.complete:
            return "incomplete"
        if self.mode == "exists":
            return "found" if self.example is not None else "none"
        return "complete"


def _index_masks(d: int) -> list[tuple[int, ...]]:
    out = []
    for r in range(1, d + 1):
        out.extend(combinations(range(d), r))
    return out


class _Problem:
    def __init__(self, k: int, ell: int, d: int):
        self.k, self.ell, self.d = k, ell, d
        self.q = derived_parameters(k, ell).q
        self.types = enumerate_types(k, d)
        self.N = len(self.types)
        self.tindex = {t: i for i, t in enumerate(self.types)}
        self.masks = _index_masks(d)
        self.M = len(self.masks)
        self.sums = [
            tuple(sum(t[i] for i in mask) for mask in self.masks) for t in self.types
        ]
        # neighbor indices in the lattice
        self.nbrs: list[list[int]] = []
        for t in self.types:
            ns = set()
            for i in range(d):
                if t[i] == 0:
                    continue
                for j in range(d):
                    if i != j:
                        y = list(t)
                        y[i] -= 1
                        y[j] += 1
                        ns.add(self.tindex[tuple(y)])
            self.nbrs.append(sorted(ns))
        # P1 covers
        self.ys = enumerate_types(k - 1, d)
        self.cov: list[list[int]] = []
        self.ys_of: list[list[int]] = [[] for _ in range(self.N)]
        for yi, y in enumerate(self.ys):
            cs = []
            for j in range(d):
                b = y[:j] + (y[j] + 1,) + y[j + 1:]
                ti = self.tindex[b]
                cs.append(ti)
                self.ys_of[ti].append(yi)
            self.cov.append(cs)

    def subset_satisfies(self, indices: set[int]) -> bool:
        """Reference check for P1 and P2 on an index subset (no pruning)."""
        for cs in self.cov:
            if not any(c in indices for c in cs):
                return False
        seen: set[int] = set()
        for s in indices:
            if s in seen:
                continue
            comp = {s}
            stack = [s]
            while stack:
                x = stack.pop()
                for nb in self.nbrs[x]:
                    if nb in indices and nb not in comp:
                        comp.add(nb)
                        stack.append(nb)
            seen |= comp
            ok = False
            for m in range(self.M):
                vals = {self.sums[c][m] for c in comp}
                if len(vals) == 1 and vals.pop() % self.q != 0:
                    ok = True
                    break
            if not ok:
                return False
        return True


def brute_force_enumerate(k: int, ell: int, d: int) -> SearchResult:
    """Count qualifying subsets by sweeping all 2^|lattice| bitmasks."""
    t0 = time.monotonic()
    prob = _Problem(k, ell, d)
    N = prob.N
    if N > BRUTE_FORCE_LIMIT:
        raise CapacityError(f"lattice has {N} types; brute force is capped at {BRUTE_FORCE_LIMIT}")
    total = 1 << N
    cov_masks = np.array(
        [sum(1 << c for c in cs) for cs in prob.cov], dtype=np.int64
    )
    count = 0
    chunk = 1 << 20
    for lo in range(0, total, chunk):
        hi = min(lo + chunk, total)
        m = np.arange(lo, hi, dtype=np.int64)
        ok = np.ones(hi - lo, dtype=bool)
        for cm in cov_masks:
            ok &= (m & cm) != 0
        for mask in m[ok]:
            indices = {i for i in range(N) if mask >> i & 1}
            if prob.subset_satisfies(indices):
                count += 1
    return SearchResult(
        mode="brute-force", k=k, ell=ell, d=d, count=count, example=None,
        nodes=total, complete=True, elapsed=time.monotonic() - t0,
    )


class _DFS:
    """Iterative include-first DFS with undo logs and resumable checkpoints."""

    INC, EXC = 1, 0

    def __init__(
        self,
        prob: _Problem,
        mode: str,
        budget_nodes: Optional[int] = None,
        checkpoint_path: Optional[str] = None,
        checkpoint_interval: int = 2_000_000,
        p1_prune: bool = True,
        p2_prune: bool = True,
        on_solution=None,
    ):
        self.prob = prob
        self.mode = mode
        self.on_solution = on_solution
        self.budget = budget_nodes
        self.ckpt_path = checkpoint_path
        self.ckpt_interval = checkpoint_interval
        self.p1_prune = p1_prune
        self.p2_prune = p2_prune
        N = prob.N
        self.avail = [len(cs) for cs in prob.cov]
        self.inc_cov = [0] * len(prob.cov)
        self.included = [False] * N
        self.parent = list(range(N))
        self.size = [1] * N
        self.vals: list[Optional[list[Optional[int]]]] = [None] * N
        self.count = 0
        self.nodes = 0
        self.example: Optional[frozenset[TypeTuple]] = None
        self.branches: list[int] = []  # current decision path
        self.undos: list[list] = []

    def _find(self, x: int) -> int:
        while self.parent[x] != x:
            x = self.parent[x]
        return x

    def _feasible(self, vals) -> bool:
        q = self.prob.q
        return any(v is not None and v % q != 0 for v in vals)

    def _decide(self, i: int, val: int) -> bool:
        """Apply a decision; append its undo log; False => prune this branch."""
        prob = self.prob
        log: list = []
        self.undos.append(log)
        self.branches.append(val)
        self.nodes += 1
        ok = True
        if val == self.EXC:
            for y in prob.ys_of[i]:
                self.avail[y] -= 1
                log.append(("avail", y))
                if self.p1_prune and self.avail[y] == 0 and self.inc_cov[y] == 0:
                    ok = False
                    break
        else:
            for y in prob.ys_of[i]:
                self.avail[y] -= 1
                self.inc_cov[y] += 1
                log.append(("cover", y))
            self.included[i] = True
            log.append(("include", i))
            self.vals[i] = list(prob.sums[i])
            log.append(("vals", i, None))
            root = i
            for nb in prob.nbrs[i]:
                if nb < i and self.included[nb]:
                    ra, rb = self._find(root), self._find(nb)
                    if ra == rb:
                        continue
                    if self.size[ra] < self.size[rb]:
                        ra, rb = rb, ra
                    log.append(("union", rb, self.size[ra], list(self.vals[ra])))
                    self.parent[rb] = ra
                    self.size[ra] += self.size[rb]
                    va, vb = self.vals[ra], self.vals[rb]
                    self.vals[ra] = [
                        a if a is not None and a == b else None
                        for a, b in zip(va, vb)
                    ]
                    root = ra
            if self.p2_prune and not self._feasible(self.vals[self._find(i)]):
                ok = False
        return ok

    def _undo(self) -> None:
        log = self.undos.pop()
        self.branches.pop()
        for entry in reversed(log):
            tag = entry[0]
            if tag == "avail":
                self.avail[entry[1]] += 1
            elif tag == "cover":
                self.avail[entry[1]] += 1
                self.inc_cov[entry[1]] -= 1
            elif tag == "include":
                self.included[entry[1]] = False
            elif tag == "vals":
                self.vals[entry[1]] = entry[2]
            elif tag == "union":
                rb, old_size_ra, old_vals_ra = entry[1], entry[2], entry[3]
                ra = self.parent[rb]
                self.parent[rb] = rb
                self.size[ra] = old_size_ra - self.size[rb]
                self.vals[ra] = old_vals_ra

    def _leaf(self) -> bool:
        """Handle a full assignment; True => stop the search (exists mode)."""
        indices = {i for i in range(self.prob.N) if self.included[i]}
        if not (self.p1_prune and self.p2_prune):
            if not self.prob.subset_satisfies(indices):
                return False
        if self.mode == "exists":
            fam = frozenset(self.prob.types[i] for i in indices)
            tf = TypeFamily(self.prob.k, self.prob.ell, self.prob.d, fam)
            assert verify_family(tf).passed
            self.example = fam
            self.count += 1
            return True
        self.count += 1
        fam = frozenset(self.prob.types[i] for i in indices)
        if self.example is None:
            self.example = fam
        if self.on_solution is not None:
            self.on_solution(fam)
        return False

    # -- checkpointing ------------------------------------------------------

    def write_checkpoint(self) -> None:
        if not self.ckpt_path:
            return
        lines = [
            f"dfscheckpoint {CHECKPOINT_VERSION}",
            f"kld {self.prob.k} {self.prob.ell} {self.prob.d}",
            f"mode {self.mode}",
            f"convention {CONVENTION}",
            f"count {self.count}",
            f"nodes {self.nodes}",
            "branches " + "".join(str(b) for b in self.branches),
        ]
        tmp = self.ckpt_path + ".tmp"
        with open(tmp, "w") as fh:
            fh.write("\n".join(lines) + "\n")
        import os

        os.replace(tmp, self.ckpt_path)

    def restore(self, path: str) -> None:
        with open(path) as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
        head = lines[0].split()
        if head[0] != "dfscheckpoint" or int(head[1]) != CHECKPOINT_VERSION:
            raise ParameterError(f"unsupported checkpoint header {lines[0]!r}")
        fields = dict(ln.split(None, 1) for ln in lines[1:])
        k, ell, d = map(int, fields["kld"].split())
        if (k, ell, d) != (self.prob.k, self.prob.ell, self.prob.d):
            raise ParameterError("checkpoint parameters do not match this search")
        if fields["mode"] != self.mode or fields["convention"] != CONVENTION:
            raise ParameterError("checkpoint mode/convention mismatch")
        self.count = int(fields["count"])
        self.nodes = int(fields["nodes"])
        path_bits = [int(c) for c in fields.get("branches", "")]
        for depth, bit in enumerate(path_bits):
            okay = self._decide(depth, bit)
            self.nodes -= 1  # replay does not re-count explored nodes
            if not okay:
                raise ParameterError(f"checkpoint path prunes at depth {depth}")

    # -- main loop ----------------------------------------------------------

    def run(self) -> SearchResult:
        t0 = time.monotonic()
        prob = self.prob
        N = prob.N
        complete = True
        stopped = False
        last_ckpt = self.nodes
        # branch stack entry: the decision value currently applied at depth len-1
        while True:
            depth = len(self.branches)
            if self.budget is not None and self.nodes >= self.budget:
                complete = False
                self.write_checkpoint()
                break
            if self.ckpt_path and self.nodes - last_ckpt >= self.ckpt_interval:
                self.write_checkpoint()
                last_ckpt = self.nodes
            if depth == N:
                if self._leaf():
                    stopped = True
                    break
                advanced = self._backtrack()
                if not advanced:
                    break
                continue
            if self._decide(depth, self.INC):
                continue
            # include branch pruned immediately: flip to exclude
            self._undo()
            if self._decide(depth, self.EXC):
                continue
            self._undo()
            if not self._backtrack():
                break
        if stopped:
            complete = True  # found-and-stopped is a complete answer
        result = SearchResult(
            mode=self.mode,
            k=prob.k,
            ell=prob.ell,
            d=prob.d,
            count=self.count,
            example=self.example,
            nodes=self.nodes,
            complete=complete,
            elapsed=time.monotonic() - t0,
        )
        if self.ckpt_path and complete:
            self.write_checkpoint()
        return result

    def _backtrack(self) -> bool:
        """Pop exhausted branches; take the next pending branch if any."""
        while self.branches:
            last = self.branches[-1]
            self._undo()
            if last == self.INC:
                if self._decide(len(self.branches), self.EXC):
                    return True
                self._undo()
        return False


def _dfs(
    k: int,
    ell: int,
    d: int,
    mode: str,
    budget_nodes: Optional[int] = None,
    checkpoint: Optional[str] = None,
    resume: bool = False,
    checkpoint_interval: int = 2_000_000,
    p1_prune: bool = True,
    p2_prune: bool = True,
    workers: int = 1,
    on_solution=None,
) -> SearchResult:
    if workers != 1:
        # single-threaded implementation; the flag is accepted for interface
        # stability and recorded nowhere else
        pass
    prob = _Problem(k, ell, d)
    dfs = _DFS(
        prob,
        mode,
        budget_nodes=budget_nodes,
        checkpoint_path=checkpoint,
        checkpoint_interval=checkpoint_interval,
        p1_prune=p1_prune,
        p2_prune=p2_prune,
        on_solution=on_solution,
    )
    if resume:
        if not checkpoint:
            raise ParameterError("resume requested without a checkpoint path")
        dfs.restore(checkpoint)
        # continue past the restored frontier exactly as the interrupted run
        # would have: the restored path is the in-progress branch
    return dfs.run()


def dfs_enumerate(k: int, ell: int, d: int, **kwargs) -> SearchResult:
    """Exact count of qualifying families via pruned DFS."""
    return _dfs(k, ell, d, "enumerate", **kwargs)


def dfs_exists(k: int, ell: int, d: int, **kwargs) -> SearchResult:
    """Stop at the first qualifying family (verified before returning)."""
    return _dfs(k, ell, d, "exists", **kwargs)
