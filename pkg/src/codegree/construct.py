"""Concrete type families: the congruence base family, its prime-part
specialization, the local-replacement repair for q >= 5, and the stable
family for coprime parameters.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from math import gcd

from .family import TypeFamily, derived_parameters
from .lattice import ParameterError, TypeTuple, enumerate_types


@dataclass(frozen=True)
class ReplacementPlan:
    problematic: frozenset[TypeTuple]
    replacements: dict[TypeTuple, frozenset[TypeTuple]]
    pivots: dict[TypeTuple, int]  # chosen zero coordinate per problematic type

    def __post_init__(self):
        # dicts are mutable; freeze semantics are by convention here
        pass


def base_family(k: int, d: int) -> TypeFamily:
    """Types x with sum_i i * x_i = 1 (mod d).

    Satisfies the extension property for every k: given a (k-1)-level type y,
    the needed part index j solves j = 1 - sum_i i*y_i (mod d).  All adjacency
    components are singletons: a single move from part i to part j changes
    the weighted sum by j - i, which is never 0 mod d for i != j in 1..d.
    """
    if d < 1:
        raise ParameterError(f"need d >= 1, got {d}")
    types = frozenset(
        x for x in enumerate_types(k, d)
        if sum(i * x[i - 1] for i in range(1, d + 1)) % d == 1 % d
    )
    return TypeFamily(k=k, ell=None, d=d, types=types)


def hls_family(k: int, ell: int) -> TypeFamily:
    """Base family over d = p parts, p the smallest prime factor of k/gcd(k, ell)."""
    params = derived_parameters(k, ell)
    base = base_family(k, params.p)
    return TypeFamily(k=k, ell=ell, d=params.p, types=base.types)


def replacement_set(x: TypeTuple) -> tuple[frozenset[TypeTuple], int]:
    """Replacement types for a problematic type x (one with a zero coordinate).

    With alpha the largest index carrying a zero, the replacements are
    x - e_i + e_{i-1} for every i outside {alpha, alpha+1}, together with
    x - e_{alpha+1} + e_{alpha-1}, indices cyclic in 1..d, intersected with
    the lattice (moves from an empty coordinate drop out).
    Returns (replacements, alpha).
    """
    d = len(x)
    zeros = [i for i in range(1, d + 1) if x[i - 1] == 0]
    if not zeros:
        raise ParameterError(f"type {x} has no zero coordinate")
    if d < 3:
        raise ParameterError(f"replacement needs d >= 3, got d={d}")
    alpha = max(zeros)

    def wrap(i: int) -> int:
        return (i - 1) % d + 1

    def move(t: TypeTuple, src: int, dst: int) -> TypeTuple | None:
        if t[src - 1] == 0:
            return None
        out = list(t)
        out[src - 1] -= 1
        out[dst - 1] += 1
        return tuple(out)

    reps = set()
    skip = {alpha, wrap(alpha + 1)}
    for i in range(1, d + 1):
        if i in skip:
            continue
        r = move(x, i, wrap(i - 1))
        if r is not None:
            reps.add(r)
    r = move(x, wrap(alpha + 1), wrap(alpha - 1))
    if r is not None:
        reps.add(r)
    return frozenset(reps), alpha


def local_replacement_family(k: int, ell: int) -> tuple[TypeFamily, ReplacementPlan]:
    """Repair the base family over d = t parts (t the smallest odd integer
    >= max(3, gcd(k, ell))) by replacing each member whose coordinates are
    all divisible by q = k/gcd(k, ell).  Requires q >= 5.
    """
    params = derived_parameters(k, ell)
    if params.q < 5:
        raise ParameterError(f"local replacement needs q >= 5, got q={params.q}")
    d = params.t
    base = base_family(k, d)
    problematic = frozenset(
        x for x in base.types if all(c % params.q == 0 for c in x)
    )
    replacements: dict[TypeTuple, frozenset[TypeTuple]] = {}
    pivots: dict[TypeTuple, int] = {}
    types = set(base.types) - problematic
    for x in sorted(problematic, reverse=True):
        reps, alpha = replacement_set(x)
        replacements[x] = reps
        pivots[x] = alpha
        types |= reps
    fam = TypeFamily(k=k, ell=ell, d=d, types=frozenset(types))
    return fam, ReplacementPlan(problematic, replacements, pivots)


def _perms(t: TypeTuple) -> set[TypeTuple]:
    return set(permutations(t))


def stable_family(k: int, ell: int) -> tuple[TypeFamily, ReplacementPlan]:
    """Three-part family for coprime (k, ell) whose blow-ups miss the cycle
    even after deleting one cycle edge.

    Requires ell != 0, +-1, +-2 and 3*ell != +-1, +-2 (mod k).  The repaired
    types are the members of the base family lying in
    Perm(k,0,0) | Perm(alpha, k-alpha, 0) with alpha the inverse of ell mod k.
    """
    if gcd(k, ell) != 1:
        raise ParameterError(f"need gcd(k, ell) = 1, got gcd={gcd(k, ell)}")
    r = ell % k
    if r in (0, 1, k - 1):
        raise ParameterError(f"ell = {ell} is 0 or +-1 mod k = {k}")
    if r in (2, k - 2):
        raise ParameterError(f"ell = {ell} is +-2 mod k = {k}")
    r3 = (3 * ell) % k
    if r3 in (1, k - 1):
        raise ParameterError(f"3*ell is +-1 mod k = {k}")
    if r3 in (2, k - 2):
        raise ParameterError(f"3*ell is +-2 mod k = {k}")
    alpha = pow(ell, -1, k)

    extreme = _perms((k, 0, 0))
    split = _perms((alpha, k - alpha, 0))
    base = base_family(k, 3)
    problematic = frozenset(x for x in base.types if x in extreme or x in split)

    replacements: dict[TypeTuple, frozenset[TypeTuple]] = {}
    pivots: dict[TypeTuple, int] = {}
    types = set(base.types) - problematic
    for x in sorted(problematic, reverse=True):
        if x in extreme and x in split:
            raise RuntimeError(f"type {x} matches both replacement patterns")
        if x in extreme:
            # k sits at position m; move one vertex to the cyclically next part
            m = x.index(k)
            out = [0, 0, 0]
            out[m] = k - 1
            out[(m + 1) % 3] = 1
            reps = frozenset({tuple(out)})
            pivots[x] = m + 1
        else:
            ia = x.index(alpha)
            ib = x.index(k - alpha)
            lo = list(x)
            lo[ia] -= 1
            lo[ib] += 1
            hi = list(x)
            hi[ia] += 1
            hi[ib] -= 1
            reps = frozenset({tuple(lo), tuple(hi)})
            pivots[x] = x.index(0) + 1
        replacements[x] = reps
        types |= reps
    if types & problematic:
        raise RuntimeError("replacement produced a problematic type")
    fam = TypeFamily(k=k, ell=ell, d=3, types=frozenset(types))
    return fam, ReplacementPlan(problematic, replacements, pivots)
