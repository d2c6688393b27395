"""Type families and their verification.

A type family for parameters (k, ell; d) is a set of edge types that
(P1) extends every (k-1)-level type to a member by adding one vertex, and
(P2) gives every component of its adjacency graph an index set I and a
value v with sum_{i in I} x_i = v for all members x of the component and
q = k / gcd(k, ell) not dividing v.  Blow-ups of such families have large
minimum codegree (P1) while admitting no tight cycle of length ell (P2).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb, gcd
from typing import Optional

from .lattice import (
    ParameterError,
    TypeTuple,
    connected_components,
    enumerate_types,
)


@dataclass(frozen=True)
class TypeFamily:
    k: int
    ell: Optional[int]
    d: int
    types: frozenset[TypeTuple]

    def __post_init__(self):
        if self.d < 1 or self.k < 1:
            raise ParameterError(f"need k >= 1, d >= 1, got k={self.k}, d={self.d}")
        for t in self.types:
            if len(t) != self.d or sum(t) != self.k or min(t) < 0:
                raise ParameterError(f"type {t} is not a composition of {self.k} into {self.d} parts")


@dataclass(frozen=True)
class ComponentCertificate:
    component: frozenset[TypeTuple]
    index_set: tuple[int, ...]  # 1-based part indices, sorted
    value: int


@dataclass
class VerificationReport:
    p1: bool
    p1_witness: Optional[TypeTuple] = None  # uncovered (k-1)-level type
    p2: bool = True
    p2_witness: Optional[frozenset[TypeTuple]] = None  # component without certificate
    certificates: list[ComponentCertificate] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.p1 and self.p2


@dataclass(frozen=True)
class DerivedParameters:
    g: int  # gcd(k, ell)
    q: int  # k / g
    p: int  # smallest prime factor of q
    t: int  # smallest odd integer >= max(3, g)


def _smallest_prime_factor(n: int) -> int:
    if n < 2:
        raise ParameterError(f"no prime factor of {n}")
    f = 2
    while f * f <= n:
        if n % f == 0:
            return f
        f += 1
    return n


def derived_parameters(k: int, ell: int) -> DerivedParameters:
    """g, q = k/g, smallest prime factor p of q, and the odd part count t."""
    if k < 1 or ell < 1:
        raise ParameterError(f"need positive k, ell, got k={k}, ell={ell}")
    g = gcd(k, ell)
    if g == k:
        raise ParameterError(f"k={k} divides ell={ell}: every blow-up contains the cycle")
    q = k // g
    t = max(3, g)
    if t % 2 == 0:
        t += 1
    return DerivedParameters(g=g, q=q, p=_smallest_prime_factor(q), t=t)


def check_extension_property(fam: TypeFamily) -> tuple[bool, Optional[TypeTuple]]:
    """P1: every (k-1)-level type y has some member y + e_j.

    Returns (True, None) or (False, first uncovered y in enumeration order).
    """
    covered: set[TypeTuple] = set()
    for x in fam.types:
        for j, xj in enumerate(x):
            if xj:
                covered.add(x[:j] + (xj - 1,) + x[j + 1:])
    if len(covered) == comb(fam.k - 1 + fam.d - 1, fam.d - 1):
        return True, None
    for y in enumerate_types(fam.k - 1, fam.d):
        if y not in covered:
            return False, y
    return True, None


def _bump(y: TypeTuple, j: int) -> TypeTuple:
    return y[:j] + (y[j] + 1,) + y[j + 1:]


def index_sets(d: int):
    """Non-empty subsets of 1..d, ordered by cardinality then lexicographically."""
    for r in range(1, d + 1):
        yield from combinations(range(1, d + 1), r)


def find_component_invariant(
    component, d: int, q: int
) -> Optional[ComponentCertificate]:
    """First (I, v) with sum_{i in I} x_i constant = v on the component, q not | v."""
    comp = frozenset(component)
    members = list(comp)
    for idx in index_sets(d):
        sums = {sum(x[i - 1] for i in idx) for x in members}
        if len(sums) == 1:
            v = sums.pop()
            if v % q != 0:
                return ComponentCertificate(component=comp, index_set=idx, value=v)
    return None


def verify_family(fam: TypeFamily) -> VerificationReport:
    """Check P1 and P2; collect per-component certificates on success."""
    if fam.ell is None:
        raise ParameterError("family has no ell; verification needs the cycle length")
    if not 3 <= fam.k < fam.ell:
        raise ParameterError(f"need 3 <= k < ell, got k={fam.k}, ell={fam.ell}")
    params = derived_parameters(fam.k, fam.ell)  # raises when k | ell
    ok1, witness1 = check_extension_property(fam)
    report = VerificationReport(p1=ok1, p1_witness=witness1)
    for comp in connected_components(fam.types):
        cert = find_component_invariant(comp, fam.d, params.q)
        if cert is None:
            report.p2 = False
            report.p2_witness = comp
            return report
        report.certificates.append(cert)
    return report


def _stable_value_ok(v: int, k: int, ell: int) -> bool:
    return v % k != 0 and (ell * v) % k not in (1, k - 1)


def check_stability(fam: TypeFamily) -> tuple[bool, VerificationReport]:
    """Strengthened P2 for gcd(k, ell) = 1: the same certificate pair (I, v)
    must satisfy both q not | v and ell*v not congruent to +-1 mod k.

    Returns (stable, report); the report carries the strengthened
    certificates, or the first component admitting none.
    """
    if fam.ell is None:
        raise ParameterError("family has no ell")
    if gcd(fam.k, fam.ell) != 1:
        raise ParameterError(
            f"stability is defined for gcd(k, ell) = 1, got gcd={gcd(fam.k, fam.ell)}"
        )
    ok1, witness1 = check_extension_property(fam)
    report = VerificationReport(p1=ok1, p1_witness=witness1)
    for comp in connected_components(fam.types):
        found = None
        members = list(comp)
        for idx in index_sets(fam.d):
            sums = {sum(x[i - 1] for i in idx) for x in members}
            if len(sums) == 1:
                v = sums.pop()
                if _stable_value_ok(v, fam.k, fam.ell):
                    found = ComponentCertificate(frozenset(comp), idx, v)
                    break
        if found is None:
            report.p2 = False
            report.p2_witness = frozenset(comp)
            return False, report
        report.certificates.append(found)
    return report.p1, report
