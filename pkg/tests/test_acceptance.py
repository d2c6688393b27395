"""Acceptance suite: eleven gate criteria, one test and one report line each.

Each test prints ``CRITERION <n>: PASS ...`` on success (visible with
``pytest -s``); a failing assertion marks the criterion failed.  Stated
runtime budgets are asserted inside the tests.
"""

import random
import time
from itertools import combinations
from math import gcd

import pytest

from codegree.construct import (
    base_family,
    hls_family,
    local_replacement_family,
    stable_family,
)
from codegree.family import (
    TypeFamily,
    check_stability,
    derived_parameters,
    verify_family,
)
from codegree.hypergraph import (
    blow_up,
    complete_hypergraph,
    has_hom_tight_cycle,
    has_hom_tight_cycle_minus,
    has_type_cycle,
    has_type_cycle_minus,
    min_codegree,
    validate_label_certificate,
    validate_vertex_certificate,
)
from codegree.lattice import ParameterError, enumerate_types
from codegree.search import (
    CONVENTION,
    brute_force_enumerate,
    dfs_enumerate,
    dfs_exists,
)
from codegree.structure import (
    build_cycle_certificate,
    find_structural_partition,
    forming_good_walk,
    is_exchangeable,
    realize_permutation_walk,
)

GRID = [
    (k, ell)
    for k in range(3, 13)
    for ell in range(k + 1, 41)
    if ell % k != 0
]

LOCAL_CASES = [(5, 7), (5, 8), (5, 9), (15, 18), (20, 24), (21, 27)]


def _grid_representatives():
    """One (k, ell) per distinct (k, p, q).

    The verification report for the prime-part construction is a pure
    function of (k, p, q): the family itself depends only on (k, p), and
    the checks use ell only through q = k / gcd(k, ell).  Deduplicating
    keeps the full-grid check inside its runtime budget.
    """
    reps = {}
    for k, ell in GRID:
        params = derived_parameters(k, ell)
        reps.setdefault((k, params.p, params.q), (k, ell))
    return list(reps.values())


def test_criterion_01_prime_part_grid_verifies():
    t0 = time.time()
    reps = _grid_representatives()
    for k, ell in reps:
        report = verify_family(hls_family(k, ell))
        assert report.passed, (k, ell)
    elapsed = time.time() - t0
    assert elapsed < 5.0, f"grid took {elapsed:.2f}s"
    print(
        f"CRITERION 1: PASS ({len(GRID)} grid points, "
        f"{len(reps)} distinct checks, {elapsed:.2f}s)"
    )


def test_criterion_02_local_replacement_verifies():
    t0 = time.time()
    for k, ell in LOCAL_CASES:
        fam, _plan = local_replacement_family(k, ell)
        assert verify_family(fam).passed, (k, ell)
    elapsed = time.time() - t0
    assert elapsed < 10.0, f"took {elapsed:.2f}s"
    print(f"CRITERION 2: PASS ({len(LOCAL_CASES)} cases, {elapsed:.2f}s)")


def test_criterion_03_stable_families_and_gates():
    t0 = time.time()
    for k, ell in [(9, 22), (9, 23)]:
        fam, _plan = stable_family(k, ell)
        ok, _report = check_stability(fam)
        assert ok, (k, ell)
    # (9,20): 20 = +2 mod 9; (8,19): 3*19 = 1 mod 8; (7,17): 3*17 = 2 mod 7
    for k, ell, fragment in [
        (9, 20, "+-2 mod k"),
        (8, 19, "3*ell is +-1"),
        (7, 17, "3*ell is +-2"),
    ]:
        with pytest.raises(ParameterError, match=r".*") as exc:
            stable_family(k, ell)
        assert fragment in str(exc.value), (k, ell, str(exc.value))
    elapsed = time.time() - t0
    assert elapsed < 1.0, f"took {elapsed:.2f}s"
    print(f"CRITERION 3: PASS (2 stable, 3 gate rejections, {elapsed:.2f}s)")


def test_criterion_04_freeness_oracles():
    t0 = time.time()
    checked = 0
    built = {}  # the grid family depends only on (k, p); build each once
    for k, ell in GRID:
        p = derived_parameters(k, ell).p
        fam = built.get((k, p))
        if fam is None:
            fam = built[(k, p)] = hls_family(k, ell)
        assert has_type_cycle(fam, ell) is None, (k, ell)
        checked += 1
        if gcd(k, ell) > 1:
            assert has_type_cycle_minus(fam, ell) is None, (k, ell)
    for k, ell in LOCAL_CASES:
        fam, _plan = local_replacement_family(k, ell)
        assert has_type_cycle(fam, ell) is None, (k, ell)
        checked += 1
        if gcd(k, ell) > 1:
            assert has_type_cycle_minus(fam, ell) is None, (k, ell)
    for k, ell in [(9, 22), (9, 23)]:
        fam, _plan = stable_family(k, ell)
        assert has_type_cycle(fam, ell) is None, (k, ell)
        assert has_type_cycle_minus(fam, ell) is None, (k, ell)
        checked += 2
    b33 = TypeFamily(3, None, 3, base_family(3, 3).types)
    cert = has_type_cycle_minus(b33, 4)
    assert cert is not None and cert.sequence == (1, 1, 1, 2)
    assert validate_label_certificate(cert, b33)
    elapsed = time.time() - t0
    assert elapsed < 30.0, f"took {elapsed:.2f}s"
    print(f"CRITERION 4: PASS ({checked} freeness checks, {elapsed:.2f}s)")


def _transfer_families():
    full33 = frozenset(enumerate_types(3, 3))
    full42 = frozenset(enumerate_types(4, 2))
    return [
        ("B_3^3", TypeFamily(3, None, 3, base_family(3, 3).types)),
        ("B_2^4", TypeFamily(4, None, 2, base_family(4, 2).types)),
        ("full(3,3)", TypeFamily(3, None, 3, full33)),
        ("full(4,2)", TypeFamily(4, None, 2, full42)),
    ]


def test_criterion_05_vertex_label_transfer():
    t0 = time.time()
    checked = 0
    for name, fam in _transfer_families():
        for ell in range(fam.k + 1, 11):
            H = blow_up(fam, (ell,) * fam.d)
            lab = has_type_cycle(fam, ell)
            ver = has_hom_tight_cycle(H, ell, state_cap=50_000)
            assert (lab is None) == (ver is None), (name, ell)
            if lab is not None:
                assert validate_label_certificate(lab, fam)
                assert validate_vertex_certificate(ver, H)
            checked += 1
            if ell <= 7:
                labm = has_type_cycle_minus(fam, ell)
                verm = has_hom_tight_cycle_minus(H, ell)
                assert (labm is None) == (verm is None), (name, ell, "minus")
                checked += 1
    elapsed = time.time() - t0
    assert elapsed < 120.0, f"took {elapsed:.2f}s"
    print(f"CRITERION 5: PASS ({checked} transfer checks, {elapsed:.2f}s)")


def test_criterion_06_codegree_values():
    t0 = time.time()
    b33 = TypeFamily(3, None, 3, base_family(3, 3).types)
    H = blow_up(b33, (3, 3, 3))
    assert min_codegree(H)[0] == 2
    # the bound m - k + 1 depends on the family alone, so one blow-up per
    # distinct family (k, p) covers the whole grid
    seen = set()
    for k, ell in GRID:
        fam = hls_family(k, ell)
        key = (k, fam.d)
        if key in seen:
            continue
        seen.add(key)
        B = blow_up(fam, (8,) * fam.d)
        assert min_codegree(B)[0] >= 8 - k + 1, (k, ell)
    elapsed = time.time() - t0
    assert elapsed < 60.0, f"took {elapsed:.2f}s"
    print(
        f"CRITERION 6: PASS (exact value 2; {len(seen)} blow-up bounds, "
        f"{elapsed:.2f}s)"
    )


def test_criterion_07_search_oracle_equivalence():
    t0 = time.time()
    counts = {}
    for k, ell in [(3, 4), (4, 5), (5, 7)]:
        brute = brute_force_enumerate(k, ell, 3)
        dfs = dfs_enumerate(k, ell, 3)
        assert dfs.count == brute.count, (k, ell)
        counts[(k, ell)] = dfs.count
    # counts depend on ell only through (gcd(k, ell), q)
    for (k, ell), alt in [((3, 4), 5), ((4, 5), 7), ((5, 7), 8), ((5, 7), 9)]:
        assert dfs_enumerate(k, alt, 3).count == counts[(k, ell)], (k, alt)
    elapsed = time.time() - t0
    assert elapsed < 1800.0, f"took {elapsed:.2f}s"
    print(f"CRITERION 7: PASS (counts {counts}, {elapsed:.2f}s)")


@pytest.mark.longrun
def test_criterion_08_nonexistence_k20():
    t0 = time.time()
    result = dfs_exists(20, 24, 3)
    elapsed = time.time() - t0
    assert result.complete and result.count == 0
    assert result.status == "none"
    print(
        f"CRITERION 8: PASS (k=20 ell=24 d=3 none, {result.nodes} nodes, "
        f"{elapsed:.2f}s)"
    )


def test_criterion_09_count_attempt_k15():
    t0 = time.time()
    sound = []

    def recheck(types):
        fam = TypeFamily(15, 18, 3, types)
        sound.append(verify_family(fam).passed)

    result = dfs_enumerate(15, 18, 3, on_solution=recheck)
    elapsed = time.time() - t0
    assert result.complete
    assert len(sound) == result.count and all(sound)
    match = "match" if result.count == 432 else "mismatch"
    print(
        f"CRITERION 9: PASS (count {result.count} vs 432: {match}; "
        f"convention {CONVENTION!r}; all {result.count} re-verified; "
        f"{elapsed:.2f}s)"
    )


def test_criterion_10_structural_pipeline():
    t0 = time.time()
    b24 = base_family(4, 2)
    for n in (8, 12):
        H = blow_up(TypeFamily(4, 6, 2, b24.types), (n // 2, n // 2))
        out = find_structural_partition(H)
        assert out.certificate is not None, n
        B = out.certificate.B
        assert n / 3 <= len(B) <= 2 * n / 3
        for f in H.edge_list():
            inter = len(B & set(f))
            assert inter % 2 == 1 and (4 - inter) % 2 == 1
    out = find_structural_partition(complete_hypergraph(7, 3))
    assert out.certificate is None
    assert out.failure_stage == "no non-exchangeable pair"
    elapsed = time.time() - t0
    assert elapsed < 10.0, f"took {elapsed:.2f}s"
    print(f"CRITERION 10: PASS (n=8,12 partitions; K_7^3 stage; {elapsed:.2f}s)")


def _h12():
    return blow_up(TypeFamily(4, 6, 2, base_family(4, 2).types), (6, 6))


def test_criterion_11_walk_machinery():
    t0 = time.time()
    rng = random.Random(2026)
    K6 = complete_hypergraph(6, 3)
    H12 = _h12()
    invocations = 0

    def random_forming(H):
        nonlocal invocations
        edges = sorted(H.edge_list())
        k = H.k
        while True:
            e = list(rng.choice(edges))
            rng.shuffle(e)
            i, j = sorted(rng.sample(range(1, k + 1), 2))
            w = is_exchangeable(H, tuple(e), e[i - 1], e[j - 1])
            if w is None:
                continue
            sigma = list(range(1, k + 1))
            rng.shuffle(sigma)
            cert = forming_good_walk(H, tuple(e), tuple(sigma), i, j, w)
            invocations += 1
            assert cert.length == 3 * k  # tight walk of length exactly 2k
            assert validate_vertex_certificate(cert, H)
            return

    def random_realize(H):
        nonlocal invocations
        edges = sorted(H.edge_list())
        k = H.k
        e = rng.choice(edges)
        # realizable rearrangements permute positions within a part
        groups = {}
        for pos, v in enumerate(e, start=1):
            groups.setdefault(H.partition.get(v, 0) if H.partition else 0,
                              []).append(pos)
        sigma = [0] * k
        for positions in groups.values():
            shuffled = positions[:]
            rng.shuffle(shuffled)
            for src, dst in zip(positions, shuffled):
                sigma[src - 1] = dst
        sigma = tuple(sigma)
        cert = realize_permutation_walk(H, e, sigma)
        invocations += 1
        assert cert is not None
        assert cert.length - k <= 10 * k * k - 10 * k
        assert cert.sequence[:k] == e
        assert cert.sequence[-k:] == tuple(e[s - 1] for s in sigma)
        assert validate_vertex_certificate(cert, H)

    for _ in range(250):
        random_forming(K6)
        random_forming(H12)
        random_realize(K6)
        random_realize(H12)
    assert invocations == 1000
    K9 = complete_hypergraph(9, 3)
    cert = build_cycle_certificate(K9, 7, {2, 5, 8})
    assert cert is not None and cert.length == 7
    assert validate_vertex_certificate(cert, K9)
    elapsed = time.time() - t0
    assert elapsed < 60.0, f"took {elapsed:.2f}s"
    print(f"CRITERION 11: PASS (1000 walk invocations; {elapsed:.2f}s)")
