import pytest

from codegree.construct import base_family, local_replacement_family, stable_family
from codegree.family import TypeFamily
from codegree.hypergraph import (
    Hypergraph,
    WalkCertificate,
    balanced_sizes,
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
from codegree.lattice import DataError, ParameterError


def _b33(ell=4):
    fam = base_family(3, 3)
    return TypeFamily(3, ell, 3, fam.types)


def test_balanced_sizes():
    assert balanced_sizes(9, 3) == (3, 3, 3)
    assert balanced_sizes(10, 3) == (4, 3, 3)
    assert balanced_sizes(11, 3) == (4, 4, 3)


def test_blow_up_edge_count():
    H = blow_up(_b33(), (3, 3, 3))
    assert H.n == 9 and H.num_edges == 27
    # each of the three types contributes C(3,2)*3 = 9 edges
    assert H.partition[1] == 1 and H.partition[9] == 3


def test_blow_up_membership_matches_materialization():
    fam = _b33()
    dense = blow_up(fam, (3, 3, 3), materialize=True)
    lazy = blow_up(fam, (3, 3, 3), materialize=False)
    assert lazy.edges is None
    from itertools import combinations

    for e in combinations(range(1, 10), 3):
        assert dense.is_edge(e) == lazy.is_edge(e)


def test_min_codegree_blow_up_and_generic_agree():
    H = blow_up(_b33(), (3, 3, 3))
    deg_fast, wit_fast = min_codegree(H)
    generic = Hypergraph(H.n, H.k, edges=H.edge_list())
    deg_slow, _ = min_codegree(generic)
    assert deg_fast == deg_slow == 2
    assert len(wit_fast) == 2


def test_min_codegree_complete():
    assert min_codegree(complete_hypergraph(5, 3))[0] == 3


def test_hypergraph_rejects_bad_edges():
    with pytest.raises(DataError):
        Hypergraph(4, 3, edges=[(1, 2, 2)])
    with pytest.raises(DataError):
        Hypergraph(4, 3, edges=[(1, 2, 5)])


# -- certificates -----------------------------------------------------------


def test_certificate_validator_label_level():
    fam = _b33()
    good = WalkCertificate("cycle", (1, 1, 2, 1, 1, 2))
    assert validate_label_certificate(good, fam)
    bad = WalkCertificate("cycle", (1, 1, 2, 1, 2, 2))
    assert not validate_label_certificate(bad, fam)
    minus = WalkCertificate("cycle-minus", (1, 1, 1, 2), missing_window=1)
    assert validate_label_certificate(minus, fam)
    # the same sequence as a full cycle fails: window 1 has type (3,0,0)... no,
    # (2,1,0)? windows: (1,1,1) -> (3,0,0) not in the family
    assert not validate_label_certificate(WalkCertificate("cycle", (1, 1, 1, 2)), fam)


def test_certificate_validator_vertex_distinctness():
    K = complete_hypergraph(5, 3)
    assert validate_vertex_certificate(WalkCertificate("cycle", (1, 2, 3, 4)), K)
    assert not validate_vertex_certificate(WalkCertificate("cycle", (1, 2, 3, 2)), K)


def test_certificate_kind_checks():
    with pytest.raises(DataError):
        WalkCertificate("loop", (1, 2, 3))
    with pytest.raises(DataError):
        WalkCertificate("cycle-minus", (1, 2, 3, 4))  # no missing window


# -- label-level detection --------------------------------------------------


def test_type_cycle_desk_values():
    assert has_type_cycle(_b33(4), 4) is None
    cert = has_type_cycle(_b33(6), 6)
    assert cert is not None and cert.sequence == (1, 1, 2, 1, 1, 2)


def test_type_cycle_minus_desk_value():
    cert = has_type_cycle_minus(_b33(4), 4)
    assert cert is not None
    assert cert.sequence == (1, 1, 1, 2) and cert.missing_window == 1


def test_type_cycle_full_lattice_always_cyclic():
    from codegree.lattice import enumerate_types

    full = TypeFamily(3, 5, 3, frozenset(enumerate_types(3, 3)))
    for ell in (4, 5, 6, 7):
        cert = has_type_cycle(full, ell)
        assert cert is not None and len(cert.sequence) == ell


def test_type_cycle_rejects_short_ell():
    with pytest.raises(ParameterError):
        has_type_cycle(_b33(), 3)


def test_verified_families_are_cycle_free_at_their_ell():
    from math import gcd

    for k, ell in [(5, 7), (5, 9), (15, 18)]:
        fam, _ = local_replacement_family(k, ell)
        assert has_type_cycle(fam, ell) is None
        if gcd(k, ell) > 1:
            assert has_type_cycle_minus(fam, ell) is None


def test_stable_family_minus_free():
    fam, _ = stable_family(9, 22)
    assert has_type_cycle(fam, 22) is None
    assert has_type_cycle_minus(fam, 22) is None


def test_base_family_minus_not_free_when_gcd_one_small_k():
    # k = 3 allows every residue, so the exclusion never fires and the
    # explicit search finds the known certificate
    cert = has_type_cycle_minus(_b33(4), 4)
    assert cert is not None


# -- vertex-level detection -------------------------------------------------


def test_hom_cycle_desk_values():
    H9 = blow_up(_b33(), (3, 3, 3))
    assert has_hom_tight_cycle(H9, 4) is None
    cert = has_hom_tight_cycle(H9, 6)
    assert cert is not None and validate_vertex_certificate(cert, H9)
    mcert = has_hom_tight_cycle_minus(H9, 4)
    assert mcert is not None and validate_vertex_certificate(mcert, H9)


def test_hom_cycle_complete_graph():
    K = complete_hypergraph(6, 3)
    for ell in (4, 5, 6, 7):
        cert = has_hom_tight_cycle(K, ell)
        assert cert is not None and len(cert.sequence) == ell


def test_hom_cycle_state_cap():
    from codegree.lattice import CapacityError

    K = complete_hypergraph(8, 3)
    with pytest.raises(CapacityError):
        has_hom_tight_cycle(K, 5, state_cap=10)


def test_transfer_small():
    # vertex-level and label-level agree on blow-ups with parts >= ell
    fam = _b33()
    for ell in (4, 5, 6, 7, 8):
        H = blow_up(fam, (ell, ell, ell))
        lab = has_type_cycle(fam, ell)
        hom = has_hom_tight_cycle(H, ell, state_cap=50_000)
        assert (lab is None) == (hom is None)
