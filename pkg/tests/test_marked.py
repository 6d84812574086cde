"""Marked simplicial sets: shapes, sharp/core, joins, slices, certification."""

import random

import pytest

from finsset import InputError, degeneracy_op
from finsset import marked as mk
from finsset import sset


def nat_nerve(n):
    return mk.natural_marking(sset.nerve(sset.poset_category(n)))


def iso_nerve():
    return mk.natural_marking(sset.nerve(sset.walking_isomorphism(), cutoff=4))


# -- marking basics ----------------------------------------------------------


def test_degenerates_are_marked():
    M = mk.minimal_marking(sset.simplex(1))
    e = sset.nondeg("0.1", 1)
    deg = M.space.act(e, degeneracy_op(0, 1))
    assert M.is_marked(deg)
    assert not M.is_marked(e)


def test_validate_rejects_marked_vertices_and_strangers():
    M = mk.MarkedSSet(sset.simplex(1), frozenset(["0"]))
    assert any("vertex" in p for p in M.validate())
    M2 = mk.MarkedSSet(sset.simplex(1), frozenset(["nope"]))
    assert any("not a cell" in p for p in M2.validate())
    assert mk.complicial_shape("admissible", 3, 1).validate() == []


def test_natural_marking_examples():
    D1 = mk.natural_marking(sset.simplex(1))
    assert D1.marked == frozenset()
    assert mk.natural_marking(sset.point()).marked == frozenset()
    W = iso_nerve()
    edges = set(W.space.nondeg_cells(1))
    assert edges <= W.marked
    N2 = nat_nerve(2)
    assert not any(N2.space.dim(x) == 1 for x in N2.marked)
    assert set(N2.space.nondeg_cells(2)) <= N2.marked


def test_marked_map_condition():
    D = mk.complicial_shape("marked_simplex", 1)
    N1 = nat_nerve(1)
    f = sset.first_map(
        D.space, N1.space, partial={"0": sset.nondeg("o0", 0), "1": sset.nondeg("o1", 0)}
    )
    assert f is not None
    assert not mk.preserves_marking(D, N1, f)
    assert any("unmarked image" in p for p in mk.marked_map_problems(D, N1, f))
    g = sset.constant_map(D.space, N1.space, "o0")
    assert mk.preserves_marking(D, N1, g)


# -- complicial shapes -------------------------------------------------------


def test_admissible_marking_tables():
    tables = {
        (1, 0): {"0.1"},
        (1, 1): {"0.1"},
        (2, 0): {"0.1", "0.1.2"},
        (2, 1): {"0.1.2"},
        (2, 2): {"1.2", "0.1.2"},
        (3, 0): {"0.1", "0.1.2", "0.1.3", "0.1.2.3"},
        (3, 1): {"0.1.2", "0.1.2.3"},
        (3, 2): {"1.2.3", "0.1.2.3"},
        (3, 3): {"2.3", "0.2.3", "1.2.3", "0.1.2.3"},
    }
    for (n, k), want in tables.items():
        assert mk.complicial_shape("admissible", n, k).marked == frozenset(want)


def test_natural_and_sharp_add_codimension_one_faces():
    nat = mk.complicial_shape("natural", 2, 1)
    assert nat.marked == frozenset({"0.1", "1.2", "0.1.2"})
    shp = mk.complicial_shape("sharp", 2, 1)
    assert shp.marked == frozenset({"0.1", "1.2", "0.2", "0.1.2"})
    nat30 = mk.complicial_shape("natural", 3, 0)
    assert nat30.marked == mk.complicial_shape("admissible", 3, 0).marked | {"0.2.3"}
    shp30 = mk.complicial_shape("sharp", 3, 0)
    assert shp30.marked == nat30.marked | {"1.2.3"}
    # at n = 1 there are no codimension-one faces of positive dimension
    assert mk.complicial_shape("natural", 1, 1).marked == frozenset({"0.1"})
    assert mk.complicial_shape("sharp", 1, 1).marked == frozenset({"0.1"})


def test_horn_shape_inherits_marking():
    H = mk.complicial_shape("horn", 3, 1)
    assert H.space.counts() == (4, 6, 3)
    assert H.marked == frozenset({"0.1.2"})


def test_marked_simplex_and_bad_input():
    assert mk.complicial_shape("marked_simplex", 0).marked == frozenset()
    assert mk.complicial_shape("marked_simplex", 2).marked == frozenset({"0.1.2"})
    with pytest.raises(InputError):
        mk.complicial_shape("admissible", 2, 3)
    with pytest.raises(InputError):
        mk.complicial_shape("sideways", 2, 1)


# -- sharp and core ----------------------------------------------------------


def test_core_of_poset_nerve_is_discrete():
    C = mk.core_n(nat_nerve(1), 0)
    assert C.space.counts() == (2,)
    assert C.marked == frozenset()


def test_core_of_groupoid_nerve_is_everything():
    W = iso_nerve()
    C = mk.core_n(W, 0)
    assert C.space.counts() == W.space.counts()
    assert C.marked == W.marked


def test_core_inclusion_is_a_valid_mono():
    W = nat_nerve(2)
    inc = mk.core_inclusion(W, 0)
    assert inc.validate().passed
    assert inc.is_mono()


def _random_marked(rng):
    pool = [
        sset.simplex(2),
        sset.simplex(3),
        sset.horn(3, 1),
        sset.boundary(3),
        sset.nerve(sset.poset_category(2)),
        sset.nerve(sset.walking_isomorphism(), cutoff=3),
    ]
    X = rng.choice(pool)
    names = [x for k, layer in enumerate(X.cells) for x in layer if k >= 1]
    marks = frozenset(x for x in names if rng.random() < 0.5)
    return mk.MarkedSSet(X, marks)


def _same(A, B):
    return (
        A.space.cells == B.space.cells
        and A.space.faces == B.space.faces
        and A.marked == B.marked
    )


def test_sharp_core_triangle_identities_fuzzed():
    rng = random.Random(20260815)
    for _ in range(20):
        M = _random_marked(rng)
        n = rng.randrange(0, 3)
        assert _same(mk.sharp_n(mk.core_n(mk.sharp_n(M, n), n), n), mk.sharp_n(M, n))
        assert _same(mk.core_n(mk.sharp_n(mk.core_n(M, n), n), n), mk.core_n(M, n))
        # the core is a genuine subpresentation
        assert mk.core_n(M, n).space.validate().passed


def test_sharp_core_identity_on_maximal():
    mx = mk.maximal_marking(sset.nerve(sset.poset_category(2)))
    rt = mk.core_n(mk.sharp_n(mx, 0), 0)
    assert _same(rt, mx)


# -- join and slice ----------------------------------------------------------


def test_marked_join_of_points_is_minimal_edge():
    J = mk.marked_join(mk.minimal_marking(sset.point()), mk.minimal_marking(sset.point()))
    assert J.space.counts() == (2, 1)
    assert J.marked == frozenset()


def test_marked_join_propagates_factor_marking():
    J = mk.marked_join(mk.complicial_shape("marked_simplex", 1), mk.minimal_marking(sset.point()))
    assert J.space.counts() == (3, 3, 1)
    assert J.marked == frozenset({"0.1*", "0.1*0"})
    K = mk.marked_join(mk.minimal_marking(sset.point()), mk.complicial_shape("marked_simplex", 1))
    assert K.marked == frozenset({"*0.1", "0*0.1"})


def test_marked_join_underlying_agrees():
    A = mk.complicial_shape("sharp", 2, 1)
    B = mk.complicial_shape("marked_simplex", 1)
    J = mk.marked_join(A, B)
    assert J.space.counts() == sset.join(A.space, B.space).counts()
    # a pair is marked when either factor is
    assert "0.2*0.1" in J.marked
    assert "0*0.1" in J.marked and "0.1*0" in J.marked


def test_marked_slice_by_empty_map_returns_marking():
    W = iso_nerve()
    E = mk.minimal_marking(sset.empty_sset())
    f = sset.SSetMap(E.space, W.space, {})
    S = mk.marked_slice(W, f, E, budget=2)
    for k in range(1, 3):
        got = {x for x in S.sset.nondeg_cells(k) if x in S.marked.marked}
        want_count = len(W.space.nondeg_cells(k)) if k >= 2 else len(
            [x for x in W.space.nondeg_cells(1) if x in W.marked]
        )
        assert len(got) == want_count


def test_marked_slice_over_vertex_recovers_natural_marking():
    N = nat_nerve(2)
    pt = sset.point()
    f = sset.SSetMap(pt, N.space, {"0": sset.nondeg("o2", 0)})
    S = mk.marked_slice(N, f, mk.minimal_marking(pt), budget=2)
    assert S.sset.counts() == (3, 3, 1)
    edges = [x for x in S.sset.nondeg_cells(1)]
    assert all(x not in S.marked.marked for x in edges)
    assert all(x in S.marked.marked for x in S.sset.nondeg_cells(2))


def test_marked_slice_rejects_unmarked_base_map():
    N = nat_nerve(1)
    D = mk.complicial_shape("marked_simplex", 1)
    f = sset.first_map(
        D.space, N.space, partial={"0": sset.nondeg("o0", 0), "1": sset.nondeg("o1", 0)}
    )
    with pytest.raises(InputError):
        mk.marked_slice(N, f, D, budget=1)


# -- certification -----------------------------------------------------------


def test_minimally_marked_edge_certifies():
    cert = mk.complicial_certify(mk.minimal_marking(sset.simplex(1)), 3)
    assert cert.certified
    assert cert.tally[("horn", 1, 1)] >= 2


def test_minimally_marked_triangle_refutes_at_inner_horn():
    cert = mk.complicial_certify(mk.minimal_marking(sset.simplex(2)), 3)
    assert not cert.certified
    assert cert.refuted_at == (2, 1)
    assert cert.counterexample["family"] == "horn"


def test_thinness_refutation():
    # one vertex, one loop e, marked 2-cells t (degenerate outer faces,
    # d1 = e) and u (all faces e): every admissible horn has a marked
    # filler, but the (2,1) thinness extension demands a marked d1 image
    # of t and e is not marked.
    dega = sset.Enc(degeneracy_op(0, 0), "a")
    loop = sset.nondeg("e", 1)
    X = sset.build_sset(
        [["a"], ["e"], ["t", "u"]],
        {
            "e": (sset.nondeg("a", 0), sset.nondeg("a", 0)),
            "t": (dega, loop, dega),
            "u": (loop, loop, loop),
        },
        cutoff=2,
    )
    assert X.validate().passed
    cert = mk.complicial_certify(mk.MarkedSSet(X, frozenset({"t", "u"})), 2)
    assert not cert.certified
    assert cert.refuted_at == (2, 1)
    assert cert.counterexample["family"] == "thinness"


def test_natural_nerve_markings_certify():
    for M in [nat_nerve(1), nat_nerve(2), iso_nerve()]:
        cert = mk.complicial_certify(M, 3)
        assert cert.certified, cert.summary()


def test_sharp_of_groupoid_nerve_certifies():
    cert = mk.complicial_certify(mk.sharp_n(iso_nerve(), 0), 3)
    assert cert.certified
