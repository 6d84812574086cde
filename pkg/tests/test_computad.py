"""Coherent realization: beads, necklaces, recognition, nerve, cocones."""

import pytest

from finsset import BudgetError, InputError, computad as cp
from finsset import sset
from finsset.sset import FinCat, nondeg


def realization(X, cutoff=3, **kw):
    return cp.hc_realization(X, arrow_cutoff=cutoff, **kw)


# -- the coherent simplex ----------------------------------------------------


def test_coherent_simplex_hom_counts():
    # hom(0,n) is the nerve of the subset cube, one interior bit per vertex
    expected = {1: (1,), 2: (2, 1), 3: (4, 5, 2), 4: (8, 19, 18, 6)}
    for n, counts in expected.items():
        C = cp.hc_simplex(n)
        assert C.underlying.hom("0", str(n)).counts() == counts
    C = cp.hc_simplex(3)
    assert C.underlying.hom("1", "1").counts() == (1,)
    assert C.underlying.hom("2", "1").counts() == ()
    assert C.underlying.hom("1", "3").counts() == (2, 1)


def test_coherent_simplex_laws_and_atomics():
    C = cp.hc_simplex(3)
    assert C.underlying.validate(1) == []
    assert sorted(C.atomic[("0", "3")]) == [
        "0.3",
        "0.3<0.1.2.3",
        "0.3<0.1.3",
        "0.3<0.1.3<0.1.2.3",
        "0.3<0.2.3",
        "0.3<0.2.3<0.1.2.3",
    ]
    # composition takes levelwise unions and strips repeats
    g = nondeg("1.3", 0)
    f = nondeg("0.1", 0)
    assert C.underlying.comp("0", "1", "3", g, f) == nondeg("0.1.3", 0)


def test_coherent_simplex_budget():
    with pytest.raises(BudgetError):
        cp.hc_simplex(7)


# -- realization of standard shapes ------------------------------------------


def test_realization_matches_coherent_simplex():
    for n in range(1, 5):
        R = realization(sset.simplex(n))
        S = cp.hc_simplex(n)
        for i in range(n + 1):
            for j in range(n + 1):
                a, b = str(i), str(j)
                HR = R.underlying.hom(a, b)
                HS = S.underlying.hom(a, b)
                assert HR.counts() == HS.counts()
                trans = {}
                for k, layer in enumerate(HR.cells):
                    for name in layer:
                        trans[name] = cp.word_union_chain(R, a, b, nondeg(name, k))
                assert len(set(trans.values())) == len(trans)
                for k, layer in enumerate(HR.cells):
                    for name in layer:
                        if k == 0:
                            continue
                        for t in range(k + 1):
                            op, tgt = HR.face(name, t)
                            sop, stgt = HS.face(trans[name], t)
                            assert op == sop and trans[tgt] == stgt


def test_boundary_and_horn_hom_counts():
    B = realization(sset.boundary(3))
    assert B.underlying.hom("0", "3").counts() == (4, 4)
    L = realization(sset.horn(3, 1))
    assert L.underlying.hom("0", "3").counts() == (4, 3)
    # removing the interior kills the square cells but keeps all vertices
    assert B.underlying.hom("0", "2").counts() == (2, 1)


def test_realization_laws_and_validation():
    R = realization(sset.simplex(3))
    assert R.underlying.validate(1) == []
    for H in R.underlying.homs.values():
        assert H.validate().passed


def test_subobject_embedding():
    # realization of a subcomplex sits cellwise inside the realization
    R = realization(sset.simplex(3))
    for sub in [sset.boundary(3), sset.horn(3, 1), sset.spine(3)]:
        C = realization(sub)
        for key, H in C.underlying.homs.items():
            big = R.underlying.homs[key]
            for k, layer in enumerate(H.cells):
                for name in layer:
                    assert big.dim(name) == k
                    if k > 0:
                        assert H.faces[name] == big.faces[name]


def test_cyclic_input_needs_bound():
    loop = sset.build_sset(
        [["a"], ["e"]],
        {"e": (nondeg("a", 0), nondeg("a", 0))},
        cutoff=1,
        stable_above=1,
    )
    with pytest.raises(InputError):
        realization(loop, 2)
    R = realization(loop, 2, max_weight=2)
    assert R.underlying.hom("a", "a").counts() == (3,)
    e1 = nondeg("e[0.1]", 0)
    e2 = nondeg("e[0.1];e[0.1]", 0)
    assert R.underlying.comp("a", "a", "a", e1, e1) == e2
    with pytest.raises(BudgetError):
        R.underlying.comp("a", "a", "a", e2, e1)


def test_unstable_input_needs_visible_weight():
    H = sset.horn(2, 1)
    unstable = sset.build_sset(H.cells, H.faces, cutoff=1, stable_above=None)
    with pytest.raises(InputError):
        realization(unstable, 2)
    R = realization(unstable, 2, max_weight=1)
    assert R.underlying.hom("0", "1").counts() == (1,)
    assert R.underlying.hom("0", "2").counts() == ()


# -- factorization and recognition -------------------------------------------


def test_atomic_factorization_examples():
    R = realization(sset.simplex(3))
    word = nondeg("0.1[0.1];1.3[0.1]", 0)
    fac = cp.atomic_factorization(R, "0", "3", word)
    assert [(c, a.values) for c, a in fac] == [
        ("0.1[0.1]", (0,)),
        ("1.3[0.1]", (0,)),
    ]
    single = nondeg("0.3[0.1]", 0)
    assert cp.atomic_factorization(R, "0", "3", single) == [
        ("0.3[0.1]", fac[0][1])
    ]
    with pytest.raises(InputError):
        cp.atomic_factorization(R, "0", "0", R.underlying.id_arrow("0", 0))


def test_factorization_round_trips():
    for X in [sset.simplex(2), sset.simplex(3), sset.horn(3, 1), sset.spine(3)]:
        assert sum(X.counts()) <= 15
        R = realization(X)
        K = R.underlying
        for (a, b), H in K.homs.items():
            for r in range(3):
                if not H.has_level(r):
                    continue
                for f in H.level(r):
                    if K.is_identity_arrow(a, b, f):
                        continue
                    fs = cp.atomic_factorization(R, a, b, f)
                    assert cp.recompose(R, a, b, fs, r) == f
                    for cell, _ in fs:
                        assert any(cell in atoms for atoms in R.atomic.values())


def test_recognition_accepts_realizations():
    for X in [sset.simplex(2), sset.simplex(3), sset.boundary(2)]:
        R = realization(X)
        verdict = cp.is_computad(R.underlying, 2)
        assert verdict.ok
        assert verdict.atomic == R.atomic


def test_recognition_rejects_idempotent():
    idem = FinCat(
        objects=("a",),
        arrows={"1a": ("a", "a"), "e": ("a", "a")},
        comp={("e", "e"): "e"},
        identities={"a": "1a"},
    )
    verdict = cp.is_computad(cp.discrete_simpcat(idem), 1)
    assert not verdict.ok
    assert verdict.counterexample["arrow"][0] == "e"
    assert verdict.counterexample["factorizations"] != 1


def test_recognition_rejects_retract_identities():
    # an invertible pair decomposes the identity, breaking uniqueness
    verdict = cp.is_computad(cp.discrete_simpcat(sset.walking_isomorphism()), 1)
    assert not verdict.ok


def test_recognition_accepts_free_poset():
    verdict = cp.is_computad(cp.discrete_simpcat(sset.poset_category(2)), 1)
    assert verdict.ok
    marked = {k: v for k, v in verdict.atomic.items() if v}
    assert marked == {
        ("o0", "o1"): frozenset({"0.1"}),
        ("o1", "o2"): frozenset({"1.2"}),
    }


# -- the homotopy coherent nerve ---------------------------------------------


def test_nerve_of_discrete_enrichment_is_nerve():
    P = sset.poset_category(2)
    plain = sset.nerve(P, cutoff=3)
    coherent = cp.hc_nerve(cp.discrete_simpcat(P, arrow_cutoff=3), dim_budget=3)
    assert coherent.sset.counts() == plain.counts()
    assert sset.sset_isomorphism(plain, coherent.sset) is not None


def test_nerve_of_interval_realization():
    R = realization(sset.simplex(1), cutoff=2)
    N = cp.hc_nerve(R.underlying, dim_budget=2)
    assert sset.sset_isomorphism(sset.simplex(1), sset.truncate(N.sset, 2))


def test_nerve_two_simplex_structure():
    # a 2-cell assigns a triangle of edges plus a filling arrow whose
    # faces are the long edge and the spine composite
    R = realization(sset.simplex(2), cutoff=2)
    N = cp.hc_nerve(R.underlying, dim_budget=2)
    K = R.underlying
    for cell in N.sset.nondeg_cells(2):
        objs, _ = N.functors[cell]
        asn = N.assignment(cell)
        alpha = asn[(0, 2, ((0, 2), (0, 1, 2)))]
        H = K.homs[(objs[0], objs[2])]
        assert H.act(alpha, cp.face_op(1, 1)) == asn[(0, 2, ((0, 2),))]
        spine = K.comp(
            objs[0], objs[1], objs[2],
            asn[(1, 2, ((1, 2),))], asn[(0, 1, ((0, 1),))],
        )
        assert H.act(alpha, cp.face_op(0, 1)) == spine


def test_nerve_budget_guard():
    R = realization(sset.simplex(1), cutoff=1)
    with pytest.raises(BudgetError):
        cp.hc_nerve(R.underlying, dim_budget=3)


def test_unit_comparison():
    # bijective on vertices; injective but not surjective one level up,
    # because multi-bead paths are new 1-simplices of the nerve
    X = sset.simplex(2)
    R = realization(X, cutoff=2)
    N = cp.hc_nerve(R.underlying, dim_budget=2)
    unit = cp.hc_unit(X, N)
    assert unit.validate().passed
    assert len(set(unit.images[v].tgt for v in X.nondeg_cells(0))) == len(
        N.sset.nondeg_cells(0)
    )
    edge_images = [unit.images[e].tgt for e in X.nondeg_cells(1)]
    assert len(set(edge_images)) == len(edge_images)
    assert len(N.sset.nondeg_cells(1)) > len(edge_images)


def test_hc_map_on_spine_inclusion():
    S, D = sset.spine(2), sset.simplex(2)
    CS, CD = realization(S, 2), realization(D, 2)
    maps = cp.hc_map(sset.inclusion(S, D), CS, CD)
    for m in maps.values():
        assert m.validate().passed
    word = nondeg("0.1[0.1];1.2[0.1]", 0)
    assert maps[("0", "2")].apply(word) == word


def test_hc_map_collapse_to_point():
    D = sset.simplex(1)
    P = sset.point()
    CD, CP = realization(D, 2), realization(P, 2)
    collapse = sset.constant_map(D, P, "0")
    maps = cp.hc_map(collapse, CD, CP)
    img = maps[("0", "1")].apply(nondeg("0.1[0.1]", 0))
    assert img.tgt == "id"


# -- canonical cocones -------------------------------------------------------


def test_cocone_legs_and_composition():
    for X in [sset.simplex(1), sset.simplex(2), sset.horn(2, 1), sset.boundary(2)]:
        cone = cp.canonical_cocone(X, arrow_cutoff=3)
        assert cone.verify(2) == []


def test_cocone_mu_evaluation():
    cone = cp.canonical_cocone(sset.simplex(1), arrow_cutoff=3)
    leg0 = cone.leg("0")
    # the short bead lands on its source vertex
    assert leg0.apply(nondeg("0*0[0.1]", 0)).key() == ("0", (0,))
    # a two-bead path through vertex 1 evaluates by its final factor
    assert leg0.apply(nondeg("0.1*[0.1];1*0[0.1]", 0)).key() == ("1", (0,))
    # the bead of the joined edge picks out the whole edge
    assert leg0.apply(nondeg("0.1*0[0.2<0.1.2]", 1)).key() == ("0.1", (0, 1))


def test_cocone_hom_is_oplax_weight_value():
    # over the interval, the weight at 0 is a square's worth of paths
    cone = cp.canonical_cocone(sset.simplex(1), arrow_cutoff=3)
    H = cone.realization.underlying.hom("0*", "*0")
    assert H.counts() == (2, 1)
    H1 = cone.realization.underlying.hom("1*", "*0")
    assert H1.counts() == (1,)
