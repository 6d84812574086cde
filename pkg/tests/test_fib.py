"""Cocartesian fibrations, comma objects, transport, and comprehension."""

import itertools
import random

import pytest

from finsset import (
    InputError,
    SimplicialOperator,
    TruncationError,
    arrow_space,
    comma,
    comprehension,
    cylinder_union,
    fiberwise_equivalence_check,
    grothendieck,
    is_cartesian_arrow,
    is_cartesian_fibration,
    is_cartesian_functor,
    is_cocartesian_arrow,
    is_cocartesian_fibration,
    pointwise_cocartesian_cylinder_lift,
    strict_fiber,
)
from finsset.sset import (
    Enc,
    FinCat,
    FinFunctor,
    SSetMap,
    as_map,
    compose_maps,
    discrete_category,
    enumerate_maps,
    homotopy_category,
    horn,
    identity_map,
    inclusion,
    maps_equal,
    nerve,
    nerve_functor,
    nondeg,
    operator_as_map,
    point,
    poset_category,
    product,
    pullback,
    quasi_certificate,
    simplex,
    sset_isomorphism,
    terminal_map,
    truncate,
    vertex_as_map,
    walking_isomorphism,
)


def collapse(dim, vertex):
    return Enc(SimplicialOperator(dim, 0, (0,) * (dim + 1)), vertex)


def product_cat(C, D):
    """Product category with comma-joined object and arrow names."""
    objects = tuple(f"{c},{d}" for c in C.objects for d in D.objects)
    arrows = {
        f"{a},{b}": (f"{C.src(a)},{D.src(b)}", f"{C.tgt(a)},{D.tgt(b)}")
        for a in C.arrows
        for b in D.arrows
    }
    comp = {}
    for a2 in C.arrows:
        for b2 in D.arrows:
            for a1 in C.arrows:
                if C.tgt(a1) != C.src(a2):
                    continue
                for b1 in D.arrows:
                    if D.tgt(b1) != D.src(b2):
                        continue
                    comp[(f"{a2},{b2}", f"{a1},{b1}")] = (
                        f"{C.compose(a2, a1)},{D.compose(b2, b1)}"
                    )
    idents = {
        f"{c},{d}": f"{C.identities[c]},{D.identities[d]}"
        for c in C.objects
        for d in D.objects
    }
    cat = FinCat(objects, arrows, comp, idents)
    assert cat.validate() == []
    return cat


def second_projection(C, D):
    AB = product_cat(C, D)
    proj = FinFunctor(
        AB,
        D,
        {o: o.split(",")[1] for o in AB.objects},
        {a: a.split(",")[1] for a in AB.arrows},
    )
    assert proj.validate() == []
    return AB, proj


TERMINAL_CAT = discrete_category(("t",))


def cograph():
    """Strict diagram over [1] gluing a point into the interval at 0."""
    base = poset_category(1)
    fiber = poset_category(1)
    pick0 = FinFunctor(TERMINAL_CAT, fiber, {"t": "o0"}, {"id_t": "0.0"})
    return grothendieck(base, {"o0": TERMINAL_CAT, "o1": fiber}, {"0.1": pick0})


@pytest.fixture(scope="module")
def interval_arrows():
    return arrow_space(simplex(1), budget=3)


@pytest.fixture(scope="module")
def p1_certificate(interval_arrows):
    return is_cocartesian_fibration(interval_arrows.codomain_eval, 3)


@pytest.fixture(scope="module")
def cograph_result():
    return cograph()


@pytest.fixture(scope="module")
def cograph_certificate(cograph_result):
    return is_cocartesian_fibration(cograph_result.map, 3)


# -- single-edge verdicts ---------------------------------------------------


def test_projection_edge_criterion_both_modes():
    """Over a product projection an edge is cocartesian exactly when its
    complementary component is invertible; exact and budgeted modes agree."""
    A = poset_category(1)
    AB, proj = second_projection(A, poset_category(1))
    p = nerve_functor(proj, nerve(AB), nerve(poset_category(1)))
    for name in sorted(AB.arrows):
        if AB.is_identity(name):
            continue
        chi = nondeg(name, 1)
        exact = is_cocartesian_arrow(p, chi, mode=proj)
        budgeted = is_cocartesian_arrow(p, chi, mode=3)
        invertible = name.split(",")[0] in A.isomorphism_pairs()
        assert exact.cocartesian == budgeted.cocartesian == invertible


def test_projection_criterion_with_invertible_component():
    W = walking_isomorphism()
    AB, proj = second_projection(W, poset_category(1))
    p = nerve_functor(proj, nerve(AB, cutoff=3), nerve(poset_category(1), cutoff=3))
    for name in sorted(AB.arrows):
        if AB.is_identity(name):
            continue
        assert is_cocartesian_arrow(p, nondeg(name, 1), mode=proj).cocartesian


def test_degenerate_edges_are_cocartesian(cograph_result):
    G = cograph_result
    chi = collapse(1, "o0;t")
    assert is_cocartesian_arrow(G.map, chi, mode=3).cocartesian
    assert is_cocartesian_arrow(G.map, chi, mode=G.projection).cocartesian


def test_edge_verdict_rejects_vertices(cograph_result):
    with pytest.raises(InputError, match="property of edges"):
        is_cocartesian_arrow(cograph_result.map, nondeg("o0;t", 0), 3)


def test_exact_mode_demands_the_matching_nerve(cograph_result):
    G = cograph_result
    wrong = FinFunctor(
        G.total, G.total, {o: o for o in G.total.objects}, {a: a for a in G.total.arrows}
    )
    with pytest.raises(InputError, match="nerve of the supplied functor"):
        is_cocartesian_arrow(G.map, G.chosen_lift("0.1", "t"), mode=wrong)


def test_cartesian_edge_criterion(interval_arrows):
    """Edges of the arrow space: cocartesian over the codomain evaluation
    when the domain component is invertible, cartesian over the domain
    evaluation when the codomain component is invertible."""
    AS = interval_arrows
    ho = homotopy_category(simplex(1), quasi_certificate(simplex(1), 3))
    for name in AS.space.sset.nondeg_cells(1):
        chi = nondeg(name, 1)
        assert is_cocartesian_arrow(AS.codomain_eval, chi, 3).cocartesian == ho.invertible(
            AS.domain_eval.apply(chi)
        )
        assert is_cartesian_arrow(AS.domain_eval, chi, 3).cocartesian == ho.invertible(
            AS.codomain_eval.apply(chi)
        )


# -- fibration certificates --------------------------------------------------


def test_codomain_evaluation_certificate(interval_arrows, p1_certificate):
    cert = p1_certificate
    assert cert.certified and cert.mode == "budgeted(3)"
    assert len(cert.witnesses) == 4
    lift = cert.lift(nondeg("0.1", 1), nondeg("h0.0", 0))
    assert lift == nondeg("h1.0", 1)
    # the recorded table passes a fresh arrow check per entry
    for chi in cert.witnesses.values():
        assert is_cocartesian_arrow(cert.map, chi, 3).cocartesian
    assert cert.outer is not None and cert.outer.certified
    assert "certified" in cert.summary()


def test_terminal_projection_is_trivially_certified():
    cert = is_cocartesian_fibration(terminal_map(simplex(1), point()), 3)
    assert cert.certified
    # one lift per source vertex over the unique degenerate base edge
    assert len(cert.witnesses) == 2
    assert all(not w.op.is_identity for w in cert.witnesses.values())


def test_initial_vertex_inclusion_is_refuted():
    v0 = operator_as_map(SimplicialOperator(0, 1, (0,)))
    cert = is_cocartesian_fibration(v0, 3)
    assert not cert.certified
    assert cert.counterexample == {"arrow": ("0.1", (0, 1)), "vertex": ("0", (0,))}
    assert "refuted" in cert.summary()


def test_prerequisites_reject_non_quasi_ends():
    i = inclusion(horn(2, 1), simplex(2))
    with pytest.raises(InputError, match="prerequisites unmet"):
        is_cocartesian_fibration(i, 2)


def test_domain_evaluation_is_a_cartesian_fibration(interval_arrows):
    cert = is_cartesian_fibration(interval_arrows.domain_eval, 3)
    assert cert.certified and cert.dual
    assert cert.mode == "cartesian-budgeted(3)"
    assert len(cert.witnesses) == 4
    # the chosen lift of the interval arrow into the identity vertex
    lift = cert.lift(nondeg("0.1", 1), nondeg("h0.2", 0))
    assert is_cartesian_arrow(cert.map, lift, 3).cocartesian


def test_exact_and_budgeted_certificates_agree(cograph_result, cograph_certificate):
    G = cograph_result
    exact = is_cocartesian_fibration(G.map, mode=G.projection)
    budgeted = cograph_certificate
    assert exact.certified and budgeted.certified
    assert {k: v.key() for k, v in exact.witnesses.items()} == {
        k: v.key() for k, v in budgeted.witnesses.items()
    }
    for chi in G.nerve_total.level(1):
        assert (
            is_cocartesian_arrow(G.map, chi, mode=G.projection).cocartesian
            == is_cocartesian_arrow(G.map, chi, mode=3).cocartesian
        )


def test_exact_mode_refutes_functors_that_do_not_lift_isomorphisms():
    W = walking_isomorphism()
    pick = FinFunctor(TERMINAL_CAT, W, {"t": "a"}, {"id_t": "ia"})
    p = nerve_functor(pick, nerve(TERMINAL_CAT), nerve(W, cutoff=2))
    with pytest.raises(InputError, match="lift isomorphisms"):
        is_cocartesian_fibration(p, mode=pick)


# -- comma objects -----------------------------------------------------------


def test_comma_of_identities_is_the_arrow_space(interval_arrows):
    idm = identity_map(simplex(1))
    C = comma(idm, idm, budget=3)
    assert C.sset.counts() == (3, 3, 1)
    assert sset_isomorphism(C.sset, interval_arrows.space.sset) is not None
    assert C.codomain_certificate.certified
    assert C.domain_certificate.certified and C.domain_certificate.dual


def test_comma_below_the_initial_vertex():
    v0 = operator_as_map(SimplicialOperator(0, 1, (0,)))
    C = comma(v0, identity_map(simplex(1)), budget=3)
    assert C.sset.counts() == (2, 1)
    assert sset_isomorphism(C.sset, simplex(1)) is not None
    assert C.codomain_certificate.certified and C.domain_certificate.certified


def test_comma_below_the_terminal_vertex():
    v1 = operator_as_map(SimplicialOperator(0, 1, (1,)))
    C = comma(v1, identity_map(simplex(1)), budget=3)
    assert C.sset.counts() == (1,)
    assert sset_isomorphism(C.sset, point()) is not None


def test_comma_input_guards():
    with pytest.raises(InputError, match="share a codomain"):
        comma(identity_map(simplex(1)), identity_map(simplex(2)))
    bad = identity_map(horn(2, 1))
    with pytest.raises(InputError, match="quasi-category"):
        comma(bad, bad, budget=2)


def test_comma_cutoff_underflow():
    A = truncate(simplex(2), 1)
    with pytest.raises(TruncationError):
        comma(identity_map(A), identity_map(A), budget=3)


# -- the Grothendieck construction -------------------------------------------


def test_cograph_total_nerve_is_a_triangle(cograph_result):
    G = cograph_result
    assert G.nerve_total.counts() == (3, 3, 1)
    assert sset_isomorphism(G.nerve_total, simplex(2)) is not None
    chi = G.chosen_lift("0.1", "t")
    assert chi == nondeg("0.1;t;0.0", 1)
    assert is_cocartesian_arrow(G.map, chi, mode=3).cocartesian
    assert is_cocartesian_arrow(G.map, chi, mode=G.projection).cocartesian
    other = nondeg("0.1;t;0.1", 1)
    assert not is_cocartesian_arrow(G.map, other, mode=3).cocartesian
    assert not is_cocartesian_arrow(G.map, other, mode=G.projection).cocartesian


def test_constant_terminal_diagram_is_the_identity_shape():
    base = poset_category(1)
    ident = FinFunctor(TERMINAL_CAT, TERMINAL_CAT, {"t": "t"}, {"id_t": "id_t"})
    G = grothendieck(base, {"o0": TERMINAL_CAT, "o1": TERMINAL_CAT}, {"0.1": ident})
    assert G.nerve_total.counts() == G.nerve_base.counts() == (2, 1)
    assert G.map.is_mono()


def test_constant_interval_over_a_point():
    base = discrete_category(("b",))
    G = grothendieck(base, {"b": poset_category(1)}, {})
    assert sset_isomorphism(G.nerve_total, simplex(1)) is not None
    assert G.nerve_base.counts() == (1,)


def test_grothendieck_validates_the_diagram():
    base = poset_category(2)
    fiber = poset_category(1)
    pick0 = FinFunctor(TERMINAL_CAT, fiber, {"t": "o0"}, {"id_t": "0.0"})
    pick1 = FinFunctor(TERMINAL_CAT, fiber, {"t": "o1"}, {"id_t": "1.1"})
    ident = FinFunctor(fiber, fiber, {o: o for o in fiber.objects}, {a: a for a in fiber.arrows})
    fibers = {"o0": TERMINAL_CAT, "o1": fiber, "o2": fiber}
    with pytest.raises(InputError, match="missing fiber functor"):
        grothendieck(base, fibers, {"0.1": pick0, "1.2": ident})
    with pytest.raises(InputError, match="not functorial"):
        grothendieck(base, fibers, {"0.1": pick0, "1.2": ident, "0.2": pick1})
    with pytest.raises(InputError, match="wrong fibers"):
        grothendieck(poset_category(1), {"o0": fiber, "o1": fiber}, {"0.1": pick0})


# -- pointwise cocartesian cylinder lifts -------------------------------------


def two_point_transport():
    """Diagram over [1] whose source fiber has two isolated objects."""
    two = discrete_category(("x", "y"))
    fiber = poset_category(1)
    send = FinFunctor(two, fiber, {"x": "o0", "y": "o1"}, {"id_x": "0.0", "id_y": "1.1"})
    return grothendieck(poset_category(1), {"o0": two, "o1": fiber}, {"0.1": send})


def test_cylinder_lift_extends_a_partial_prescription():
    G = two_point_transport()
    cert = is_cocartesian_fibration(G.map, 3)
    source_fiber = strict_fiber(G.map, "o0")
    pt = point()
    i = SSetMap(pt, source_fiber, {"0": nondeg("o0;x", 0)})
    setup = cylinder_union(i)
    images = {}
    for k in range(len(setup.union.cells)):
        for c in setup.union.nondeg_cells(k):
            part, t = setup.product.components(nondeg(c, k))
            if t.tgt == "0" and part.op.is_identity:
                images[c] = nondeg(part.tgt, k)
    x_edge = setup.product.encode_pair(collapse(1, "o0;x"), nondeg("0.1", 1))
    images[x_edge.tgt] = G.chosen_lift("0.1", "x")
    top_end = setup.product.encode_pair(nondeg("o0;x", 0), nondeg("1", 0))
    images[top_end.tgt] = nondeg("o1;o0", 0)
    prescribed = SSetMap(setup.union, G.map.domain, images)
    base = compose_maps(as_map(G.nerve_base, nondeg("0.1", 1)), setup.product.proj2)
    h = pointwise_cocartesian_cylinder_lift(
        G.map, i, prescribed, base, certificate=cert, budget=3
    )
    assert h is not None
    y_edge = setup.product.encode_pair(collapse(1, "o0;y"), nondeg("0.1", 1))
    assert h.apply(y_edge) == cert.lift(nondeg("0.1", 1), nondeg("o0;y", 0))
    assert h.apply(x_edge) == G.chosen_lift("0.1", "x")


def test_cylinder_lift_rejects_non_cocartesian_prescriptions(
    cograph_result, cograph_certificate
):
    G = cograph_result
    source_fiber = strict_fiber(G.map, "o0")
    pt = point()
    i = SSetMap(pt, source_fiber, {"0": nondeg("o0;t", 0)})
    setup = cylinder_union(i)
    images = {}
    for k in range(len(setup.union.cells)):
        for c in setup.union.nondeg_cells(k):
            part, t = setup.product.components(nondeg(c, k))
            if t.tgt == "0" and part.op.is_identity:
                images[c] = nondeg(part.tgt, k)
    bad_edge = setup.product.encode_pair(collapse(1, "o0;t"), nondeg("0.1", 1))
    images[bad_edge.tgt] = nondeg("0.1;t;0.1", 1)
    end = setup.product.encode_pair(nondeg("o0;t", 0), nondeg("1", 0))
    images[end.tgt] = nondeg("o1;o1", 0)
    prescribed = SSetMap(setup.union, G.map.domain, images)
    base = compose_maps(as_map(G.nerve_base, nondeg("0.1", 1)), setup.product.proj2)
    with pytest.raises(InputError, match="pointwise cocartesian"):
        pointwise_cocartesian_cylinder_lift(
            G.map, i, prescribed, base, certificate=cograph_certificate, budget=3
        )


def test_cylinder_lift_requires_a_commuting_square(cograph_result, cograph_certificate):
    G = cograph_result
    source_fiber = strict_fiber(G.map, "o0")
    i = SSetMap(point(), source_fiber, {"0": nondeg("o0;t", 0)})
    setup = cylinder_union(i)
    images = {}
    for k in range(len(setup.union.cells)):
        for c in setup.union.nondeg_cells(k):
            part, t = setup.product.components(nondeg(c, k))
            if t.tgt == "0" and part.op.is_identity:
                images[c] = nondeg(part.tgt, k)
    x_edge = setup.product.encode_pair(collapse(1, "o0;t"), nondeg("0.1", 1))
    images[x_edge.tgt] = G.chosen_lift("0.1", "t")
    end = setup.product.encode_pair(nondeg("o0;t", 0), nondeg("1", 0))
    images[end.tgt] = nondeg("o1;o0", 0)
    prescribed = SSetMap(setup.union, G.map.domain, images)
    # base classifies a degenerate edge, clashing with the prescription
    base = compose_maps(as_map(G.nerve_base, collapse(1, "o0")), setup.product.proj2)
    with pytest.raises(InputError, match="does not commute"):
        pointwise_cocartesian_cylinder_lift(
            G.map, i, prescribed, base, certificate=cograph_certificate
        )


# -- comprehension ------------------------------------------------------------


def test_comprehension_of_the_codomain_evaluation(interval_arrows, p1_certificate):
    data = comprehension(p1_certificate, coherence=2, budget=3)
    assert data.fibers["0"].counts() == (1,)
    assert data.fibers["1"].counts() == (2, 1)
    functor = data.edge_functors["0.1"]
    target = functor.images["h0.0"]
    # transport picks out the nondegenerate arrow into the terminal vertex
    picked = vertex_as_map(interval_arrows.space, target.tgt)
    assert maps_equal(picked, identity_map(simplex(1)))
    cylinder = data.lift_witnesses["0.1"]
    assert cylinder.validate().passed


def test_comprehension_recovers_the_diagram(cograph_result, cograph_certificate):
    """Strict fibers match the fiber nerves and transport matches the
    diagram functors through the renaming isomorphisms."""
    G = cograph_result
    data = comprehension(cograph_certificate, budget=3)
    renamings = {}
    for b in G.base.objects:
        NF = nerve(G.fibers[b])
        ib = G.base.identities[b]
        images = {}
        for x in NF.nondeg_cells(0):
            images[x] = nondeg(f"{b};{x}", 0)
        for k in range(1, len(NF.cells)):
            for s in NF.nondeg_cells(k):
                parts = s.split("|")
                renamed = "|".join(
                    f"{ib};{G.fibers[b].src(u)};{u}" for u in parts
                )
                images[s] = nondeg(renamed, k)
        phi = SSetMap(NF, data.fibers[b], images)
        assert phi.validate().passed and phi.is_mono()
        assert sset_isomorphism(NF, data.fibers[b]) is not None
        renamings[b] = phi
    for fname, (a, b) in G.base.arrows.items():
        if G.base.is_identity(fname):
            continue
        NFa, NFb = renamings[a].domain, renamings[b].domain
        below = nerve_functor(G.on_arrows[fname], NFa, NFb)
        left = compose_maps(data.edge_functors[fname], renamings[a])
        right = compose_maps(renamings[b], below)
        assert maps_equal(left, right)


def test_comprehension_coherence_over_a_triangle_base():
    base = poset_category(2)
    fiber = poset_category(1)
    pick0 = FinFunctor(TERMINAL_CAT, fiber, {"t": "o0"}, {"id_t": "0.0"})
    ident = FinFunctor(fiber, fiber, {o: o for o in fiber.objects}, {a: a for a in fiber.arrows})
    G = grothendieck(base, {"o0": TERMINAL_CAT, "o1": fiber, "o2": fiber},
                     {"0.1": pick0, "1.2": ident, "0.2": pick0})
    cert = is_cocartesian_fibration(G.map, 3)
    data = comprehension(cert, coherence=2, budget=3)
    assert set(data.edge_functors) == {"0.1", "1.2", "0.2"}
    witness = data.coherence_2["0.1|1.2"]
    assert witness is not None
    # both ends of the comparison homotopy restrict to the two transports
    Ea = data.fibers["o0"]
    P = product(Ea, simplex(1))
    composite = compose_maps(data.edge_functors["1.2"], data.edge_functors["0.1"])
    direct = data.edge_functors["0.2"]
    for x in Ea.nondeg_cells(0):
        assert witness.apply(P.encode_pair(nondeg(x, 0), nondeg("0", 0))) == composite.images[x]
        assert witness.apply(P.encode_pair(nondeg(x, 0), nondeg("1", 0))) == direct.images[x]


def test_comprehension_of_the_identity_is_trivial():
    cert = is_cocartesian_fibration(identity_map(simplex(1)), 3)
    data = comprehension(cert, budget=3)
    assert all(X.counts() == (1,) for X in data.fibers.values())
    assert data.edge_functors["0.1"].images == {"0": nondeg("1", 0)}


def test_comprehension_consumes_cocartesian_certificates(interval_arrows):
    dual = is_cartesian_fibration(interval_arrows.domain_eval, 3)
    with pytest.raises(InputError, match="cocartesian certificate"):
        comprehension(dual)
    refuted = is_cocartesian_fibration(operator_as_map(SimplicialOperator(0, 1, (0,))), 3)
    with pytest.raises(InputError, match="certified"):
        comprehension(refuted)


# -- cartesian functors and fiberwise equivalence -----------------------------


def test_identity_is_a_cartesian_functor(cograph_result, cograph_certificate):
    verdict = is_cartesian_functor(
        cograph_certificate, cograph_certificate, identity_map(cograph_result.map.domain), 3
    )
    assert verdict.cartesian and verdict.checked == len(cograph_certificate.witnesses)


def over_maps(p):
    return [
        h
        for h in enumerate_maps(p.domain, p.domain)
        if maps_equal(compose_maps(p, h), p)
    ]


def test_cartesian_functor_failure_reports_the_witness(
    cograph_result, cograph_certificate
):
    G, cert = cograph_result, cograph_certificate
    bad = [
        (h, is_cartesian_functor(cert, cert, h, 3))
        for h in over_maps(G.map)
    ]
    failures = [v for _, v in bad if not v.cartesian]
    assert failures
    report = failures[0].failures[0]
    assert report["edge"] == ("0.1;t;0.0", (0, 1))
    assert report["image"] == ("0.1;t;0.1", (0, 1))


def test_functor_verdicts_demand_projection_compatibility(
    cograph_result, cograph_certificate
):
    G, cert = cograph_result, cograph_certificate
    skew = enumerate_maps(G.nerve_total, G.nerve_total)[0]
    if maps_equal(compose_maps(G.map, skew), G.map):
        skew = None
    if skew is not None:
        with pytest.raises(InputError, match="commute with the projections"):
            is_cartesian_functor(cert, cert, skew, 3)


def test_fiberwise_equivalence_verdicts(cograph_result, cograph_certificate):
    G, cert = cograph_result, cograph_certificate
    good = fiberwise_equivalence_check(cert, cert, identity_map(G.map.domain))
    assert good.equivalent and good.per_vertex == {"o0": True, "o1": True}
    collapsing = [
        h
        for h in over_maps(G.map)
        if not is_cartesian_functor(cert, cert, h, 3).cartesian
    ]
    report = fiberwise_equivalence_check(cert, cert, collapsing[0])
    assert not report.equivalent
    assert report.per_vertex["o0"] and not report.per_vertex["o1"]
    # the refuted fiber functor is the endpoint inclusion into the interval
    functor = report.functors["o1"]
    assert len(set(functor.obj_map.values())) == 1


# -- stability and tensoring ---------------------------------------------------


def random_strict_diagram(rng):
    fiber_pool = [TERMINAL_CAT, poset_category(1), discrete_category(("x", "y"))]
    base = poset_category(rng.choice([1, 2]))
    fibers = {o: rng.choice(fiber_pool) for o in base.objects}

    def arrows_for(C, D, obj_map):
        arr_map = {}
        for a in C.arrows:
            pool = D.hom(obj_map[C.src(a)], obj_map[C.tgt(a)])
            if not pool:
                return None
            if C.is_identity(a):
                arr_map[a] = D.identities[obj_map[C.src(a)]]
            else:
                arr_map[a] = sorted(pool)[0]
        F = FinFunctor(C, D, obj_map, arr_map)
        return F if F.validate() == [] else None

    def random_functor(C, D):
        assignments = list(itertools.product(*(list(D.objects) for _ in C.objects)))
        rng.shuffle(assignments)
        choices = []
        for assignment in assignments:
            candidate = arrows_for(C, D, dict(zip(C.objects, assignment)))
            if candidate is not None:
                choices.append(candidate)
        return rng.choice(choices)

    if len(base.objects) == 2:
        on = {"0.1": random_functor(fibers["o0"], fibers["o1"])}
    else:
        f01 = random_functor(fibers["o0"], fibers["o1"])
        f12 = random_functor(fibers["o1"], fibers["o2"])
        comp = FinFunctor(
            fibers["o0"],
            fibers["o2"],
            {x: f12.obj_map[f01.obj_map[x]] for x in fibers["o0"].objects},
            {a: f12.arr_map[f01.arr_map[a]] for a in fibers["o0"].arrows},
        )
        on = {"0.1": f01, "1.2": f12, "0.2": comp}
    return grothendieck(base, fibers, on)


def test_pullback_stability_on_fuzzed_fibrations():
    """Certificates survive pullback and edge verdicts transfer along the
    comparison projection on five seeded diagram fibrations."""
    rng = random.Random(20260817)
    for _ in range(5):
        G = random_strict_diagram(rng)
        p = G.map
        simplices = [nondeg(v, 0) for v in G.nerve_base.nondeg_cells(0)]
        simplices += [nondeg(e, 1) for e in G.nerve_base.nondeg_cells(1)]
        along = as_map(G.nerve_base, rng.choice(simplices))
        span = pullback(p, along)
        q = span.proj2
        cert = is_cocartesian_fibration(q, 3)
        assert cert.certified
        edges = sorted(span.sset.level(1), key=lambda c: c.key())[:6]
        for chi in edges:
            assert (
                is_cocartesian_arrow(q, chi, 3).cocartesian
                == is_cocartesian_arrow(p, span.proj1.apply(chi), 3).cocartesian
            )


def test_tensoring_preserves_certificates(cograph_result, cograph_certificate):
    """The composite of a certified fibration with a product projection is
    certified, and a cylinder between functors over the base is cartesian
    exactly when both of its ends are."""
    G, P = cograph_result, cograph_certificate
    E = G.map.domain
    PX = product(E, simplex(1))
    q = compose_maps(G.map, PX.proj1)
    Q = is_cocartesian_fibration(q, 2)
    assert Q.certified and len(Q.witnesses) == 8

    def end_restriction(h, vtx):
        images = {}
        for k in range(len(E.cells)):
            for x in E.nondeg_cells(k):
                images[x] = h.apply(PX.encode_pair(nondeg(x, k), collapse(k, vtx)))
        return SSetMap(E, E, images)

    over = [
        h
        for h in enumerate_maps(PX.sset, E)
        if maps_equal(compose_maps(G.map, h), compose_maps(G.map, PX.proj1))
    ]
    assert len(over) == 6
    cartesian = 0
    for h in over:
        whole = is_cartesian_functor(Q, P, h, 3).cartesian
        ends = (
            is_cartesian_functor(P, P, end_restriction(h, "0"), 3).cartesian
            and is_cartesian_functor(P, P, end_restriction(h, "1"), 3).cartesian
        )
        assert whole == ends
        cartesian += whole
    assert cartesian == 3
