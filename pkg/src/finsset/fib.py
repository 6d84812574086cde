"""Cocartesian and cartesian fibrations with budgeted or exact certificates.

An edge chi of the total space of p: E -> B is cocartesian when every
initial-vertex horn square whose first edge is chi admits a filler.  Two
decision modes are offered.  Passing an integer n selects ``budgeted(n)``
mode, which checks every such square up to simplex dimension n by
exhaustive search; passing a functor selects ``exact-nerve`` mode, which
applies when the map is the nerve of that functor and decides the
classical factorization condition in the underlying categories.

A fibration certificate records one chosen lift per (base edge, source
vertex) pair.  The chosen lift is the least valid candidate in encoded
order, and downstream constructions consume recorded witnesses rather
than searching again.  Built on top of the certificates: comma objects
via the arrow space, the covariant Grothendieck construction, pointwise
cocartesian cylinder lifts, comprehension data (strict fibers, transport
functors, 2-coherence witnesses), cartesian-functor verdicts, and a
fiberwise equivalence check on homotopy categories.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import InputError
from .ops import SimplicialOperator, face_op
from .sset import (
    Enc,
    FinCat,
    FinFunctor,
    FinSSet,
    LiftingCertificate,
    MapSpaceResult,
    SSetMap,
    SpanResult,
    as_map,
    compose_maps,
    empty_sset,
    enumerate_maps,
    first_map,
    homotopy_category,
    horn,
    identity_map,
    inclusion,
    is_equivalence,
    lifting_certify,
    mapping_space,
    maps_equal,
    nerve,
    nerve_functor,
    nondeg,
    op_operator,
    opposite,
    opposite_map,
    product,
    product_map,
    pullback,
    quasi_certificate,
    simplex,
    solve_lifting,
    subcomplex,
    vertex_name,
)
from .sset.lifting import restriction_partial

__all__ = [
    "ArrowSpace",
    "ArrowVerdict",
    "CommaResult",
    "ComprehensionData",
    "CylinderSetup",
    "FiberwiseReport",
    "FibrationCertificate",
    "FunctorVerdict",
    "GrothendieckResult",
    "arrow_space",
    "comma",
    "comprehension",
    "cylinder_union",
    "fiberwise_equivalence_check",
    "grothendieck",
    "is_cartesian_arrow",
    "is_cartesian_fibration",
    "is_cartesian_functor",
    "is_cocartesian_arrow",
    "is_cocartesian_fibration",
    "pointwise_cocartesian_cylinder_lift",
    "strict_fiber",
]


def _collapse(dim: int, vertex: str) -> Enc:
    return Enc(SimplicialOperator(dim, 0, (0,) * (dim + 1)), vertex)


def _op_enc(e: Enc) -> Enc:
    return Enc(op_operator(e.op), e.tgt)


def _same_presentation(X: FinSSet, Y: FinSSet) -> bool:
    return X is Y or (X.cells == Y.cells and X.faces == Y.faces)


# -- cocartesian arrows -----------------------------------------------------


@dataclass
class ArrowVerdict:
    """Outcome of a single-edge cocartesianity decision."""

    edge: Enc
    mode: str
    cocartesian: bool
    squares_checked: int
    counterexample: dict | None = None

    def __bool__(self) -> bool:
        return self.cocartesian


def _budgeted_cocartesian(
    p: SSetMap, chi: Enc, budget: int, node_budget: int | None
) -> ArrowVerdict:
    E, B = p.domain, p.codomain
    src = nondeg(E.vertex(chi, 0), 0)
    tgt = nondeg(E.vertex(chi, 1), 0)
    checked = 0
    for n in range(2, budget + 1):
        E.require_level(n)
        B.require_level(n)
        L = horn(n, 0)
        D = simplex(n)
        inc = inclusion(L, D)
        fixed = {"0": src, "1": tgt, "0.1": chi}
        for u in enumerate_maps(L, E, partial=fixed, node_budget=node_budget):
            below = {inc.images[a].tgt: p.apply(u.images[a]) for a in u.images}
            for v in enumerate_maps(D, B, partial=below, node_budget=node_budget):
                checked += 1
                if solve_lifting(inc, p, u, v, node_budget=node_budget) is None:
                    witness = {
                        "horn": (n, 0),
                        "top": {a: e.key() for a, e in u.images.items()},
                        "bottom": {a: e.key() for a, e in v.images.items()},
                    }
                    return ArrowVerdict(
                        chi, f"budgeted({budget})", False, checked, witness
                    )
    return ArrowVerdict(chi, f"budgeted({budget})", True, checked)


def _require_nerve(p: SSetMap, F: FinFunctor) -> None:
    want = nerve_functor(F, p.domain, p.codomain)
    if want.images != p.images:
        raise InputError("exact mode needs the nerve of the supplied functor")


def _edge_arrow(C: FinCat, chi: Enc) -> str:
    # nerve edges decode to arrows; degenerate edges decode to identities
    if chi.op.is_identity:
        return chi.tgt
    return C.identities[chi.tgt]


def _classical_cocartesian(F: FinFunctor, a: str) -> tuple[bool, dict | None]:
    C, D = F.dom, F.cod
    x, y = C.src(a), C.tgt(a)
    fa = F.arr_map[a]
    for z in C.objects:
        for w in C.hom(x, z):
            for v in D.hom(F.obj_map[y], F.obj_map[z]):
                if D.compose(v, fa) != F.arr_map[w]:
                    continue
                ts = [
                    t
                    for t in C.hom(y, z)
                    if F.arr_map[t] == v and C.compose(t, a) == w
                ]
                if len(ts) != 1:
                    return False, {
                        "arrow": a,
                        "through": w,
                        "below": v,
                        "solutions": len(ts),
                    }
    return True, None


def _classical_cartesian(F: FinFunctor, a: str) -> tuple[bool, dict | None]:
    C, D = F.dom, F.cod
    x, y = C.src(a), C.tgt(a)
    fa = F.arr_map[a]
    for z in C.objects:
        for w in C.hom(z, y):
            for v in D.hom(F.obj_map[z], F.obj_map[x]):
                if D.compose(fa, v) != F.arr_map[w]:
                    continue
                ts = [
                    t
                    for t in C.hom(z, x)
                    if F.arr_map[t] == v and C.compose(a, t) == w
                ]
                if len(ts) != 1:
                    return False, {
                        "arrow": a,
                        "through": w,
                        "below": v,
                        "solutions": len(ts),
                    }
    return True, None


def is_cocartesian_arrow(
    p: SSetMap,
    chi: Enc,
    mode: int | FinFunctor = 3,
    node_budget: int | None = None,
) -> ArrowVerdict:
    """Decide whether the edge chi of the total space is p-cocartesian.

    An integer mode runs the budgeted horn-square search; a functor mode
    requires p to be that functor's nerve and decides the classical
    unique-factorization condition instead.
    """
    if chi.dim != 1:
        raise InputError("cocartesianity is a property of edges")
    if isinstance(mode, FinFunctor):
        _require_nerve(p, mode)
        a = _edge_arrow(mode.dom, chi)
        ok, reason = _classical_cocartesian(mode, a)
        return ArrowVerdict(chi, "exact-nerve", ok, 0, reason)
    return _budgeted_cocartesian(p, chi, mode, node_budget)


def is_cartesian_arrow(
    p: SSetMap,
    chi: Enc,
    mode: int | FinFunctor = 3,
    node_budget: int | None = None,
) -> ArrowVerdict:
    """Dual of is_cocartesian_arrow, decided through opposites."""
    if chi.dim != 1:
        raise InputError("cartesianity is a property of edges")
    if isinstance(mode, FinFunctor):
        _require_nerve(p, mode)
        a = _edge_arrow(mode.dom, chi)
        ok, reason = _classical_cartesian(mode, a)
        return ArrowVerdict(chi, "cartesian-exact-nerve", ok, 0, reason)
    Eop, Bop = opposite(p.domain), opposite(p.codomain)
    pop = opposite_map(p, Eop, Bop)
    v = _budgeted_cocartesian(pop, _op_enc(chi), mode, node_budget)
    return ArrowVerdict(
        chi, "cartesian-" + v.mode, v.cocartesian, v.squares_checked, v.counterexample
    )


# -- fibration certificates -------------------------------------------------


@dataclass
class FibrationCertificate:
    """Verdict plus one chosen lift per (base edge, source vertex) pair.

    Witnesses are keyed by encoded keys; the recorded lift is always the
    least candidate that passed the arrow check in the stated mode, so
    rebuilding a certificate reproduces the same table.
    """

    map: SSetMap
    mode: str
    certified: bool
    witnesses: dict[tuple, Enc]
    counterexample: dict | None = None
    prerequisites: dict = field(default_factory=dict)
    outer: LiftingCertificate | None = None
    arrow_mode: int | FinFunctor | None = None
    dual: bool = False

    def lift(self, alpha: Enc, e: Enc) -> Enc:
        return self.witnesses[(alpha.key(), e.key())]

    def summary(self) -> str:
        kind = "cartesian" if self.dual else "cocartesian"
        if self.certified:
            return f"{kind} fibration: certified in mode {self.mode} ({len(self.witnesses)} lifts)"
        return f"{kind} fibration: refuted at {self.counterexample}"


def _cat_isofibration(F: FinFunctor) -> bool:
    inverses = F.cod.isomorphism_pairs()
    lifted = F.dom.isomorphism_pairs()
    for x in F.dom.objects:
        for v in inverses:
            if F.cod.src(v) != F.obj_map[x]:
                continue
            if not any(
                F.dom.src(u) == x and F.arr_map[u] == v for u in lifted
            ):
                return False
    return True


def _exact_fibration(p: SSetMap, F: FinFunctor, dual: bool) -> FibrationCertificate:
    _require_nerve(p, F)
    if not _cat_isofibration(F):
        raise InputError("mode prerequisites unmet: the functor does not lift isomorphisms")
    C, D = F.dom, F.cod
    check = _classical_cartesian if dual else _classical_cocartesian
    witnesses: dict[tuple, Enc] = {}
    label = ("cartesian-" if dual else "") + "exact-nerve"
    for alpha in sorted(p.codomain.level(1), key=lambda c: c.key()):
        a = _edge_arrow(D, alpha)
        end = D.tgt(a) if dual else D.src(a)
        for e in sorted(p.domain.level(0), key=lambda c: c.key()):
            x = e.tgt
            if F.obj_map[x] != end:
                continue
            chosen = None
            for t in sorted(C.arrows):
                anchored = C.tgt(t) == x if dual else C.src(t) == x
                if not anchored or F.arr_map[t] != a:
                    continue
                if check(F, t)[0]:
                    chosen = t
                    break
            if chosen is None:
                return FibrationCertificate(
                    p,
                    label,
                    False,
                    witnesses,
                    {"arrow": alpha.key(), "vertex": e.key()},
                    arrow_mode=F,
                    dual=dual,
                )
            if C.is_identity(chosen):
                lift = Enc(SimplicialOperator(1, 0, (0, 0)), C.src(chosen))
            else:
                lift = nondeg(chosen, 1)
            witnesses[(alpha.key(), e.key())] = lift
    return FibrationCertificate(p, label, True, witnesses, arrow_mode=F, dual=dual)


def is_cocartesian_fibration(
    p: SSetMap,
    mode: int | FinFunctor = 3,
    node_budget: int | None = None,
) -> FibrationCertificate:
    """Certify p as a cocartesian fibration, or refute it with a witness.

    Budgeted mode first certifies the inner-horn and invertible-edge
    lifting prerequisites, then builds the complete lift table; the
    chosen lifts are cross-checked once more through the restricted
    outer-horn certifier.
    """
    if isinstance(mode, FinFunctor):
        return _exact_fibration(p, mode, dual=False)
    budget = mode
    ends = {
        "domain": quasi_certificate(p.domain, budget),
        "codomain": quasi_certificate(p.codomain, budget),
    }
    if not all(c.certified for c in ends.values()):
        bad = ", ".join(k for k, c in ends.items() if not c.certified)
        raise InputError(f"mode prerequisites unmet: uncertified quasi-category ({bad})")
    ho_dom = homotopy_category(p.domain, ends["domain"])
    ho_cod = homotopy_category(p.codomain, ends["codomain"])
    prereq = {
        "inner": lifting_certify(p, "inner", budget),
        "iso": lifting_certify(p, "iso", budget, ho_domain=ho_dom, ho_codomain=ho_cod),
    }
    if not all(c.certified for c in prereq.values()):
        bad = ", ".join(k for k, c in prereq.items() if not c.certified)
        raise InputError(f"mode prerequisites unmet: not an isofibration ({bad})")
    label = f"budgeted({budget})"
    E, B = p.domain, p.codomain
    E.require_level(1)
    B.require_level(1)
    witnesses: dict[tuple, Enc] = {}
    for alpha in sorted(B.level(1), key=lambda c: c.key()):
        a = B.vertex(alpha, 0)
        for e in sorted(E.level(0), key=lambda c: c.key()):
            if p.apply(e).tgt != a:
                continue
            chosen = None
            for chi in sorted(E.level(1), key=lambda c: c.key()):
                if p.apply(chi) != alpha or E.act(chi, face_op(1, 1)) != e:
                    continue
                if _budgeted_cocartesian(p, chi, budget, node_budget).cocartesian:
                    chosen = chi
                    break
            if chosen is None:
                return FibrationCertificate(
                    p,
                    label,
                    False,
                    witnesses,
                    {"arrow": alpha.key(), "vertex": e.key()},
                    prereq,
                    arrow_mode=budget,
                )
            witnesses[(alpha.key(), e.key())] = chosen
    outer = lifting_certify(
        p, "cocart-outer", budget, special_edges={w.key() for w in witnesses.values()}
    )
    if not outer.certified:
        raise InputError("cross-check refuted a recorded witness")
    return FibrationCertificate(
        p, label, True, witnesses, None, prereq, outer, budget
    )


def is_cartesian_fibration(
    p: SSetMap,
    mode: int | FinFunctor = 3,
    node_budget: int | None = None,
) -> FibrationCertificate:
    """Dual certificate; budgeted mode runs the cocartesian search on opposites.

    Edges and vertices have palindromic operator data, so witness keys
    carry over between a presentation and its opposite unchanged.
    """
    if isinstance(mode, FinFunctor):
        return _exact_fibration(p, mode, dual=True)
    Eop, Bop = opposite(p.domain), opposite(p.codomain)
    pop = opposite_map(p, Eop, Bop)
    cert = is_cocartesian_fibration(pop, mode, node_budget)
    return FibrationCertificate(
        p,
        "cartesian-" + cert.mode,
        cert.certified,
        {k: _op_enc(w) for k, w in cert.witnesses.items()},
        cert.counterexample,
        cert.prerequisites,
        cert.outer,
        cert.arrow_mode,
        dual=True,
    )


# -- arrow spaces and comma objects -----------------------------------------


@dataclass
class ArrowSpace:
    """The cotensor hom(interval, A) with its evaluation projections."""

    space: MapSpaceResult
    domain_eval: SSetMap
    codomain_eval: SSetMap


def _evaluation(S: MapSpaceResult, A: FinSSet, vertex: str) -> SSetMap:
    images = {}
    for k, layer in enumerate(S.sset.cells):
        if not layer:
            continue
        P = S.machine.product_at(k)
        top = nondeg(vertex_name(tuple(range(k + 1))), k)
        for name in layer:
            images[name] = S.maps[name].apply(P.encode_pair(_collapse(k, vertex), top))
    return SSetMap(S.sset, A, images)


def arrow_space(A: FinSSet, budget: int = 3) -> ArrowSpace:
    """Mapping space out of the interval, with source and target evaluations."""
    S = mapping_space(simplex(1), A, budget=budget)
    return ArrowSpace(S, _evaluation(S, A, "0"), _evaluation(S, A, "1"))


@dataclass
class CommaResult:
    sset: FinSSet
    to_codomain: SSetMap
    to_domain: SSetMap
    arrows: ArrowSpace
    span: SpanResult
    codomain_certificate: FibrationCertificate | None = None
    domain_certificate: FibrationCertificate | None = None


def comma(
    f: SSetMap,
    g: SSetMap,
    budget: int = 3,
    certify: bool = True,
    node_budget: int | None = None,
) -> CommaResult:
    """Comma object of f: B -> A and g: C -> A.

    Built as the pullback of the paired evaluations out of the arrow
    space of A against g x f.  The projection to C is certified as a
    cocartesian fibration and the projection to B as a cartesian one,
    both in budgeted mode, unless certification is switched off.
    """
    A = f.codomain
    if not _same_presentation(A, g.codomain):
        raise InputError("the comma legs must share a codomain")
    if not quasi_certificate(A, budget).certified:
        raise InputError("comma objects need a certified quasi-category codomain")
    arrows = arrow_space(A, budget)
    AA = product(A, A)
    pairing = SSetMap(
        arrows.space.sset,
        AA.sset,
        {
            name: AA.encode_pair(
                arrows.codomain_eval.images[name], arrows.domain_eval.images[name]
            )
            for name in arrows.codomain_eval.images
        },
    )
    CB = product(g.domain, f.domain)
    below = product_map(CB, AA, g, f)
    span = pullback(pairing, below, cap=budget)
    to_codomain = compose_maps(CB.proj1, span.proj2)
    to_domain = compose_maps(CB.proj2, span.proj2)
    cc = is_cocartesian_fibration(to_codomain, budget, node_budget) if certify else None
    dc = is_cartesian_fibration(to_domain, budget, node_budget) if certify else None
    return CommaResult(span.sset, to_codomain, to_domain, arrows, span, cc, dc)


# -- the Grothendieck construction ------------------------------------------


@dataclass
class GrothendieckResult:
    """Total category of a strict category-valued diagram and its nerve."""

    base: FinCat
    fibers: dict[str, FinCat]
    on_arrows: dict[str, FinFunctor]
    total: FinCat
    projection: FinFunctor
    nerve_total: FinSSet
    nerve_base: FinSSet
    map: SSetMap

    def object_name(self, b: str, x: str) -> str:
        return f"{b};{x}"

    def chosen_lift(self, f: str, x: str) -> Enc:
        """The designated cocartesian edge over f starting at fiber object x."""
        b0, b1 = self.base.src(f), self.base.tgt(f)
        u = self.fibers[b1].identities[self.on_arrows[f].obj_map[x]]
        name = f"{f};{x};{u}"
        if self.total.is_identity(name):
            return Enc(SimplicialOperator(1, 0, (0, 0)), self.object_name(b0, x))
        return nondeg(name, 1)


def _compose_functors(G: FinFunctor, F: FinFunctor) -> FinFunctor:
    return FinFunctor(
        F.dom,
        G.cod,
        {x: G.obj_map[y] for x, y in F.obj_map.items()},
        {a: G.arr_map[b] for a, b in F.arr_map.items()},
    )


def _identity_functor(C: FinCat) -> FinFunctor:
    return FinFunctor(C, C, {x: x for x in C.objects}, {a: a for a in C.arrows})


def _functors_equal(F: FinFunctor, G: FinFunctor) -> bool:
    return F.obj_map == G.obj_map and F.arr_map == G.arr_map


def grothendieck(
    base: FinCat,
    fibers: dict[str, FinCat],
    on_arrows: dict[str, FinFunctor],
    cutoff: int | None = None,
) -> GrothendieckResult:
    """Covariant Grothendieck construction of a strict diagram of categories.

    Objects of the total category are pairs b;x, arrows are triples
    f;x;u with u running from the transported object to the target.
    The assignment must be strictly functorial; identity arrows may be
    omitted from on_arrows and default to identity functors.
    """
    assign = dict(on_arrows)
    for b, i in base.identities.items():
        assign.setdefault(i, _identity_functor(fibers[b]))
    for name in base.arrows:
        if name not in assign:
            raise InputError(f"missing fiber functor for {name!r}")
        F = assign[name]
        if F.dom is not fibers[base.src(name)] or F.cod is not fibers[base.tgt(name)]:
            raise InputError(f"fiber functor for {name!r} runs between the wrong fibers")
    for b, i in base.identities.items():
        if not _functors_equal(assign[i], _identity_functor(fibers[b])):
            raise InputError("identity arrows must act as identity functors")
    for (gn, fn), hn in base.comp.items():
        if not _functors_equal(assign[hn], _compose_functors(assign[gn], assign[fn])):
            raise InputError(f"the diagram is not functorial at ({gn!r}, {fn!r})")

    objects = []
    for b in base.objects:
        for x in fibers[b].objects:
            objects.append(f"{b};{x}")
    arrows: dict[str, tuple[str, str]] = {}
    for fn, (b0, b1) in base.arrows.items():
        F = assign[fn]
        for x in fibers[b0].objects:
            for u, (u0, u1) in fibers[b1].arrows.items():
                if u0 != F.obj_map[x]:
                    continue
                arrows[f"{fn};{x};{u}"] = (f"{b0};{x}", f"{b1};{u1}")
    identities = {}
    for b in base.objects:
        for x, i in fibers[b].identities.items():
            identities[f"{b};{x}"] = f"{base.identities[b]};{x};{i}"
    comp = {}
    for fname in arrows:
        fn, x, u = fname.split(";")
        for gname in arrows:
            gn, y, v = gname.split(";")
            if arrows[fname][1] != arrows[gname][0]:
                continue
            hn = base.compose(gn, fn)
            G = assign[gn]
            hu = fibers[base.tgt(gn)].compose(v, G.arr_map[u])
            comp[(gname, fname)] = f"{hn};{x};{hu}"
    total = FinCat(tuple(objects), arrows, comp, identities)
    problems = total.validate()
    if problems:
        raise InputError(f"the total category is malformed: {problems}")
    projection = FinFunctor(
        total,
        base,
        {o: o.split(";")[0] for o in objects},
        {a: a.split(";")[0] for a in arrows},
    )
    nerve_total = nerve(total, cutoff)
    nerve_base = nerve(base, cutoff)
    return GrothendieckResult(
        base,
        fibers,
        on_arrows=assign,
        total=total,
        projection=projection,
        nerve_total=nerve_total,
        nerve_base=nerve_base,
        map=nerve_functor(projection, nerve_total, nerve_base),
    )


# -- pointwise cocartesian cylinder lifts -----------------------------------


@dataclass
class CylinderSetup:
    """The cylinder on Y together with its partial-data subcomplex."""

    product: SpanResult
    union: FinSSet
    inclusion: SSetMap


def cylinder_union(i: SSetMap) -> CylinderSetup:
    """Subcomplex (X x interval) u (Y x {0}) of the cylinder on Y = cod(i)."""
    if not i.is_mono():
        raise InputError("cylinder data needs a monomorphism")
    Y = i.codomain
    P = product(Y, simplex(1))
    inside = {e.tgt for e in i.images.values()}
    members = []
    for k in range(len(P.sset.cells)):
        for c in P.sset.nondeg_cells(k):
            a, t = P.components(nondeg(c, k))
            if t.tgt == "0" or a.tgt in inside:
                members.append(c)
    U = subcomplex(P.sset, members)
    return CylinderSetup(P, U, inclusion(U, P.sset))


def _cylinder_edge(P: SpanResult, y: str) -> Enc:
    return P.encode_pair(Enc(SimplicialOperator(1, 0, (0, 0)), y), nondeg("0.1", 1))


def pointwise_cocartesian_cylinder_lift(
    p: SSetMap,
    i: SSetMap,
    prescribed: SSetMap,
    base: SSetMap,
    certificate: FibrationCertificate | None = None,
    budget: int = 3,
    node_budget: int | None = None,
) -> SSetMap | None:
    """Extend partial cylinder data over a cocartesian fibration.

    The prescription lives on (X x interval) u (Y x {0}) as produced by
    cylinder_union(i) and must already be pointwise cocartesian over X;
    a violation is rejected before any search runs.  The search fixes
    recorded certificate witnesses first and constrains every remaining
    vertex cylinder edge to a cocartesian candidate, so a returned lift
    is pointwise cocartesian by construction.  None means the exhaustive
    search found nothing.
    """
    setup = cylinder_union(i)
    P, U, inc = setup.product, setup.union, setup.inclusion
    if not _same_presentation(prescribed.domain, U):
        raise InputError("the prescription must live on the cylinder union")
    if not _same_presentation(base.domain, P.sset):
        raise InputError("the base data must live on the full cylinder")
    for c in prescribed.images:
        if p.apply(prescribed.images[c]) != base.apply(inc.images[c]):
            raise InputError("lifting square does not commute")
    inside = {e.tgt for e in i.images.values()}
    for y in sorted(inside & set(i.codomain.nondeg_cells(0))):
        chi = prescribed.apply(_cylinder_edge(P, y))
        if not is_cocartesian_arrow(p, chi, budget, node_budget).cocartesian:
            raise InputError(f"prescribed cylinder is not pointwise cocartesian at {y!r}")

    fixed = restriction_partial(inc, prescribed)
    targets = set()
    preferred: dict[str, Enc] = {}
    for y in i.codomain.nondeg_cells(0):
        if y in inside:
            continue
        cell = _cylinder_edge(P, y)
        targets.add(cell.tgt)
        if certificate is not None:
            start = P.encode_pair(nondeg(y, 0), nondeg("0", 0)).tgt
            key = (base.images[cell.tgt].key(), fixed[start].key())
            if key in certificate.witnesses:
                preferred[cell.tgt] = certificate.witnesses[key]

    cache: dict[tuple, bool] = {}

    def ok(cell: str, cand: Enc) -> bool:
        if p.apply(cand) != base.images[cell]:
            return False
        if cell in targets:
            verdict = cache.get(cand.key())
            if verdict is None:
                verdict = is_cocartesian_arrow(p, cand, budget, node_budget).cocartesian
                cache[cand.key()] = verdict
            return verdict
        return True

    h = first_map(P.sset, p.domain, {**fixed, **preferred}, extra_ok=ok, node_budget=node_budget)
    if h is None and preferred:
        # a recorded witness may clash with the prescription; retry freely
        h = first_map(P.sset, p.domain, dict(fixed), extra_ok=ok, node_budget=node_budget)
    return h


# -- comprehension ----------------------------------------------------------


def strict_fiber(p: SSetMap, b: str) -> FinSSet:
    """The subcomplex of cells sitting over the base vertex b."""
    names = [
        x
        for k in range(len(p.domain.cells))
        for x in p.domain.nondeg_cells(k)
        if p.images[x].tgt == b
    ]
    return subcomplex(p.domain, names)


@dataclass
class ComprehensionData:
    """Strict fibers, transport functors, and their coherence witnesses."""

    certificate: FibrationCertificate
    fibers: dict[str, FinSSet]
    inclusions: dict[str, SSetMap]
    edge_functors: dict[str, SSetMap]
    lift_witnesses: dict[str, SSetMap]
    coherence_2: dict[str, SSetMap | None] = field(default_factory=dict)


def _transport(
    cert: FibrationCertificate,
    fibers: dict[str, FinSSet],
    inclusions: dict[str, SSetMap],
    f: Enc,
    budget: int,
    node_budget: int | None,
) -> tuple[SSetMap, SSetMap]:
    p = cert.map
    B = p.codomain
    a, b = B.vertex(f, 0), B.vertex(f, 1)
    Ea, Eb = fibers[a], fibers[b]
    empty = empty_sset()
    i = SSetMap(empty, Ea, {})
    setup = cylinder_union(i)
    images = {}
    for k in range(len(setup.union.cells)):
        for c in setup.union.nondeg_cells(k):
            x, _ = setup.product.components(nondeg(c, k))
            images[c] = inclusions[a].apply(x)
    prescribed = SSetMap(setup.union, p.domain, images)
    base = compose_maps(as_map(B, f), setup.product.proj2)
    h = pointwise_cocartesian_cylinder_lift(
        p, i, prescribed, base, certificate=cert, budget=budget, node_budget=node_budget
    )
    if h is None:
        raise InputError(f"no cocartesian cylinder lift over the edge {f.key()!r}")
    fiber_names = {x for k in range(len(Eb.cells)) for x in Eb.nondeg_cells(k)}
    out = {}
    for k in range(len(Ea.cells)):
        for x in Ea.nondeg_cells(k):
            end = h.apply(setup.product.encode_pair(nondeg(x, k), _collapse(k, "1")))
            if end.tgt not in fiber_names:
                raise InputError("cylinder end escapes the target fiber")
            out[x] = end
    functor = SSetMap(Ea, Eb, out)
    if not functor.validate().passed:
        raise InputError("transport does not assemble into a simplicial map")
    if not maps_equal(compose_maps(inclusions[b], functor), SSetMap(Ea, p.domain, out)):
        raise InputError("transport does not factor the cylinder end")
    return functor, h


def _coherence_witness(
    fibers: dict[str, FinSSet],
    functor_for,
    B: FinSSet,
    sigma: Enc,
    budget: int,
    node_budget: int | None,
) -> SSetMap | None:
    a = B.vertex(sigma, 0)
    c = B.vertex(sigma, 2)
    Ea, Ec = fibers[a], fibers[c]
    left = compose_maps(
        functor_for(B.act(sigma, face_op(0, 2))),
        functor_for(B.act(sigma, face_op(2, 2))),
    )
    right = functor_for(B.act(sigma, face_op(1, 2)))
    Pa = product(Ea, simplex(1))
    partial = {}
    for k in range(len(Ea.cells)):
        for x in Ea.nondeg_cells(k):
            partial[Pa.encode_pair(nondeg(x, k), _collapse(k, "0")).tgt] = left.images[x]
            partial[Pa.encode_pair(nondeg(x, k), _collapse(k, "1")).tgt] = right.images[x]
    ho = homotopy_category(Ec, quasi_certificate(Ec, budget))
    vertical = {_cylinder_edge(Pa, x).tgt for x in Ea.nondeg_cells(0)}

    def ok(cell: str, cand: Enc) -> bool:
        return cell not in vertical or ho.invertible(cand)

    return first_map(Pa.sset, Ec, partial, extra_ok=ok, node_budget=node_budget)


def comprehension(
    cert: FibrationCertificate,
    coherence: int = 2,
    budget: int = 3,
    node_budget: int | None = None,
) -> ComprehensionData:
    """Fibers and transport data of a certified cocartesian fibration.

    Fibers are strict subcomplexes over base vertices.  Each
    nondegenerate base edge receives a transport functor obtained from a
    pointwise cocartesian cylinder lift, factored through the target
    fiber.  With coherence 2, every nondegenerate base 2-simplex also
    receives a comparison homotopy between the composite transport and
    the transport of its long edge, with invertible vertex components;
    the witness is None when no filler exists within the budget.
    """
    if cert.dual:
        raise InputError("comprehension consumes a cocartesian certificate")
    if not cert.certified:
        raise InputError("comprehension needs a certified cocartesian fibration")
    if not 0 <= coherence <= 2:
        raise InputError("coherence witnesses are implemented up to level 2")
    p = cert.map
    B = p.codomain
    fibers = {b: strict_fiber(p, b) for b in B.nondeg_cells(0)}
    inclusions = {b: inclusion(fibers[b], p.domain) for b in fibers}
    edge_functors: dict[str, SSetMap] = {}
    lift_witnesses: dict[str, SSetMap] = {}
    if len(B.cells) > 1:
        for name in B.nondeg_cells(1):
            functor, cylinder = _transport(
                cert, fibers, inclusions, nondeg(name, 1), budget, node_budget
            )
            edge_functors[name] = functor
            lift_witnesses[name] = cylinder

    def functor_for(edge: Enc) -> SSetMap:
        if edge.op.is_identity:
            return edge_functors[edge.tgt]
        return identity_map(fibers[edge.tgt])

    coherence_2: dict[str, SSetMap | None] = {}
    if coherence >= 2 and len(B.cells) > 2:
        for name in B.nondeg_cells(2):
            coherence_2[name] = _coherence_witness(
                fibers, functor_for, B, nondeg(name, 2), budget, node_budget
            )
    return ComprehensionData(
        cert, fibers, inclusions, edge_functors, lift_witnesses, coherence_2
    )


# -- cartesian functors and fiberwise equivalences ---------------------------


@dataclass
class FunctorVerdict:
    cartesian: bool
    mode: str
    checked: int
    failures: list = field(default_factory=list)


def is_cartesian_functor(
    P: FibrationCertificate,
    Q: FibrationCertificate,
    g: SSetMap,
    mode: int | FinFunctor = 3,
    node_budget: int | None = None,
) -> FunctorVerdict:
    """Check that g carries the recorded cocartesian lifts of P to
    cocartesian edges of Q's map.

    Every cocartesian edge agrees with a recorded witness up to
    invertible edges, so checking the table decides the property.
    """
    p, q = P.map, Q.map
    if not _same_presentation(g.domain, p.domain):
        raise InputError("the functor must start at the total space of P")
    if not _same_presentation(g.codomain, q.domain):
        raise InputError("the functor must land in the total space of Q")
    if not maps_equal(compose_maps(q, g), p):
        raise InputError("the functor must commute with the projections")
    label = "exact-nerve" if isinstance(mode, FinFunctor) else f"budgeted({mode})"
    checked = 0
    failures = []
    for key in sorted(P.witnesses):
        chi = P.witnesses[key]
        image = g.apply(chi)
        checked += 1
        if not is_cocartesian_arrow(q, image, mode, node_budget).cocartesian:
            failures.append({"witness": key, "edge": chi.key(), "image": image.key()})
    return FunctorVerdict(not failures, label, checked, failures)


def _all_functors(C: FinCat, D: FinCat):
    objs = sorted(C.objects)
    arrs = sorted(C.non_identity_arrows())
    for assignment in itertools.product(sorted(D.objects), repeat=len(objs)):
        obj_map = dict(zip(objs, assignment))
        pools = [D.hom(obj_map[C.src(a)], obj_map[C.tgt(a)]) for a in arrs]
        if any(not pool for pool in pools):
            continue
        for choice in itertools.product(*pools):
            arr_map = dict(zip(arrs, choice))
            for x in C.objects:
                arr_map[C.identities[x]] = D.identities[obj_map[x]]
            if all(
                D.compose(arr_map[gn], arr_map[fn]) == arr_map[hn]
                for (gn, fn), hn in C.comp.items()
            ):
                yield FinFunctor(C, D, obj_map, arr_map)


def _natural_iso_exists(F: FinFunctor, G: FinFunctor) -> bool:
    C, D = F.dom, F.cod
    invertible = set(D.isomorphism_pairs())
    objs = sorted(C.objects)
    pools = []
    for x in objs:
        pool = [u for u in D.hom(F.obj_map[x], G.obj_map[x]) if u in invertible]
        if not pool:
            return False
        pools.append(pool)
    for choice in itertools.product(*pools):
        comp = dict(zip(objs, choice))
        if all(
            D.compose(G.arr_map[a], comp[C.src(a)])
            == D.compose(comp[C.tgt(a)], F.arr_map[a])
            for a in C.arrows
        ):
            return True
    return False


def _decide_equivalence(F: FinFunctor) -> bool:
    fast = is_equivalence(F)
    slow = any(
        _natural_iso_exists(_identity_functor(F.dom), _compose_functors(G, F))
        and _natural_iso_exists(_compose_functors(F, G), _identity_functor(F.cod))
        for G in _all_functors(F.cod, F.dom)
    )
    if fast is not slow:
        raise InputError("equivalence decision routes disagree")
    return fast


@dataclass
class FiberwiseReport:
    """Per-vertex equivalence verdicts on homotopy categories of fibers.

    A homotopy-category equivalence is a decidable shadow of the full
    fiberwise statement; a positive verdict certifies the shadow only.
    """

    equivalent: bool
    per_vertex: dict[str, bool]
    functors: dict[str, FinFunctor]


def fiberwise_equivalence_check(
    P: FibrationCertificate,
    Q: FibrationCertificate,
    g: SSetMap,
    budget: int = 3,
) -> FiberwiseReport:
    """Decide fiberwise equivalence of g on homotopy categories.

    The induced functor between the homotopy categories of each pair of
    strict fibers is tested two independent ways: fully faithful plus
    essentially surjective, and an exhaustive search for a quasi-inverse
    with invertible comparison families.  Disagreement is an error.
    """
    p, q = P.map, Q.map
    if not maps_equal(compose_maps(q, g), p):
        raise InputError("the functor must commute with the projections")
    per_vertex: dict[str, bool] = {}
    functors: dict[str, FinFunctor] = {}
    for b in p.codomain.nondeg_cells(0):
        Eb, Fb = strict_fiber(p, b), strict_fiber(q, b)
        fiber_names = {x for k in range(len(Fb.cells)) for x in Fb.nondeg_cells(k)}
        images = {}
        for k in range(len(Eb.cells)):
            for x in Eb.nondeg_cells(k):
                val = g.apply(nondeg(x, k))
                if val.tgt not in fiber_names:
                    raise InputError("the functor does not preserve the fiber decomposition")
                images[x] = val
        gb = SSetMap(Eb, Fb, images)
        hoE = homotopy_category(Eb, quasi_certificate(Eb, budget))
        hoF = homotopy_category(Fb, quasi_certificate(Fb, budget))
        obj_map = {v: gb.apply(nondeg(v, 0)).tgt for v in Eb.nondeg_cells(0)}
        arr_map: dict[str, str] = {}
        for e in Eb.level(1):
            cls = hoE.arrow_class(e)
            want = hoF.arrow_class(gb.apply(e))
            if arr_map.setdefault(cls, want) != want:
                raise InputError("the functor is not well defined on homotopy classes")
        functor = FinFunctor(hoE.cat, hoF.cat, obj_map, arr_map)
        functors[b] = functor
        per_vertex[b] = _decide_equivalence(functor)
    return FiberwiseReport(all(per_vertex.values()), per_vertex, functors)
