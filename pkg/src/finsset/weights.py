"""Weights over truncated simplicial categories and their collages.

A weight assigns a simplicial set to each object of an enriched base
together with a right action of the hom spaces; a diagram is the
covariant counterpart valued in simplicial sets.  The collage of a
weight glues it onto the base as the homs into one fresh cone object,
and any category shaped that way restricts back to the weight it came
from.  On top of these two translations the module provides weighted
colimits as coend quotients, left Kan extension of weights along
realized simplicial maps (through the collage pushout), flexibility of
a weight via computad recognition on its collage, and an objectwise
report that rebuilds the oplax weight of a simplex from the previous
one by a single cylinder pushout.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

from .computad import (
    Computad,
    ComputadVerdict,
    TruncSimpCat,
    atomic_factorization,
    chain_name,
    dedup_chain,
    hc_map,
    hc_realization,
    hc_simplex,
    is_computad,
)
from .errors import BudgetError, InputError
from .ops import SimplicialOperator, vertex_op
from .sset import (
    Enc,
    FinSSet,
    QuotientResult,
    SSetMap,
    SpanResult,
    compose_maps,
    coproduct,
    empty_sset,
    enumerate_maps,
    identity_map,
    join,
    join_inclusions,
    maps_equal,
    nondeg,
    point,
    product,
    pushout,
    quotient,
    readable_depth,
    simplex,
    truncate,
)

Action = Callable[[str, str, Enc, Enc], Enc]

# Name of the cone object every collage adjoins.
COLLAGE_TOP = "⊤"


def _collapse(vertex: str, dim: int) -> Enc:
    if dim == 0:
        return nondeg(vertex, 0)
    return Enc(SimplicialOperator(dim, 0, (0,) * (dim + 1)), vertex)


# -- weights and diagrams ------------------------------------------------


@dataclass(eq=False)
class Weight:
    """A simplicial presheaf on an enriched base, given by right actions.

    ``at[d]`` is the component at the object d.  ``action(d, d2, w, f)``
    is w * f for w a simplex of ``at[d2]`` and f an arrow d -> d2 of the
    same level; the result lives in ``at[d]``.  ``base_computad``
    optionally remembers a presentation of the base, which free diagrams
    and Kan extension reuse.
    """

    base: TruncSimpCat
    at: dict[str, FinSSet]
    action: Action
    base_computad: Computad | None = None

    def component(self, d: str) -> FinSSet:
        return self.at[d]

    def act(self, d: str, d2: str, w: Enc, f: Enc) -> Enc:
        if w.dim != f.dim:
            raise InputError("the action pairs simplices of a common level")
        return self.action(d, d2, w, f)

    def validate(self, level_budget: int = 1) -> list[str]:
        """Unit and associativity failures up to the level budget."""
        problems: list[str] = []
        K = self.base
        for d in K.objects:
            if d not in self.at:
                problems.append(f"missing component at {d!r}")
        if problems:
            return problems
        for r in range(level_budget + 1):
            for d in K.objects:
                Wd, H = self.at[d], K.homs.get((d, d))
                if H is None or not (Wd.has_level(r) and H.has_level(r)):
                    continue
                e = K.id_arrow(d, r)
                for w in Wd.level(r):
                    if self.act(d, d, w, e) != w:
                        problems.append(f"unit law fails at {d!r} in level {r}")
                        break
            for a, b in itertools.product(K.objects, repeat=2):
                H = K.homs.get((a, b))
                if H is None or not H.has_level(r):
                    continue
                if not (self.at[a].has_level(r) and self.at[b].has_level(r)):
                    continue
                for f in H.level(r):
                    for w in self.at[b].level(r):
                        wf = self.act(a, b, w, f)
                        if wf.dim != r or wf.tgt not in self.at[a].dims:
                            problems.append(
                                f"action along {a!r}->{b!r} leaves the component in level {r}"
                            )
            for a, b, c in itertools.product(K.objects, repeat=3):
                Hab, Hbc = K.homs.get((a, b)), K.homs.get((b, c))
                if Hab is None or Hbc is None:
                    continue
                Wc = self.at[c]
                if not (Hab.has_level(r) and Hbc.has_level(r) and Wc.has_level(r)):
                    continue
                for f in Hab.level(r):
                    for g in Hbc.level(r):
                        gf = K.comp(a, b, c, g, f)
                        for w in Wc.level(r):
                            lhs = self.act(a, b, self.act(b, c, w, g), f)
                            if lhs != self.act(a, c, w, gf):
                                problems.append(
                                    f"associativity fails over ({a!r},{b!r},{c!r}) in level {r}"
                                )
        return list(dict.fromkeys(problems))


@dataclass(eq=False)
class Diagram:
    """A simplicial functor from the base into simplicial sets.

    ``action(d, d2, f, x)`` evaluates an arrow simplex f: d -> d2 on a
    simplex x of ``at[d]`` at the same level; the result lands in
    ``at[d2]``.
    """

    base: TruncSimpCat
    at: dict[str, FinSSet]
    action: Callable[[str, str, Enc, Enc], Enc]

    def component(self, d: str) -> FinSSet:
        return self.at[d]

    def act(self, d: str, d2: str, f: Enc, x: Enc) -> Enc:
        if f.dim != x.dim:
            raise InputError("evaluation pairs simplices of a common level")
        return self.action(d, d2, f, x)

    def validate(self, level_budget: int = 1) -> list[str]:
        problems: list[str] = []
        K = self.base
        for d in K.objects:
            if d not in self.at:
                problems.append(f"missing component at {d!r}")
        if problems:
            return problems
        for r in range(level_budget + 1):
            for d in K.objects:
                Fd, H = self.at[d], K.homs.get((d, d))
                if H is None or not (Fd.has_level(r) and H.has_level(r)):
                    continue
                e = K.id_arrow(d, r)
                for x in Fd.level(r):
                    if self.act(d, d, e, x) != x:
                        problems.append(f"unit law fails at {d!r} in level {r}")
                        break
            for a, b in itertools.product(K.objects, repeat=2):
                H = K.homs.get((a, b))
                if H is None or not H.has_level(r):
                    continue
                if not (self.at[a].has_level(r) and self.at[b].has_level(r)):
                    continue
                for f in H.level(r):
                    for x in self.at[a].level(r):
                        fx = self.act(a, b, f, x)
                        if fx.dim != r or fx.tgt not in self.at[b].dims:
                            problems.append(
                                f"evaluation along {a!r}->{b!r} leaves the component in level {r}"
                            )
            for a, b, c in itertools.product(K.objects, repeat=3):
                Hab, Hbc = K.homs.get((a, b)), K.homs.get((b, c))
                if Hab is None or Hbc is None:
                    continue
                Fa = self.at[a]
                if not (Hab.has_level(r) and Hbc.has_level(r) and Fa.has_level(r)):
                    continue
                for f in Hab.level(r):
                    for g in Hbc.level(r):
                        gf = K.comp(a, b, c, g, f)
                        for x in Fa.level(r):
                            lhs = self.act(b, c, g, self.act(a, b, f, x))
                            if lhs != self.act(a, c, gf, x):
                                problems.append(
                                    f"associativity fails over ({a!r},{b!r},{c!r}) in level {r}"
                                )
        return list(dict.fromkeys(problems))


@dataclass(eq=False)
class WeightMap:
    """A family of component maps natural for the base actions."""

    source: Weight
    target: Weight
    components: dict[str, SSetMap]

    def component(self, d: str) -> SSetMap:
        return self.components[d]

    def key(self):
        return tuple(sorted((d, m.key()) for d, m in self.components.items()))

    def validate(self, level_budget: int = 1) -> list[str]:
        problems: list[str] = []
        K = self.source.base
        for d in K.objects:
            m = self.components.get(d)
            if m is None:
                problems.append(f"missing component at {d!r}")
                continue
            report = m.validate()
            problems.extend(f"component at {d!r}: {p}" for p in report.problems)
        if problems:
            return problems
        for r in range(level_budget + 1):
            for a, b in itertools.product(K.objects, repeat=2):
                H = K.homs.get((a, b))
                Wb = self.source.at[b]
                if H is None or not (H.has_level(r) and Wb.has_level(r)):
                    continue
                for f in H.level(r):
                    for w in Wb.level(r):
                        lhs = self.components[a].apply(self.source.act(a, b, w, f))
                        rhs = self.target.act(a, b, self.components[b].apply(w), f)
                        if lhs != rhs:
                            problems.append(
                                f"naturality fails over {a!r}->{b!r} in level {r}"
                            )
        return list(dict.fromkeys(problems))


# -- enriched functors ---------------------------------------------------


@dataclass(eq=False)
class SimpFunctor:
    """A functor of truncated simplicial categories."""

    source: TruncSimpCat
    target: TruncSimpCat
    on_objects: dict[str, str]
    on_homs: dict[tuple[str, str], SSetMap]

    def obj(self, a: str) -> str:
        return self.on_objects[a]

    def push(self, a: str, b: str, f: Enc) -> Enc:
        return self.on_homs[(a, b)].apply(f)

    def validate(self, level_budget: int = 1) -> list[str]:
        problems: list[str] = []
        S, T = self.source, self.target
        for (a, b), m in self.on_homs.items():
            report = m.validate()
            problems.extend(f"hom map {a!r}->{b!r}: {p}" for p in report.problems)
        if problems:
            return problems
        for a in S.objects:
            if self.push(a, a, S.id_arrow(a, 0)) != T.id_arrow(self.obj(a), 0):
                problems.append(f"identity at {a!r} is not preserved")
        for r in range(level_budget + 1):
            for a, b, c in itertools.product(S.objects, repeat=3):
                Hab, Hbc = S.homs.get((a, b)), S.homs.get((b, c))
                if Hab is None or Hbc is None:
                    continue
                if not (Hab.has_level(r) and Hbc.has_level(r)):
                    continue
                for f in Hab.level(r):
                    for g in Hbc.level(r):
                        lhs = self.push(a, c, S.comp(a, b, c, g, f))
                        rhs = T.comp(
                            self.obj(a), self.obj(b), self.obj(c),
                            self.push(b, c, g), self.push(a, b, f),
                        )
                        if lhs != rhs:
                            problems.append(
                                f"composition over ({a!r},{b!r},{c!r}) is not preserved in level {r}"
                            )
        return list(dict.fromkeys(problems))


def identity_functor(K: TruncSimpCat) -> SimpFunctor:
    on_homs = {pair: identity_map(H) for pair, H in K.homs.items()}
    return SimpFunctor(K, K, {a: a for a in K.objects}, on_homs)


def realization_functor(f: SSetMap, CX: Computad, CY: Computad) -> SimpFunctor:
    """The enriched functor a simplicial map induces on realizations."""
    on_objects = {a: f.images[a].tgt for a in CX.underlying.objects}
    return SimpFunctor(CX.underlying, CY.underlying, on_objects, hc_map(f, CX, CY))


def _map_is_iso(m: SSetMap) -> bool:
    """Levelwise bijectivity, probed through the top inhabited dimension."""
    X, Y = m.domain, m.codomain
    nx = [len(layer) for layer in X.cells]
    ny = [len(layer) for layer in Y.cells]
    while nx and nx[-1] == 0:
        nx.pop()
    while ny and ny[-1] == 0:
        ny.pop()
    if nx != ny:
        return False
    for r in range(len(nx)):
        if not (X.has_level(r) and Y.has_level(r)):
            return False
        images = {m.apply(e).key() for e in X.level(r)}
        if len(images) != len(X.level(r)) or len(images) != len(set(e.key() for e in Y.level(r))):
            return False
    return True


# -- collages ------------------------------------------------------------


def collage(W: Weight) -> TruncSimpCat:
    """The base with one cone object adjoined along the weight.

    Homs into the new object are the weight components, homs out of it
    are empty, its endomorphisms are a point, and composition into it is
    the action.
    """
    D = W.base
    if COLLAGE_TOP in D.objects:
        raise InputError("the base already owns the collage object name")
    pt = point()
    objects = tuple(D.objects) + (COLLAGE_TOP,)
    homs: dict[tuple[str, str], FinSSet] = {}
    for a in D.objects:
        for b in D.objects:
            homs[(a, b)] = D.homs.get((a, b), empty_sset())
        homs[(a, COLLAGE_TOP)] = W.at[a]
        homs[(COLLAGE_TOP, a)] = empty_sset()
    homs[(COLLAGE_TOP, COLLAGE_TOP)] = pt

    def compose_fn(a: str, b: str, c: str, g: Enc, f: Enc) -> Enc:
        if c != COLLAGE_TOP:
            return D.compose_fn(a, b, c, g, f)
        if b != COLLAGE_TOP:
            return W.act(a, b, g, f)
        # g is a degenerate identity of the cone object
        return f

    identities = dict(D.identities)
    identities[COLLAGE_TOP] = pt.nondeg_cells(0)[0]
    return TruncSimpCat(objects, homs, compose_fn, identities, D.arrow_cutoff)


def collage_inclusion(W: Weight, K: TruncSimpCat) -> SimpFunctor:
    """The base inclusion into a collage built from the weight."""
    D = W.base
    on_homs = {}
    for a in D.objects:
        for b in D.objects:
            on_homs[(a, b)] = identity_map(K.homs[(a, b)])
    return SimpFunctor(D, K, {a: a for a in D.objects}, on_homs)


def wgt(K: TruncSimpCat, F: SimpFunctor, e: str) -> Weight:
    """Read a weight off a category shaped like a collage.

    F must embed its source fully faithfully with image everything but
    e, the endomorphisms of e must be a point, and nothing may leave e
    towards the image; the weight at d is then the hom from F(d) to e,
    acted on by composition.
    """
    D = F.source
    if F.target is not K:
        raise InputError("the structure functor must land in the ambient category")
    if e not in K.objects:
        raise InputError(f"no object {e!r} in the ambient category")
    image = [F.obj(d) for d in D.objects]
    if e in image or len(set(image)) != len(image) or set(image) | {e} != set(K.objects):
        raise InputError("the structure functor must cover every object except the cone")
    He = K.homs[(e, e)]
    layers = [len(He.nondeg_cells(r)) for r in range(len(He.cells))]
    if layers[:1] != [1] or any(layers[1:]):
        raise InputError("the endomorphisms of the cone object must be a point")
    for d in D.objects:
        out = K.homs.get((e, F.obj(d)))
        if out is not None and any(len(layer) for layer in out.cells):
            raise InputError("arrows out of the cone object obstruct the restriction")
    for a in D.objects:
        for b in D.objects:
            if not _map_is_iso(F.on_homs[(a, b)]):
                raise InputError("the structure functor must be fully faithful on the base")

    at = {d: K.homs[(F.obj(d), e)] for d in D.objects}

    def action(d: str, d2: str, w: Enc, f: Enc) -> Enc:
        return K.comp(F.obj(d), F.obj(d2), e, w, F.push(d, d2, f))

    return Weight(D, at, action)


# -- stock weights and combinators ----------------------------------------


def terminal_weight(D: TruncSimpCat) -> Weight:
    """The weight with a point at every object."""
    pt = point()
    vertex = pt.nondeg_cells(0)[0]

    def action(d: str, d2: str, w: Enc, f: Enc) -> Enc:
        return _collapse(vertex, w.dim)

    return Weight(D, {d: pt for d in D.objects}, action)


def representable_weight(D: TruncSimpCat, d0: str) -> Weight:
    """The weight d -> hom(d, d0), acting by composition."""
    if d0 not in D.objects:
        raise InputError(f"no object {d0!r} in the base")
    at = {d: D.homs[(d, d0)] for d in D.objects}

    def action(d: str, d2: str, w: Enc, f: Enc) -> Enc:
        return D.comp(d, d2, d0, w, f)

    return Weight(D, at, action)


def arrow_weight(m: SSetMap, budget: int = 6) -> Weight:
    """A weight over the coherent 1-simplex encoding one simplicial map.

    The component at the source object 1 is the domain of m, the one at
    0 is the codomain, and the generating arrow acts by m itself.
    """
    C = hc_simplex(1, budget)
    K = C.underlying

    def action(d: str, d2: str, w: Enc, f: Enc) -> Enc:
        if K.is_identity_arrow(d, d2, f):
            return w
        return m.apply(w)

    return Weight(K, {"0": m.codomain, "1": m.domain}, action, C)


def weight_product(W: Weight, V: Weight, cap: int | None = None):
    """Componentwise product; returns the weight and the span results."""
    spans = {d: product(W.at[d], V.at[d], cap) for d in W.base.objects}

    def action(d: str, d2: str, w: Enc, f: Enc) -> Enc:
        a, b = spans[d2].components(w)
        return spans[d].encode_pair(W.act(d, d2, a, f), V.act(d, d2, b, f))

    at = {d: spans[d].sset for d in spans}
    return Weight(W.base, at, action, W.base_computad), spans


def weight_cylinder(W: Weight, S: FinSSet, cap: int | None = None):
    """Componentwise product with a fixed simplicial set."""
    spans = {d: product(W.at[d], S, cap) for d in W.base.objects}

    def action(d: str, d2: str, w: Enc, f: Enc) -> Enc:
        a, s = spans[d2].components(w)
        return spans[d].encode_pair(W.act(d, d2, a, f), s)

    at = {d: spans[d].sset for d in spans}
    return Weight(W.base, at, action, W.base_computad), spans


def weight_coproduct(W: Weight, V: Weight):
    """Componentwise disjoint union; the identifier prefix routes the action."""
    parts = {d: coproduct(W.at[d], V.at[d]) for d in W.base.objects}

    def action(d: str, d2: str, w: Enc, f: Enc) -> Enc:
        inner = Enc(w.op, w.tgt[2:])
        if w.tgt.startswith("l:"):
            return parts[d][1].apply(W.act(d, d2, inner, f))
        return parts[d][2].apply(V.act(d, d2, inner, f))

    at = {d: parts[d][0] for d in parts}
    return Weight(W.base, at, action, W.base_computad), parts


# -- comparing weights ----------------------------------------------------


def weights_equal(W: Weight, V: Weight, level_budget: int = 1) -> bool:
    """Identical components and action tables through the level budget."""
    if tuple(W.base.objects) != tuple(V.base.objects):
        return False
    for d in W.base.objects:
        A, B = W.at[d], V.at[d]
        if A is not B and (A.cells, A.faces) != (B.cells, B.faces):
            return False
    K = W.base
    for r in range(level_budget + 1):
        for a, b in itertools.product(K.objects, repeat=2):
            H = K.homs.get((a, b))
            if H is None or not (H.has_level(r) and W.at[b].has_level(r)):
                continue
            for f in H.level(r):
                for w in W.at[b].level(r):
                    if W.act(a, b, w, f) != V.act(a, b, w, f):
                        return False
    return True


def enumerate_weight_maps(W: Weight, V: Weight, level_budget: int = 2) -> list[WeightMap]:
    """Every natural family of component maps; exhaustive, so keep it tiny."""
    objs = list(W.base.objects)
    pools = [enumerate_maps(W.at[d], V.at[d]) for d in objs]
    out = []
    for choice in itertools.product(*pools):
        candidate = WeightMap(W, V, dict(zip(objs, choice)))
        if not candidate.validate(level_budget):
            out.append(candidate)
    return out


def weight_isomorphism(
    W: Weight, V: Weight, level_budget: int = 2
) -> dict[str, SSetMap] | None:
    """A natural family of isomorphisms, or None when there is none."""
    if tuple(W.base.objects) != tuple(V.base.objects):
        return None
    K = W.base
    objs = list(K.objects)
    pools: dict[str, list[SSetMap]] = {}
    for d in objs:
        pools[d] = [m for m in enumerate_maps(W.at[d], V.at[d]) if _map_is_iso(m)]
        if not pools[d]:
            return None
    assigned: dict[str, SSetMap] = {}

    def consistent(d: str) -> bool:
        for a in assigned:
            for b in assigned:
                if d not in (a, b):
                    continue
                H = K.homs.get((a, b))
                if H is None:
                    continue
                for r in range(level_budget + 1):
                    if not (H.has_level(r) and W.at[b].has_level(r)):
                        continue
                    for f in H.level(r):
                        for w in W.at[b].level(r):
                            lhs = assigned[a].apply(W.act(a, b, w, f))
                            if lhs != V.act(a, b, assigned[b].apply(w), f):
                                return False
        return True

    def search(k: int) -> bool:
        if k == len(objs):
            return True
        d = objs[k]
        for m in pools[d]:
            assigned[d] = m
            if consistent(d) and search(k + 1):
                return True
            del assigned[d]
        return False

    return dict(assigned) if search(0) else None


def simpcat_isomorphism(
    S: TruncSimpCat,
    T: TruncSimpCat,
    on_objects: dict[str, str],
    level_budget: int = 2,
) -> SimpFunctor | None:
    """Search for an isomorphism with a prescribed object correspondence.

    Hom candidates are enumerated outright and pruned by identity and
    composition preservation through the level budget, so the homs must
    be small.
    """
    if sorted(on_objects) != sorted(S.objects):
        return None
    if sorted(on_objects[a] for a in S.objects) != sorted(T.objects):
        return None
    pairs = list(itertools.product(S.objects, repeat=2))
    pools: dict[tuple[str, str], list[SSetMap]] = {}
    for a, b in pairs:
        H = S.homs.get((a, b), empty_sset())
        H2 = T.homs.get((on_objects[a], on_objects[b]), empty_sset())
        pools[(a, b)] = [m for m in enumerate_maps(H, H2) if _map_is_iso(m)]
        if not pools[(a, b)]:
            return None
    assigned: dict[tuple[str, str], SSetMap] = {}

    def push(a: str, b: str, f: Enc) -> Enc:
        return assigned[(a, b)].apply(f)

    def consistent(pair) -> bool:
        a, b = pair
        if a == b and push(a, a, S.id_arrow(a, 0)) != T.id_arrow(on_objects[a], 0):
            return False
        for x, y, z in itertools.product(S.objects, repeat=3):
            if (x, y) not in assigned or (y, z) not in assigned or (x, z) not in assigned:
                continue
            if pair not in ((x, y), (y, z), (x, z)):
                continue
            Hxy, Hyz = S.homs.get((x, y)), S.homs.get((y, z))
            if Hxy is None or Hyz is None:
                continue
            for r in range(level_budget + 1):
                if not (Hxy.has_level(r) and Hyz.has_level(r)):
                    continue
                for f in Hxy.level(r):
                    for g in Hyz.level(r):
                        lhs = push(x, z, S.comp(x, y, z, g, f))
                        rhs = T.comp(
                            on_objects[x], on_objects[y], on_objects[z],
                            push(y, z, g), push(x, y, f),
                        )
                        if lhs != rhs:
                            return False
        return True

    def search(k: int) -> bool:
        if k == len(pairs):
            return True
        pair = pairs[k]
        for m in pools[pair]:
            assigned[pair] = m
            if consistent(pair) and search(k + 1):
                return True
            del assigned[pair]
        return False

    if not search(0):
        return None
    return SimpFunctor(S, T, dict(on_objects), dict(assigned))


# -- coends and weighted colimits -----------------------------------------


def _coend(
    D: TruncSimpCat,
    left: dict[str, FinSSet],
    right: dict[str, FinSSet],
    left_act,
    right_act,
    cap: int | None,
    context: str,
):
    """Quotient presentation of the coend of left(d) x right(d).

    left is acted on contravariantly through ``left_act(d, d2, w, f)``
    and right covariantly through ``right_act(d, d2, f, z)``; pairs are
    identified across every arrow simplex of the base.  Raises when a
    hom space runs out before the working cutoff does.
    """
    objs = sorted(D.objects)
    spans = {d: product(left[d], right[d]) for d in objs}
    depths = [readable_depth(spans[d].sset) for d in objs]
    bounded = [t for t in depths if t is not None]
    if bounded:
        cutoff = min(bounded)
    else:
        cutoff = max((spans[d].sset.cutoff for d in objs), default=0)
    if cap is not None:
        cutoff = min(cutoff, cap)
    stable = None
    if all(t is None for t in depths):
        stable = max((spans[d].sset.stable_above for d in objs), default=0)
        if stable > cutoff:
            stable = None
    for a in objs:
        for b in objs:
            H = D.homs.get((a, b))
            if H is None:
                continue
            for n in range(cutoff + 1):
                if H.has_level(n):
                    continue
                if left[b].level(n) and right[a].level(n):
                    raise BudgetError(f"{context} not determined at cutoff {cutoff}")

    def gens(n: int):
        rel = []
        for a in objs:
            for b in objs:
                H = D.homs.get((a, b))
                if H is None or not H.has_level(n):
                    continue
                wl = left[b].level(n)
                zl = right[a].level(n)
                if not (wl and zl):
                    continue
                for f in H.level(n):
                    for w in wl:
                        for z in zl:
                            one = spans[a].encode_pair(left_act(a, b, w, f), z)
                            two = spans[b].encode_pair(w, right_act(a, b, f, z))
                            rel.append(((a + "|", one), (b + "|", two)))
        return rel

    q = quotient([(d + "|", spans[d].sset) for d in objs], gens, cutoff, stable)
    return q, spans, cutoff


@dataclass(eq=False)
class WeightedColimit:
    """A weighted colimit presented as a coend quotient.

    ``legs[d]`` carries the product of the weight component and the
    diagram component at d, truncated to the working cutoff, into the
    colimit.
    """

    sset: FinSSet
    legs: dict[str, SSetMap]
    spans: dict[str, SpanResult]
    quotient: QuotientResult

    def pair(self, d: str, w: Enc, x: Enc) -> Enc:
        """The colimit class of the pair w, x sitting at d."""
        return self.quotient.encode_from((d + "|", self.spans[d].encode_pair(w, x)))


def weighted_colimit(W: Weight, F: Diagram, cap: int | None = None) -> WeightedColimit:
    """The coend of W(d) x F(d): pairs modulo w*f, x  ~  w, f*x."""
    if W.base.objects != F.base.objects or set(W.base.homs) != set(F.base.homs):
        raise InputError("the weight and the diagram must share their base")
    q, spans, cutoff = _coend(W.base, W.at, F.at, W.act, F.act, cap, "colimit")
    legs = {}
    for d in W.base.objects:
        dom = truncate(spans[d].sset, cutoff)
        legs[d] = SSetMap(
            dom, q.sset,
            {
                p: q.encode_from((d + "|", nondeg(p, k)))
                for k, layer in enumerate(dom.cells)
                for p in layer
            },
        )
    return WeightedColimit(q.sset, legs, spans, q)


def colimit_induced_map(
    source: WeightedColimit, target: WeightedColimit, components: dict[str, SSetMap]
) -> SSetMap:
    """The map of colimits a family of diagram component maps induces."""
    images = {}
    for k, layer in enumerate(source.sset.cells):
        for p in layer:
            tag, rep = source.quotient.representative(nondeg(p, k))
            d = tag[:-1]
            w, x = source.spans[d].components(rep)
            images[p] = target.pair(d, w, components[d].apply(x))
    return SSetMap(source.sset, target.sset, images)


def colimit_universal_check(
    W: Weight, F: Diagram, colim: WeightedColimit, e: FinSSet
) -> dict:
    """Compare maps out of the colimit with weight cocones at a nadir.

    Both sides are enumerated outright, so e and the components must be
    small.  Returns the two counts and whether postcomposition with the
    legs is a bijection onto the natural families.
    """
    objs = sorted(colim.legs)
    maps = enumerate_maps(colim.sset, e)
    induced = sorted(
        tuple(compose_maps(m, colim.legs[d]).key() for d in objs) for m in maps
    )

    def natural(family: dict[str, SSetMap]) -> bool:
        K = W.base
        for n in range(colim.sset.cutoff + 1):
            for a in objs:
                for b in objs:
                    H = K.homs.get((a, b))
                    if H is None or not H.has_level(n):
                        continue
                    for f in H.level(n):
                        for w in W.at[b].level(n):
                            for x in F.at[a].level(n):
                                one = colim.spans[a].encode_pair(W.act(a, b, w, f), x)
                                two = colim.spans[b].encode_pair(w, F.act(a, b, f, x))
                                if family[a].apply(one) != family[b].apply(two):
                                    return False
        return True

    pools = [enumerate_maps(colim.legs[d].domain, e) for d in objs]
    cocones = []
    for choice in itertools.product(*pools):
        family = dict(zip(objs, choice))
        if natural(family):
            cocones.append(tuple(family[d].key() for d in objs))
    cocones.sort()
    return {
        "maps": len(maps),
        "cocones": len(cocones),
        "bijective": induced == cocones and len(set(induced)) == len(induced),
    }


# -- diagrams over presented bases ----------------------------------------


def free_diagram(
    C: Computad, at: dict[str, FinSSet], generators: dict[str, SSetMap]
) -> Diagram:
    """Extend generator images over a base presented by a computad.

    All atomic arrows must sit in level zero; composite and degenerate
    arrows then act by the matching composite of generator maps.  Bases
    with higher atomic arrows need a hand-written action instead.
    """
    K = C.underlying
    for (a, b), cells in C.atomic.items():
        for cell in cells:
            if K.homs[(a, b)].dim(cell) != 0:
                raise InputError("free extension needs every atomic arrow in level zero")
            m = generators.get(cell)
            if m is None:
                raise InputError(f"missing generator image for {cell!r}")
            if m.domain.cells != at[a].cells or m.codomain.cells != at[b].cells:
                raise InputError(
                    f"generator for {cell!r} does not run between the assigned components"
                )

    def action(d: str, d2: str, f: Enc, x: Enc) -> Enc:
        if K.is_identity_arrow(d, d2, f):
            return x
        y = x
        for cell, _ in atomic_factorization(C, d, d2, f):
            y = generators[cell].apply(y)
        return y

    return Diagram(K, dict(at), action)


def restrict_diagram(F: Diagram, I: SimpFunctor) -> Diagram:
    """Precompose a diagram with a functor into its base."""
    at = {a: F.at[I.obj(a)] for a in I.source.objects}

    def action(d: str, d2: str, f: Enc, x: Enc) -> Enc:
        return F.act(I.obj(d), I.obj(d2), I.push(d, d2, f), x)

    return Diagram(I.source, at, action)


# -- oplax weights ---------------------------------------------------------


def oplax_weight(X: FinSSet, arrow_cutoff: int = 3, max_weight: int | None = None) -> Weight:
    """The weight whose colimits are oplax over the realization of X.

    The component at a vertex is the hom to the cone point inside the
    realization of X joined with a point; the action is composition
    there.
    """
    CX = hc_realization(X, arrow_cutoff, max_weight)
    P = point()
    J = join(X, P)
    CJ = hc_realization(J, arrow_cutoff, max_weight)
    into_x, into_p = join_inclusions(X, P, J)
    F = realization_functor(into_x, CX, CJ)
    top = into_p.images[P.nondeg_cells(0)[0]].tgt
    W = wgt(CJ.underlying, F, top)
    W.base_computad = CX
    return W


# -- left Kan extension along a realized map --------------------------------


def lan_weight(
    W: Weight,
    b: SSetMap,
    arrow_cutoff: int = 3,
    max_weight: int | None = None,
    cap: int | None = None,
) -> Weight:
    """Extend a weight along the realization of a simplicial map.

    The collage of the result is the pushout of the collage of W along
    the induced functor of realizations: the codomain base keeps its
    homs and the homs into the cone object are coend quotients.  The
    weight is then read back off that category.
    """
    CX = W.base_computad
    if CX is None:
        CX = hc_realization(b.domain, arrow_cutoff, max_weight)
    if W.base is not CX.underlying:
        raise InputError("the weight must be presented over the realization of the domain")
    CB = hc_realization(b.codomain, arrow_cutoff, max_weight)
    I = realization_functor(b, CX, CB)
    C = CB.underlying
    if COLLAGE_TOP in C.objects:
        raise InputError("the codomain realization already owns the collage object name")

    coends: dict[str, QuotientResult] = {}
    spans_at: dict[str, dict[str, SpanResult]] = {}
    for c in C.objects:
        right = {d: C.homs[(c, I.obj(d))] for d in W.base.objects}

        def right_act(d: str, d2: str, f: Enc, z: Enc, _c=c) -> Enc:
            return C.comp(_c, I.obj(d), I.obj(d2), I.push(d, d2, f), z)

        q, spans, _ = _coend(W.base, W.at, right, W.act, right_act, cap, "pushout")
        coends[c] = q
        spans_at[c] = spans

    pt = point()
    objects = tuple(C.objects) + (COLLAGE_TOP,)
    homs: dict[tuple[str, str], FinSSet] = {}
    for a in C.objects:
        for b2 in C.objects:
            homs[(a, b2)] = C.homs.get((a, b2), empty_sset())
        homs[(a, COLLAGE_TOP)] = coends[a].sset
        homs[(COLLAGE_TOP, a)] = empty_sset()
    homs[(COLLAGE_TOP, COLLAGE_TOP)] = pt

    def compose_fn(a: str, b2: str, c2: str, g: Enc, f: Enc) -> Enc:
        if c2 != COLLAGE_TOP:
            return C.compose_fn(a, b2, c2, g, f)
        if b2 == COLLAGE_TOP:
            return f
        tag, rep = coends[b2].representative(g)
        d = tag[:-1]
        w, z = spans_at[b2][d].components(rep)
        moved = spans_at[a][d].encode_pair(w, C.comp(a, b2, I.obj(d), z, f))
        return coends[a].encode_from((tag, moved))

    identities = dict(C.identities)
    identities[COLLAGE_TOP] = pt.nondeg_cells(0)[0]
    P = TruncSimpCat(objects, homs, compose_fn, identities, C.arrow_cutoff)
    incl = SimpFunctor(
        C, P,
        {a: a for a in C.objects},
        {(a, b2): identity_map(homs[(a, b2)]) for a in C.objects for b2 in C.objects},
    )
    lan = wgt(P, incl, COLLAGE_TOP)
    lan.base_computad = CB
    return lan


# -- flexibility -----------------------------------------------------------


def is_flexible(W: Weight, level_budget: int | None = None) -> ComputadVerdict:
    """Computad recognition on the collage, over a certified computad base."""
    base = is_computad(W.base, level_budget)
    if not base.ok:
        raise InputError("flexibility is only decided over a computad base")
    return is_computad(collage(W), level_budget)


# -- the cylinder pushout building oplax simplex weights ---------------------


def _enc_levels(e: Enc) -> tuple[tuple[int, ...], ...]:
    # subset chain of a poset hom simplex, repeats included
    chain = tuple(tuple(int(v) for v in part.split(".")) for part in e.tgt.split("<"))
    return tuple(chain[v] for v in e.op.values)


def _translate(levels) -> Enc:
    strict, kappa = dedup_chain(tuple(levels))
    return Enc(kappa, chain_name(strict))


@dataclass
class OplaxPushoutReport:
    """Objectwise comparison of a cylinder pushout with the next weight."""

    n: int
    ok: bool
    components: dict[str, tuple[int, ...]]
    problems: list[str]


def verify_oplax_weight_pushout(n: int) -> OplaxPushoutReport:
    """Rebuild the oplax weight of the n-simplex from the previous one.

    Over the coherent n-simplex, the representable at the last object is
    glued to the cylinder on the weight of the face opposite it, along
    the far end of the cylinder.  Each component of the pushout is
    compared with the matching hom of the coherent (n+1)-simplex through
    explicit chain translations; the report carries every mismatch.
    """
    if n < 1 or n > 4:
        raise InputError("the cylinder pushout report covers 1 <= n <= 4")
    K = hc_simplex(n).underlying
    next_homs = hc_simplex(n + 1).underlying.homs
    last = str(n)
    interval = simplex(1)
    top_vertex = n + 1

    rep = representable_weight(K, last)
    prev_at = {str(i): K.homs[(str(i), last)] for i in range(n)}
    prev_at[last] = empty_sset()
    prev = Weight(K, prev_at, rep.action)
    cyl, spans = weight_cylinder(prev, interval, cap=n + 1)

    top_components: dict[str, SSetMap] = {}
    end_components: dict[str, SSetMap] = {}
    for i in range(n + 1):
        d = str(i)
        Wd = prev.at[d]
        if i < n:
            top_components[d] = identity_map(Wd)
        else:
            top_components[d] = SSetMap(Wd, rep.at[d], {})
        end_components[d] = SSetMap(
            Wd, cyl.at[d],
            {
                w: spans[d].encode_pair(nondeg(w, k), _collapse("1", k))
                for k, layer in enumerate(Wd.cells)
                for w in layer
            },
        )

    problems: list[str] = []
    top = WeightMap(prev, rep, top_components)
    end = WeightMap(prev, cyl, end_components)
    problems += [f"representable leg: {p}" for p in top.validate(n)]
    problems += [f"cylinder leg: {p}" for p in end.validate(n)]

    def phi(pair_enc: Enc, d: str) -> Enc:
        w, t = spans[d].components(pair_enc)
        subsets = _enc_levels(w)
        out = []
        for j, T in enumerate(subsets):
            side = int(interval.act(t, vertex_op(j, t.dim)).tgt)
            kept = set(T) | {top_vertex} if side else (set(T) - {n}) | {top_vertex}
            out.append(tuple(sorted(kept)))
        return _translate(out)

    def appended(e: Enc) -> Enc:
        return _translate(
            tuple(sorted(set(T) | {top_vertex})) for T in _enc_levels(e)
        )

    components: dict[str, tuple[int, ...]] = {}
    for i in range(n + 1):
        d = str(i)
        expected = next_homs[(d, str(top_vertex))]
        P, in_rep, in_cyl, q = pushout(top_components[d], end_components[d], cap=n + 1)
        components[d] = tuple(len(layer) for layer in P.cells)

        rep_cmp = SSetMap(
            in_rep.domain, expected,
            {
                x: appended(nondeg(x, k))
                for k, layer in enumerate(in_rep.domain.cells)
                for x in layer
            },
        )
        cyl_cmp = SSetMap(
            in_cyl.domain, expected,
            {
                c: phi(nondeg(c, k), d)
                for k, layer in enumerate(in_cyl.domain.cells)
                for c in layer
            },
        )
        images = {}
        for k, layer in enumerate(P.cells):
            for p in layer:
                tag, r_enc = q.representative(nondeg(p, k))
                images[p] = appended(r_enc) if tag == "x:" else phi(r_enc, d)
        comparison = SSetMap(P, expected, images)

        for name, m in (("representable corner", rep_cmp),
                        ("cylinder corner", cyl_cmp),
                        ("pushout comparison", comparison)):
            report = m.validate()
            problems += [f"object {d}, {name}: {p}" for p in report.problems]
        if not maps_equal(compose_maps(rep_cmp, top_components[d]),
                          compose_maps(cyl_cmp, end_components[d])):
            problems.append(f"object {d}: the comparison square does not commute")
        if not maps_equal(compose_maps(comparison, in_rep), rep_cmp):
            problems.append(f"object {d}: the representable corner is not respected")
        if not maps_equal(compose_maps(comparison, in_cyl), cyl_cmp):
            problems.append(f"object {d}: the cylinder corner is not respected")
        if not _map_is_iso(comparison):
            problems.append(f"object {d}: the pushout misses the next weight")

    return OplaxPushoutReport(n, not problems, components, problems)
