"""Finite limits and colimits of truncated simplicial sets.

Products and pullbacks pair encoded simplices and renormalize through
the levelwise builder.  Pushouts and coequalizers quotient a coproduct
by the operator-stable closure of the gluing relation, choose the least
identifier in each class, and re-extract nondegenerate representatives.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from ..errors import InputError
from ..ops import SimplicialOperator
from .core import (
    Enc,
    FinSSet,
    Levelwise,
    LevelwiseResult,
    SSetMap,
    build_sset,
    nondeg,
    readable_depth,
    truncate,
)


def _common_cutoff(objects: list[FinSSet], cap: int | None) -> int:
    depths = [d for d in map(readable_depth, objects) if d is not None]
    if depths:
        cutoff = min(depths)
    else:
        cutoff = max(Z.cutoff for Z in objects)
    if cap is not None:
        cutoff = min(cutoff, cap)
    return cutoff


def _enc_label(enc: Enc) -> str:
    if enc.op.is_identity:
        return enc.tgt
    return enc.tgt + "{" + ",".join(str(v) for v in enc.op.values) + "}"


# -- coproduct -----------------------------------------------------------


def coproduct(X: FinSSet, Y: FinSSet, tags: tuple[str, str] = ("l:", "r:")):
    """Disjoint union with identifier prefixes; returns (X⊔Y, inl, inr)."""
    lt, rt = tags
    if lt == rt:
        raise InputError("coproduct tags must differ")
    cutoff = _common_cutoff([X, Y], None)
    stable = None
    if X.stable_above is not None and Y.stable_above is not None:
        stable = max(X.stable_above, Y.stable_above)
    X, Y = truncate(X, cutoff), truncate(Y, cutoff)
    layers = [
        [lt + x for x in X.nondeg_cells(k)] + [rt + y for y in Y.nondeg_cells(k)]
        for k in range(cutoff + 1)
    ]
    faces = {}
    for tag, Z in ((lt, X), (rt, Y)):
        for z, fs in Z.faces.items():
            faces[tag + z] = tuple(Enc(op, tag + t) for op, t in fs)
    S = build_sset(layers, faces, cutoff=cutoff, stable_above=stable)
    inl = SSetMap(X, S, {x: Enc(nondeg(x, k).op, lt + x) for k, layer in enumerate(X.cells) for x in layer})
    inr = SSetMap(Y, S, {y: Enc(nondeg(y, k).op, rt + y) for k, layer in enumerate(Y.cells) for y in layer})
    return S, inl, inr


# -- product and pullback -------------------------------------------------


@dataclass
class SpanResult:
    """A limit of a pair with its projections and a pairing encoder."""

    sset: FinSSet
    proj1: SSetMap
    proj2: SSetMap
    _result: LevelwiseResult

    def encode_pair(self, a: Enc, b: Enc) -> Enc:
        if a.dim != b.dim:
            raise InputError("pair components must have equal dimension")
        return self._result.encode((a, b), a.dim)

    def components(self, enc: Enc) -> tuple[Enc, Enc]:
        a, b = self._result.elements[enc.tgt]
        X, Y = self.proj1.codomain, self.proj2.codomain
        return X.act(a, enc.op), Y.act(b, enc.op)

    def pair_maps(self, f: SSetMap, g: SSetMap) -> SSetMap:
        """The mediating map ⟨f, g⟩ into this product or pullback."""
        images = {}
        for k, layer in enumerate(f.domain.cells):
            for z in layer:
                images[z] = self.encode_pair(f.images[z], g.images[z])
        return SSetMap(f.domain, self.sset, images)


def _pair_cutoff(X: FinSSet, Y: FinSSet, cap: int | None):
    if X.stable_above is not None and Y.stable_above is not None:
        # jointly injective pairs of surjections cannot exceed this dimension
        natural = X.stable_above + Y.stable_above
        cutoff = natural if cap is None else min(cap, natural)
        return cutoff, (natural if cutoff == natural else None)
    return _common_cutoff([X, Y], cap), None


def _build_pairs(X: FinSSet, Y: FinSSet, keep, cutoff: int, stable):
    levels = []
    for n in range(cutoff + 1):
        ylevel = Y.level(n)
        levels.append([(a, b) for a in X.level(n) for b in ylevel if keep(a, b)])

    def pair_act(e, op):
        a, b = e
        return (X.act(a, op), Y.act(b, op))

    def pair_id(e, n):
        a, b = e
        return "(" + _enc_label(a) + "|" + _enc_label(b) + ")"

    res = Levelwise(levels, pair_act, pair_id, stable_above=stable).build()
    P = res.sset
    proj1 = SSetMap(P, X, {p: res.elements[p][0] for p in P.all_cells()})
    proj2 = SSetMap(P, Y, {p: res.elements[p][1] for p in P.all_cells()})
    return SpanResult(P, proj1, proj2, res)


def product(X: FinSSet, Y: FinSSet, cap: int | None = None) -> SpanResult:
    cutoff, stable = _pair_cutoff(X, Y, cap)
    return _build_pairs(X, Y, lambda a, b: True, cutoff, stable)


def pullback(f: SSetMap, g: SSetMap, cap: int | None = None) -> SpanResult:
    """The pullback X ×_Z Y of f: X → Z and g: Y → Z."""
    if f.codomain is not g.codomain and f.codomain.cells != g.codomain.cells:
        raise InputError("pullback legs must share a codomain")
    X, Y = f.domain, g.domain
    cutoff, stable = _pair_cutoff(X, Y, cap)
    return _build_pairs(X, Y, lambda a, b: f.apply(a) == g.apply(b), cutoff, stable)


def product_map(P: SpanResult, Q: SpanResult, f: SSetMap, g: SSetMap) -> SSetMap:
    """The map P = X×Y → X′×Y′ = Q induced by f: X→X′ and g: Y→Y′."""
    images = {}
    for p in P.sset.all_cells():
        a, b = P._result.elements[p]
        images[p] = Q.encode_pair(f.apply(a), g.apply(b))
    return SSetMap(P.sset, Q.sset, images)


def terminal_map(X: FinSSet, pt: FinSSet) -> SSetMap:
    v = pt.nondeg_cells(0)[0]
    images = {}
    for k, layer in enumerate(X.cells):
        collapse = SimplicialOperator(k, 0, (0,) * (k + 1))
        for x in layer:
            images[x] = Enc(collapse, v) if k else nondeg(v, 0)
    return SSetMap(X, pt, images)


# -- quotients -------------------------------------------------------------


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        p = self.parent.setdefault(x, x)
        while p != self.parent[p]:
            self.parent[p] = self.parent[self.parent[p]]
            p = self.parent[p]
        self.parent[x] = p
        return p

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            # keep the smaller key as the canonical representative
            if ry < rx:
                rx, ry = ry, rx
            self.parent[ry] = rx


@dataclass
class QuotientResult:
    sset: FinSSet
    parts: dict[str, FinSSet]
    _result: LevelwiseResult
    _canon: list[dict]

    def encode_from(self, tagged: tuple[str, Enc]) -> Enc:
        tag, enc = tagged
        if enc.dim >= len(self._canon):
            # above the written tables; stable levels reduce to the core
            self.sset.require_level(enc.dim)
            core = nondeg(enc.tgt, self.parts[tag].dim(enc.tgt))
            return self.sset.act(self.encode_from((tag, core)), enc.op)
        rep = self._canon[enc.dim][(tag, enc.key())]
        return self._result.encode(rep, enc.dim)

    def representative(self, enc: Enc) -> tuple[str, Enc]:
        """A canonical preimage (tag, simplex) of a quotient simplex."""
        tag, rep = self._result.elements[enc.tgt]
        return tag, self.parts[tag].act(rep, enc.op)


def quotient(
    parts: list[tuple[str, FinSSet]],
    generators: Callable[[int], list[tuple[tuple[str, Enc], tuple[str, Enc]]]],
    cutoff: int,
    stable_above: int | None,
) -> QuotientResult:
    """Quotient a disjoint union by the closure of levelwise generators.

    The generating relation must be operator-stable (it is, for gluing
    relations of the form f(a) ~ g(a)); classes then act by acting on
    any member.  The least member key is the canonical representative.
    """
    for _, Z in parts:
        Z.require_level(cutoff)
    canon: list[dict] = []
    levels = []
    for n in range(cutoff + 1):
        uf = _UnionFind()
        members: dict[tuple, tuple[str, Enc]] = {}
        for tag, Z in parts:
            for enc in Z.level(n):
                members[(tag, enc.key())] = (tag, enc)
                uf.find((tag, enc.key()))
        for (t1, e1), (t2, e2) in generators(n):
            uf.union((t1, e1.key()), (t2, e2.key()))
        table = {key: members[uf.find(key)] for key in members}
        canon.append(table)
        reps = sorted({(t, e.key()) for t, e in table.values()})
        levels.append([members[k] for k in reps])

    lookup = {tag: Z for tag, Z in parts}

    def q_act(e, op):
        tag, enc = e
        moved = lookup[tag].act(enc, op)
        return canon[op.source_dim][(tag, moved.key())]

    def q_id(e, n):
        tag, enc = e
        return tag + _enc_label(enc)

    res = Levelwise(levels, q_act, q_id, stable_above=stable_above).build()
    return QuotientResult(res.sset, dict(parts), res, canon)


def pushout(f: SSetMap, g: SSetMap, cap: int | None = None):
    """The pushout X ⊔_A Y of f: A → X and g: A → Y.

    Returns (P, inX, inY).  Computed as a levelwise quotient of X ⊔ Y by
    f(a) ~ g(a); the relation is generated over all simplices of A, so
    it is closed under operators.
    """
    A, X, Y = f.domain, f.codomain, g.codomain
    cutoff = _common_cutoff([A, X, Y], cap)
    stable = None
    if all(Z.stable_above is not None for Z in (A, X, Y)):
        stable = max(X.stable_above, Y.stable_above)
        cutoff = max(cutoff, stable) if cap is None else cutoff
        if stable > cutoff:
            stable = None

    def gens(n):
        return [(("x:", f.apply(a)), ("y:", g.apply(a))) for a in A.level(n)]

    q = quotient([("x:", X), ("y:", Y)], gens, cutoff, stable)
    Xt, Yt = truncate(X, cutoff), truncate(Y, cutoff)
    inX = SSetMap(
        Xt, q.sset,
        {x: q.encode_from(("x:", nondeg(x, k))) for k, layer in enumerate(Xt.cells) for x in layer},
    )
    inY = SSetMap(
        Yt, q.sset,
        {y: q.encode_from(("y:", nondeg(y, k))) for k, layer in enumerate(Yt.cells) for y in layer},
    )
    return q.sset, inX, inY, q


def coequalizer(f: SSetMap, g: SSetMap, cap: int | None = None):
    """The coequalizer of f, g: A ⇉ X; returns (Q, projection, quotient data)."""
    if f.domain is not g.domain and f.domain.cells != g.domain.cells:
        raise InputError("coequalizer legs must share a domain")
    if f.codomain is not g.codomain and f.codomain.cells != g.codomain.cells:
        raise InputError("coequalizer legs must share a codomain")
    A, X = f.domain, f.codomain
    cutoff = _common_cutoff([A, X], cap)
    stable = X.stable_above if (A.stable_above is not None and X.stable_above is not None) else None
    if stable is not None and stable > cutoff:
        stable = None

    def gens(n):
        return [(("x:", f.apply(a)), ("x:", g.apply(a))) for a in A.level(n)]

    q = quotient([("x:", X)], gens, cutoff, stable)
    Xt = truncate(X, cutoff)
    proj = SSetMap(
        Xt, q.sset,
        {x: q.encode_from(("x:", nondeg(x, k))) for k, layer in enumerate(Xt.cells) for x in layer},
    )
    return q.sset, proj, q
