"""Marked simplicial sets, complicial shapes, and marked joins/slices.

A marking is a set of nondegenerate simplices of positive dimension;
degenerate simplices are marked by definition.  Maps of marked objects
must carry marked simplices to marked simplices.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError
from .sset import (
    Enc,
    FinSSet,
    MapSpaceResult,
    SSetMap,
    build_sset,
    enumerate_maps,
    homotopy_category,
    inclusion,
    join,
    nondeg,
    simplex,
    slice_over,
    vertex_name,
)
from .sset import horn as plain_horn
from .sset.lifting import LiftingCertificate


@dataclass(frozen=True)
class MarkedSSet:
    space: FinSSet
    marked: frozenset[str]

    def is_marked(self, enc: Enc) -> bool:
        return not enc.op.is_identity or enc.tgt in self.marked

    def validate(self) -> list[str]:
        problems = []
        for x in self.marked:
            if x not in self.space.dims:
                problems.append(f"marked identifier {x!r} is not a cell")
            elif self.space.dim(x) < 1:
                problems.append(f"marked identifier {x!r} is a vertex")
        base = self.space.validate()
        problems.extend(base.problems)
        return problems

    def counts(self) -> tuple[int, ...]:
        return self.space.counts()


def minimal_marking(X: FinSSet) -> MarkedSSet:
    return MarkedSSet(X, frozenset())


def maximal_marking(X: FinSSet) -> MarkedSSet:
    return MarkedSSet(
        X, frozenset(x for k, layer in enumerate(X.cells) for x in layer if k >= 1)
    )


def natural_marking(X: FinSSet, certificate=None) -> MarkedSSet:
    """Mark everything above dimension 1 and the invertible edges."""
    ho = homotopy_category(X, certificate)
    marked = set()
    for k, layer in enumerate(X.cells):
        if k >= 2:
            marked.update(layer)
        elif k == 1:
            marked.update(x for x in layer if ho.invertible(nondeg(x, 1)))
    return MarkedSSet(X, frozenset(marked))


def preserves_marking(dom: MarkedSSet, cod: MarkedSSet, f: SSetMap) -> bool:
    return all(cod.is_marked(f.images[x]) for x in dom.marked)


def marked_map_problems(dom: MarkedSSet, cod: MarkedSSet, f: SSetMap) -> list[str]:
    out = list(f.validate().problems)
    for x in sorted(dom.marked):
        if not cod.is_marked(f.images[x]):
            out.append(f"marked simplex {x!r} has unmarked image")
    return out


# -- sharp and core ---------------------------------------------------------


def sharp_n(M: MarkedSSet, n: int) -> MarkedSSet:
    extra = {
        x for k, layer in enumerate(M.space.cells) for x in layer if k > max(n, 0)
    }
    return MarkedSSet(M.space, M.marked | extra)


def core_n(M: MarkedSSet, n: int) -> MarkedSSet:
    """The largest subobject whose cells have all faces above dim n marked.

    A cell belongs to the core when every nondegenerate simplex in its
    face closure (itself included) of dimension above n is marked.
    """
    X = M.space
    bad = {
        x
        for k, layer in enumerate(X.cells)
        for x in layer
        if k > n and x not in M.marked
    }
    closure_ok: dict[str, bool] = {}

    def ok(x: str) -> bool:
        if x in closure_ok:
            return closure_ok[x]
        good = x not in bad and all(ok(t) for _, t in X.faces.get(x, ()))
        closure_ok[x] = good
        return good

    keep = {x for layer in X.cells for x in layer if ok(x)}
    layers = [[x for x in layer if x in keep] for layer in X.cells]
    faces = {x: X.faces[x] for x in keep if x in X.faces}
    if X.stable_above is None:
        sub = build_sset(layers, faces, cutoff=X.cutoff, stable_above=None)
    else:
        top = max((k for k, layer in enumerate(layers) if layer), default=0)
        sub = build_sset(layers, faces, cutoff=top, stable_above=top)
    return MarkedSSet(sub, frozenset(x for x in M.marked if x in sub.dims))


def core_inclusion(M: MarkedSSet, n: int) -> SSetMap:
    C = core_n(M, n)
    return inclusion(C.space, M.space)


# -- complicial shapes ------------------------------------------------------


def _admissible_marks(n: int, k: int) -> frozenset[str]:
    need = {v for v in (k - 1, k, k + 1) if 0 <= v <= n}
    D = simplex(n)
    out = set()
    for j in range(1, n + 1):
        for name in D.nondeg_cells(j):
            verts = set(int(v) for v in name.split("."))
            if need <= verts:
                out.add(name)
    return frozenset(out)


def _codim_face_name(n: int, i: int) -> str:
    return vertex_name(tuple(v for v in range(n + 1) if v != i))


def complicial_shape(kind: str, n: int, k: int | None = None) -> MarkedSSet:
    if kind == "marked_simplex":
        D = simplex(n)
        top = vertex_name(tuple(range(n + 1)))
        return MarkedSSet(D, frozenset([top] if n >= 1 else []))
    if k is None or not 0 <= k <= n:
        raise InputError(f"admissibility index ({n},{k}) out of range")
    if kind == "admissible":
        return MarkedSSet(simplex(n), _admissible_marks(n, k))
    if kind == "horn":
        H = plain_horn(n, k)
        marks = {x for x in _admissible_marks(n, k) if x in H.dims}
        return MarkedSSet(H, frozenset(marks))
    if kind == "natural":
        base = _admissible_marks(n, k)
        extra = {
            _codim_face_name(n, i)
            for i in (k - 1, k + 1)
            if 0 <= i <= n and n - 1 >= 1
        }
        return MarkedSSet(simplex(n), base | extra)
    if kind == "sharp":
        nat = complicial_shape("natural", n, k)
        extra = {_codim_face_name(n, k)} if n - 1 >= 1 else set()
        return MarkedSSet(nat.space, nat.marked | extra)
    raise InputError(f"unknown complicial shape kind {kind!r}")


# -- marked joins and slices ------------------------------------------------


def marked_join(X: MarkedSSet, Y: MarkedSSet) -> MarkedSSet:
    J = join(X.space, Y.space)
    marks = set()
    for k, layer in enumerate(J.cells):
        if k < 1:
            continue
        for name in layer:
            x, y = name.split("*")
            if x and y:
                if x in X.marked or y in Y.marked:
                    marks.add(name)
            elif x:
                if x in X.marked:
                    marks.add(name)
            else:
                if y in Y.marked:
                    marks.add(name)
    return MarkedSSet(J, frozenset(marks))


@dataclass
class MarkedSliceResult:
    marked: MarkedSSet
    space: MapSpaceResult

    @property
    def sset(self) -> FinSSet:
        return self.marked.space


def marked_slice(Y: MarkedSSet, f: SSetMap, X: MarkedSSet, budget: int = 3) -> MarkedSliceResult:
    """The slice of Y by the marked map f: X → Y.

    The underlying object is the plain slice.  A cell g: Δⁿ⋆X → Y is
    marked when the same underlying map is a marked map out of ♯Δⁿ⋆X,
    the join with the top n-simplex marked.  The inclusion into ♯Δⁿ⋆X
    is the identity on cells, so the extension condition reduces to a
    marking-preservation predicate.
    """
    problems = marked_map_problems(X, Y, f)
    if problems:
        raise InputError("slice base map is not a marked map: " + problems[0])
    S = slice_over(Y.space, f, budget=budget)
    marks = set()
    for n in range(1, len(S.sset.cells)):
        shell = marked_join(complicial_shape("marked_simplex", n), X)
        for name in S.sset.nondeg_cells(n):
            if preserves_marking(shell, Y, S.maps[name]):
                marks.add(name)
    return MarkedSliceResult(MarkedSSet(S.sset, frozenset(marks)), S)


# -- certification ----------------------------------------------------------


def marked_extensions(
    dom: MarkedSSet, cod: MarkedSSet, partial: dict[str, Enc]
) -> list[SSetMap]:
    out = []
    for h in enumerate_maps(dom.space, cod.space, partial=partial):
        if preserves_marking(dom, cod, h):
            out.append(h)
    return out


def complicial_certify(M: MarkedSSet, budget: int) -> LiftingCertificate:
    """Budgeted extension checks against the complicial generating set."""
    checked = 0
    tally = {}
    for n in range(1, budget + 1):
        M.space.require_level(n)
        for k in range(n + 1):
            horn_shape = complicial_shape("horn", n, k)
            full_shape = complicial_shape("admissible", n, k)
            good = 0
            for u in enumerate_maps(horn_shape.space, M.space):
                if not preserves_marking(horn_shape, M, u):
                    continue
                checked += 1
                fillers = marked_extensions(full_shape, M, dict(u.images))
                if not fillers:
                    return LiftingCertificate(
                        kind="complicial",
                        budget=budget,
                        certified=False,
                        squares_checked=checked,
                        refuted_at=(n, k),
                        counterexample={
                            "family": "horn",
                            "shape": (n, k),
                            "map": {a: e.key() for a, e in u.images.items()},
                        },
                    )
                good += 1
            tally[("horn", n, k)] = good

            nat = complicial_shape("natural", n, k)
            shp = complicial_shape("sharp", n, k)
            good = 0
            for u in enumerate_maps(nat.space, M.space):
                if not preserves_marking(nat, M, u):
                    continue
                checked += 1
                if not preserves_marking(shp, M, u):
                    return LiftingCertificate(
                        kind="complicial",
                        budget=budget,
                        certified=False,
                        squares_checked=checked,
                        refuted_at=(n, k),
                        counterexample={
                            "family": "thinness",
                            "shape": (n, k),
                            "map": {a: e.key() for a, e in u.images.items()},
                        },
                    )
                good += 1
            tally[("thin", n, k)] = good
    return LiftingCertificate(
        kind="complicial",
        budget=budget,
        certified=True,
        squares_checked=checked,
        tally=tally,
    )
