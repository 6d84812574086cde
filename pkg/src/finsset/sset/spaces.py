"""Joins, slices, and mapping spaces.

Join cells are pairs with an augmentation row on each side; the cell
``(x, y)`` has dimension dim x + dim y + 1 and is named ``"x*y"`` (with
an empty side for the augmented cases), so functoriality of the join is
name-level arithmetic.  Slices and mapping spaces are built by brute
enumeration of maps out of joins/products with standard simplices, with
operator actions given by precomposition.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from ..errors import InputError
from ..ops import SimplicialOperator, identity_op
from .core import (
    Enc,
    FinSSet,
    Levelwise,
    SSetMap,
    build_sset,
    compose_maps,
    identity_map,
    nondeg,
    readable_depth,
)
from .limits import SpanResult, _common_cutoff, product, product_map
from .lifting import enumerate_maps
from . import shapes


def _jx(x: str) -> str:
    return x + "*"


def _jy(y: str) -> str:
    return "*" + y


def _jp(x: str, y: str) -> str:
    return x + "*" + y


def join_ops(a: SimplicialOperator, b: SimplicialOperator) -> SimplicialOperator:
    """The operator acting as a on an initial segment and b on the rest."""
    i = a.target_dim
    return SimplicialOperator(
        a.source_dim + b.source_dim + 1,
        i + b.target_dim + 1,
        a.values + tuple(v + i + 1 for v in b.values),
    )


def join(X: FinSSet, Y: FinSSet) -> FinSSet:
    if X.stable_above is not None and Y.stable_above is not None:
        cutoff = X.stable_above + Y.stable_above + 1
        stable = cutoff
    else:
        cutoff = _common_cutoff([X, Y], None)
        stable = None

    layers: list[list[str]] = [[] for _ in range(cutoff + 1)]
    faces: dict[str, tuple[Enc, ...]] = {}

    for k in range(min(len(X.cells), cutoff + 1)):
        layers[k].extend(_jx(x) for x in X.nondeg_cells(k))
    for k in range(min(len(Y.cells), cutoff + 1)):
        layers[k].extend(_jy(y) for y in Y.nondeg_cells(k))
    for x, fs in X.faces.items():
        if X.dim(x) <= cutoff:
            faces[_jx(x)] = tuple(Enc(op, _jx(t)) for op, t in fs)
    for y, fs in Y.faces.items():
        if Y.dim(y) <= cutoff:
            faces[_jy(y)] = tuple(Enc(op, _jy(t)) for op, t in fs)

    for i in range(len(X.cells)):
        for j in range(len(Y.cells)):
            n = i + j + 1
            if n > cutoff:
                continue
            for x in X.nondeg_cells(i):
                for y in Y.nondeg_cells(j):
                    name = _jp(x, y)
                    layers[n].append(name)
                    fs = []
                    for t in range(n + 1):
                        if t <= i:
                            if i == 0:
                                fs.append(Enc(identity_op(n - 1), _jy(y)))
                            else:
                                beta, x2 = X.face(x, t)
                                fs.append(Enc(join_ops(beta, identity_op(j)), _jp(x2, y)))
                        else:
                            if j == 0:
                                fs.append(Enc(identity_op(n - 1), _jx(x)))
                            else:
                                gamma, y2 = Y.face(y, t - i - 1)
                                fs.append(Enc(join_ops(identity_op(i), gamma), _jp(x, y2)))
                    faces[name] = tuple(fs)

    return build_sset(layers, faces, cutoff=cutoff, stable_above=stable)


def join_map(f: SSetMap, g: SSetMap, J: FinSSet, K: FinSSet) -> SSetMap:
    """The induced map J = X⋆Y → X′⋆Y′ = K of joins."""
    images: dict[str, Enc] = {}
    for x, e in f.images.items():
        if _jx(x) in J.dims:
            images[_jx(x)] = Enc(e.op, _jx(e.tgt))
    for y, e in g.images.items():
        if _jy(y) in J.dims:
            images[_jy(y)] = Enc(e.op, _jy(e.tgt))
    for k, layer in enumerate(J.cells):
        for name in layer:
            if name in images:
                continue
            x, y = name.split("*")
            a, b = f.images[x], g.images[y]
            images[name] = Enc(join_ops(a.op, b.op), _jp(a.tgt, b.tgt))
    return SSetMap(J, K, images)


def join_inclusions(X: FinSSet, Y: FinSSet, J: FinSSet) -> tuple[SSetMap, SSetMap]:
    inl = SSetMap(
        X, J,
        {x: Enc(identity_op(k), _jx(x)) for k, layer in enumerate(X.cells) for x in layer},
    )
    inr = SSetMap(
        Y, J,
        {y: Enc(identity_op(k), _jy(y)) for k, layer in enumerate(Y.cells) for y in layer},
    )
    return inl, inr


def cone(X: FinSSet) -> tuple[FinSSet, str]:
    """X ⋆ Δ⁰ and the identifier of the cone vertex."""
    J = join(X, shapes.point())
    return J, _jy("0")


# -- map-valued levels ------------------------------------------------------


class _MapLevels:
    """Shared machinery for simplicial sets whose n-simplices are maps.

    Subclasses provide the domain object for each level and the
    precomposition map induced by an operator.
    """

    def __init__(self, Y: FinSSet, budget: int):
        self.Y = Y
        self.budget = budget
        self.registry: dict[tuple, SSetMap] = {}
        self.counters: dict[int, int] = {}
        self.names: dict[tuple, str] = {}

    def remember(self, n: int, h: SSetMap) -> tuple:
        key = (n, h.key())
        self.registry.setdefault(key, h)
        return key

    def domain_at(self, n: int) -> FinSSet:
        raise NotImplementedError

    def precompose(self, op: SimplicialOperator) -> SSetMap:
        raise NotImplementedError

    def level_maps(self, n: int) -> list[SSetMap]:
        raise NotImplementedError

    def act(self, e: tuple, op: SimplicialOperator) -> tuple:
        h = self.registry[e]
        return self.remember(op.source_dim, compose_maps(h, self.precompose(op)))

    def id_of(self, e: tuple, n: int) -> str:
        idx = self.counters.get(n, 0)
        self.counters[n] = idx + 1
        name = f"{self.prefix}{n}.{idx}"
        self.names[e] = name
        return name

    def build(self):
        levels = [
            [self.remember(n, h) for h in self.level_maps(n)]
            for n in range(self.budget + 1)
        ]
        res = Levelwise(levels, self.act, self.id_of).build()
        return res


@dataclass
class MapSpaceResult:
    sset: FinSSet
    maps: dict[str, SSetMap]
    machine: "_MapLevels"

    def simplex_map(self, enc: Enc) -> SSetMap:
        """The underlying map of an encoded simplex of the space."""
        h = self.maps[enc.tgt]
        if enc.op.is_identity:
            return h
        return compose_maps(h, self.machine.precompose(enc.op))


class _SliceLevels(_MapLevels):
    prefix = "s"

    def __init__(self, Y: FinSSet, f: SSetMap, budget: int):
        super().__init__(Y, budget)
        self.f = f
        self.X = f.domain
        if self.X.stable_above is None:
            raise InputError("slices need a fully determined slicing object")
        self.joins: dict[int, FinSSet] = {}
        self.partial: dict[int, dict[str, Enc]] = {}

    def domain_at(self, n: int) -> FinSSet:
        if n not in self.joins:
            J = join(shapes.simplex(n), self.X)
            self.joins[n] = J
            self.partial[n] = {
                _jy(x): self.f.images[x]
                for x in self.X.all_cells()
            }
        return self.joins[n]

    def precompose(self, op: SimplicialOperator) -> SSetMap:
        dom = self.domain_at(op.source_dim)
        cod = self.domain_at(op.target_dim)
        return join_map(
            shapes.operator_as_map(op), identity_map(self.X), dom, cod
        )

    def level_maps(self, n: int) -> list[SSetMap]:
        J = self.domain_at(n)
        self.Y.require_level(max(J.top_dim, 0))
        return enumerate_maps(J, self.Y, partial=dict(self.partial[n]))


def slice_over(Y: FinSSet, f: SSetMap, budget: int = 3) -> MapSpaceResult:
    """The slice of Y by f: X → Y; n-simplices are maps Δⁿ⋆X → Y under f."""
    if f.codomain.cells != Y.cells:
        raise InputError("slice map must land in the sliced object")
    machine = _SliceLevels(Y, f, budget)
    res = machine.build()
    maps = {name: machine.registry[e] for e, name in machine.names.items()}
    return MapSpaceResult(
        res.sset, {n: m for n, m in maps.items() if n in res.sset.dims}, machine
    )


def slice_projection(S: MapSpaceResult) -> SSetMap:
    """Evaluation at the simplex factor: the projection slice → Y."""
    machine: _SliceLevels = S.machine
    images = {}
    for k, layer in enumerate(S.sset.cells):
        top = shapes.vertex_name(tuple(range(k + 1)))
        for name in layer:
            images[name] = S.maps[name].images[_jx(top)]
    return SSetMap(S.sset, machine.Y, images)


class _MappingLevels(_MapLevels):
    prefix = "h"

    def __init__(self, X: FinSSet, Y: FinSSet, budget: int):
        super().__init__(Y, budget)
        if X.stable_above is None:
            raise InputError("mapping spaces need a fully determined source")
        self.X = X
        self.products: dict[int, SpanResult] = {}

    def product_at(self, n: int) -> SpanResult:
        if n not in self.products:
            self.products[n] = product(self.X, shapes.simplex(n))
        return self.products[n]

    def domain_at(self, n: int) -> FinSSet:
        return self.product_at(n).sset

    def precompose(self, op: SimplicialOperator) -> SSetMap:
        P = self.product_at(op.source_dim)
        Q = self.product_at(op.target_dim)
        return product_map(P, Q, identity_map(self.X), shapes.operator_as_map(op))

    def level_maps(self, n: int) -> list[SSetMap]:
        return enumerate_maps(self.domain_at(n), self.Y)


def mapping_space(X: FinSSet, Y: FinSSet, budget: int = 3) -> MapSpaceResult:
    """hom(X, Y) with level n the set of maps X×Δⁿ → Y, up to the budget."""
    machine = _MappingLevels(X, Y, budget)
    res = machine.build()
    maps = {name: machine.registry[e] for e, name in machine.names.items()}
    return MapSpaceResult(
        res.sset, {n: m for n, m in maps.items() if n in res.sset.dims}, machine
    )


def vertex_as_map(S: MapSpaceResult, name: str) -> SSetMap:
    """Recover the plain map X → Y carried by a vertex of hom(X, Y)."""
    machine: _MappingLevels = S.machine
    h = S.maps[name]
    P = machine.product_at(0)
    X = machine.X
    images = {}
    for k, layer in enumerate(X.cells):
        collapse = SimplicialOperator(k, 0, (0,) * (k + 1))
        for x in layer:
            pair = P.encode_pair(nondeg(x, k), Enc(collapse, "0"))
            images[x] = h.apply(pair)
    return SSetMap(X, machine.Y, images)


def map_as_vertex(S: MapSpaceResult, g: SSetMap) -> Enc:
    """The vertex of hom(X, Y) carrying a given map X → Y."""
    machine: _MappingLevels = S.machine
    P = machine.product_at(0)
    images = {}
    for p in P.sset.all_cells():
        a, _ = P.components(nondeg(p, P.sset.dim(p)))
        images[p] = g.apply(a)
    h = SSetMap(P.sset, machine.Y, images)
    key = machine.remember(0, h)
    name = machine.names.get(key)
    if name is None:
        raise InputError("the given map is not a vertex of this mapping space")
    return nondeg(name, 0)