"""Standard shapes: simplices, boundaries, horns, spines.

Cells of Δⁿ are named by their vertex tuples joined with dots, so the
edge from 0 to 2 inside any simplex is ``"0.2"``.  Boundaries, horns and
spines reuse these identifiers, which makes their inclusions into Δⁿ
literal identity assignments.
"""

from __future__ import annotations

import itertools

from ..errors import InputError
from ..ops import SimplicialOperator, ez_factor, identity_op
from .core import Enc, FinSSet, SSetMap, build_sset, empty_sset, nondeg


def vertex_name(verts: tuple[int, ...]) -> str:
    return ".".join(str(v) for v in verts)


def simplex(n: int) -> FinSSet:
    if n < 0:
        raise InputError("simplex dimension must be nonnegative")
    layers = []
    faces = {}
    for k in range(n + 1):
        layer = []
        for verts in itertools.combinations(range(n + 1), k + 1):
            name = vertex_name(verts)
            layer.append(name)
            if k >= 1:
                faces[name] = tuple(
                    Enc(identity_op(k - 1), vertex_name(verts[:i] + verts[i + 1 :]))
                    for i in range(k + 1)
                )
        layers.append(layer)
    return build_sset(layers, faces, cutoff=n, stable_above=n)


def point() -> FinSSet:
    return simplex(0)


def _subshape(n: int, keep) -> FinSSet:
    full = simplex(n)
    layers = [
        [x for x in layer if keep(tuple(int(v) for v in x.split(".")))]
        for layer in full.cells
    ]
    kept = {x for layer in layers for x in layer}
    faces = {x: fs for x, fs in full.faces.items() if x in kept}
    top = max((k for k, layer in enumerate(layers) if layer), default=0)
    return build_sset(layers[: top + 1], faces, cutoff=top, stable_above=top)


def boundary(n: int) -> FinSSet:
    if n < 0:
        raise InputError("boundary dimension must be nonnegative")
    if n == 0:
        return empty_sset()
    return _subshape(n, lambda verts: len(verts) <= n)


def horn(n: int, k: int) -> FinSSet:
    """Λⁿ_k: the union of the faces δⁱ for i ≠ k."""
    if not 0 <= k <= n or n < 1:
        raise InputError(f"horn index ({n},{k}) out of range")
    universe = set(range(n + 1))

    def keep(verts):
        missing = universe - set(verts)
        return bool(missing - {k})

    return _subshape(n, keep)


def spine(n: int) -> FinSSet:
    if n < 0:
        raise InputError("spine dimension must be nonnegative")

    def keep(verts):
        return len(verts) == 1 or (len(verts) == 2 and verts[1] == verts[0] + 1)

    return _subshape(n, keep)


def make_shape(kind: str, *args: int) -> FinSSet:
    table = {
        "simplex": simplex,
        "boundary": boundary,
        "horn": horn,
        "spine": spine,
        "point": point,
        "empty": empty_sset,
    }
    if kind not in table:
        raise InputError(f"unknown shape kind {kind!r}")
    return table[kind](*args)


def inclusion(A: FinSSet, X: FinSSet) -> SSetMap:
    """Identity-on-identifiers inclusion of a subpresentation."""
    images = {}
    for k, layer in enumerate(A.cells):
        for x in layer:
            if x not in X.dims or X.dim(x) != k:
                raise InputError(f"{x!r} is not a {k}-cell of the ambient object")
            images[x] = nondeg(x, k)
    return SSetMap(A, X, images)


def subcomplex(X: FinSSet, generators) -> FinSSet:
    """The smallest subpresentation containing the given nondegenerate cells."""
    kept: set[str] = set()
    stack = list(generators)
    while stack:
        x = stack.pop()
        if x in kept:
            continue
        kept.add(x)
        for enc in X.faces.get(x, ()):
            stack.append(enc.tgt)
    layers = [[x for x in layer if x in kept] for layer in X.cells]
    faces = {x: X.faces[x] for x in kept if x in X.faces}
    top = max((k for k, layer in enumerate(layers) if layer), default=0)
    return build_sset(layers[: top + 1], faces, cutoff=top, stable_above=top)


def simplex_vertices(name: str) -> tuple[int, ...]:
    return tuple(int(v) for v in name.split("."))


def as_map(X: FinSSet, enc: Enc) -> SSetMap:
    """View an encoded n-simplex of X as a map Δⁿ → X."""
    n = enc.dim
    dom = simplex(n)
    images = {}
    for k, layer in enumerate(dom.cells):
        for name in layer:
            verts = simplex_vertices(name)
            images[name] = X.act(enc, SimplicialOperator(k, n, verts))
    return SSetMap(dom, X, images)


def operator_as_map(alpha: SimplicialOperator) -> SSetMap:
    """The map Δᵐ → Δⁿ induced by a monotone map [m] → [n]."""
    dom = simplex(alpha.source_dim)
    cod = simplex(alpha.target_dim)
    images = {}
    for k, layer in enumerate(dom.cells):
        for name in layer:
            verts = simplex_vertices(name)
            comp = SimplicialOperator(k, alpha.target_dim, tuple(alpha(v) for v in verts))
            surj, inj = ez_factor(comp)
            images[name] = Enc(surj, vertex_name(inj.values))
    return SSetMap(dom, cod, images)
