"""Finitely presented, dimension-truncated simplicial sets.

A ``FinSSet`` stores only nondegenerate simplices.  Every other simplex
is an encoded simplex: a pair ``(alpha, x)`` of a surjective operator
and a nondegenerate simplex identifier, denoting ``x . alpha``.  The
unique surjection-injection factorization of operators makes this
encoding canonical, so equality of arbitrary simplices is equality of
pairs.  Faces of nondegenerate simplices are stored in encoded form and
every other operator action is derived from them.

Objects are truncated at ``cutoff``.  When ``stable_above`` is set there
are no nondegenerate simplices above that dimension, so every level is
determined and reads above the cutoff are allowed; otherwise reading
above the cutoff raises ``TruncationError``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, NamedTuple

from ..errors import InputError, TruncationError
from ..ops import (
    SimplicialOperator,
    compose,
    degeneracy_op,
    enumerate_surjections,
    ez_factor,
    face_op,
    identity_op,
    vertex_op,
)


class Enc(NamedTuple):
    """An encoded simplex ``x . op`` with ``op`` surjective."""

    op: SimplicialOperator
    tgt: str

    @property
    def dim(self) -> int:
        return self.op.source_dim

    @property
    def is_nondegenerate(self) -> bool:
        return self.op.is_identity

    def key(self) -> tuple:
        return (self.tgt, self.op.values)


def nondeg(x: str, dim: int) -> Enc:
    return Enc(identity_op(dim), x)


@dataclass(frozen=True)
class FinSSet:
    cutoff: int
    cells: tuple[tuple[str, ...], ...]
    faces: dict[str, tuple[Enc, ...]]
    stable_above: int | None = None
    dims: dict[str, int] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if not self.dims:
            object.__setattr__(
                self,
                "dims",
                {x: k for k, layer in enumerate(self.cells) for x in layer},
            )

    # -- basic access -------------------------------------------------

    def dim(self, x: str) -> int:
        return self.dims[x]

    def nondeg_cells(self, k: int) -> tuple[str, ...]:
        if k < 0 or k >= len(self.cells):
            return ()
        return self.cells[k]

    def all_cells(self) -> list[str]:
        return [x for layer in self.cells for x in layer]

    def counts(self) -> tuple[int, ...]:
        out = tuple(len(layer) for layer in self.cells)
        while out and out[-1] == 0:
            out = out[:-1]
        return out

    @property
    def top_dim(self) -> int:
        for k in range(len(self.cells) - 1, -1, -1):
            if self.cells[k]:
                return k
        return -1

    def face(self, x: str, i: int) -> Enc:
        return self.faces[x][i]

    def has_level(self, n: int) -> bool:
        return n <= self.cutoff or self.stable_above is not None

    def require_level(self, n: int):
        if not self.has_level(n):
            raise TruncationError(
                f"level {n} requested but the object is only certified to "
                f"dimension {self.cutoff}",
                needed=n,
            )

    def level(self, n: int) -> list[Enc]:
        """All encoded n-simplices, sorted by key."""
        self.require_level(n)
        top = min(n, self.top_dim)
        out = []
        for j in range(top + 1):
            for x in self.nondeg_cells(j):
                if j == n:
                    out.append(nondeg(x, n))
                else:
                    for s in enumerate_surjections(n, j):
                        out.append(Enc(s, x))
        out.sort(key=Enc.key)
        return out

    # -- operator action ----------------------------------------------

    def act(self, enc: Enc, op: SimplicialOperator) -> Enc:
        """The simplex ``enc . op``, renormalized to encoded form."""
        alpha, x = enc
        if alpha.source_dim != op.target_dim:
            raise InputError(f"operator {op} does not apply to a {alpha.source_dim}-simplex")
        tau = compose(alpha, op)
        while True:
            surj, inj = ez_factor(tau)
            if inj.is_identity:
                return Enc(surj, x)
            m = inj.missing_values()[-1]
            beta, x = self.face(x, m)
            inj2 = SimplicialOperator(
                inj.source_dim,
                inj.target_dim - 1,
                tuple(v if v < m else v - 1 for v in inj.values),
            )
            tau = compose(beta, compose(inj2, surj))

    def enc_face(self, enc: Enc, i: int) -> Enc:
        return self.act(enc, face_op(i, enc.dim))

    def vertex(self, enc: Enc, i: int) -> str:
        """Identifier of the i-th vertex."""
        return self.act(enc, vertex_op(i, enc.dim)).tgt

    def vertices(self, enc: Enc) -> tuple[str, ...]:
        return tuple(self.vertex(enc, i) for i in range(enc.dim + 1))

    # -- validation ----------------------------------------------------

    def validate(self) -> "ValidationReport":
        problems = []
        seen: set[str] = set()
        for k, layer in enumerate(self.cells):
            for x in layer:
                if x in seen:
                    problems.append(f"duplicate identifier {x!r}")
                seen.add(x)
        if self.stable_above is not None:
            if self.stable_above > self.cutoff:
                problems.append(
                    f"stable_above {self.stable_above} exceeds cutoff {self.cutoff}"
                )
            for k in range(self.stable_above + 1, len(self.cells)):
                for x in self.cells[k]:
                    problems.append(
                        f"nondegenerate {k}-simplex {x!r} above stable dimension"
                    )
        if len(self.cells) > self.cutoff + 1:
            problems.append("cell table extends past the cutoff")
        for k, layer in enumerate(self.cells):
            for x in layer:
                if k == 0:
                    if x in self.faces:
                        problems.append(f"vertex {x!r} has a face table")
                    continue
                fs = self.faces.get(x)
                if fs is None or len(fs) != k + 1:
                    problems.append(f"{k}-simplex {x!r} needs {k + 1} faces")
                    continue
                for i, (op, tgt) in enumerate(fs):
                    if not op.is_surjective:
                        problems.append(f"face {i} of {x!r} has a non-surjective operator")
                    if op.source_dim != k - 1:
                        problems.append(f"face {i} of {x!r} has the wrong dimension")
                    if tgt not in self.dims:
                        problems.append(f"face {i} of {x!r} points at unknown {tgt!r}")
                    elif self.dims[tgt] != op.target_dim:
                        problems.append(
                            f"face {i} of {x!r}: operator target [{op.target_dim}] "
                            f"does not match dim {self.dims[tgt]} of {tgt!r}"
                        )
        if problems:
            return ValidationReport(tuple(problems))
        for k, layer in enumerate(self.cells):
            if k < 2:
                continue
            for x in layer:
                for j in range(1, k + 1):
                    for i in range(j):
                        left = self.act(self.face(x, j), face_op(i, k - 1))
                        right = self.act(self.face(x, i), face_op(j - 1, k - 1))
                        if left != right:
                            problems.append(
                                f"simplicial identity d{i} d{j} = d{j - 1} d{i} "
                                f"fails on {x!r}: {left} vs {right}"
                            )
        return ValidationReport(tuple(problems))


@dataclass(frozen=True)
class ValidationReport:
    problems: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return not self.problems

    def __str__(self):
        if self.passed:
            return "valid"
        return "\n".join(self.problems)


def build_sset(
    layers: Iterable[Iterable[str]],
    faces: dict[str, Iterable[Enc]],
    cutoff: int | None = None,
    stable_above: int | None = None,
) -> FinSSet:
    """Normalize raw presentation data into a ``FinSSet``."""
    cells = tuple(tuple(sorted(layer)) for layer in layers)
    while cells and not cells[-1]:
        cells = cells[:-1]
    top = len(cells) - 1
    if cutoff is None:
        cutoff = max(top, 0)
    X = FinSSet(
        cutoff=cutoff,
        cells=cells if cells else ((),),
        faces={x: tuple(fs) for x, fs in faces.items()},
        stable_above=stable_above,
    )
    return X


def empty_sset() -> FinSSet:
    return FinSSet(cutoff=0, cells=((),), faces={}, stable_above=0)


def truncate(X: FinSSet, n: int) -> FinSSet:
    """Restrict the presentation to dimensions at most n."""
    if n < 0:
        raise InputError("cannot truncate below dimension 0")
    layers = list(X.cells[: n + 1])
    faces = {x: X.faces[x] for layer in layers for x in layer if x in X.faces}
    sa = X.stable_above if X.stable_above is not None and X.stable_above <= n else None
    return build_sset(layers, faces, cutoff=n, stable_above=sa)


def readable_depth(X: FinSSet) -> int | None:
    """The largest readable level, or None when every level is determined."""
    return None if X.stable_above is not None else X.cutoff


# -- maps ---------------------------------------------------------------


@dataclass(frozen=True)
class SSetMap:
    domain: FinSSet
    codomain: FinSSet
    images: dict[str, Enc]

    def apply(self, enc: Enc) -> Enc:
        img = self.images[enc.tgt]
        return self.codomain.act(img, enc.op)

    def __call__(self, enc: Enc) -> Enc:
        return self.apply(enc)

    def validate(self) -> ValidationReport:
        problems = []
        for k, layer in enumerate(self.domain.cells):
            for x in layer:
                img = self.images.get(x)
                if img is None:
                    problems.append(f"no image for {x!r}")
                    continue
                if img.dim != k:
                    problems.append(f"image of {x!r} has dimension {img.dim}, not {k}")
                    continue
                if img.tgt not in self.codomain.dims:
                    problems.append(f"image of {x!r} hits unknown cell {img.tgt!r}")
                    continue
                if k >= 1:
                    for i in range(k + 1):
                        lhs = self.apply(self.domain.face(x, i))
                        rhs = self.codomain.act(img, face_op(i, k))
                        if lhs != rhs:
                            problems.append(
                                f"map does not commute with d{i} on {x!r}: {lhs} vs {rhs}"
                            )
        return ValidationReport(tuple(problems))

    def is_mono(self) -> bool:
        seen = set()
        for x, img in self.images.items():
            if not img.is_nondegenerate:
                return False
            if img.tgt in seen:
                return False
            seen.add(img.tgt)
        return True

    def key(self) -> tuple:
        return tuple(sorted((x, e.key()) for x, e in self.images.items()))


def identity_map(X: FinSSet) -> SSetMap:
    return SSetMap(X, X, {x: nondeg(x, k) for k, layer in enumerate(X.cells) for x in layer})


def compose_maps(g: SSetMap, f: SSetMap) -> SSetMap:
    return SSetMap(f.domain, g.codomain, {x: g.apply(e) for x, e in f.images.items()})


def maps_equal(f: SSetMap, g: SSetMap) -> bool:
    return f.images == g.images


def constant_map(X: FinSSet, Y: FinSSet, vertex_id: str) -> SSetMap:
    images = {}
    for k, layer in enumerate(X.cells):
        collapse = SimplicialOperator(k, 0, (0,) * (k + 1))
        for x in layer:
            images[x] = Enc(collapse, vertex_id)
    return SSetMap(X, Y, images)


# -- levelwise construction ---------------------------------------------


@dataclass
class LevelwiseResult:
    sset: FinSSet
    elements: dict[str, Hashable]
    encode: Callable[[Hashable, int], Enc]

    def decode(self, enc: Enc) -> Hashable:
        return self.elements[enc.tgt]


class Levelwise:
    """A simplicial set given by abstract level sets and operator action.

    ``levels[n]`` lists hashable elements; ``act(e, op)`` applies an
    operator whose target dimension is the level of ``e``.  The builder
    extracts nondegenerate representatives and encoded faces.
    """

    def __init__(
        self,
        levels: list[list[Hashable]],
        act: Callable[[Hashable, SimplicialOperator], Hashable],
        id_of: Callable[[Hashable, int], str],
        stable_above: int | None = None,
    ):
        self.levels = levels
        self.act = act
        self.id_of = id_of
        self.stable_above = stable_above

    def build(self) -> LevelwiseResult:
        n_max = len(self.levels) - 1
        nondeg_ids: dict[tuple[int, Hashable], str] = {}
        layers: list[list[str]] = [[] for _ in range(n_max + 1)]
        elements: dict[str, Hashable] = {}
        ez_cache: dict[tuple[int, Hashable], tuple[SimplicialOperator, Hashable]] = {}

        def degeneracy_index(e, n):
            for i in range(n):
                d = self.act(e, face_op(i, n))
                if self.act(d, degeneracy_op(i, n - 1)) == e:
                    return i
            return None

        def ez_elem(e, n):
            key = (n, e)
            hit = ez_cache.get(key)
            if hit is not None:
                return hit
            i = degeneracy_index(e, n) if n > 0 else None
            if i is None:
                res = (identity_op(n), e)
            else:
                tau, x = ez_elem(self.act(e, face_op(i, n)), n - 1)
                res = (compose(tau, degeneracy_op(i, n - 1)), x)
            ez_cache[key] = res
            return res

        for n, layer in enumerate(self.levels):
            for e in layer:
                if n == 0 or degeneracy_index(e, n) is None:
                    ident = self.id_of(e, n)
                    if ident in elements:
                        raise InputError(f"identifier collision {ident!r}")
                    nondeg_ids[(n, e)] = ident
                    elements[ident] = e
                    layers[n].append(ident)

        faces: dict[str, tuple[Enc, ...]] = {}
        for (n, e), ident in nondeg_ids.items():
            if n == 0:
                continue
            fs = []
            for i in range(n + 1):
                tau, x = ez_elem(self.act(e, face_op(i, n)), n - 1)
                fs.append(Enc(tau, nondeg_ids[(tau.target_dim, x)]))
            faces[ident] = tuple(fs)

        X = build_sset(layers, faces, cutoff=n_max, stable_above=self.stable_above)

        def encode(e, n) -> Enc:
            tau, x = ez_elem(e, n)
            return Enc(tau, nondeg_ids[(tau.target_dim, x)])

        return LevelwiseResult(X, elements, encode)


# -- isomorphism search ---------------------------------------------------


def sset_isomorphism(X: FinSSet, Y: FinSSet) -> dict[str, str] | None:
    """A dimension- and face-preserving bijection of identifiers, if any."""
    if X.counts() != Y.counts():
        return None
    cells = [(k, x) for k, layer in enumerate(X.cells) for x in layer]
    cells.sort()
    assignment: dict[str, str] = {}
    used: set[str] = set()

    def compatible(x, y, k):
        if k == 0:
            return True
        for i in range(k + 1):
            op, tgt = X.face(x, i)
            yop, ytgt = Y.face(y, i)
            if op != yop or assignment[tgt] != ytgt:
                return False
        return True

    def solve(idx: int) -> bool:
        if idx == len(cells):
            return True
        k, x = cells[idx]
        for y in Y.nondeg_cells(k):
            if y in used or not compatible(x, y, k):
                continue
            assignment[x] = y
            used.add(y)
            if solve(idx + 1):
                return True
            del assignment[x]
            used.remove(y)
        return False

    return dict(assignment) if solve(0) else None


# -- opposites -------------------------------------------------------------


def op_operator(alpha: SimplicialOperator) -> SimplicialOperator:
    m, n = alpha.source_dim, alpha.target_dim
    return SimplicialOperator(m, n, tuple(n - alpha.values[m - i] for i in range(m + 1)))


def opposite(X: FinSSet) -> FinSSet:
    """The opposite simplicial set; an involution on presentations."""
    faces = {}
    for x, fs in X.faces.items():
        k = X.dim(x)
        faces[x] = tuple(
            Enc(op_operator(fs[k - i][0]), fs[k - i][1]) for i in range(k + 1)
        )
    return FinSSet(X.cutoff, X.cells, faces, X.stable_above)


def opposite_map(f: SSetMap, Xop: FinSSet, Yop: FinSSet) -> SSetMap:
    return SSetMap(Xop, Yop, {x: Enc(op_operator(e.op), e.tgt) for x, e in f.images.items()})
