"""Finite categories, nerves, and homotopy categories.

The nerve of a finite category has identity-free composable strings as
its nondegenerate simplices.  When the non-identity arrows form no
composable loop this stops at the longest such string, and the nerve is
fully determined; otherwise a cutoff must be supplied.

The homotopy category of a certified quasi-category quotients edges by
the relation generated by 2-simplices with a degenerate outer face, and
composes via inner-horn fillers, verifying the result is independent of
every available filler.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ..errors import InputError
from ..ops import SimplicialOperator, degeneracy_op, identity_op
from .core import Enc, FinSSet, SSetMap, build_sset, nondeg
from .limits import _UnionFind, _enc_label, terminal_map
from . import shapes


@dataclass(frozen=True)
class FinCat:
    objects: tuple[str, ...]
    arrows: dict[str, tuple[str, str]]
    comp: dict[tuple[str, str], str]
    identities: dict[str, str]

    def src(self, a: str) -> str:
        return self.arrows[a][0]

    def tgt(self, a: str) -> str:
        return self.arrows[a][1]

    def is_identity(self, a: str) -> bool:
        return a in self.identities.values()

    def compose(self, g: str, f: str) -> str:
        if self.tgt(f) != self.src(g):
            raise InputError(f"arrows {g!r} after {f!r} are not composable")
        if self.is_identity(f):
            return g
        if self.is_identity(g):
            return f
        return self.comp[(g, f)]

    def hom(self, a: str, b: str) -> list[str]:
        return sorted(x for x, (s, t) in self.arrows.items() if s == a and t == b)

    def non_identity_arrows(self) -> list[str]:
        return sorted(a for a in self.arrows if not self.is_identity(a))

    def validate(self) -> list[str]:
        problems = []
        for o in self.objects:
            i = self.identities.get(o)
            if i is None or self.arrows.get(i) != (o, o):
                problems.append(f"object {o!r} lacks a proper identity")
        if set(self.objects) & set(self.arrows):
            problems.append("object and arrow identifiers overlap")
        arrs = list(self.arrows)
        for g, f in itertools.product(arrs, arrs):
            if self.tgt(f) != self.src(g):
                continue
            try:
                gf = self.compose(g, f)
            except KeyError:
                problems.append(f"missing composite ({g!r}, {f!r})")
                continue
            if self.arrows[gf] != (self.src(f), self.tgt(g)):
                problems.append(f"composite ({g!r}, {f!r}) has wrong endpoints")
        for h, g, f in itertools.product(arrs, arrs, arrs):
            if self.tgt(f) != self.src(g) or self.tgt(g) != self.src(h):
                continue
            if self.compose(h, self.compose(g, f)) != self.compose(self.compose(h, g), f):
                problems.append(f"associativity fails on ({h!r}, {g!r}, {f!r})")
        return problems

    def isomorphism_pairs(self) -> dict[str, str]:
        """arrow → two-sided inverse, for every invertible arrow."""
        out = {}
        for f, (a, b) in self.arrows.items():
            for g in self.hom(b, a):
                if (
                    self.compose(g, f) == self.identities[a]
                    and self.compose(f, g) == self.identities[b]
                ):
                    out[f] = g
                    break
        return out


def poset_category(n: int) -> FinCat:
    """The ordinal [n] as a category; arrow i→j is named "i.j"."""
    objects = tuple(f"o{i}" for i in range(n + 1))
    arrows = {f"{i}.{j}": (f"o{i}", f"o{j}") for i in range(n + 1) for j in range(i, n + 1)}
    comp = {}
    for i in range(n + 1):
        for j in range(i, n + 1):
            for k in range(j, n + 1):
                comp[(f"{j}.{k}", f"{i}.{j}")] = f"{i}.{k}"
    identities = {f"o{i}": f"{i}.{i}" for i in range(n + 1)}
    return FinCat(objects, arrows, comp, identities)


def walking_isomorphism() -> FinCat:
    objects = ("a", "b")
    arrows = {"ia": ("a", "a"), "ib": ("b", "b"), "f": ("a", "b"), "g": ("b", "a")}
    comp = {
        ("g", "f"): "ia",
        ("f", "g"): "ib",
        ("ia", "ia"): "ia",
        ("ib", "ib"): "ib",
        ("f", "ia"): "f",
        ("ib", "f"): "f",
        ("g", "ib"): "g",
        ("ia", "g"): "g",
    }
    return FinCat(objects, arrows, comp, {"a": "ia", "b": "ib"})


def discrete_category(names) -> FinCat:
    objects = tuple(names)
    arrows = {f"id_{o}": (o, o) for o in objects}
    comp = {(f"id_{o}", f"id_{o}"): f"id_{o}" for o in objects}
    return FinCat(objects, arrows, comp, {o: f"id_{o}" for o in objects})


def _longest_chain(C: FinCat) -> int | None:
    """Longest identity-free composable string, or None if loops exist."""
    arrows = C.non_identity_arrows()
    best: dict[str, int] = {}
    state: dict[str, int] = {}

    def depth(a: str) -> int | None:
        if a in best:
            return best[a]
        if state.get(a) == 1:
            return None
        state[a] = 1
        longest = 1
        for b in arrows:
            if C.src(b) == C.tgt(a):
                d = depth(b)
                if d is None:
                    return None
                longest = max(longest, 1 + d)
        state[a] = 2
        best[a] = longest
        return longest

    total = 0
    for a in arrows:
        d = depth(a)
        if d is None:
            return None
        total = max(total, d)
    return total


def string_name(arrows: tuple[str, ...], src_obj: str) -> str:
    if not arrows:
        return src_obj
    return "|".join(arrows)


def nerve(C: FinCat, cutoff: int | None = None) -> FinSSet:
    chain = _longest_chain(C)
    if chain is None and cutoff is None:
        raise InputError(
            "this category has composable loops; its nerve needs an explicit cutoff"
        )
    if chain is not None:
        stable = chain
        cutoff = max(chain, cutoff if cutoff is not None else 0)
    else:
        stable = None

    layers: list[list[str]] = [list(C.objects)]
    strings: list[list[tuple[str, ...]]] = [[()]]
    arrows = C.non_identity_arrows()
    prev = [(a,) for a in arrows]
    k = 1
    while prev and k <= cutoff:
        layers.append([string_name(s, "") for s in prev])
        strings.append(prev)
        prev = [
            s + (b,) for s in prev for b in arrows if C.src(b) == C.tgt(s[-1])
        ]
        k += 1

    faces = {}
    for k in range(1, len(layers)):
        for s in strings[k]:
            name = string_name(s, "")
            fs = []
            for i in range(k + 1):
                if i == 0:
                    fs.append(Enc(identity_op(k - 1), string_name(s[1:], C.tgt(s[0]))))
                elif i == k:
                    fs.append(Enc(identity_op(k - 1), string_name(s[:-1], C.src(s[-1]))))
                else:
                    h = C.compose(s[i], s[i - 1])
                    if not C.is_identity(h):
                        replaced = s[: i - 1] + (h,) + s[i + 1 :]
                        fs.append(Enc(identity_op(k - 1), string_name(replaced, "")))
                    else:
                        shorter = s[: i - 1] + s[i + 1 :]
                        fs.append(
                            Enc(
                                degeneracy_op(i - 1, k - 2),
                                string_name(shorter, C.src(s[i - 1])),
                            )
                        )
            faces[name] = tuple(fs)

    return build_sset(layers, faces, cutoff=cutoff, stable_above=stable)


@dataclass(frozen=True)
class FinFunctor:
    dom: FinCat
    cod: FinCat
    obj_map: dict[str, str]
    arr_map: dict[str, str]

    def on_arrow(self, a: str) -> str:
        return self.arr_map[a]

    def validate(self) -> list[str]:
        problems = []
        for a, (s, t) in self.dom.arrows.items():
            fa = self.arr_map.get(a)
            if fa is None:
                problems.append(f"no image for arrow {a!r}")
                continue
            if self.cod.arrows[fa] != (self.obj_map[s], self.obj_map[t]):
                problems.append(f"arrow {a!r} image has wrong endpoints")
        for o, i in self.dom.identities.items():
            if self.arr_map[i] != self.cod.identities[self.obj_map[o]]:
                problems.append(f"identity of {o!r} not preserved")
        for g, f in itertools.product(self.dom.arrows, self.dom.arrows):
            if self.dom.tgt(f) != self.dom.src(g):
                continue
            lhs = self.arr_map[self.dom.compose(g, f)]
            rhs = self.cod.compose(self.arr_map[g], self.arr_map[f])
            if lhs != rhs:
                problems.append(f"composition not preserved on ({g!r}, {f!r})")
        return problems


def nerve_functor(F: FinFunctor, NC: FinSSet, ND: FinSSet) -> SSetMap:
    """The simplicial map of nerves induced by a functor."""
    images: dict[str, Enc] = {}
    for o in F.dom.objects:
        images[o] = nondeg(F.obj_map[o], 0)
    for k in range(1, len(NC.cells)):
        for name in NC.nondeg_cells(k):
            s = tuple(name.split("|"))
            imgs = [F.arr_map[a] for a in s]
            kept = tuple(a for a in imgs if not F.cod.is_identity(a))
            vals = [0]
            for a in imgs:
                vals.append(vals[-1] + (0 if F.cod.is_identity(a) else 1))
            surj = SimplicialOperator(k, len(kept), tuple(vals))
            tgt = string_name(kept, F.obj_map[F.dom.src(s[0])])
            images[name] = Enc(surj, tgt)
    return SSetMap(NC, ND, images)


# -- homotopy category ------------------------------------------------------


@dataclass
class HoResult:
    cat: FinCat
    _cls: dict[tuple, str]
    _X: FinSSet = field(repr=False, default=None)

    def arrow_class(self, enc: Enc) -> str:
        return self._cls[enc.key()]

    def invertible(self, enc: Enc) -> bool:
        a = self.arrow_class(enc)
        return a in self.cat.isomorphism_pairs()


def quasi_certificate(X: FinSSet, budget: int = 3):
    from .lifting import lifting_certify

    pt = shapes.point()
    return lifting_certify(terminal_map(X, pt), "inner", budget)


def homotopy_category(X: FinSSet, certificate=None) -> HoResult:
    """The category of vertices and edge classes of a quasi-category.

    Requires inner-horn certification to dimension 3 (computed here when
    no certificate is supplied) so that composites exist and the rest of
    the construction is sound.
    """
    if certificate is None:
        certificate = quasi_certificate(X, 3)
    if not certificate.certified:
        raise InputError(
            f"homotopy category needs an inner-horn certificate; got {certificate.summary()}"
        )

    edges = X.level(1)
    uf = _UnionFind()
    for e in edges:
        uf.find(e.key())
    for t in X.nondeg_cells(2):
        e0, e1, e2 = (X.face(t, i) for i in range(3))
        if not e0.op.is_identity:
            uf.union(e1.key(), e2.key())
        if not e2.op.is_identity:
            uf.union(e1.key(), e0.key())

    # transitive closure through shared classes is delivered by union-find;
    # canonical representative = least key
    members: dict[tuple, list[Enc]] = {}
    for e in edges:
        members.setdefault(uf.find(e.key()), []).append(e)
    cls_of = {e.key(): uf.find(e.key()) for e in edges}

    def endpoint(e: Enc, i: int) -> str:
        return X.vertex(e, i)

    for rep, es in members.items():
        srcs = {endpoint(e, 0) for e in es}
        tgts = {endpoint(e, 1) for e in es}
        if len(srcs) != 1 or len(tgts) != 1:
            raise InputError("edge homotopy class with inconsistent endpoints")

    arrow_name = {rep: _enc_label(min(es, key=Enc.key)) for rep, es in members.items()}
    objects = tuple(X.nondeg_cells(0))
    arrows = {
        arrow_name[rep]: (endpoint(es[0], 0), endpoint(es[0], 1))
        for rep, es in members.items()
    }
    identities = {}
    for v in objects:
        identities[v] = arrow_name[uf.find(Enc(degeneracy_op(0, 0), v).key())]

    # composition through inner-horn fillers, checked across all fillers
    by_outer: dict[tuple, list[Enc]] = {}
    for t in X.level(2):
        key = (X.enc_face(t, 2).key(), X.enc_face(t, 0).key())
        by_outer.setdefault(key, []).append(t)

    comp: dict[tuple[str, str], str] = {}
    for repg, gs in members.items():
        for repf, fs in members.items():
            if arrows[arrow_name[repf]][1] != arrows[arrow_name[repg]][0]:
                continue
            results = set()
            for f in fs:
                for g in gs:
                    for t in by_outer.get((f.key(), g.key()), ()):
                        results.add(uf.find(X.enc_face(t, 1).key()))
            if not results:
                raise InputError(
                    f"no composite found for {arrow_name[repg]!r} after {arrow_name[repf]!r}"
                )
            if len(results) > 1:
                raise InputError(
                    "filler choices disagree; the input is not a quasi-category"
                )
            comp[(arrow_name[repg], arrow_name[repf])] = arrow_name[results.pop()]

    cat = FinCat(objects, arrows, comp, identities)
    cls = {e.key(): arrow_name[cls_of[e.key()]] for e in edges}
    return HoResult(cat, cls, X)


# -- functor and category comparisons --------------------------------------


def cat_isomorphism(C: FinCat, D: FinCat) -> FinFunctor | None:
    if len(C.objects) != len(D.objects) or len(C.arrows) != len(D.arrows):
        return None

    def hom_profile(cat, o):
        outs = sorted(len(cat.hom(o, b)) for b in cat.objects)
        ins = sorted(len(cat.hom(b, o)) for b in cat.objects)
        return (outs, ins)

    for perm in itertools.permutations(D.objects):
        obj_map = dict(zip(C.objects, perm))
        if any(
            hom_profile(C, o) != hom_profile(D, obj_map[o]) for o in C.objects
        ):
            continue
        arr = _match_arrows(C, D, obj_map)
        if arr is not None:
            return FinFunctor(C, D, obj_map, arr)
    return None


def _match_arrows(C: FinCat, D: FinCat, obj_map) -> dict[str, str] | None:
    pairs = []
    for a in C.objects:
        for b in C.objects:
            hc = C.hom(a, b)
            hd = D.hom(obj_map[a], obj_map[b])
            if len(hc) != len(hd):
                return None
            pairs.append((hc, hd))

    assignment: dict[str, str] = {}

    def ok_so_far():
        for (g, f), gf in C.comp.items():
            if g in assignment and f in assignment and gf in assignment:
                if D.compose(assignment[g], assignment[f]) != assignment[gf]:
                    return False
        for o, i in C.identities.items():
            if i in assignment and assignment[i] != D.identities[obj_map[o]]:
                return False
        return True

    def rec(idx):
        if idx == len(pairs):
            return ok_so_far()
        hc, hd = pairs[idx]
        for perm in itertools.permutations(hd):
            for a, b in zip(hc, perm):
                assignment[a] = b
            if ok_so_far() and rec(idx + 1):
                return True
            for a in hc:
                del assignment[a]
        return False

    if rec(0):
        return dict(assignment)
    return None


def fully_faithful(F: FinFunctor) -> bool:
    for a in F.dom.objects:
        for b in F.dom.objects:
            images = [F.arr_map[f] for f in F.dom.hom(a, b)]
            target = F.cod.hom(F.obj_map[a], F.obj_map[b])
            if sorted(images) != sorted(target) or len(set(images)) != len(images):
                return False
    return True


def essentially_surjective(F: FinFunctor) -> bool:
    isos = F.cod.isomorphism_pairs()
    hit = set(F.obj_map.values())
    for d in F.cod.objects:
        if d in hit:
            continue
        if not any(
            f in isos and F.cod.tgt(f) == d and F.cod.src(f) in hit
            for f in F.cod.arrows
        ):
            return False
    return True


def is_equivalence(F: FinFunctor) -> bool:
    return fully_faithful(F) and essentially_surjective(F)
