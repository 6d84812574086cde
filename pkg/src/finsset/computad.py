"""Truncated simplicial categories and homotopy coherent realization.

A ``TruncSimpCat`` presents a simplicially enriched category through its
hom complexes up to an arrow-dimension cutoff.  A ``Computad`` is such a
category whose arrow complexes are levelwise free: every non-identity
arrow factors uniquely as a composite of degenerated atomic arrows.

The realization of a simplicial set X is assembled from beads: an
atomic r-arrow is a pair (x, T) of a nondegenerate n-simplex x and a
strict chain {0,n} = T0 < ... < Tr = [0,n] of vertex subsets.  General
arrows are necklaces, words of beads with degeneracy operators, and all
simplicial structure is computed by splitting a word at the bottom
level, restricting each segment to its top subset, and pushing forward
along the resulting degeneracies.  The face formulas for multi-bead
necklaces follow the standard convention from the necklace calculus
literature rather than being rederived here.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

from .errors import BudgetError, InputError
from .ops import (
    SimplicialOperator,
    compose,
    enumerate_surjections,
    face_op,
    identity_op,
    interval_op,
    vertex_op,
)
from .sset import (
    Enc,
    FinCat,
    FinSSet,
    Levelwise,
    SSetMap,
    build_sset,
    empty_sset,
    nondeg,
    point,
    truncate,
)
from .sset import join as sset_join

Subset = tuple[int, ...]
Chain = tuple[Subset, ...]


def subset_name(s: Subset) -> str:
    return ".".join(str(v) for v in s)


def chain_name(chain: Chain) -> str:
    return "<".join(subset_name(s) for s in chain)


def dedup_chain(levels: Chain) -> tuple[Chain, SimplicialOperator]:
    """Collapse equal consecutive levels, returning the degeneracy."""
    strict: list[Subset] = []
    values = []
    for s in levels:
        if not strict or s != strict[-1]:
            strict.append(s)
        values.append(len(strict) - 1)
    return tuple(strict), SimplicialOperator(
        len(levels) - 1, len(strict) - 1, tuple(values)
    )


def strict_chains(bottom: Subset, top: Subset, max_steps: int | None = None):
    """All strict chains bottom = C0 < ... < Cs = top in the subset order."""
    rest = tuple(sorted(set(top) - set(bottom)))
    out: list[Chain] = []

    def go(current: Subset, remaining: tuple[int, ...], acc: list[Subset]):
        if not remaining:
            out.append(tuple(acc))
            return
        if max_steps is not None and len(acc) > max_steps:
            return
        pool = list(remaining)
        for bits in range(1, 1 << len(pool)):
            add = tuple(pool[t] for t in range(len(pool)) if bits >> t & 1)
            nxt = tuple(sorted(current + add))
            left = tuple(v for v in pool if v not in add)
            acc.append(nxt)
            go(nxt, left, acc)
            acc.pop()

    go(bottom, rest, [tuple(sorted(bottom))])
    return sorted(out)


def atomic_chains(i: int, j: int) -> list[Chain]:
    """Chains with bottom {i,j}, any endpoint-containing top inside [i,j]."""
    interior = tuple(range(i + 1, j))
    out: list[Chain] = []
    for bits in range(1 << len(interior)):
        top = tuple(sorted((i, j) + tuple(
            interior[t] for t in range(len(interior)) if bits >> t & 1
        )))
        out.extend(strict_chains((i, j), top))
    return sorted(out, key=lambda c: (len(c), c))


# -- truncated simplicial categories ----------------------------------------


@dataclass(eq=False)
class TruncSimpCat:
    objects: tuple[str, ...]
    homs: dict[tuple[str, str], FinSSet]
    compose_fn: Callable[[str, str, str, Enc, Enc], Enc]
    identities: dict[str, str]
    arrow_cutoff: int

    def hom(self, a: str, b: str) -> FinSSet:
        return self.homs[(a, b)]

    def id_arrow(self, a: str, r: int) -> Enc:
        if r == 0:
            return nondeg(self.identities[a], 0)
        return Enc(SimplicialOperator(r, 0, (0,) * (r + 1)), self.identities[a])

    def is_identity_arrow(self, a: str, b: str, e: Enc) -> bool:
        return a == b and e.tgt == self.identities[a]

    def comp(self, a: str, b: str, c: str, g: Enc, f: Enc) -> Enc:
        """The composite g(b -> c) after f(a -> b), at a shared level."""
        if g.dim != f.dim:
            raise InputError("composition needs arrows of equal dimension")
        return self.compose_fn(a, b, c, g, f)

    def validate(self, level_budget: int = 1) -> list[str]:
        problems = []
        for a in self.objects:
            H = self.homs.get((a, a))
            if H is None or self.identities[a] not in H.dims:
                problems.append(f"missing identity vertex at {a!r}")
        for r in range(level_budget + 1):
            for (a, b), H in self.homs.items():
                if not H.has_level(r):
                    continue
                for f in H.level(r):
                    if self.comp(a, b, b, self.id_arrow(b, r), f) != f:
                        problems.append(
                            f"left unit law fails on {a}->{b} at level {r}"
                        )
                    if self.comp(a, a, b, f, self.id_arrow(a, r)) != f:
                        problems.append(
                            f"right unit law fails on {a}->{b} at level {r}"
                        )
            for a, b, c, d in itertools.product(self.objects, repeat=4):
                hs = (
                    self.homs.get((a, b)),
                    self.homs.get((b, c)),
                    self.homs.get((c, d)),
                )
                if any(H is None or not H.has_level(r) for H in hs):
                    continue
                for f in hs[0].level(r):
                    for g in hs[1].level(r):
                        gf = self.comp(a, b, c, g, f)
                        for h in hs[2].level(r):
                            lhs = self.comp(a, c, d, h, gf)
                            rhs = self.comp(a, b, d, self.comp(b, c, d, h, g), f)
                            if lhs != rhs:
                                problems.append(
                                    f"associativity fails {a}->{b}->{c}->{d} level {r}"
                                )
        return problems


@dataclass(eq=False)
class Computad:
    underlying: TruncSimpCat
    atomic: dict[tuple[str, str], frozenset[str]]
    words: dict[tuple[str, str], dict[str, "Word"]] | None = None

    def is_atomic(self, a: str, b: str, cell: str) -> bool:
        return cell in self.atomic.get((a, b), frozenset())


def discrete_simpcat(C: FinCat, arrow_cutoff: int = 3) -> TruncSimpCat:
    """An ordinary category viewed with discrete hom complexes."""
    homs: dict[tuple[str, str], FinSSet] = {}
    for a in C.objects:
        for b in C.objects:
            names = C.hom(a, b)
            if names:
                homs[(a, b)] = build_sset(
                    [names], {}, cutoff=arrow_cutoff, stable_above=0
                )
            else:
                homs[(a, b)] = empty_sset()

    def compose_fn(a: str, b: str, c: str, g: Enc, f: Enc) -> Enc:
        if g.op != f.op:
            raise InputError("discrete arrows compose only at matching levels")
        return Enc(f.op, C.compose(g.tgt, f.tgt))

    return TruncSimpCat(
        tuple(C.objects), homs, compose_fn, dict(C.identities), arrow_cutoff
    )


# -- the coherent simplex ----------------------------------------------------


def _poset_hom(i: int, j: int) -> FinSSet:
    if i > j:
        return empty_sset()
    if i == j:
        return build_sset([[subset_name((i,))]], {}, cutoff=0, stable_above=0)
    elements = []
    interior = tuple(range(i + 1, j))
    for bits in range(1 << len(interior)):
        elements.append(tuple(sorted((i, j) + tuple(
            interior[t] for t in range(len(interior)) if bits >> t & 1
        ))))
    top_dim = j - i - 1
    layers: list[list[str]] = [[] for _ in range(top_dim + 1)]
    faces: dict[str, tuple[Enc, ...]] = {}
    chains: list[list[Chain]] = [[] for _ in range(top_dim + 1)]
    chains[0] = [(s,) for s in sorted(elements)]
    for r in range(1, top_dim + 1):
        for c in chains[r - 1]:
            for s in elements:
                if set(c[-1]) < set(s):
                    chains[r].append(c + (s,))
        chains[r].sort()
    for r in range(top_dim + 1):
        for c in chains[r]:
            name = chain_name(c)
            layers[r].append(name)
            if r > 0:
                fs = []
                for t in range(r + 1):
                    dropped = c[:t] + c[t + 1 :]
                    fs.append(nondeg(chain_name(dropped), r - 1))
                faces[name] = tuple(fs)
    return build_sset(layers, faces, cutoff=top_dim, stable_above=top_dim)


def _chain_of(name: str) -> Chain:
    return tuple(
        tuple(int(v) for v in part.split(".")) for part in name.split("<")
    )


def _expand_levels(e: Enc) -> Chain:
    chain = _chain_of(e.tgt)
    return tuple(chain[v] for v in e.op.values)


def hc_simplex(n: int, budget: int = 6) -> Computad:
    """The coherent n-simplex: homs are nerves of endpoint-subset posets."""
    if n > budget:
        raise BudgetError(f"coherent simplex dimension {n} exceeds budget {budget}")
    objects = tuple(str(i) for i in range(n + 1))
    homs = {}
    for i in range(n + 1):
        for j in range(n + 1):
            homs[(str(i), str(j))] = _poset_hom(i, j)

    def compose_fn(a: str, b: str, c: str, g: Enc, f: Enc) -> Enc:
        lf, lg = _expand_levels(f), _expand_levels(g)
        union = tuple(
            tuple(sorted(set(sf) | set(sg))) for sf, sg in zip(lf, lg)
        )
        strict, kappa = dedup_chain(union)
        return Enc(kappa, chain_name(strict))

    identities = {str(i): subset_name((i,)) for i in range(n + 1)}
    cat = TruncSimpCat(objects, homs, compose_fn, identities, max(n - 1, 0))
    atomic = {}
    for i in range(n + 1):
        for j in range(n + 1):
            marks = set()
            if i < j:
                for layer in homs[(str(i), str(j))].cells:
                    for name in layer:
                        if _chain_of(name)[0] == (i, j):
                            marks.add(name)
            atomic[(str(i), str(j))] = frozenset(marks)
    return Computad(cat, atomic)


# -- beads, necklaces, and hc realization ------------------------------------


@dataclass(frozen=True)
class Bead:
    simplex: str
    chain: Chain

    @property
    def dim(self) -> int:
        return len(self.chain) - 1


@dataclass(frozen=True)
class Factor:
    bead: Bead
    alpha: SimplicialOperator


Word = tuple[Factor, ...]


def factor_name(f: Factor) -> str:
    base = f"{f.bead.simplex}[{chain_name(f.bead.chain)}]"
    if f.alpha.is_identity:
        return base
    return base + "@" + ".".join(str(v) for v in f.alpha.values)


def word_name(w: Word) -> str:
    if not w:
        return "id"
    return ";".join(factor_name(f) for f in w)


def _normalize_levels(X: FinSSet, z: str, levels: Chain) -> list[Factor]:
    """Rewrite a weak subset chain on the vertices of z as a word of beads.

    The chain is split at its bottom level, each segment is restricted
    to the face of z spanned by its top level, pushed forward along the
    degeneracy produced by act, and deduplicated into a bead with a
    degeneracy record.  Segments that collapse to a vertex are dropped.
    """
    n = X.dim(z)
    bottom = levels[0]
    out: list[Factor] = []
    for v, w in zip(bottom, bottom[1:]):
        sub = tuple(tuple(x for x in lvl if v <= x <= w) for lvl in levels)
        top = sub[-1]
        enc = X.act(nondeg(z, n), interval_op(top, n))
        y, sigma = enc.tgt, enc.op
        if X.dim(y) == 0:
            continue
        pos = {x: t for t, x in enumerate(top)}
        pushed = tuple(
            tuple(sorted({sigma.values[pos[x]] for x in lvl})) for lvl in sub
        )
        strict, kappa = dedup_chain(pushed)
        out.append(Factor(Bead(y, strict), kappa))
    return out


def act_word(X: FinSSet, word: Word, theta: SimplicialOperator) -> Word:
    out: list[Factor] = []
    for f in word:
        beta = compose(f.alpha, theta)
        levels = tuple(f.bead.chain[v] for v in beta.values)
        out.extend(_normalize_levels(X, f.bead.simplex, levels))
    return tuple(out)


def split_word(word: Word, level: int) -> tuple[Word, SimplicialOperator]:
    """Extract the jointly strict core of a word and the joint degeneracy."""
    keep = [0]
    for t in range(level):
        if any(f.alpha.values[t + 1] > f.alpha.values[t] for f in word):
            keep.append(t + 1)
    values = []
    idx = -1
    for t in range(level + 1):
        if idx + 1 < len(keep) and keep[idx + 1] == t:
            idx += 1
        values.append(idx)
    sigma = SimplicialOperator(level, len(keep) - 1, tuple(values))
    core = tuple(
        Factor(
            f.bead,
            SimplicialOperator(
                len(keep) - 1,
                f.alpha.target_dim,
                tuple(f.alpha.values[p] for p in keep),
            ),
        )
        for f in word
    )
    return core, sigma


def _bead_endpoints(X: FinSSet, simplex: str) -> tuple[str, str]:
    n = X.dim(simplex)
    src = X.act(nondeg(simplex, n), vertex_op(0, n)).tgt
    tgt = X.act(nondeg(simplex, n), vertex_op(n, n)).tgt
    return src, tgt


def _all_beads(X: FinSSet, rmax: int) -> dict[str, list[tuple[Bead, str]]]:
    by_src: dict[str, list[tuple[Bead, str]]] = {}
    for k in range(1, len(X.cells)):
        for z in X.nondeg_cells(k):
            src, tgt = _bead_endpoints(X, z)
            full = tuple(range(k + 1))
            for chain in strict_chains((0, k), full, max_steps=rmax + 1):
                if len(chain) - 1 > rmax:
                    continue
                by_src.setdefault(src, []).append((Bead(z, chain), tgt))
    for src in by_src:
        by_src[src].sort(key=lambda bt: (bt[0].simplex, bt[0].chain))
    return by_src


def _bead_graph_acyclic(X: FinSSet) -> bool:
    edges: dict[str, set[str]] = {}
    for k in range(1, len(X.cells)):
        for z in X.nondeg_cells(k):
            src, tgt = _bead_endpoints(X, z)
            if src == tgt:
                return False
            edges.setdefault(src, set()).add(tgt)
    state: dict[str, int] = {}

    def visit(v: str) -> bool:
        state[v] = 1
        for w in edges.get(v, ()):
            s = state.get(w)
            if s == 1 or (s is None and not visit(w)):
                return False
        state[v] = 2
        return True

    return all(visit(v) for v in list(edges) if v not in state)


def hc_realization(
    X: FinSSet, arrow_cutoff: int = 3, max_weight: int | None = None
) -> Computad:
    """The homotopy coherent realization of X as a simplicial computad.

    Hom complexes are enumerated as necklaces over the bead graph.  When
    the bead graph has a directed cycle the enumeration is infinite, so
    a total simplex-weight bound ``max_weight`` must be supplied; the
    homs are then only the weight-bounded approximation, and composites
    whose weight exceeds the bound raise ``BudgetError``.
    """
    if X.stable_above is None and (max_weight is None or max_weight > X.cutoff):
        raise InputError(
            "realizing an unstably presented input needs a weight bound "
            "within its readable range"
        )
    acyclic = _bead_graph_acyclic(X)
    if not acyclic and max_weight is None:
        raise InputError("bead graph has a cycle; supply a generation bound")
    vertices = list(X.nondeg_cells(0))
    beads = _all_beads(X, arrow_cutoff)

    paths: dict[tuple[str, str], list[tuple[Bead, ...]]] = {
        (a, b): [] for a in vertices for b in vertices
    }

    def dfs(start: str, v: str, acc: list[Bead], w: int):
        for bead, tgt in beads.get(v, ()):
            w2 = w + X.dim(bead.simplex)
            if max_weight is not None and w2 > max_weight:
                continue
            acc.append(bead)
            paths[(start, tgt)].append(tuple(acc))
            dfs(start, tgt, acc, w2)
            acc.pop()

    for a in vertices:
        dfs(a, a, [], 0)

    # depth must ignore the chain filter in _all_beads: a simplex whose
    # chains all exceed the cutoff still pushes nondegenerate words above it
    raw: dict[str, list[tuple[int, str]]] = {}
    for k in range(1, len(X.cells)):
        for z in X.nondeg_cells(k):
            src, tgt = _bead_endpoints(X, z)
            raw.setdefault(src, []).append((k, tgt))
    depths: dict[tuple[str, str], int] = {}

    def depth_dfs(start: str, v: str, d: int, w: int):
        for k, tgt in raw.get(v, ()):
            if max_weight is not None and w + k > max_weight:
                continue
            key = (start, tgt)
            if depths.get(key, -1) < d + k - 1:
                depths[key] = d + k - 1
            depth_dfs(start, tgt, d + k - 1, w + k)

    for a in vertices:
        depth_dfs(a, a, 0, 0)

    homs: dict[tuple[str, str], FinSSet] = {}
    words: dict[tuple[str, str], dict[str, Word]] = {}
    atomic: dict[tuple[str, str], frozenset[str]] = {}
    for a in vertices:
        for b in vertices:
            pool = paths[(a, b)]
            depth = depths.get((a, b), 0)
            if a == b:
                pool = [()] + pool
            top = min(arrow_cutoff, depth)
            registry: dict[str, Word] = {}
            by_level: list[list[Word]] = [[] for _ in range(top + 1)]
            for path in pool:
                dims = [bd.dim for bd in path]
                for r in range(max(dims, default=0), top + 1):
                    if sum(dims) < r:
                        continue
                    for alphas in itertools.product(
                        *(enumerate_surjections(r, s) for s in dims)
                    ):
                        if not all(
                            any(al.values[t + 1] > al.values[t] for al in alphas)
                            for t in range(r)
                        ):
                            continue
                        by_level[r].append(
                            tuple(Factor(bd, al) for bd, al in zip(path, alphas))
                        )
            layers: list[list[str]] = [[] for _ in range(top + 1)]
            for r in range(top + 1):
                for w in sorted(by_level[r], key=word_name):
                    name = word_name(w)
                    layers[r].append(name)
                    registry[name] = w
            faces: dict[str, tuple[Enc, ...]] = {}
            for r in range(1, top + 1):
                for name in layers[r]:
                    w = registry[name]
                    fs = []
                    for t in range(r + 1):
                        img = act_word(X, w, face_op(t, r))
                        core, sigma = split_word(img, r - 1)
                        fs.append(Enc(sigma, word_name(core)))
                    faces[name] = tuple(fs)
            stable = depth if depth <= arrow_cutoff else None
            homs[(a, b)] = build_sset(
                layers, faces, cutoff=arrow_cutoff, stable_above=stable
            )
            words[(a, b)] = registry
            atomic[(a, b)] = frozenset(
                word_name(w)
                for ws in by_level
                for w in ws
                if len(w) == 1 and w[0].alpha.is_identity
            )

    def compose_fn(a: str, b: str, c: str, g: Enc, f: Enc) -> Enc:
        wf = _expand_word(words[(a, b)][f.tgt], f.op)
        wg = _expand_word(words[(b, c)][g.tgt], g.op)
        core, sigma = split_word(wf + wg, f.dim)
        name = word_name(core)
        if name not in words[(a, c)]:
            raise BudgetError("composite weight exceeds the generation bound")
        return Enc(sigma, name)

    identities = {a: "id" for a in vertices}
    cat = TruncSimpCat(tuple(vertices), homs, compose_fn, identities, arrow_cutoff)
    return Computad(cat, atomic, words)


def _expand_word(word: Word, sigma: SimplicialOperator) -> Word:
    if sigma.is_identity:
        return word
    return tuple(Factor(f.bead, compose(f.alpha, sigma)) for f in word)


def word_union_chain(C: Computad, a: str, b: str, e: Enc) -> str:
    """Translate a realization arrow to its levelwise-union subset chain.

    For subcomplexes of a standard simplex this is the canonical
    comparison onto chains of vertex subsets; it is injective on each
    hom complex because a jointly strict word grows its union at every
    level inside the spans of its own beads.
    """
    word = _expand_word(C.words[(a, b)][e.tgt], e.op)
    if not word:
        return subset_name(tuple(int(v) for v in a.split(".")))
    levels: list[set[int]] = [set() for _ in range(e.dim + 1)]
    for f in word:
        verts = tuple(int(v) for v in f.bead.simplex.split("."))
        for t in range(e.dim + 1):
            levels[t].update(verts[x] for x in f.bead.chain[f.alpha.values[t]])
    strict, kappa = dedup_chain(tuple(tuple(sorted(s)) for s in levels))
    if not kappa.is_identity:
        raise InputError("union chain of a nondegenerate word degenerated")
    return chain_name(strict)


# -- computad recognition and factorization ----------------------------------


@dataclass
class ComputadVerdict:
    ok: bool
    atomic: dict[tuple[str, str], frozenset[str]] | None = None
    counterexample: dict | None = None


def _nontrivial_factorizations(
    K: TruncSimpCat, a: str, b: str, f: Enc, r: int
) -> list[tuple[str, Enc, Enc]]:
    out = []
    for m in K.objects:
        if (a, m) not in K.homs or (m, b) not in K.homs:
            continue
        if not (K.homs[(a, m)].has_level(r) and K.homs[(m, b)].has_level(r)):
            continue
        for g in K.homs[(a, m)].level(r):
            if K.is_identity_arrow(a, m, g):
                continue
            for h in K.homs[(m, b)].level(r):
                if K.is_identity_arrow(m, b, h):
                    continue
                if K.comp(a, m, b, h, g) == f:
                    out.append((m, g, h))
    return out


def is_computad(K: TruncSimpCat, level_budget: int | None = None) -> ComputadVerdict:
    """Decide levelwise freeness up to the budget, exhibiting atomics.

    Factorization counts are capped at two, and an arrow reachable from
    itself through proper factorizations counts as having at least two,
    so idempotents and loops are reported rather than recursed into.
    """
    budget = K.arrow_cutoff if level_budget is None else level_budget
    atomic: dict[tuple[str, str], frozenset[str]] = {}
    for (a, b), H in K.homs.items():
        marks = set()
        for r in range(min(budget, len(H.cells) - 1) + 1):
            for name in H.nondeg_cells(r):
                f = nondeg(name, r)
                if K.is_identity_arrow(a, b, f):
                    continue
                if not _nontrivial_factorizations(K, a, b, f, r):
                    marks.add(name)
        atomic[(a, b)] = frozenset(marks)

    CAP = 2

    def count_words(a: str, b: str, f: Enc, r: int, state: dict) -> int:
        key = (a, b, f.key())
        if key in state:
            return CAP if state[key] is None else state[key]
        state[key] = None
        total = 0
        for m in K.objects:
            if (a, m) not in K.homs:
                continue
            for p in sorted(atomic.get((a, m), ())):
                s = K.homs[(a, m)].dim(p)
                if s > r:
                    continue
                for al in enumerate_surjections(r, s):
                    g = Enc(al, p)
                    if m == b and g == f:
                        total += 1
                    if total < CAP and (m, b) in K.homs and K.homs[(m, b)].has_level(r):
                        for h in K.homs[(m, b)].level(r):
                            if K.is_identity_arrow(m, b, h):
                                continue
                            if K.comp(a, m, b, h, g) == f:
                                total += count_words(m, b, h, r, state)
                                if total >= CAP:
                                    break
                    if total >= CAP:
                        break
                if total >= CAP:
                    break
            if total >= CAP:
                break
        state[key] = min(total, CAP)
        return state[key]

    for (a, b), H in K.homs.items():
        for r in range(budget + 1):
            if not H.has_level(r):
                break
            for f in H.level(r):
                want = 0 if K.is_identity_arrow(a, b, f) else 1
                n = count_words(a, b, f, r, {})
                if n != want:
                    return ComputadVerdict(
                        False,
                        None,
                        {
                            "hom": (a, b),
                            "arrow": f.key(),
                            "level": r,
                            "factorizations": n,
                        },
                    )
    return ComputadVerdict(True, atomic)


def atomic_factorization(
    C: Computad, a: str, b: str, arrow: Enc
) -> list[tuple[str, SimplicialOperator]]:
    """The unique decomposition into degenerated atomics, domain first."""
    K = C.underlying
    if K.is_identity_arrow(a, b, arrow):
        raise InputError("identities have the empty factorization")
    if C.words is not None:
        word = _expand_word(C.words[(a, b)][arrow.tgt], arrow.op)
        return [
            (word_name((Factor(f.bead, identity_op(f.bead.dim)),)), f.alpha)
            for f in word
        ]
    r = arrow.dim
    out: list[tuple[str, SimplicialOperator]] = []

    def search(v: str, f: Enc, acc: list) -> bool:
        for m in K.objects:
            if (v, m) not in K.homs:
                continue
            for p in sorted(C.atomic.get((v, m), ())):
                s = K.homs[(v, m)].dim(p)
                if s > r:
                    continue
                for al in enumerate_surjections(r, s):
                    g = Enc(al, p)
                    acc.append((p, al))
                    if m == b and g == f:
                        return True
                    if (m, b) in K.homs and K.homs[(m, b)].has_level(r):
                        for h in K.homs[(m, b)].level(r):
                            if K.is_identity_arrow(m, b, h):
                                continue
                            if K.comp(v, m, b, h, g) == f and search(m, h, acc):
                                return True
                    acc.pop()
        return False

    if not search(a, arrow, out):
        raise InputError("arrow admits no atomic factorization")
    return out


def recompose(C: Computad, a: str, b: str, factors, r: int) -> Enc:
    """Multiply a domain-first factor list back into a single arrow."""
    K = C.underlying
    current = K.id_arrow(a, r)
    v = a
    for cell, alpha in factors:
        w = next(
            m for m in K.objects if (v, m) in K.homs and cell in K.homs[(v, m)].dims
        )
        current = K.comp(a, v, w, Enc(alpha, cell), current)
        v = w
    if v != b:
        raise InputError("factor endpoints do not reach the codomain")
    return current


# -- the homotopy coherent nerve ---------------------------------------------


def _simplex_atomics(n: int) -> list[tuple[int, int, Chain]]:
    out = []
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            for c in atomic_chains(i, j):
                out.append((i, j, c))
    out.sort(key=lambda t: (len(t[2]) - 1, t[0], t[1], t[2]))
    return out


@dataclass
class HcNerveResult:
    sset: FinSSet
    functors: dict[str, tuple]
    atomics: dict[int, list[tuple[int, int, Chain]]]
    encode: Callable[[tuple, int], Enc]

    def assignment(self, cell: str) -> dict:
        objs, vals = self.functors[cell]
        n = len(objs) - 1
        return {key: v for key, v in zip(self.atomics[n], vals)}


def _eval_chain(
    K: TruncSimpCat,
    objs: tuple[str, ...],
    lookup: Callable[[int, int, Chain], Enc],
    i: int,
    j: int,
    levels: Chain,
    r: int,
) -> Enc:
    """Evaluate a weak chain arrow i -> j under an atomic assignment."""
    bottom = levels[0]
    result: Enc | None = None
    src = i
    for v, w in zip(bottom, bottom[1:]):
        sub = tuple(tuple(x for x in lvl if v <= x <= w) for lvl in levels)
        strict, kappa = dedup_chain(sub)
        val = lookup(v, w, strict)
        val = Enc(compose(val.op, kappa), val.tgt)
        if result is None:
            result = val
        else:
            result = K.comp(objs[i], objs[src], objs[w], val, result)
        src = w
    if result is None:
        return K.id_arrow(objs[i], r)
    return result


def hc_nerve(K: TruncSimpCat, dim_budget: int = 3) -> HcNerveResult:
    """Simplicial functors out of coherent simplices, as a simplicial set.

    Functors are found by constraint propagation over atomic generators
    in ascending dimension: a candidate value for a generating chain is
    admitted when its faces match the evaluations of the dropped-level
    chains against the values already assigned.
    """
    if K.arrow_cutoff < max(dim_budget - 1, 0):
        raise BudgetError(
            f"nerve to dimension {dim_budget} needs arrow cutoff {dim_budget - 1}"
        )
    atomics = {n: _simplex_atomics(n) for n in range(dim_budget + 1)}
    index = {n: {key: t for t, key in enumerate(atomics[n])} for n in atomics}

    def functors_at(n: int) -> list[tuple]:
        out = []
        gens = atomics[n]

        def assign(objs, vals: list[Enc], t: int):
            if t == len(gens):
                out.append((objs, tuple(vals)))
                return
            i, j, chain = gens[t]
            r = len(chain) - 1
            H = K.homs.get((objs[i], objs[j]))
            if H is None or not H.has_level(r):
                return

            def lookup(v, w, c):
                return vals[index[n][(v, w, c)]]

            expected = []
            if r > 0:
                for s in range(r + 1):
                    dropped = chain[:s] + chain[s + 1 :]
                    expected.append(
                        _eval_chain(K, objs, lookup, i, j, dropped, r - 1)
                    )
            for cand in H.level(r):
                if r > 0 and any(
                    H.act(cand, face_op(s, r)) != expected[s] for s in range(r + 1)
                ):
                    continue
                vals.append(cand)
                assign(objs, vals, t + 1)
                vals.pop()

        for objs in itertools.product(K.objects, repeat=n + 1):
            assign(objs, [], 0)
        return out

    levels = [functors_at(n) for n in range(dim_budget + 1)]
    ids: dict[tuple[int, tuple], str] = {}
    for n, layer in enumerate(levels):
        for t, e in enumerate(layer):
            ids[(n, e)] = f"hc{n}.{t}"

    def act(e: tuple, theta: SimplicialOperator) -> tuple:
        objs, vals = e
        n_src = theta.target_dim

        def lookup(v, w, c):
            return vals[index[n_src][(v, w, c)]]

        new_vals = []
        for (i, j, chain) in atomics[theta.source_dim]:
            r = len(chain) - 1
            ti, tj = theta.values[i], theta.values[j]
            if ti == tj:
                new_vals.append(K.id_arrow(objs[ti], r))
            else:
                img = tuple(
                    tuple(sorted({theta.values[x] for x in lvl})) for lvl in chain
                )
                new_vals.append(_eval_chain(K, objs, lookup, ti, tj, img, r))
        return (tuple(objs[v] for v in theta.values), tuple(new_vals))

    machine = Levelwise(levels, act, lambda e, n: ids[(n, e)], stable_above=None)
    built = machine.build()
    return HcNerveResult(built.sset, dict(built.elements), atomics, built.encode)


def hc_unit(X: FinSSet, N: HcNerveResult) -> SSetMap:
    """The canonical comparison from X to the nerve of its realization."""
    budget = len(N.sset.cells) - 1
    elems_index = {e: ident for ident, e in N.functors.items()}
    dom = X if len(X.cells) - 1 <= budget else truncate(X, budget)
    images: dict[str, Enc] = {}
    for n in range(len(dom.cells)):
        for x in dom.nondeg_cells(n):
            objs = tuple(
                X.act(nondeg(x, n), vertex_op(t, n)).tgt for t in range(n + 1)
            )
            vals = []
            for (i, j, chain) in N.atomics[n]:
                sub = X.act(nondeg(x, n), interval_op(tuple(range(i, j + 1)), n))
                pushed = tuple(
                    tuple(sorted({sub.op.values[v - i] for v in lvl}))
                    for lvl in chain
                )
                word = _normalize_levels(X, sub.tgt, pushed)
                core, sigma = split_word(tuple(word), len(chain) - 1)
                vals.append(Enc(sigma, word_name(core)))
            elem = (objs, tuple(vals))
            if elem not in elems_index:
                raise InputError(f"comparison image of {x!r} missing from the nerve")
            images[x] = nondeg(elems_index[elem], n)
    return SSetMap(dom, N.sset, images)


# -- functoriality of realization -------------------------------------------


def hc_map(f: SSetMap, CX: Computad, CY: Computad) -> dict[tuple[str, str], SSetMap]:
    """Hom-wise maps induced on realizations by a simplicial map."""
    Y = f.codomain

    def push_factor(fac: Factor) -> list[Factor]:
        img = f.images[fac.bead.simplex]
        w, sigma = img.tgt, img.op
        if Y.dim(w) == 0:
            return []
        pushed = tuple(
            tuple(sorted({sigma.values[x] for x in lvl})) for lvl in fac.bead.chain
        )
        strict, kappa = dedup_chain(pushed)
        return [Factor(Bead(w, strict), compose(kappa, fac.alpha))]

    out: dict[tuple[str, str], SSetMap] = {}
    for (a, b), registry in CX.words.items():
        fa = f.images[a].tgt
        fb = f.images[b].tgt
        images: dict[str, Enc] = {}
        for name, word in registry.items():
            r = CX.underlying.homs[(a, b)].dim(name)
            img: list[Factor] = []
            for fac in word:
                img.extend(push_factor(fac))
            core, sigma = split_word(tuple(img), r)
            images[name] = Enc(sigma, word_name(core))
        out[(a, b)] = SSetMap(
            CX.underlying.homs[(a, b)], CY.underlying.homs[(fa, fb)], images
        )
    return out


# -- canonical cocones -------------------------------------------------------


@dataclass
class CanonicalCocone:
    realization: Computad
    nadir: FinSSet
    legs: dict[str, SSetMap]
    top: str

    def leg(self, vertex: str) -> SSetMap:
        return self.legs[vertex]

    def verify(self, level_budget: int = 2) -> list[str]:
        problems = []
        K = self.realization.underlying
        for x, leg in self.legs.items():
            problems.extend(f"leg at {x!r}: {p}" for p in leg.validate().problems)
        for (a, b) in K.homs:
            if self.top in (a, b) or (b, self.top) not in K.homs:
                continue
            H1 = K.homs[(a, b)]
            H2 = K.homs[(b, self.top)]
            for r in range(level_budget + 1):
                if not (H1.has_level(r) and H2.has_level(r)):
                    continue
                for u in H1.level(r):
                    for g in H2.level(r):
                        gu = K.comp(a, b, self.top, g, u)
                        if self._eval(a, gu) != self._eval(b, g):
                            problems.append(
                                f"cocone violates composition at {a}->{b} level {r}"
                            )
        return problems

    def _eval(self, a: str, e: Enc) -> Enc:
        return self.legs[a.rsplit("*", 1)[0]].apply(e)


def _mu_operator(chain: Chain, n: int) -> SimplicialOperator:
    values = tuple(max(v for v in lvl if v != n + 1) for lvl in chain)
    return SimplicialOperator(len(chain) - 1, n, values)


def canonical_cocone(
    X: FinSSet, arrow_cutoff: int = 3, max_weight: int | None = None
) -> CanonicalCocone:
    """The canonical lax cocone under X with nadir X itself.

    The realization of the cone on X has one extra vertex; a bead into
    it evaluates through the operator that picks, at each level of the
    bead shape, the largest vertex below the cone point.  Legs ignore
    every factor of a necklace except the final one, which is what makes
    them compatible with composition on the domain side.
    """
    J = sset_join(X, point())
    top = "*0"
    C = hc_realization(J, arrow_cutoff, max_weight)
    legs: dict[str, SSetMap] = {}
    for v in X.nondeg_cells(0):
        a = f"{v}*"
        H = C.underlying.homs[(a, top)]
        images: dict[str, Enc] = {}
        for r in range(len(H.cells)):
            for name in H.nondeg_cells(r):
                fac = C.words[(a, top)][name][-1]
                x_under = fac.bead.simplex.rsplit("*", 1)[0]
                n = X.dim(x_under)
                val = X.act(nondeg(x_under, n), _mu_operator(fac.bead.chain, n))
                images[name] = X.act(val, fac.alpha)
        legs[v] = SSetMap(H, X, images)
    return CanonicalCocone(C, X, legs, top)
