"""Map enumeration and budgeted lifting certificates.

All searches are deterministic: candidate images are tried in sorted
encoded order, so the first filler found is the least one.  Downstream
constructions that consume chosen fillers rely on this.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from ..errors import BudgetError, InputError
from ..ops import face_op
from .core import Enc, FinSSet, SSetMap, compose_maps, nondeg
from . import shapes


def _cells_by_dim(X: FinSSet) -> list[tuple[int, str]]:
    return [(k, x) for k, layer in enumerate(X.cells) for x in layer]


def _candidates(dom: FinSSet, cod: FinSSet, images: dict[str, Enc], k: int, x: str):
    want = None
    if k >= 1:
        want = []
        for i in range(k + 1):
            op, tgt = dom.face(x, i)
            want.append(cod.act(images[tgt], op))
    for cand in cod.level(k):
        if k >= 1 and any(
            cod.act(cand, face_op(i, k)) != want[i] for i in range(k + 1)
        ):
            continue
        yield cand


def _search(
    dom: FinSSet,
    cod: FinSSet,
    fixed: dict[str, Enc],
    extra_ok,
    node_budget: int | None,
) -> Iterator[dict[str, Enc]]:
    todo = [(k, x) for k, x in _cells_by_dim(dom) if x not in fixed]
    images = dict(fixed)
    nodes = 0

    def rec(idx: int):
        nonlocal nodes
        if idx == len(todo):
            yield dict(images)
            return
        k, x = todo[idx]
        for cand in _candidates(dom, cod, images, k, x):
            if extra_ok is not None and not extra_ok(x, cand):
                continue
            nodes += 1
            if node_budget is not None and nodes > node_budget:
                raise BudgetError(
                    f"lifting search exceeded the node budget {node_budget}"
                )
            images[x] = cand
            yield from rec(idx + 1)
            del images[x]

    yield from rec(0)


def enumerate_maps(
    dom: FinSSet,
    cod: FinSSet,
    partial: dict[str, Enc] | None = None,
    max_results: int | None = None,
    node_budget: int | None = None,
) -> list[SSetMap]:
    """All simplicial maps dom → cod extending the partial assignment."""
    out = []
    for images in _search(dom, cod, partial or {}, None, node_budget):
        out.append(SSetMap(dom, cod, images))
        if max_results is not None and len(out) >= max_results:
            break
    out.sort(key=SSetMap.key)
    return out


def first_map(
    dom: FinSSet,
    cod: FinSSet,
    partial: dict[str, Enc] | None = None,
    extra_ok=None,
    node_budget: int | None = None,
) -> SSetMap | None:
    for images in _search(dom, cod, partial or {}, extra_ok, node_budget):
        return SSetMap(dom, cod, images)
    return None


def restriction_partial(i: SSetMap, u: SSetMap) -> dict[str, Enc]:
    """Images forced on cod(i) by u along the monomorphism i."""
    if not i.is_mono():
        raise InputError("lifting problems require a monomorphism on the left")
    return {i.images[a].tgt: u.images[a] for a in u.images}


def solve_lifting(
    i: SSetMap,
    p: SSetMap,
    u: SSetMap,
    v: SSetMap,
    node_budget: int | None = None,
) -> SSetMap | None:
    """A filler for the square (u, v) against i on the left and p on the right.

    The filler h: cod(i) → dom(p) satisfies h∘i = u and p∘h = v; None
    means the exhaustive search found nothing.
    """
    for a in u.images:
        if p.apply(u.images[a]) != v.apply(i.images[a]):
            raise InputError("lifting square does not commute")
    partial = restriction_partial(i, u)
    X, B = p.domain, i.codomain

    def over_base(b, cand):
        return p.apply(cand) == v.images[b]

    h = first_map(B, X, partial, extra_ok=over_base, node_budget=node_budget)
    return h


@dataclass
class LiftingCertificate:
    kind: str
    budget: int
    certified: bool
    squares_checked: int
    refuted_at: tuple[int, int] | None = None
    counterexample: dict | None = None
    tally: dict = field(default_factory=dict)

    def summary(self) -> str:
        if self.certified:
            return f"{self.kind}: certified up to budget {self.budget} ({self.squares_checked} squares)"
        return f"{self.kind}: refuted at {self.refuted_at}"


def _horn_squares(p: SSetMap, n: int, k: int):
    """All commuting squares from the (n,k)-horn inclusion to p."""
    L = shapes.horn(n, k)
    D = shapes.simplex(n)
    incl = shapes.inclusion(L, D)
    for u in enumerate_maps(L, p.domain):
        pu = compose_maps(p, u)
        base_partial = dict(pu.images)
        for v in enumerate_maps(D, p.codomain, partial=base_partial):
            yield L, D, incl, u, v


def _fill_horn(p: SSetMap, incl, u, v) -> SSetMap | None:
    return solve_lifting(incl, p, u, v)


def lifting_certify(
    p: SSetMap,
    cls: str,
    budget: int,
    special_edges: set | None = None,
    ho_domain=None,
    ho_codomain=None,
) -> LiftingCertificate:
    """Budgeted right-lifting certification of p against a horn class.

    inner: Λⁿ_k ↪ Δⁿ for 0 < k < n ≤ budget.
    cocart-outer: Λⁿ_0 ↪ Δⁿ for 2 ≤ n ≤ budget, restricted to squares
      whose initial edge lands in special_edges (given as encoded keys).
    iso: lifts of homotopy-invertible edges through source vertices;
      requires homotopy category data for both ends (pass precomputed
      values to avoid recursion, else they are built here).
    """
    checked = 0
    tally: dict = {}
    if cls == "inner":
        pairs = [(n, k) for n in range(2, budget + 1) for k in range(1, n)]
    elif cls == "cocart-outer":
        if special_edges is None:
            raise InputError("cocart-outer certification needs the special edge set")
        pairs = [(n, 0) for n in range(2, budget + 1)]
    elif cls == "iso":
        pairs = []
    else:
        raise InputError(f"unknown lifting class {cls!r}")

    for n, k in pairs:
        p.domain.require_level(n)
        p.codomain.require_level(n)
        good = 0
        for L, D, incl, u, v in _horn_squares(p, n, k):
            if cls == "cocart-outer":
                init = u.apply(nondeg("0.1", 1))
                if init.key() not in special_edges:
                    continue
            checked += 1
            h = _fill_horn(p, incl, u, v)
            if h is None:
                return LiftingCertificate(
                    kind=cls,
                    budget=budget,
                    certified=False,
                    squares_checked=checked,
                    refuted_at=(n, k),
                    counterexample={
                        "horn": (n, k),
                        "top": {a: e.key() for a, e in u.images.items()},
                        "bottom": {b: e.key() for b, e in v.images.items()},
                    },
                )
            good += 1
        tally[(n, k)] = good

    if cls == "iso":
        from .cat import homotopy_category

        hoE = ho_domain or homotopy_category(p.domain)
        hoB = ho_codomain or homotopy_category(p.codomain)
        for e in p.domain.level(0):
            under = p.apply(e)
            for beta in p.codomain.level(1):
                if p.codomain.act(beta, face_op(1, 1)) != under:
                    continue
                if not hoB.invertible(beta):
                    continue
                checked += 1
                found = None
                for eps in p.domain.level(1):
                    if p.domain.act(eps, face_op(1, 1)) != e:
                        continue
                    if p.apply(eps) != beta:
                        continue
                    if hoE.invertible(eps):
                        found = eps
                        break
                if found is None:
                    return LiftingCertificate(
                        kind=cls,
                        budget=budget,
                        certified=False,
                        squares_checked=checked,
                        refuted_at=(1, 1),
                        counterexample={"vertex": e.key(), "edge": beta.key()},
                    )
        tally[(1, 1)] = checked

    return LiftingCertificate(
        kind=cls, budget=budget, certified=True, squares_checked=checked, tally=tally
    )
