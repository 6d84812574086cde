"""Simplicial operators: monotone maps between finite ordinals.

An operator ``alpha`` with source dimension ``m`` and target dimension
``n`` is the monotone map ``[m] -> [n]`` whose value sequence is stored
explicitly.  Equality is sequence comparison, so every operator has one
canonical form.  The module also provides the unique
surjection-injection factorization that the simplex encoding of every
other module relies on.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

from .errors import BudgetError, InputError

ENUMERATION_BUDGET = 8


@dataclass(frozen=True)
class SimplicialOperator:
    """A monotone map ``[source_dim] -> [target_dim]``.

    Parameters
    ----------
    source_dim : int
        Dimension m of the source ordinal ``[m] = {0, ..., m}``.
    target_dim : int
        Dimension n of the target ordinal.
    values : tuple of int
        The m+1 values, weakly increasing, each in ``[0, n]``.
    """

    source_dim: int
    target_dim: int
    values: tuple[int, ...]

    def __post_init__(self):
        if self.source_dim < 0 or self.target_dim < 0:
            raise InputError(f"negative dimension in operator {self}")
        if len(self.values) != self.source_dim + 1:
            raise InputError(
                f"operator [{self.source_dim}]->[{self.target_dim}] needs "
                f"{self.source_dim + 1} values, got {len(self.values)}"
            )
        prev = 0
        for v in self.values:
            if v < prev:
                raise InputError(f"values {self.values} are not monotone")
            prev = v
        if self.values and not (0 <= self.values[0] and self.values[-1] <= self.target_dim):
            raise InputError(
                f"values {self.values} leave the target ordinal [{self.target_dim}]"
            )

    def __call__(self, i: int) -> int:
        return self.values[i]

    @property
    def is_identity(self) -> bool:
        return self.source_dim == self.target_dim and all(
            v == i for i, v in enumerate(self.values)
        )

    @property
    def is_injective(self) -> bool:
        return all(a < b for a, b in zip(self.values, self.values[1:]))

    @property
    def is_surjective(self) -> bool:
        image = set(self.values)
        return len(image) == self.target_dim + 1

    def missing_values(self) -> list[int]:
        """Target values not hit, in increasing order."""
        image = set(self.values)
        return [v for v in range(self.target_dim + 1) if v not in image]

    def to_json(self) -> dict:
        return {"src": self.source_dim, "tgt": self.target_dim, "vals": list(self.values)}

    @staticmethod
    def from_json(data: dict) -> "SimplicialOperator":
        return SimplicialOperator(data["src"], data["tgt"], tuple(data["vals"]))

    def __repr__(self):
        return f"Op({self.source_dim}->{self.target_dim}:{','.join(map(str, self.values))})"


def identity_op(n: int) -> SimplicialOperator:
    return SimplicialOperator(n, n, tuple(range(n + 1)))


def face_op(i: int, n: int) -> SimplicialOperator:
    """The coface ``[n-1] -> [n]`` skipping the value i."""
    if not 0 <= i <= n or n < 1:
        raise InputError(f"face index {i} out of range for [{n}]")
    return SimplicialOperator(n - 1, n, tuple(v if v < i else v + 1 for v in range(n)))


def degeneracy_op(i: int, n: int) -> SimplicialOperator:
    """The codegeneracy ``[n+1] -> [n]`` repeating the value i."""
    if not 0 <= i <= n:
        raise InputError(f"degeneracy index {i} out of range for [{n}]")
    return SimplicialOperator(n + 1, n, tuple(v if v <= i else v - 1 for v in range(n + 2)))


def vertex_op(i: int, n: int) -> SimplicialOperator:
    """The inclusion ``[0] -> [n]`` at the vertex i."""
    if not 0 <= i <= n:
        raise InputError(f"vertex {i} out of range for [{n}]")
    return SimplicialOperator(0, n, (i,))


def interval_op(values: tuple[int, ...] | list[int], n: int) -> SimplicialOperator:
    """The injection into ``[n]`` whose image is the given value set."""
    vals = tuple(sorted(values))
    return SimplicialOperator(len(vals) - 1, n, vals)


def compose(g: SimplicialOperator, f: SimplicialOperator) -> SimplicialOperator:
    """The composite ``g after f``."""
    if f.target_dim != g.source_dim:
        raise InputError(f"cannot compose {g} after {f}: dimension mismatch")
    return SimplicialOperator(
        f.source_dim, g.target_dim, tuple(g.values[v] for v in f.values)
    )


def ez_factor(alpha: SimplicialOperator) -> tuple[SimplicialOperator, SimplicialOperator]:
    """The unique factorization ``alpha = injection after surjection``."""
    image = sorted(set(alpha.values))
    k = len(image) - 1
    index = {v: i for i, v in enumerate(image)}
    surjection = SimplicialOperator(
        alpha.source_dim, k, tuple(index[v] for v in alpha.values)
    )
    injection = SimplicialOperator(k, alpha.target_dim, tuple(image))
    return surjection, injection


def enumerate_operators(
    m: int, n: int, budget: int = ENUMERATION_BUDGET
) -> list[SimplicialOperator]:
    """All monotone maps ``[m] -> [n]`` in lexicographic order of values."""
    if m > budget or n > budget:
        raise BudgetError(
            f"operator enumeration for [{m}]->[{n}] exceeds the budget {budget}"
        )
    out = [
        SimplicialOperator(m, n, vals)
        for vals in itertools.combinations_with_replacement(range(n + 1), m + 1)
    ]
    assert len(out) == comb(m + n + 1, m + 1)
    return out


def enumerate_surjections(m: int, k: int) -> list[SimplicialOperator]:
    """All surjective monotone maps ``[m] ->> [k]``, lexicographic."""
    if k > m:
        return []
    return [op for op in enumerate_operators(m, k, budget=max(m, k)) if op.is_surjective]


def enumerate_injections(k: int, n: int) -> list[SimplicialOperator]:
    """All injective monotone maps ``[k] -> [n]``, lexicographic."""
    if k > n:
        return []
    return [
        SimplicialOperator(k, n, vals)
        for vals in itertools.combinations(range(n + 1), k + 1)
    ]
