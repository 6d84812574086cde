"""Operator algebra: composition, EZ factorization, enumeration."""

import math

import pytest

from finsset import (
    BudgetError,
    InputError,
    SimplicialOperator,
    compose,
    degeneracy_op,
    enumerate_injections,
    enumerate_operators,
    enumerate_surjections,
    ez_factor,
    face_op,
    identity_op,
)


def test_validation_rejects_non_monotone():
    with pytest.raises(InputError):
        SimplicialOperator(1, 1, (1, 0))
    with pytest.raises(InputError):
        SimplicialOperator(1, 1, (0, 2))
    with pytest.raises(InputError):
        SimplicialOperator(2, 1, (0, 1))


def test_face_degeneracy_constructors():
    d1 = face_op(1, 2)
    assert d1.values == (0, 2)
    s0 = degeneracy_op(0, 1)
    assert s0.values == (0, 0, 1)
    assert identity_op(3).is_identity


def test_compose_against_pointwise_evaluation():
    f = SimplicialOperator(2, 3, (0, 2, 2))
    g = SimplicialOperator(3, 4, (1, 1, 3, 4))
    gf = compose(g, f)
    for i in range(3):
        assert gf(i) == g(f(i))
    with pytest.raises(InputError):
        compose(f, g)


def test_simplicial_identity_dd():
    # d_i d_j = d_{j-1} d_i for i < j, checked as operator composition
    n = 4
    for j in range(1, n + 1):
        for i in range(j):
            lhs = compose(face_op(j, n), face_op(i, n - 1))
            rhs = compose(face_op(i, n), face_op(j - 1, n - 1))
            assert lhs == rhs


def test_ez_factorization_unique_and_correct():
    alpha = SimplicialOperator(3, 4, (1, 1, 3, 3))
    s, d = ez_factor(alpha)
    assert s.is_surjective and d.is_injective
    assert compose(d, s) == alpha
    # surjection collapses to [1], injection picks {1,3}
    assert s.values == (0, 0, 1, 1)
    assert d.values == (1, 3)


def test_ez_factor_identity_cases():
    ident = identity_op(2)
    s, d = ez_factor(ident)
    assert s.is_identity and d.is_identity
    s, d = ez_factor(face_op(0, 3))
    assert s.is_identity and d == face_op(0, 3)
    s, d = ez_factor(degeneracy_op(1, 2))
    assert d.is_identity and s == degeneracy_op(1, 2)


def test_enumerate_operators_count():
    for m in range(4):
        for n in range(4):
            ops = enumerate_operators(m, n)
            assert len(ops) == math.comb(m + n + 1, m + 1)
            assert len(set(ops)) == len(ops)
            assert ops == sorted(ops, key=lambda o: o.values)


def test_enumerate_operators_budget():
    with pytest.raises(BudgetError):
        enumerate_operators(9, 9, budget=8)


def test_enumerate_surjections_and_injections():
    surjs = enumerate_surjections(3, 1)
    assert len(surjs) == 3  # degeneracy words s_i s_j, i <= j on [3] -> [1]
    assert all(s.is_surjective for s in surjs)
    injs = enumerate_injections(1, 3)
    assert len(injs) == 6
    assert all(d.is_injective for d in injs)


def test_json_round_trip():
    alpha = SimplicialOperator(2, 3, (0, 2, 3))
    assert SimplicialOperator.from_json(alpha.to_json()) == alpha
