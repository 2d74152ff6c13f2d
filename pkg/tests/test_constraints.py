from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import all_permutation_matrices, convex_combination
from lpperm.constraints import (
    ConstraintSet,
    LinearConstraint,
    Relation,
    build_doubly_stochastic,
    build_pure_involution,
    build_weak_sums,
    canonicalize,
    column_sum_index,
    contains_doubly_stochastic,
    is_homogeneous,
    is_quasi_homogeneous,
    merge,
    row_sum_index,
    satisfies,
)
from lpperm.errors import DimensionMismatchError, InvalidSizeError, NotQuasiHomogeneousError, ParseError
from lpperm.graphs import build_graph_constraints, make_family, GraphFamily
from lpperm.matrix import RationalMatrix


def test_doubly_stochastic_counts():
    assert len(build_doubly_stochastic(2)) == 8
    for n in range(1, 6):
        assert len(build_doubly_stochastic(n)) == 2 * n + n * n
    with pytest.raises(InvalidSizeError):
        build_doubly_stochastic(0)


def test_satisfies_examples():
    assert satisfies(RationalMatrix.identity(4), build_doubly_stochastic(4))
    third = RationalMatrix.from_rows([["1/3"] * 3] * 3)
    assert satisfies(third, build_doubly_stochastic(3))
    bad = RationalMatrix.from_rows([[0, 1], [1, -1]])
    assert not satisfies(bad, build_doubly_stochastic(2))
    flipped = RationalMatrix.from_rows([[-1, 2], [2, -1]])
    assert not satisfies(flipped, build_doubly_stochastic(2))
    with pytest.raises(DimensionMismatchError):
        satisfies(RationalMatrix.identity(3), build_doubly_stochastic(2))


def test_every_permutation_of_s4_is_doubly_stochastic():
    L = build_doubly_stochastic(4)
    assert all(satisfies(P, L) for P in all_permutation_matrices(4))


def test_convex_combinations_satisfy_exactly():
    rng = random.Random(3)
    L = build_doubly_stochastic(4)
    perms = all_permutation_matrices(4)
    for _ in range(30):
        X = convex_combination(rng.sample(perms, rng.randint(2, 6)), rng)
        assert satisfies(X, L)


def test_pure_involution_structure():
    L = build_pure_involution(4)
    assert len(L) == len(build_doubly_stochastic(4)) + 1 + 6
    assert satisfies(RationalMatrix.from_rows([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]), L)
    assert not satisfies(RationalMatrix.identity(4), L)
    with pytest.raises(InvalidSizeError):
        build_pure_involution(5)


def test_weak_sums():
    W = build_weak_sums(2)
    target = LinearConstraint.build({(1, 0): 1, (1, 1): 1, (0, 0): -1, (0, 1): -1}, Relation.EQUAL, 0)
    assert any(l.normalized() == target.normalized() for l in W.constraints)
    assert len(W) == 4
    assert satisfies(RationalMatrix.from_rows([[1] * 3] * 3), build_weak_sums(3))
    assert not satisfies(RationalMatrix.from_rows([[1, 0], [0, 0]]), build_weak_sums(2))


def _weak_sum_point(rng: random.Random, n: int) -> RationalMatrix:
    """A random matrix pushed onto the weak-sum null space: X − (r 1ᵀ + 1 cᵀ) + s/n² J form."""
    X = [[Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(n)] for _ in range(n)]
    rows = [sum(r) for r in X]
    cols = [sum(X[i][j] for i in range(n)) for j in range(n)]
    total = sum(rows)
    # subtracting row and column deviations makes every line sum equal total/n
    Y = [
        [X[i][j] - (rows[i] - total / n) / n - (cols[j] - total / n) / n for j in range(n)]
        for i in range(n)
    ]
    return RationalMatrix.from_rows(Y)


@given(st.integers(1, 6), st.integers(0, 10 ** 6))
def test_constant_sum_property(n, seed):
    X = _weak_sum_point(random.Random(seed), n)
    assert satisfies(X, build_weak_sums(n))
    total = sum(X.flat())
    for i in range(n):
        assert sum(X.entries[i]) == total / n
        assert sum(X[k, i] for k in range(n)) == total / n


def test_homogeneity_examples():
    L = build_doubly_stochastic(2)
    pos = next(l for l in L.constraints if l.relation is Relation.GREATER_EQUAL)
    row = next(l for l in L.constraints if row_sum_index(l, 2) is not None)
    sym = LinearConstraint.build({(0, 1): 1, (1, 0): -1}, Relation.EQUAL, 0)
    assert is_homogeneous(pos)
    assert not is_homogeneous(row)
    assert is_homogeneous(sym)


def test_structural_recognition_ignores_labels_and_scaling():
    l = LinearConstraint.build({(0, 0): 2, (0, 1): 2}, Relation.EQUAL, 2, "anything")
    assert row_sum_index(l, 2) == 0
    assert column_sum_index(l, 2) is None
    partial = LinearConstraint.build({(0, 0): 1}, Relation.EQUAL, 1, "row-sum 0")
    assert row_sum_index(partial, 2) is None


def test_quasi_homogeneous_examples():
    assert is_quasi_homogeneous(build_doubly_stochastic(3))
    for fam, n in [(GraphFamily.CYCLE, 4), (GraphFamily.LINE, 3), (GraphFamily.COMPLETE, 3)]:
        assert is_quasi_homogeneous(build_graph_constraints(make_family(fam, n)))
    assert not is_quasi_homogeneous(build_weak_sums(3))
    inhom = build_doubly_stochastic(2).union([LinearConstraint.build({(0, 0): 1}, Relation.GREATER_EQUAL, "1/3")])
    assert not is_quasi_homogeneous(inhom)


def test_merge():
    M = merge(build_doubly_stochastic(3))
    assert all(l.rhs == 0 for l in M.constraints)
    W = build_weak_sums(3)
    weak = {l.normalized() for l in W.constraints if not l.is_trivial()}
    assert weak <= {l.normalized() for l in M.constraints}
    assert sum(1 for l in M.constraints if l.relation is Relation.GREATER_EQUAL) == 9
    assert all(l.rhs == 0 for l in merge(build_pure_involution(4)).constraints)
    with pytest.raises(NotQuasiHomogeneousError):
        merge(build_weak_sums(3))


def test_merge_output_closed_under_nonnegative_scaling():
    rng = random.Random(5)
    M = merge(build_pure_involution(4))
    P = RationalMatrix.from_rows([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]])
    for _ in range(10):
        c = Fraction(rng.randint(0, 20), rng.randint(1, 7))
        assert satisfies(P.scale(c), M)


def test_merge_idempotent_on_merged_sets():
    M = merge(build_doubly_stochastic(3))
    # a merged set has no row/column sums left, so it is no longer quasi-homogeneous
    assert not contains_doubly_stochastic(M)
    # merging the homogeneous part of a quasi-homogeneous set changes nothing
    L = build_pure_involution(4)
    merged = merge(L)
    homogeneous = [l for l in L.constraints if row_sum_index(l, 4) is None and column_sum_index(l, 4) is None]
    assert all(l in merged.constraints for l in homogeneous)


def test_canonicalize_drops_trivial_and_scaled_duplicates():
    L = ConstraintSet.of(
        2,
        [
            LinearConstraint.build({(0, 1): 1, (1, 0): -1}, Relation.EQUAL, 0),
            LinearConstraint.build({(0, 1): -2, (1, 0): 2}, Relation.EQUAL, 0),
            LinearConstraint.build({}, Relation.EQUAL, 0),
            LinearConstraint.build({(0, 0): 1}, Relation.GREATER_EQUAL, 0),
            LinearConstraint.build({(0, 0): 3}, Relation.GREATER_EQUAL, 0),
        ],
    )
    assert len(canonicalize(L)) == 2


def test_constraint_json_roundtrip():
    L = build_pure_involution(4)
    doc = L.to_json()
    assert ConstraintSet.from_json(doc) == L
    assert all(isinstance(c[2], str) and "/" in c[2] for l in doc["constraints"] for c in l["coeffs"])
    with pytest.raises(DimensionMismatchError):
        ConstraintSet.from_json({"n": 2, "constraints": [{"coeffs": [[0, 5, "1/1"]], "rel": "eq", "rhs": "0/1"}]})
    with pytest.raises(ParseError):
        ConstraintSet.from_json({"constraints": []})


def test_zero_coefficients_are_dropped():
    l = LinearConstraint.build({(0, 0): 0, (0, 1): 1}, Relation.EQUAL, 1)
    assert l.coeffs == (((0, 1), Fraction(1)),)
