from __future__ import annotations

from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lpperm.errors import DimensionMismatchError, ParseError
from lpperm.matrix import RationalMatrix, format_rational, parse_vector, to_rational
from lpperm.permutation import Permutation, matrix_to_perm, parse_permutation, perm_to_matrix

perms = st.integers(1, 7).flatmap(lambda n: st.permutations(list(range(n)))).map(lambda p: Permutation(tuple(p)))


def test_rationals_are_exact_and_reject_floats():
    assert to_rational("6/4") == Fraction(3, 2)
    assert format_rational(Fraction(6, 4)) == "3/2"
    assert format_rational(Fraction(-2)) == "-2/1"
    with pytest.raises(ParseError):
        to_rational(0.5)
    with pytest.raises(ParseError):
        to_rational(True)
    with pytest.raises(ParseError):
        to_rational("1/0")
    assert parse_vector("1/2, 3,-4/5") == (Fraction(1, 2), Fraction(3), Fraction(-4, 5))


def test_matrix_arithmetic():
    A = RationalMatrix.from_rows([[1, 2], [3, 4]])
    B = RationalMatrix.identity(2)
    assert A @ B == A
    assert (A + A) == A.scale(2)
    assert (A - A) == RationalMatrix.zeros(2)
    assert A.transpose()[0, 1] == 3
    assert A.apply([1, "1/2"]) == (Fraction(2), Fraction(5))
    assert RationalMatrix.from_json(A.to_json()) == A
    with pytest.raises(DimensionMismatchError):
        A @ RationalMatrix.zeros(3)
    with pytest.raises(DimensionMismatchError):
        RationalMatrix.from_rows([[1, 2], [3]])


def test_perm_to_matrix_examples():
    assert perm_to_matrix(Permutation.identity(3)) == RationalMatrix.identity(3)
    assert perm_to_matrix(Permutation((1, 0))) == RationalMatrix.from_rows([[0, 1], [1, 0]])
    # entry (i, σ(i)) is one
    X = perm_to_matrix(Permutation((2, 0, 1)))
    assert X[0, 2] == 1 and X[1, 0] == 1 and X[2, 1] == 1


def test_composition_convention_on_s3():
    """X^a X^b equals the matrix of a*b, where a*b applies a first; settled over all of S3."""
    group = [Permutation(p) for p in permutations(range(3))]
    for a in group:
        for b in group:
            assert perm_to_matrix(a) @ perm_to_matrix(b) == perm_to_matrix(a * b)
            assert (a * b) == b.after(a)


@given(perms)
def test_inverse_and_roundtrip(p):
    assert (p * p.inverse()).is_identity()
    assert matrix_to_perm(perm_to_matrix(p)) == p
    assert perm_to_matrix(p.inverse()) == perm_to_matrix(p).transpose()


@given(perms)
def test_inversions_match_quadratic_count(p):
    n = p.degree
    assert p.inversions() == sum(1 for i in range(n) for j in range(i + 1, n) if p(i) > p(j))


@given(perms)
def test_permute_vector_matches_matrix(p):
    v = [Fraction(3 * i + 1, 2) for i in range(p.degree)]
    assert p.permute_vector(v) == perm_to_matrix(p).apply(v)


def test_invalid_permutations():
    with pytest.raises(ParseError):
        Permutation((0, 0))
    with pytest.raises(ParseError):
        matrix_to_perm(RationalMatrix.from_rows([[1, 0], [1, 0]]))
    with pytest.raises(ParseError):
        matrix_to_perm(RationalMatrix.from_rows([["1/2", "1/2"], ["1/2", "1/2"]]))
    assert parse_permutation("0,2,1,3") == Permutation((0, 2, 1, 3))
    with pytest.raises(ParseError):
        parse_permutation("0,x")
