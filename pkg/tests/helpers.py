"""Shared oracles for the tests; none of them touch the enumeration or simplex code."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations, permutations
from typing import List, Optional, Sequence, Tuple

from lpperm.matrix import RationalMatrix
from lpperm.permutation import Permutation, perm_to_matrix


def all_permutation_matrices(n: int) -> List[RationalMatrix]:
    return [perm_to_matrix(Permutation(p)) for p in permutations(range(n))]


def random_fraction(rng: random.Random, span: int = 20, den: int = 7) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, den))


def convex_combination(points: Sequence[RationalMatrix], rng: random.Random) -> RationalMatrix:
    weights = [Fraction(rng.randint(1, 9)) for _ in points]
    total = sum(weights)
    out = RationalMatrix.zeros(points[0].rows, points[0].cols)
    for w, P in zip(weights, points):
        out = out + P.scale(w / total)
    return out


def solve_square(A: List[List[Fraction]], b: List[Fraction]) -> Optional[List[Fraction]]:
    """Plain Gauss-Jordan on a square system; None when singular."""
    n = len(A)
    M = [list(row) + [rhs] for row, rhs in zip(A, b)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            return None
        M[c], M[piv] = M[piv], M[c]
        p = M[c][c]
        M[c] = [v / p for v in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [a - f * w for a, w in zip(M[r], M[c])]
    return [M[r][n] for r in range(n)]


def naive_lp_max(
    c: Sequence[Fraction], rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]
) -> Tuple[Optional[Fraction], List[Tuple[Fraction, ...]]]:
    """max c·x over {rows·x >= rhs} in few variables by intersecting every n-subset.

    Returns (optimum, vertex list); the region must be bounded for the optimum
    to be meaningful.
    """
    n = len(c)
    best = None
    verts = []
    for subset in combinations(range(len(rows)), n):
        x = solve_square([list(rows[i]) for i in subset], [rhs[i] for i in subset])
        if x is None:
            continue
        if all(sum(a * v for a, v in zip(r, x)) >= b for r, b in zip(rows, rhs)):
            t = tuple(x)
            if t not in verts:
                verts.append(t)
            val = sum(a * v for a, v in zip(c, x))
            if best is None or val > best:
                best = val
    return best, verts


def rational_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Rank by straightforward Fraction elimination."""
    M = [list(r) for r in rows]
    rank = 0
    width = len(M[0]) if M else 0
    for c in range(width):
        piv = next((r for r in range(rank, len(M)) if M[r][c] != 0), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        for r in range(len(M)):
            if r != rank and M[r][c] != 0:
                f = M[r][c] / M[rank][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[rank])]
        rank += 1
    return rank


def is_basic_point(L, X) -> bool:
    """X is feasible and the constraints tight at X pin down all n² entries."""
    n = L.n
    if not all(l.holds(X) for l in L.constraints):
        return False
    tight = []
    for l in L.constraints:
        if l.evaluate(X) == l.rhs:
            row = [Fraction(0)] * (n * n)
            for (i, j), c in l.coeffs:
                row[i * n + j] = c
            tight.append(row)
    return rational_rank(tight) == n * n


def wreath_group(local: Sequence[Permutation], R: int) -> set:
    """Aut(Γ) ≀ S_R as permutations of νR points: block i goes to block top(i) through g_i."""
    nu = local[0].degree
    out = set()
    for top in permutations(range(R)):
        stack = [()]
        for _ in range(R):
            stack = [s + (g,) for s in stack for g in local]
        for gs in stack:
            out.add(Permutation(tuple(top[i] * nu + gs[i](a) for i in range(R) for a in range(nu))))
    return out
