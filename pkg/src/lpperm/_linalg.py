"""Exact linear algebra helpers over the rationals and the integers."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import List, Optional, Sequence, Tuple

# A Mersenne prime; rank modulo p never exceeds the rank over Q.
_PRIME = (1 << 61) - 1


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def integer_row(values: Sequence[Fraction]) -> List[int]:
    """Scale a rational row by a positive factor so it becomes a primitive integer row."""
    den = 1
    for v in values:
        den = lcm(den, v.denominator)
    ints = [int(v * den) for v in values]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return ints


def primitive(row: List[int]) -> List[int]:
    g = 0
    for v in row:
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return [v // g for v in row]
    return row


def rref(rows: Sequence[Sequence[Fraction]], ncols: int) -> Tuple[List[List[Fraction]], List[int]]:
    """Reduced row echelon form over the first ``ncols`` columns.

    Extra trailing columns (e.g. a right-hand side) are carried along but never
    chosen as pivots.  Zero rows are dropped from the result.
    """
    mat = [list(r) for r in rows]
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(mat)):
            if mat[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        prow = mat[r]
        inv = 1 / prow[c]
        if inv != 1:
            prow = [v * inv for v in prow]
            mat[r] = prow
        nz = [k for k in range(c, len(prow)) if prow[k] != 0]
        for i in range(len(mat)):
            if i != r:
                f = mat[i][c]
                if f != 0:
                    row = mat[i]
                    for k in nz:
                        row[k] -= f * prow[k]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    out = [row for row in mat[:r]]
    # rows beyond r are zero on the first ncols columns; keep inconsistent ones
    for row in mat[r:]:
        if any(v != 0 for v in row):
            out.append(row)
    return out, pivots


def rank_mod_p(rows: Sequence[Sequence[int]], ncols: int) -> int:
    """Rank of an integer matrix modulo a large prime (a lower bound on the rational rank)."""
    mat = [[v % _PRIME for v in row] for row in rows]
    rank = 0
    for c in range(ncols):
        piv = None
        for i in range(rank, len(mat)):
            if mat[i][c]:
                piv = i
                break
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        prow = mat[rank]
        inv = pow(prow[c], _PRIME - 2, _PRIME)
        prow = [(v * inv) % _PRIME for v in prow]
        mat[rank] = prow
        for i in range(rank + 1, len(mat)):
            f = mat[i][c]
            if f:
                row = mat[i]
                mat[i] = [(a - f * b) % _PRIME for a, b in zip(row, prow)]
        rank += 1
        if rank == len(mat):
            break
    return rank


def exact_rank(rows: Sequence[Sequence[Fraction]], ncols: int) -> int:
    if not rows:
        return 0
    reduced, pivots = rref(rows, ncols)
    return len(pivots)


def certified_rank_at_least(rows: Sequence[Sequence[int]], ncols: int, target: int) -> bool:
    """Decide exactly whether an integer matrix has rank >= ``target``."""
    if len(rows) < target:
        return False
    if rank_mod_p(rows, ncols) >= target:
        return True
    return exact_rank([[Fraction(v) for v in row] for row in rows], ncols) >= target


def solve_affine(
    rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction], ncols: int
) -> Optional[Tuple[List[Fraction], List[List[Fraction]], List[int], List[int], List[List[Fraction]]]]:
    """Parameterize {x : rows·x = rhs}.

    Returns ``(particular, basis, pivots, free, reduced)`` where ``basis`` holds one
    null-space vector per free column, or None when the system is inconsistent.
    ``reduced`` is the RREF of the augmented system restricted to pivot rows.
    """
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    reduced, pivots = rref(aug, ncols)
    for row in reduced[len(pivots):]:
        if row[ncols] != 0:
            return None
    reduced = reduced[: len(pivots)]
    piv_set = set(pivots)
    free = [c for c in range(ncols) if c not in piv_set]
    particular = [Fraction(0)] * ncols
    for row, p in zip(reduced, pivots):
        particular[p] = row[ncols]
    basis: List[List[Fraction]] = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for row, p in zip(reduced, pivots):
            if row[f] != 0:
                vec[p] = -row[f]
        basis.append(vec)
    return particular, basis, pivots, free, reduced
