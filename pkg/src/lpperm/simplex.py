"""Exact two-phase simplex with Bland's rule.

The tableau is kept as Python integers using fraction-free (integer) pivoting:
each stored row equals ``det`` times the true tableau row, where ``det`` is the
determinant of the current basis.  Every update divides exactly, so no
Fraction objects appear inside the pivot loop.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from ._linalg import integer_row, lcm

SparseRow = Mapping[int, Fraction]
Row = Union[Sequence[Fraction], SparseRow]


class LPStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: LPStatus
    x: Optional[Tuple[Fraction, ...]]
    objective: Optional[Fraction]
    unique: bool
    pivots: int


def _items(row: Row) -> List[Tuple[int, Fraction]]:
    if isinstance(row, Mapping):
        return [(int(k), Fraction(v)) for k, v in row.items() if v]
    return [(k, Fraction(v)) for k, v in enumerate(row) if v]


def _pivot(T: List[List[int]], obj: List[int], r: int, s: int, det: int) -> int:
    prow = T[r]
    p = prow[s]
    for i in range(len(T)):
        if i == r:
            continue
        row = T[i]
        f = row[s]
        if f:
            T[i] = [(v * p - f * w) // det for v, w in zip(row, prow)]
        elif p != det:
            T[i] = [v * p // det for v in row]
    f = obj[s]
    if f:
        obj[:] = [(v * p - f * w) // det for v, w in zip(obj, prow)]
    elif p != det:
        obj[:] = [v * p // det for v in obj]
    if p < 0:
        for i in range(len(T)):
            T[i] = [-v for v in T[i]]
        obj[:] = [-v for v in obj]
        p = -p
    return p


def _bland(T: List[List[int]], obj: List[int], basis: List[int], det: int, ncols: int) -> Tuple[str, int, int]:
    """Iterate to optimality; returns (outcome, det, pivot count)."""
    pivots = 0
    while True:
        s = -1
        for j in range(ncols):
            if obj[j] < 0:
                s = j
                break
        if s < 0:
            return "optimal", det, pivots
        r = -1
        best_num = best_den = 0
        for i, row in enumerate(T):
            a = row[s]
            if a > 0:
                num = row[-1]
                if r < 0:
                    r, best_num, best_den = i, num, a
                    continue
                lhs, rhs = num * best_den, best_num * a
                if lhs < rhs or (lhs == rhs and basis[i] < basis[r]):
                    r, best_num, best_den = i, num, a
        if r < 0:
            return "unbounded", det, pivots
        det = _pivot(T, obj, r, s, det)
        basis[r] = s
        pivots += 1


class ExactLP:
    """Maximize c·x subject to equality rows and >= rows, all rational.

    Rows of the form ``c·x_k >= 0`` with c > 0 become sign bounds; variables
    without such a bound are split into positive and negative parts.  Phase 1
    runs once at construction; each ``maximize`` call restarts phase 2 from the
    stored feasible basis.
    """

    def __init__(
        self,
        n_vars: int,
        eq_rows: Sequence[Row],
        eq_rhs: Sequence[Fraction],
        ge_rows: Sequence[Row],
        ge_rhs: Sequence[Fraction],
    ) -> None:
        self.n_vars = n_vars
        eqs = [(_items(r), Fraction(b)) for r, b in zip(eq_rows, eq_rhs)]
        ges = [(_items(r), Fraction(b)) for r, b in zip(ge_rows, ge_rhs)]
        nonneg = [False] * n_vars
        general = []
        for items, b in ges:
            if len(items) == 1 and items[0][1] > 0 and b == 0:
                nonneg[items[0][0]] = True
            else:
                general.append((items, b))
        # column layout: one column per bounded variable, two per free variable, one slack per general row
        self._columns: List[List[Tuple[int, int]]] = []
        self._partner: Dict[int, int] = {}
        ncols = 0
        for v in range(n_vars):
            if nonneg[v]:
                self._columns.append([(ncols, 1)])
                ncols += 1
            else:
                self._columns.append([(ncols, 1), (ncols + 1, -1)])
                self._partner[ncols] = ncols + 1
                self._partner[ncols + 1] = ncols
                ncols += 2
        rows: List[Tuple[Dict[int, Fraction], Fraction]] = []
        for items, b in eqs:
            rows.append((self._expand(items), b))
        for items, b in general:
            coeffs = self._expand(items)
            coeffs[ncols] = Fraction(-1)
            ncols += 1
            rows.append((coeffs, b))
        self.ncols = ncols
        self.infeasible = False
        T: List[List[int]] = []
        for coeffs, b in rows:
            if not coeffs:
                if b != 0:
                    self.infeasible = True
                continue
            dense = [Fraction(0)] * (ncols + 1)
            for k, v in coeffs.items():
                dense[k] = v
            dense[ncols] = b
            ints = integer_row(dense)
            if ints[-1] < 0:
                ints = [-v for v in ints]
            T.append(ints)
        self._phase_one(T)

    def _expand(self, items: List[Tuple[int, Fraction]]) -> Dict[int, Fraction]:
        out: Dict[int, Fraction] = {}
        for v, c in items:
            for col, sign in self._columns[v]:
                out[col] = out.get(col, Fraction(0)) + sign * c
        return {k: c for k, c in out.items() if c}

    def _phase_one(self, T: List[List[int]]) -> None:
        ncols = self.ncols
        basis = [ncols + i for i in range(len(T))]
        det = 1
        obj = [0] * (ncols + 1)
        for row in T:
            for k in range(ncols + 1):
                obj[k] -= row[k]
        if not self.infeasible and T:
            _, det, _ = _bland(T, obj, basis, det, ncols)
            if obj[-1] < 0:
                self.infeasible = True
        if not self.infeasible:
            redundant = []
            for i in range(len(T)):
                if basis[i] < ncols:
                    continue
                j = next((k for k in range(ncols) if T[i][k] != 0), -1)
                if j < 0:
                    redundant.append(i)
                    continue
                det = _pivot(T, obj, i, j, det)
                basis[i] = j
            keep = [i for i in range(len(T)) if i not in set(redundant)]
            T = [T[i] for i in keep]
            basis = [basis[i] for i in keep]
        self._T = tuple(tuple(row) for row in T)
        self._basis = tuple(basis)
        self._det = det

    @property
    def rank(self) -> int:
        return len(self._basis)

    def maximize(self, c: Row) -> LPResult:
        if self.infeasible:
            return LPResult(LPStatus.INFEASIBLE, None, None, False, 0)
        ncols = self.ncols
        cost = [Fraction(0)] * ncols
        for v, coef in _items(c):
            for col, sign in self._columns[v]:
                cost[col] += sign * coef
        den = 1
        for v in cost:
            den = lcm(den, v.denominator)
        cc = [int(v * den) for v in cost]
        det = self._det
        T = [list(row) for row in self._T]
        basis = list(self._basis)
        obj = [-cc[j] * det for j in range(ncols)] + [0]
        for i, row in enumerate(T):
            cb = cc[basis[i]]
            if cb:
                obj = [o + cb * v for o, v in zip(obj, row)]
        outcome, det, pivots = _bland(T, obj, basis, det, ncols)
        if outcome == "unbounded":
            return LPResult(LPStatus.UNBOUNDED, None, None, False, pivots)
        values = [Fraction(0)] * ncols
        for i, row in enumerate(T):
            values[basis[i]] = Fraction(row[-1], det)
        x = tuple(
            sum((sign * values[col] for col, sign in cols), Fraction(0)) for cols in self._columns
        )
        in_basis = set(basis)
        # a nonbasic column whose split partner is basic carries no alternative direction
        unique = all(
            obj[j] > 0
            for j in range(ncols)
            if j not in in_basis and self._partner.get(j) not in in_basis
        )
        return LPResult(LPStatus.OPTIMAL, x, Fraction(obj[-1], det * den), unique, pivots)


SparseTuple = Tuple[Tuple[int, Fraction], ...]


def _sparse(row: Row) -> SparseTuple:
    return tuple(sorted(_items(row)))


@dataclass(frozen=True)
class LPProblem:
    """A standalone LP: maximize objective·y subject to equality and >= rows."""

    variables: int
    objective: Tuple[Fraction, ...]
    eq_rows: Tuple[SparseTuple, ...]
    eq_rhs: Tuple[Fraction, ...]
    ge_rows: Tuple[SparseTuple, ...]
    ge_rhs: Tuple[Fraction, ...]

    @classmethod
    def build(
        cls,
        variables: int,
        objective: Sequence[Fraction],
        eq: Sequence[Tuple[Row, Fraction]] = (),
        ge: Sequence[Tuple[Row, Fraction]] = (),
    ) -> "LPProblem":
        return cls(
            variables,
            tuple(Fraction(v) for v in objective),
            tuple(_sparse(r) for r, _ in eq),
            tuple(Fraction(b) for _, b in eq),
            tuple(_sparse(r) for r, _ in ge),
            tuple(Fraction(b) for _, b in ge),
        )

    @property
    def constraint_count(self) -> int:
        return len(self.eq_rows) + len(self.ge_rows)

    def solve(self) -> LPResult:
        lp = ExactLP(
            self.variables,
            [dict(r) for r in self.eq_rows],
            self.eq_rhs,
            [dict(r) for r in self.ge_rows],
            self.ge_rhs,
        )
        return lp.maximize(self.objective)
