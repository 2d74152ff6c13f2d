"""Exact vertex enumeration, compactness verification and fractional-vertex probing."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd
from typing import Any, Dict, List, Optional, Sequence, Set, Tuple

from ._linalg import certified_rank_at_least, exact_rank, integer_row, solve_affine
from .constraints import (
    ConstraintSet,
    LinearConstraint,
    Relation,
    build_doubly_stochastic,
    column_sum_index,
    positivity_index,
    row_sum_index,
)
from .errors import BudgetExceededError, NotDoublyStochasticError
from .matrix import RationalMatrix
from .simplex import ExactLP, LPStatus

DEFAULT_LIMIT = 10 ** 7
# above this many candidate subsets the double-description engine is preferred
ACTIVE_SET_CROSSOVER = 60_000
PROBE_RANGE = 10 ** 6


class Verdict(Enum):
    COMPACT = "COMPACT"
    NOT_COMPACT = "NOT_COMPACT"
    UNKNOWN = "UNKNOWN"


class Method(Enum):
    EXHAUSTIVE = "EXHAUSTIVE"
    PROBE = "PROBE"


def _flat_rows(constraints: Sequence[LinearConstraint], n: int) -> List[Dict[int, Fraction]]:
    return [{i * n + j: c for (i, j), c in l.coeffs} for l in constraints]


@dataclass(frozen=True)
class PolytopeModel:
    """Normal form of {X : X ⊨ L} over the flattened variable x = vec(X).

    Points are parameterized as x = particular + Σ_k t_k basis[k]; the
    parameters t are the values of the free columns of the equality system.
    """

    n: int
    equalities: Tuple[Dict[int, Fraction], ...]
    eq_rhs: Tuple[Fraction, ...]
    inequalities: Tuple[Dict[int, Fraction], ...]
    ineq_rhs: Tuple[Fraction, ...]
    rank: int
    particular: Tuple[Fraction, ...]
    basis: Tuple[Tuple[Fraction, ...], ...]
    free: Tuple[int, ...]
    empty: bool
    # each inequality rewritten over t as a primitive integer row [a_1..a_d, b] meaning a·t >= b
    reduced: Tuple[Tuple[int, ...], ...] = field(repr=False)

    @property
    def dimension(self) -> int:
        """Reduced dimension d = n² − rank(E)."""
        return self.n * self.n - self.rank

    def point(self, t: Sequence[Fraction]) -> RationalMatrix:
        x = list(self.particular)
        for tk, vec in zip(t, self.basis):
            if tk:
                for idx, v in enumerate(vec):
                    if v:
                        x[idx] += tk * v
        return RationalMatrix.from_flat(x, self.n)


def _reduce_row(
    row: Dict[int, Fraction], rhs: Fraction, particular: Sequence[Fraction], basis: Sequence[Sequence[Fraction]]
) -> Tuple[int, ...]:
    a = [sum((c * vec[k] for k, c in row.items() if vec[k]), Fraction(0)) for vec in basis]
    b = rhs - sum((c * particular[k] for k, c in row.items()), Fraction(0))
    return tuple(integer_row(a + [b]))


@lru_cache(maxsize=256)
def model(L: ConstraintSet) -> PolytopeModel:
    """Split L, parameterize the equality null-space exactly and detect emptiness."""
    n = L.n
    nv = n * n
    eqs = L.equalities()
    ineqs = L.inequalities()
    E = _flat_rows(eqs, n)
    G = _flat_rows(ineqs, n)
    dense = [[row.get(k, Fraction(0)) for k in range(nv)] for row in E]
    solved = solve_affine(dense, [l.rhs for l in eqs], nv)
    if solved is None:
        return PolytopeModel(
            n, tuple(E), tuple(l.rhs for l in eqs), tuple(G), tuple(l.rhs for l in ineqs),
            exact_rank(dense, nv), (Fraction(0),) * nv, (), (), True, (),
        )
    particular, basis, pivots, free, _ = solved
    reduced = tuple(_reduce_row(row, l.rhs, particular, basis) for row, l in zip(G, ineqs))
    empty = lp_for(L).infeasible
    return PolytopeModel(
        n,
        tuple(E),
        tuple(l.rhs for l in eqs),
        tuple(G),
        tuple(l.rhs for l in ineqs),
        len(pivots),
        tuple(particular),
        tuple(tuple(v) for v in basis),
        tuple(free),
        empty,
        reduced,
    )


@lru_cache(maxsize=256)
def lp_for(L: ConstraintSet) -> ExactLP:
    """Exact LP over the flattened variable of L with phase 1 already solved."""
    n = L.n
    eqs = L.equalities()
    ineqs = L.inequalities()
    return ExactLP(
        n * n,
        _flat_rows(eqs, n),
        [l.rhs for l in eqs],
        _flat_rows(ineqs, n),
        [l.rhs for l in ineqs],
    )


@dataclass(frozen=True)
class VertexSet:
    """Deduplicated exact vertices in canonical (flattened lexicographic) order."""

    vertices: Tuple[RationalMatrix, ...]
    complete: bool = True
    engine: str = "active-set"

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def as_set(self) -> Set[RationalMatrix]:
        return set(self.vertices)

    def to_json(self) -> Dict[str, Any]:
        return {"complete": self.complete, "vertices": [v.to_json() for v in self.vertices]}

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "VertexSet":
        return cls(tuple(RationalMatrix.from_json(v) for v in data["vertices"]), bool(data["complete"]))


def implicit_equalities(L: ConstraintSet) -> List[int]:
    """Indices (into L.inequalities()) of inequalities that are tight on every feasible point."""
    ineqs = L.inequalities()
    lp = lp_for(L)
    if lp.infeasible:
        return []
    rows = _flat_rows(ineqs, L.n)
    undecided = set(range(len(ineqs)))
    implicit = []
    while undecided:
        k = min(undecided)
        res = lp.maximize(rows[k])
        if res.status is LPStatus.UNBOUNDED:
            undecided.discard(k)
            continue
        if res.objective == ineqs[k].rhs:
            implicit.append(k)
            undecided.discard(k)
            continue
        x = res.x
        for i in list(undecided):
            value = sum((c * x[v] for v, c in rows[i].items()), Fraction(0))
            if value > ineqs[i].rhs:
                undecided.discard(i)
    return sorted(implicit)


def _dominated_by_positivity(l: LinearConstraint, positive: Set[Tuple[int, int]]) -> bool:
    """A >= row with positive coefficients on sign-constrained entries and rhs <= 0 is redundant."""
    return (
        len(l.coeffs) > 1
        and l.rhs <= 0
        and all(c > 0 and idx in positive for idx, c in l.coeffs)
    )


def affine_hull_form(L: ConstraintSet) -> ConstraintSet:
    """Same polytope with implicit equalities promoted and positivity-implied rows dropped."""
    implicit = set(implicit_equalities(L))
    positive = {p for p in map(positivity_index, L.constraints) if p is not None}
    out = []
    k = 0
    for l in L.constraints:
        if l.is_equality:
            out.append(l)
            continue
        if k in implicit:
            out.append(LinearConstraint(l.coeffs, Relation.EQUAL, l.rhs, l.label))
        elif not _dominated_by_positivity(l, positive):
            out.append(l)
        k += 1
    if len(out) == len(L.constraints) and not implicit:
        return L
    return ConstraintSet(L.n, tuple(out))


def _distinct_rows(M: PolytopeModel) -> List[List[int]]:
    """Deduplicated integer inequality rows over t; the tightest copy of each direction is kept."""
    d = M.dimension
    best: Dict[Tuple[int, ...], Fraction] = {}
    for row in M.reduced:
        a, b = row[:d], row[d]
        g = 0
        for v in a:
            g = gcd(g, v)
        if g == 0:
            continue
        key = tuple(v // g for v in a)
        bound = Fraction(b, g)
        if key not in best or bound > best[key]:
            best[key] = bound
    out = []
    for key in sorted(best):
        bound = best[key]
        out.append([v * bound.denominator for v in key] + [bound.numerator])
    return out


def _active_set(rows: List[List[int]], d: int) -> List[Tuple[Fraction, ...]]:
    """All points where d linearly independent rows are tight and every row holds.

    Depth-first over index-increasing subsets, maintaining a fraction-free reduced
    echelon basis so each extension costs O(k·d); dependent extensions are pruned.
    """
    m = len(rows)
    found: Set[Tuple[Fraction, ...]] = set()

    def feasible(point_num: List[int], den: int) -> bool:
        for row in rows:
            s = 0
            for k in range(d):
                if row[k]:
                    s += row[k] * point_num[k]
            if s < row[d] * den:
                return False
        return True

    def extend(start: int, basis: List[Tuple[int, List[int]]]) -> None:
        k = len(basis)
        if k == d:
            den = 1
            for p, e in basis:
                den = den * abs(e[p]) // gcd(den, abs(e[p]))
            num = [0] * d
            for p, e in basis:
                num[p] = e[d] * den // e[p]
            if feasible(num, den):
                found.add(tuple(Fraction(v, den) for v in num))
            return
        for idx in range(start, m - (d - k) + 1):
            r = rows[idx]
            for p, e in basis:
                f = r[p]
                if f:
                    ep = e[p]
                    r = [ep * x - f * y for x, y in zip(r, e)]
            piv = -1
            for c in range(d):
                if r[c]:
                    piv = c
                    break
            if piv < 0:
                continue
            g = 0
            for v in r:
                g = gcd(g, v)
            if g > 1:
                r = [v // g for v in r]
            rp = r[piv]
            new_basis = []
            for p, e in basis:
                f = e[piv]
                if f:
                    e = [rp * x - f * y for x, y in zip(e, r)]
                    g = 0
                    for v in e:
                        g = gcd(g, v)
                    if g > 1:
                        e = [v // g for v in e]
                new_basis.append((p, e))
            new_basis.append((piv, r))
            extend(idx + 1, new_basis)

    if d == 0:
        if all(row[0] <= 0 for row in rows):
            found.add(())
    elif m >= d:
        extend(0, [])
    return sorted(found)


def _double_description(L: ConstraintSet) -> List[RationalMatrix]:
    """Vertices via the exact double-description method of cddlib (fraction mode).

    The sparse constraints over the flattened variable are handed over directly,
    equalities as linearity rows; cddlib is markedly faster on this form than on
    the dense rows of the null-space parameterization.
    """
    import cdd

    n = L.n
    nv = n * n
    rows, lin = [], []
    for l in L.constraints:
        row = [Fraction(0)] * (nv + 1)
        row[0] = -l.rhs
        for (i, j), c in l.coeffs:
            row[1 + i * n + j] = c
        if l.is_equality:
            lin.append(len(rows))
        rows.append(row)
    mat = cdd.Matrix(rows, number_type="fraction")
    mat.rep_type = cdd.RepType.INEQUALITY
    if lin:
        mat.lin_set = frozenset(lin)
    gens = cdd.Polyhedron(mat).get_generators()
    out = []
    for k in range(gens.row_size):
        g = gens[k]
        if g[0] == 1 and k not in gens.lin_set:
            out.append(RationalMatrix.from_flat([Fraction(v) for v in g[1:]], n))
    return out


def _cdd_available() -> bool:
    try:
        import cdd  # noqa: F401
    except ImportError:
        return False
    return True


def candidate_count(L: ConstraintSet) -> Tuple[int, int, int]:
    """(m, d, C(m, d)) for the active-set search after exact reductions."""
    M = model(affine_hull_form(L))
    rows = _distinct_rows(M)
    d = M.dimension
    return len(rows), d, comb(len(rows), d)


def enumerate_vertices(L: ConstraintSet, limit: int = DEFAULT_LIMIT, method: str = "auto") -> VertexSet:
    """All vertices of {X : X ⊨ L}.

    ``method`` is "active-set", "double-description" or "auto".  The active-set
    search refuses to start when C(m, d) exceeds ``limit``; under "auto" large
    instances go to the exact double-description engine when it is installed.
    """
    if model(L).empty:
        return VertexSet((), True, "empty")
    H = affine_hull_form(L)
    M = model(H)
    rows = _distinct_rows(M)
    d = M.dimension
    budget = comb(len(rows), d) if len(rows) >= d else 0
    if method == "auto":
        if budget <= min(limit, ACTIVE_SET_CROSSOVER) or not _cdd_available():
            method = "active-set"
        else:
            method = "double-description"
    if method == "active-set":
        if budget > limit:
            raise BudgetExceededError(
                f"active-set search needs C({len(rows)},{d}) = {budget} candidates > limit {limit}; "
                "use probe_fractional for a randomized search"
            )
        vertices = {M.point(t) for t in _active_set(rows, d)}
    elif method == "double-description":
        vertices = set(_double_description(H))
    else:
        raise ValueError(f"unknown enumeration method {method!r}")
    vertices = sorted(vertices, key=lambda X: X.flat())
    for X in vertices:
        if not all(l.holds(X) for l in L.constraints):
            raise AssertionError("enumeration produced an infeasible point")
    return VertexSet(tuple(vertices), True, method)


def is_vertex(L: ConstraintSet, X: RationalMatrix) -> bool:
    """X is feasible and its tight constraints have full rank d over the null-space."""
    if not all(l.holds(X) for l in L.constraints):
        return False
    M = model(L)
    d = M.dimension
    tight = [row[:d] for row, l in zip(M.reduced, L.inequalities()) if l.evaluate(X) == l.rhs]
    return certified_rank_at_least([list(r) for r in tight], d, d) if d else True


def is_permutation_matrix(X: RationalMatrix) -> bool:
    if not X.is_square:
        return False
    n = X.rows
    cols = [0] * n
    for row in X.entries:
        ones = 0
        for j, v in enumerate(row):
            if v == 1:
                ones += 1
                cols[j] += 1
            elif v != 0:
                return False
        if ones != 1:
            return False
    return all(c == 1 for c in cols)


def implies_doubly_stochastic(L: ConstraintSet) -> bool:
    """Every row sum, column sum and positivity constraint of size n is implied by L."""
    n = L.n
    present = set()
    for l in L.constraints:
        r = row_sum_index(l, n)
        if r is not None:
            present.add(("row", r))
        c = column_sum_index(l, n)
        if c is not None:
            present.add(("col", c))
        p = positivity_index(l)
        if p is not None:
            present.add(("pos", p))
    lp = lp_for(L)
    if lp.infeasible:
        return True
    for l in build_doubly_stochastic(n).constraints:
        r, c, p = row_sum_index(l, n), column_sum_index(l, n), positivity_index(l)
        key = ("row", r) if r is not None else ("col", c) if c is not None else ("pos", p)
        if key in present:
            continue
        row = {i * n + j: v for (i, j), v in l.coeffs}
        hi = lp.maximize({k: -v for k, v in row.items()})
        if hi.status is not LPStatus.OPTIMAL or -hi.objective < l.rhs:
            return False
        if l.is_equality:
            top = lp.maximize(row)
            if top.status is not LPStatus.OPTIMAL or top.objective != l.rhs:
                return False
    return True


@dataclass(frozen=True)
class CompactnessReport:
    verdict: Verdict
    fractional_witness: Optional[RationalMatrix]
    vertex_count: Optional[int]
    method: Method
    vertices: Optional[VertexSet] = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        if self.verdict is Verdict.NOT_COMPACT and self.fractional_witness is None:
            raise ValueError("NOT_COMPACT needs a witness")
        if self.verdict is Verdict.COMPACT and self.method is not Method.EXHAUSTIVE:
            raise ValueError("COMPACT requires exhaustive enumeration")

    def to_json(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"verdict": self.verdict.value, "vertex_count": self.vertex_count}
        out["method"] = self.method.value
        if self.fractional_witness is not None:
            out["witness"] = self.fractional_witness.to_json()
        return out


def check_compact(
    L: ConstraintSet,
    limit: int = DEFAULT_LIMIT,
    probe_trials: int = 200,
    seed: int = 0,
    method: str = "auto",
) -> CompactnessReport:
    """Decide whether every vertex of the polytope of L is a permutation matrix."""
    if not implies_doubly_stochastic(L):
        raise NotDoublyStochasticError("constraint set does not imply double stochasticity")
    try:
        vs = enumerate_vertices(L, limit, method)
    except BudgetExceededError:
        witness = probe_fractional(L, probe_trials, seed)
        if witness is None:
            return CompactnessReport(Verdict.UNKNOWN, None, None, Method.PROBE)
        return CompactnessReport(Verdict.NOT_COMPACT, witness, None, Method.PROBE)
    fractional = [V for V in vs.vertices if not is_permutation_matrix(V)]
    if fractional:
        return CompactnessReport(Verdict.NOT_COMPACT, fractional[0], len(vs), Method.EXHAUSTIVE, vs)
    return CompactnessReport(Verdict.COMPACT, None, len(vs), Method.EXHAUSTIVE, vs)


def probe_fractional(L: ConstraintSet, trials: int, seed: int = 0) -> Optional[RationalMatrix]:
    """Search for a non-permutation vertex by maximizing random integer objectives."""
    lp = lp_for(L)
    if trials <= 0 or lp.infeasible:
        return None
    rng = random.Random(seed)
    nv = L.n * L.n
    for _ in range(trials):
        c = [Fraction(rng.randint(-PROBE_RANGE, PROBE_RANGE)) for _ in range(nv)]
        res = lp.maximize(c)
        if res.status is not LPStatus.OPTIMAL:
            continue
        X = RationalMatrix.from_flat(res.x, L.n)
        if not is_permutation_matrix(X) and is_vertex(L, X):
            return X
    return None
