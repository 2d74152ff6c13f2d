"""Linear constraints over an n×n matrix variable and the basic constraint families."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import (
    DimensionMismatchError,
    InvalidSizeError,
    NotQuasiHomogeneousError,
    ParseError,
)
from .matrix import RationalLike, RationalMatrix, format_rational, to_rational

Index = Tuple[int, int]
Coeffs = Tuple[Tuple[Index, Fraction], ...]


class Relation(Enum):
    EQUAL = "eq"
    GREATER_EQUAL = "ge"


def _canonical_coeffs(items: Iterable[Tuple[Index, RationalLike]]) -> Coeffs:
    acc: Dict[Index, Fraction] = {}
    for (i, j), c in items:
        key = (int(i), int(j))
        acc[key] = acc.get(key, Fraction(0)) + to_rational(c)
    return tuple(sorted((k, v) for k, v in acc.items() if v != 0))


@dataclass(frozen=True)
class LinearConstraint:
    """One constraint ``sum c_ij X_ij  (= or >=)  rhs`` in canonical sparse form."""

    coeffs: Coeffs
    relation: Relation
    rhs: Fraction
    label: str = ""

    @classmethod
    def build(
        cls,
        coeffs: Union[Mapping[Index, RationalLike], Iterable[Tuple[Index, RationalLike]]],
        relation: Relation,
        rhs: RationalLike = 0,
        label: str = "",
    ) -> "LinearConstraint":
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        return cls(_canonical_coeffs(items), relation, to_rational(rhs), label)

    @property
    def is_equality(self) -> bool:
        return self.relation is Relation.EQUAL

    @property
    def support(self) -> Tuple[Index, ...]:
        return tuple(k for k, _ in self.coeffs)

    def max_index(self) -> int:
        return max((max(i, j) for (i, j), _ in self.coeffs), default=-1)

    def evaluate(self, X: RationalMatrix) -> Fraction:
        total = Fraction(0)
        entries = X.entries
        for (i, j), c in self.coeffs:
            v = entries[i][j]
            if v:
                total += c * v
        return total

    def holds(self, X: RationalMatrix) -> bool:
        value = self.evaluate(X)
        if self.relation is Relation.EQUAL:
            return value == self.rhs
        return value >= self.rhs

    def is_trivial(self) -> bool:
        """True for coefficient-free constraints that every matrix satisfies."""
        if self.coeffs:
            return False
        return self.rhs == 0 if self.is_equality else self.rhs <= 0

    def normalized(self) -> Tuple[Coeffs, Relation, Fraction]:
        """Scale-invariant key: leading coefficient 1 (equalities) or ±1 (inequalities)."""
        if not self.coeffs:
            return (), self.relation, self.rhs
        lead = self.coeffs[0][1]
        scale = 1 / lead if self.is_equality else 1 / abs(lead)
        return (
            tuple((k, c * scale) for k, c in self.coeffs),
            self.relation,
            self.rhs * scale,
        )

    def relabel(self, label: str) -> "LinearConstraint":
        return LinearConstraint(self.coeffs, self.relation, self.rhs, label)

    def to_json(self) -> Dict[str, Any]:
        return {
            "coeffs": [[i, j, format_rational(c)] for (i, j), c in self.coeffs],
            "rel": self.relation.value,
            "rhs": format_rational(self.rhs),
            "label": self.label,
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "LinearConstraint":
        try:
            coeffs = [((int(i), int(j)), to_rational(c)) for i, j, c in data["coeffs"]]
            relation = Relation(data["rel"])
            rhs = to_rational(data.get("rhs", "0"))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed constraint: {exc}") from exc
        return cls.build(coeffs, relation, rhs, str(data.get("label", "")))


@dataclass(frozen=True)
class ConstraintSet:
    """A finite ordered list of constraints on an n×n matrix variable."""

    n: int
    constraints: Tuple[LinearConstraint, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InvalidSizeError(f"matrix size must be positive, got {self.n}")
        for l in self.constraints:
            for (i, j), _ in l.coeffs:
                if not (0 <= i < self.n and 0 <= j < self.n):
                    raise DimensionMismatchError(
                        f"constraint {l.label!r} indexes ({i},{j}) outside {self.n}x{self.n}"
                    )

    @classmethod
    def of(cls, n: int, constraints: Iterable[LinearConstraint]) -> "ConstraintSet":
        return cls(n, tuple(constraints))

    def __len__(self) -> int:
        return len(self.constraints)

    def __iter__(self) -> Iterator[LinearConstraint]:
        return iter(self.constraints)

    def union(self, other: Union["ConstraintSet", Iterable[LinearConstraint]]) -> "ConstraintSet":
        if isinstance(other, ConstraintSet):
            if other.n != self.n:
                raise DimensionMismatchError(f"cannot join sizes {self.n} and {other.n}")
            extra = other.constraints
        else:
            extra = tuple(other)
        return ConstraintSet(self.n, self.constraints + tuple(extra))

    def equalities(self) -> List[LinearConstraint]:
        return [l for l in self.constraints if l.is_equality]

    def inequalities(self) -> List[LinearConstraint]:
        return [l for l in self.constraints if not l.is_equality]

    def to_json(self) -> Dict[str, Any]:
        return {"n": self.n, "constraints": [l.to_json() for l in self.constraints]}

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "ConstraintSet":
        if not isinstance(data, Mapping) or "n" not in data:
            raise ParseError("constraint set document needs 'n' and 'constraints'")
        items = data.get("constraints", [])
        return cls(int(data["n"]), tuple(LinearConstraint.from_json(c) for c in items))


def _check_size(n: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise InvalidSizeError(f"matrix size must be a positive integer, got {n!r}")


def row_sum(n: int, i: int) -> LinearConstraint:
    return LinearConstraint.build({(i, j): 1 for j in range(n)}, Relation.EQUAL, 1, f"row-sum[{i}]")


def column_sum(n: int, j: int) -> LinearConstraint:
    return LinearConstraint.build({(i, j): 1 for i in range(n)}, Relation.EQUAL, 1, f"col-sum[{j}]")


def positivity(i: int, j: int) -> LinearConstraint:
    return LinearConstraint.build({(i, j): 1}, Relation.GREATER_EQUAL, 0, f"positivity[{i},{j}]")


def build_doubly_stochastic(n: int) -> ConstraintSet:
    """Row sums, column sums and entrywise positivity: 2n + n² constraints."""
    _check_size(n)
    out = [row_sum(n, i) for i in range(n)]
    out += [column_sum(n, j) for j in range(n)]
    out += [positivity(i, j) for i in range(n) for j in range(n)]
    return ConstraintSet(n, tuple(out))


def build_pure_involution(n: int) -> ConstraintSet:
    """Doubly stochastic, zero trace and symmetric; its permutations are the fixed-point-free involutions."""
    _check_size(n)
    if n % 2:
        raise InvalidSizeError(f"no fixed-point-free involution exists for odd n={n}")
    extra = [LinearConstraint.build({(h, h): 1 for h in range(n)}, Relation.EQUAL, 0, "trace-zero")]
    for i in range(n):
        for j in range(i + 1, n):
            extra.append(
                LinearConstraint.build({(i, j): 1, (j, i): -1}, Relation.EQUAL, 0, f"symmetry[{i},{j}]")
            )
    return build_doubly_stochastic(n).union(extra)


def weak_row_sum(n: int, i: int) -> LinearConstraint:
    items = [((i, j), 1) for j in range(n)] + [((0, j), -1) for j in range(n)]
    return LinearConstraint.build(items, Relation.EQUAL, 0, f"weak-row-sum[{i}]")


def weak_column_sum(n: int, j: int) -> LinearConstraint:
    items = [((i, j), 1) for i in range(n)] + [((i, 0), -1) for i in range(n)]
    return LinearConstraint.build(items, Relation.EQUAL, 0, f"weak-col-sum[{j}]")


def build_weak_sums(n: int) -> ConstraintSet:
    """All row sums equal the first row sum and all column sums equal the first column sum."""
    _check_size(n)
    out = [weak_row_sum(n, i) for i in range(n)] + [weak_column_sum(n, j) for j in range(n)]
    return ConstraintSet(n, tuple(out))


def satisfies(X: RationalMatrix, L: ConstraintSet) -> bool:
    """Exact membership test X ⊨ L."""
    if X.rows != L.n or X.cols != L.n:
        raise DimensionMismatchError(f"matrix is {X.rows}x{X.cols}, constraints are for {L.n}x{L.n}")
    return all(l.holds(X) for l in L.constraints)


def is_homogeneous(l: LinearConstraint) -> bool:
    return l.rhs == 0


def _uniform_sum(l: LinearConstraint) -> bool:
    if l.relation is not Relation.EQUAL or not l.coeffs or l.rhs == 0:
        return False
    return all(c == l.rhs for _, c in l.coeffs)


def row_sum_index(l: LinearConstraint, n: int) -> Optional[int]:
    """Row index i0 if ``l`` is a (scaled) row-sum equality for row i0."""
    if len(l.coeffs) != n or not _uniform_sum(l):
        return None
    rows = {i for (i, _), _c in l.coeffs}
    return rows.pop() if len(rows) == 1 else None


def column_sum_index(l: LinearConstraint, n: int) -> Optional[int]:
    """Column index j0 if ``l`` is a (scaled) column-sum equality for column j0."""
    if len(l.coeffs) != n or not _uniform_sum(l):
        return None
    cols = {j for (_i, j), _c in l.coeffs}
    return cols.pop() if len(cols) == 1 else None


def positivity_index(l: LinearConstraint) -> Optional[Index]:
    """Entry (i, j) if ``l`` reads c·X_ij >= 0 with c > 0."""
    if l.relation is Relation.GREATER_EQUAL and l.rhs == 0 and len(l.coeffs) == 1:
        (idx, c), = l.coeffs
        if c > 0:
            return idx
    return None


def is_quasi_homogeneous(L: ConstraintSet) -> bool:
    """All row and column sums present and every other constraint homogeneous."""
    rows, cols = set(), set()
    for l in L.constraints:
        r = row_sum_index(l, L.n)
        c = column_sum_index(l, L.n)
        if r is not None:
            rows.add(r)
        if c is not None:
            cols.add(c)
        if r is None and c is None and not is_homogeneous(l):
            return False
    return len(rows) == L.n and len(cols) == L.n


def contains_doubly_stochastic(L: ConstraintSet) -> bool:
    """Structural test: every row sum, column sum and positivity constraint is present."""
    rows, cols, pos = set(), set(), set()
    for l in L.constraints:
        r = row_sum_index(l, L.n)
        if r is not None:
            rows.add(r)
        c = column_sum_index(l, L.n)
        if c is not None:
            cols.add(c)
        p = positivity_index(l)
        if p is not None:
            pos.add(p)
    return len(rows) == L.n and len(cols) == L.n and len(pos) == L.n * L.n


def merge(L: ConstraintSet) -> ConstraintSet:
    """Replace each row/column sum by its weak counterpart; the result is homogeneous."""
    if not is_quasi_homogeneous(L):
        raise NotQuasiHomogeneousError("merge needs a quasi-homogeneous constraint set")
    out = []
    for l in L.constraints:
        r = row_sum_index(l, L.n)
        if r is not None:
            out.append(weak_row_sum(L.n, r))
            continue
        c = column_sum_index(l, L.n)
        if c is not None:
            out.append(weak_column_sum(L.n, c))
            continue
        out.append(l)
    return ConstraintSet(L.n, tuple(out))


def canonicalize(L: ConstraintSet) -> ConstraintSet:
    """Drop trivially true constraints and duplicates that agree up to scaling."""
    seen = set()
    out = []
    for l in L.constraints:
        if l.is_trivial():
            continue
        key = l.normalized()
        if key in seen:
            continue
        seen.add(key)
        out.append(l)
    return ConstraintSet(L.n, tuple(out))


def reindex(l: LinearConstraint, row_offset: int, col_offset: int, label: str) -> LinearConstraint:
    coeffs = tuple(((i + row_offset, j + col_offset), c) for (i, j), c in l.coeffs)
    return LinearConstraint(coeffs, l.relation, l.rhs, label)

