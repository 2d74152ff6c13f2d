"""Wreath-product permutation codes: group families, ranking, Enc and Dec."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import factorial
from typing import Any, Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from .consolidation import BlockStructure, ConsolidationSpec, assemble_blocks, block, subtotal, unit_constraints
from .constraints import ConstraintSet, build_doubly_stochastic, build_pure_involution
from .errors import (
    BudgetExceededError,
    DecodeFailure,
    DimensionMismatchError,
    InvalidSizeError,
    MembershipError,
    MessageRangeError,
    ParseError,
)
from .graphs import GraphFamily, build_graph_constraints, make_family
from .matrix import RationalLike, RationalMatrix, format_rational, to_rational
from .permutation import Permutation, matrix_to_perm, perm_to_matrix

FACTORIAL_LIMIT = 8

__all__ = [
    "Permutation",
    "perm_to_matrix",
    "WreathElement",
    "wreath_to_matrix",
    "wreath_multiply",
    "FamilyKind",
    "GroupFamily",
    "enumerate_family",
    "rank_in_family",
    "unrank_in_family",
    "family_constraints",
    "CodeSpec",
    "code_cardinality",
    "encode",
    "decode_message",
    "consolidation_spec",
    "codebook",
]


@dataclass(frozen=True)
class WreathElement:
    """(σ | g_0, …, g_{R-1}): block row i carries g_i in block column σ(i)."""

    top: Permutation
    locals: Tuple[Permutation, ...]

    def __post_init__(self) -> None:
        if len(self.locals) != self.top.degree:
            raise DimensionMismatchError(f"need {self.top.degree} local permutations, got {len(self.locals)}")
        if len({g.degree for g in self.locals}) > 1:
            raise DimensionMismatchError("local permutations must share one degree")

    @classmethod
    def identity(cls, nu: int, R: int) -> "WreathElement":
        return cls(Permutation.identity(R), tuple(Permutation.identity(nu) for _ in range(R)))

    @property
    def nu(self) -> int:
        return self.locals[0].degree if self.locals else 0

    @property
    def R(self) -> int:
        return self.top.degree

    def inverse(self) -> "WreathElement":
        inv = self.top.inverse()
        return WreathElement(inv, tuple(self.locals[inv(i)].inverse() for i in range(self.R)))

    def to_json(self) -> Dict[str, Any]:
        return {"top": list(self.top.images), "locals": [list(g.images) for g in self.locals]}


def wreath_to_matrix(w: WreathElement) -> RationalMatrix:
    s = BlockStructure(w.nu, w.R)
    return assemble_blocks(s, w.top, [perm_to_matrix(g) for g in w.locals])


def wreath_multiply(a: WreathElement, b: WreathElement) -> WreathElement:
    """Product matching matrix multiplication: matrix(a)·matrix(b) = matrix(a·b)."""
    if (a.nu, a.R) != (b.nu, b.R):
        raise DimensionMismatchError("wreath elements have different shapes")
    sigma = a.top
    return WreathElement(sigma * b.top, tuple(a.locals[i] * b.locals[sigma(i)] for i in range(a.R)))


class FamilyKind(Enum):
    UNIT = "U"
    CYCLIC = "C"
    DIHEDRAL = "D"
    SYMMETRIC = "S"
    PURE_INV4 = "P4"


_PURE_INV4 = (Permutation((1, 0, 3, 2)), Permutation((2, 3, 0, 1)), Permutation((3, 2, 1, 0)))


@dataclass(frozen=True)
class GroupFamily:
    kind: FamilyKind
    degree: int

    def __post_init__(self) -> None:
        if self.degree < 1:
            raise InvalidSizeError(f"family degree must be positive, got {self.degree}")
        if self.kind is FamilyKind.PURE_INV4 and self.degree != 4:
            raise InvalidSizeError("PURE_INV4 has degree 4")
        if self.kind is FamilyKind.DIHEDRAL and self.degree < 3:
            raise InvalidSizeError("DIHEDRAL needs degree >= 3")

    @classmethod
    def parse(cls, code: str, degree: int) -> "GroupFamily":
        try:
            kind = FamilyKind(code.strip().upper())
        except ValueError as exc:
            raise ParseError(f"unknown family code {code!r}") from exc
        return cls(kind, degree)

    @property
    def size(self) -> int:
        n = self.degree
        return {
            FamilyKind.UNIT: 1,
            FamilyKind.CYCLIC: n,
            FamilyKind.DIHEDRAL: 2 * n,
            FamilyKind.SYMMETRIC: factorial(n),
            FamilyKind.PURE_INV4: 3,
        }[self.kind]


def _shift(n: int, k: int) -> Permutation:
    return Permutation(tuple((i + k) % n for i in range(n)))


def _reflection(n: int, k: int) -> Permutation:
    # reflection i -> -i applied after the rotation by k
    return Permutation(tuple((-(i + k)) % n for i in range(n)))


class _Fenwick:
    def __init__(self, n: int, full: bool) -> None:
        self.n = n
        self.tree = [0] * (n + 1)
        if full:
            for i in range(1, n + 1):
                self.tree[i] += 1
                j = i + (i & -i)
                if j <= n:
                    self.tree[j] += self.tree[i]

    def add(self, i: int, delta: int) -> None:
        i += 1
        while i <= self.n:
            self.tree[i] += delta
            i += i & -i

    def prefix(self, i: int) -> int:
        """Sum of entries 0..i-1."""
        total = 0
        while i > 0:
            total += self.tree[i]
            i -= i & -i
        return total

    def find(self, k: int) -> int:
        """Smallest index whose prefix through it exceeds k (the k-th present item, 0-based)."""
        pos = 0
        step = 1 << self.n.bit_length()
        while step:
            nxt = pos + step
            if nxt <= self.n and self.tree[nxt] <= k:
                pos = nxt
                k -= self.tree[nxt]
            step >>= 1
        return pos


def lehmer_rank(g: Permutation) -> int:
    """Position of g in lexicographic order of image tuples, in O(n log n)."""
    n = g.degree
    unused = _Fenwick(n, full=True)
    rank = 0
    for i, v in enumerate(g.images):
        smaller = unused.prefix(v)
        unused.add(v, -1)
        rank = rank * (n - i) + smaller
    return rank


def lehmer_unrank(n: int, k: int) -> Permutation:
    digits = [0] * n
    for i in range(n - 1, -1, -1):
        k, digits[i] = divmod(k, n - i)
    unused = _Fenwick(n, full=True)
    images = []
    for d in digits:
        v = unused.find(d)
        unused.add(v, -1)
        images.append(v)
    return Permutation(tuple(images))


def enumerate_family(f: GroupFamily, limit: int = FACTORIAL_LIMIT) -> List[Permutation]:
    """Elements in canonical rank order."""
    if f.kind is FamilyKind.SYMMETRIC and f.degree > limit:
        raise BudgetExceededError(f"refusing to list S_{f.degree} (limit {limit})")
    return [unrank_in_family(f, k) for k in range(f.size)]


def unrank_in_family(f: GroupFamily, k: int) -> Permutation:
    if not 0 <= k < f.size:
        raise MessageRangeError(f"rank {k} outside 0..{f.size - 1} for {f.kind.name}({f.degree})")
    n = f.degree
    if f.kind is FamilyKind.UNIT:
        return Permutation.identity(n)
    if f.kind is FamilyKind.CYCLIC:
        return _shift(n, k)
    if f.kind is FamilyKind.DIHEDRAL:
        return _shift(n, k) if k < n else _reflection(n, k - n)
    if f.kind is FamilyKind.PURE_INV4:
        return _PURE_INV4[k]
    return lehmer_unrank(n, k)


def rank_in_family(f: GroupFamily, g: Permutation) -> int:
    n = f.degree
    if g.degree != n:
        raise MembershipError(f"permutation of degree {g.degree} is not in a degree-{n} family")
    kind = f.kind
    if kind is FamilyKind.SYMMETRIC:
        return lehmer_rank(g)
    if kind is FamilyKind.UNIT:
        if g.is_identity():
            return 0
    elif kind is FamilyKind.CYCLIC:
        k = g(0)
        if g == _shift(n, k):
            return k
    elif kind is FamilyKind.DIHEDRAL:
        k = g(0)
        if g == _shift(n, k):
            return k
        k = (-g(0)) % n
        if g == _reflection(n, k):
            return n + k
    elif kind is FamilyKind.PURE_INV4:
        if g in _PURE_INV4:
            return _PURE_INV4.index(g)
    raise MembershipError(f"{g} is not in {kind.name}({n})")


def family_constraints(f: GroupFamily) -> ConstraintSet:
    """A compact constraint set whose vertices are exactly the family's elements."""
    n = f.degree
    kind = f.kind
    if kind is FamilyKind.SYMMETRIC or (kind is FamilyKind.CYCLIC and n == 1):
        return build_doubly_stochastic(n)
    if kind is FamilyKind.UNIT:
        return unit_constraints(n)
    if kind is FamilyKind.PURE_INV4:
        return build_pure_involution(4)
    if kind is FamilyKind.CYCLIC:
        graph = make_family(GraphFamily.TELEVIS, 2) if n == 2 else make_family(GraphFamily.CYCLE, n)
        return build_graph_constraints(graph)
    return build_graph_constraints(make_family(GraphFamily.CIRCLE, n))


@dataclass(frozen=True)
class CodeSpec:
    """Which family sits in each block row and at the top, plus the initial vector."""

    nu: int
    R: int
    row_families: Tuple[GroupFamily, ...]
    top_family: GroupFamily
    mu: Tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if self.nu < 1 or self.R < 1:
            raise InvalidSizeError("nu and R must be positive")
        if len(self.row_families) != self.R:
            raise DimensionMismatchError(f"need {self.R} row families, got {len(self.row_families)}")
        if any(f.degree != self.nu for f in self.row_families):
            raise DimensionMismatchError(f"row families must have degree {self.nu}")
        if self.top_family.degree != self.R:
            raise DimensionMismatchError(f"top family must have degree {self.R}")
        if len(self.mu) != self.nu * self.R:
            raise DimensionMismatchError(f"mu needs length {self.nu * self.R}")

    @classmethod
    def build(
        cls,
        nu: int,
        R: int,
        rows: Sequence[str],
        top: str,
        mu: Optional[Sequence[RationalLike]] = None,
    ) -> "CodeSpec":
        mus = tuple(Fraction(i + 1) for i in range(nu * R)) if mu is None else tuple(to_rational(v) for v in mu)
        return cls(nu, R, tuple(GroupFamily.parse(r, nu) for r in rows), GroupFamily.parse(top, R), mus)

    @property
    def structure(self) -> BlockStructure:
        return BlockStructure(self.nu, self.R)

    @property
    def radices(self) -> Tuple[int, ...]:
        return tuple(f.size for f in self.row_families) + (self.top_family.size,)

    def to_json(self) -> Dict[str, Any]:
        return {
            "nu": self.nu,
            "R": self.R,
            "rows": [f.kind.value for f in self.row_families],
            "top": self.top_family.kind.value,
            "mu": [format_rational(v) for v in self.mu],
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "CodeSpec":
        try:
            return cls.build(int(data["nu"]), int(data["R"]), list(data["rows"]), str(data["top"]), data.get("mu"))
        except (KeyError, TypeError) as exc:
            raise ParseError(f"malformed code spec: {exc}") from exc


def code_cardinality(spec: CodeSpec) -> int:
    total = 1
    for v in spec.radices:
        total *= v
    return total


class Encoded(NamedTuple):
    codeword: Tuple[Fraction, ...]
    element: WreathElement


def encode(mes: int, spec: CodeSpec) -> Encoded:
    """Mixed-radix digits (block rows first, top last) unranked in their families."""
    size = code_cardinality(spec)
    if not isinstance(mes, int) or not 0 <= mes < size:
        raise MessageRangeError(f"message {mes!r} outside 0..{size - 1}")
    digits = []
    rest = mes
    for v in spec.radices:
        rest, d = divmod(rest, v)
        digits.append(d)
    locals_ = tuple(unrank_in_family(f, d) for f, d in zip(spec.row_families, digits))
    element = WreathElement(unrank_in_family(spec.top_family, digits[-1]), locals_)
    return Encoded(wreath_to_matrix(element).apply(spec.mu), element)


def decode_message(X: RationalMatrix, spec: CodeSpec) -> int:
    """Recover the message from a codeword permutation matrix (inverse of encode)."""
    s = spec.structure
    if X.rows != s.size or X.cols != s.size:
        raise DimensionMismatchError(f"expected a {s.size}x{s.size} matrix")
    try:
        top = matrix_to_perm(subtotal(X, s))
    except ParseError as exc:
        raise DecodeFailure("subtotal is not a permutation matrix") from exc
    mes = rank_in_family(spec.top_family, top)
    for i in range(spec.R - 1, -1, -1):
        nonzero = [j for j in range(spec.R) if any(v != 0 for v in block(X, s, i, j).flat())]
        if len(nonzero) != 1:
            raise DecodeFailure(f"block row {i} has {len(nonzero)} nonzero blocks, expected exactly one")
        try:
            g = matrix_to_perm(block(X, s, i, nonzero[0]))
        except ParseError as exc:
            raise DecodeFailure(f"block ({i},{nonzero[0]}) is not a permutation matrix") from exc
        mes = mes * spec.row_families[i].size + rank_in_family(spec.row_families[i], g)
    return mes


def consolidation_spec(spec: CodeSpec) -> ConsolidationSpec:
    """The consolidation whose vertices are exactly the code's wreath matrices."""
    rows = [family_constraints(f) for f in spec.row_families]
    blocks = tuple(tuple(rows[r] for _ in range(spec.R)) for r in range(spec.R))
    return ConsolidationSpec(spec.structure, blocks, family_constraints(spec.top_family))


def codebook(spec: CodeSpec, limit: int = 10 ** 6) -> List[RationalMatrix]:
    """Codeword matrices indexed by message."""
    size = code_cardinality(spec)
    if size > limit:
        raise BudgetExceededError(f"code has {size} words > limit {limit}")
    return [wreath_to_matrix(encode(m, spec).element) for m in range(size)]
