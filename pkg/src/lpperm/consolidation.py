"""Block structure, holding constraints, consolidation and the televis reduced LP."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from pathlib import Path
from typing import Any, Dict, List, Mapping, Sequence, Set, Tuple, Union

from .constraints import (
    ConstraintSet,
    LinearConstraint,
    Relation,
    build_doubly_stochastic,
    build_pure_involution,
    canonicalize,
    contains_doubly_stochastic,
    is_quasi_homogeneous,
    merge,
    reindex,
)
from .errors import (
    DimensionMismatchError,
    InvalidSizeError,
    NotDoublyStochasticError,
    NotQuasiHomogeneousError,
    ParseError,
)
from .graphs import Graph, GraphFamily, build_graph_constraints, make_family
from .matrix import RationalLike, RationalMatrix, to_rational
from .permutation import Permutation
from .simplex import LPProblem


@dataclass(frozen=True)
class BlockStructure:
    """A νR×νR matrix viewed as an R×R grid of ν×ν blocks."""

    nu: int
    R: int

    def __post_init__(self) -> None:
        if self.nu < 1 or self.R < 1:
            raise InvalidSizeError(f"block structure needs nu, R >= 1, got nu={self.nu}, R={self.R}")

    @property
    def size(self) -> int:
        return self.nu * self.R

    def _check(self, X: RationalMatrix) -> None:
        if X.rows != self.size or X.cols != self.size:
            raise DimensionMismatchError(f"expected a {self.size}x{self.size} matrix, got {X.rows}x{X.cols}")


def block(X: RationalMatrix, s: BlockStructure, r0: int, r1: int) -> RationalMatrix:
    """The ν×ν block with entries X[r0·ν + i, r1·ν + j]."""
    s._check(X)
    if not (0 <= r0 < s.R and 0 <= r1 < s.R):
        raise DimensionMismatchError(f"block index ({r0},{r1}) outside {s.R}x{s.R}")
    nu = s.nu
    return RationalMatrix(
        tuple(tuple(X.entries[r0 * nu + i][r1 * nu:(r1 + 1) * nu]) for i in range(nu))
    )


def subtotal(X: RationalMatrix, s: BlockStructure) -> RationalMatrix:
    """R×R matrix of first-column block sums."""
    s._check(X)
    nu = s.nu
    return RationalMatrix(
        tuple(
            tuple(sum((X.entries[r0 * nu + i][r1 * nu] for i in range(nu)), Fraction(0)) for r1 in range(s.R))
            for r0 in range(s.R)
        )
    )


def hold(H: ConstraintSet, nu: int) -> ConstraintSet:
    """Lift each top constraint by substituting first-row block sums for its entries."""
    R = H.n
    out = []
    for h in H.constraints:
        items = [((r0 * nu, r1 * nu + j), c) for (r0, r1), c in h.coeffs for j in range(nu)]
        out.append(LinearConstraint.build(items, h.relation, h.rhs, f"{h.label}#"))
    return ConstraintSet(nu * R, tuple(out))


@dataclass(frozen=True)
class ConsolidationSpec:
    """Block constraint sets on an R×R grid plus a doubly stochastic top constraint set."""

    structure: BlockStructure
    blocks: Tuple[Tuple[ConstraintSet, ...], ...]
    top: ConstraintSet

    def __post_init__(self) -> None:
        s = self.structure
        if len(self.blocks) != s.R or any(len(row) != s.R for row in self.blocks):
            raise DimensionMismatchError(f"block grid must be {s.R}x{s.R}")
        for r0, row in enumerate(self.blocks):
            for r1, M in enumerate(row):
                if M.n != s.nu:
                    raise DimensionMismatchError(f"block [{r0},{r1}] is for {M.n}x{M.n}, expected {s.nu}")
                if not is_quasi_homogeneous(M):
                    raise NotQuasiHomogeneousError(f"block [{r0},{r1}] is not quasi-homogeneous")
        if self.top.n != s.R:
            raise DimensionMismatchError(f"top constraints are for {self.top.n}x{self.top.n}, expected {s.R}")
        if not contains_doubly_stochastic(self.top):
            raise NotDoublyStochasticError("top constraints must contain the doubly stochastic constraints")

    @classmethod
    def uniform(cls, nu: int, R: int, block_set: ConstraintSet, top: ConstraintSet) -> "ConsolidationSpec":
        return cls(BlockStructure(nu, R), tuple(tuple(block_set for _ in range(R)) for _ in range(R)), top)

    def to_json(self) -> Dict[str, Any]:
        return {
            "nu": self.structure.nu,
            "R": self.structure.R,
            "blocks": [[M.to_json() for M in row] for row in self.blocks],
            "top": self.top.to_json(),
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any], base_dir: Union[str, Path, None] = None) -> "ConsolidationSpec":
        try:
            nu, R = int(data["nu"]), int(data["R"])
            grid = data["blocks"]
            top_ref = data["top"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed consolidation spec: {exc}") from exc
        base = Path(base_dir) if base_dir is not None else Path.cwd()
        if not isinstance(grid, list):
            # a single reference applies to every block
            grid = [[grid] * R for _ in range(R)]
        blocks = tuple(tuple(resolve_constraint_ref(ref, nu, base) for ref in row) for row in grid)
        return cls(BlockStructure(nu, R), blocks, resolve_constraint_ref(top_ref, R, base))


def unit_constraints(n: int) -> ConstraintSet:
    """Doubly stochastic with zero off-diagonal mass: only the identity is feasible."""
    items = [((i, j), 1) for i in range(n) for j in range(n) if i != j]
    extra = [LinearConstraint.build(items, Relation.EQUAL, 0, "off-diagonal-zero")] if n > 1 else []
    return build_doubly_stochastic(n).union(extra)


def resolve_constraint_ref(ref: Any, n: int, base_dir: Path) -> ConstraintSet:
    """Resolve an inline ConstraintSet document or a preset name for size n."""
    if isinstance(ref, Mapping):
        L = ConstraintSet.from_json(ref)
        if L.n != n:
            raise DimensionMismatchError(f"inline constraint set has n={L.n}, expected {n}")
        return L
    if not isinstance(ref, str):
        raise ParseError(f"constraint reference must be an object or a preset name, got {ref!r}")
    name = ref.strip()
    lowered = name.lower()
    if lowered in ("ds", "doubly_stochastic"):
        return build_doubly_stochastic(n)
    if lowered == "pure_involution":
        return build_pure_involution(n)
    if lowered == "unit":
        return unit_constraints(n)
    if lowered.startswith("graph:"):
        target = name[len("graph:"):]
        family = next((f for f in GraphFamily if f.value == target.lower()), None)
        if family is not None:
            graph = make_family(family, n)
        else:
            path = Path(target)
            if not path.is_absolute():
                path = base_dir / path
            try:
                graph = Graph.from_json(json.loads(path.read_text()))
            except OSError as exc:
                raise ParseError(f"cannot read graph file {path}: {exc}") from exc
        if graph.n != n:
            raise DimensionMismatchError(f"graph has {graph.n} vertices, expected {n}")
        return build_graph_constraints(graph)
    raise ParseError(f"unknown constraint preset {ref!r}")


def consolidate(spec: ConsolidationSpec) -> ConstraintSet:
    """Merged block constraints re-indexed onto their blocks, plus the held top constraints."""
    s = spec.structure
    nu = s.nu
    out: List[LinearConstraint] = []
    for r0 in range(s.R):
        for r1 in range(s.R):
            merged = merge(spec.blocks[r0][r1])
            for l in merged.constraints:
                out.append(reindex(l, r0 * nu, r1 * nu, f"[{r0},{r1}] {l.label}"))
    out.extend(hold(spec.top, nu).constraints)
    return canonicalize(ConstraintSet(s.size, tuple(out)))


def predicted_vertex_count(
    spec: ConsolidationSpec,
    top_vertices: Sequence[Permutation],
    block_vertex_counts: Sequence[Sequence[int]],
) -> int:
    """Sum over top vertices σ of the product of block vertex counts along (r, σ(r))."""
    R = spec.structure.R
    total = 0
    for sigma in top_vertices:
        if sigma.degree != R:
            raise DimensionMismatchError(f"top vertex {sigma} has degree {sigma.degree}, expected {R}")
        term = 1
        for r in range(R):
            term *= block_vertex_counts[r][sigma(r)]
        total += term
    return total


def assemble_blocks(s: BlockStructure, sigma: Permutation, local: Sequence[RationalMatrix]) -> RationalMatrix:
    """Matrix whose block (r, σ(r)) is local[r] and whose other blocks vanish."""
    nu = s.nu
    zero = Fraction(0)
    rows = [[zero] * s.size for _ in range(s.size)]
    for r in range(s.R):
        c = sigma(r)
        B = local[r].entries
        for i in range(nu):
            rows[r * nu + i][c * nu:(c + 1) * nu] = B[i]
    return RationalMatrix(tuple(tuple(row) for row in rows))


def product_vertices(
    spec: ConsolidationSpec,
    top_vertices: Sequence[Permutation],
    block_vertices: Sequence[Sequence[Sequence[RationalMatrix]]],
) -> Set[RationalMatrix]:
    """Every matrix built from a top vertex σ and a choice of block vertex along (r, σ(r))."""
    s = spec.structure
    out: Set[RationalMatrix] = set()
    for sigma in top_vertices:
        choices = [block_vertices[r][sigma(r)] for r in range(s.R)]
        for local in product(*choices):
            out.add(assemble_blocks(s, sigma, local))
    return out


@dataclass(frozen=True)
class TelevisReducedLP:
    """Reduced LP for a union of R televis graphs.

    Each 2×2 block of a feasible point has the form [[y0, y1], [y1, y0]];
    variable 2(r0·R + r1) holds y0 and the next one holds y1 for block (r0, r1).
    """

    R: int
    problem: LPProblem

    def variable(self, r0: int, r1: int, kind: int) -> int:
        return 2 * (r0 * self.R + r1) + kind

    def expand(self, y: Sequence[Fraction]) -> RationalMatrix:
        R = self.R
        zero = Fraction(0)
        rows = [[zero] * (2 * R) for _ in range(2 * R)]
        for r0 in range(R):
            for r1 in range(R):
                y0, y1 = y[self.variable(r0, r1, 0)], y[self.variable(r0, r1, 1)]
                rows[2 * r0][2 * r1] = y0
                rows[2 * r0 + 1][2 * r1 + 1] = y0
                rows[2 * r0][2 * r1 + 1] = y1
                rows[2 * r0 + 1][2 * r1] = y1
        return RationalMatrix(tuple(tuple(row) for row in rows))


def televis_reduced_lp(R: int, lam: Sequence[RationalLike], mu: Sequence[RationalLike]) -> TelevisReducedLP:
    """Reduced LP with 2R² variables and 2R² + 2R constraints."""
    if R < 1:
        raise InvalidSizeError(f"R must be positive, got {R}")
    lam = [to_rational(v) for v in lam]
    mu = [to_rational(v) for v in mu]
    if len(lam) != 2 * R or len(mu) != 2 * R:
        raise DimensionMismatchError(f"lambda and mu need length {2 * R}")
    shell = TelevisReducedLP(R, LPProblem.build(0, ()))
    var = shell.variable
    objective = [Fraction(0)] * (2 * R * R)
    for r0 in range(R):
        for r1 in range(R):
            objective[var(r0, r1, 0)] = lam[2 * r0] * mu[2 * r1] + lam[2 * r0 + 1] * mu[2 * r1 + 1]
            objective[var(r0, r1, 1)] = lam[2 * r0] * mu[2 * r1 + 1] + lam[2 * r0 + 1] * mu[2 * r1]
    eq = []
    for r1 in range(R):
        eq.append(({var(r, r1, k): 1 for r in range(R) for k in (0, 1)}, Fraction(1)))
    for r0 in range(R):
        eq.append(({var(r0, r, k): 1 for r in range(R) for k in (0, 1)}, Fraction(1)))
    ge = [({v: 1}, Fraction(0)) for v in range(2 * R * R)]
    return TelevisReducedLP(R, LPProblem.build(2 * R * R, objective, eq, ge))
