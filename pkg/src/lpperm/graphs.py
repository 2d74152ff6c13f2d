"""Graphs, the named graph families, unions, conjugation and commutation constraints."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import permutations
from typing import Any, Dict, FrozenSet, Iterable, List, Mapping, Tuple

from .constraints import ConstraintSet, LinearConstraint, Relation, build_doubly_stochastic, canonicalize
from .errors import BudgetExceededError, DimensionMismatchError, InvalidSizeError, ParseError
from .matrix import RationalMatrix
from .permutation import Permutation

Edge = Tuple[int, int]

AUTOMORPHISM_LIMIT = 8


@dataclass(frozen=True)
class Graph:
    """A graph on {0..n-1}; undirected graphs store both orientations of each edge."""

    n: int
    directed: bool
    edges: FrozenSet[Edge]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InvalidSizeError(f"graph needs at least one vertex, got {self.n}")
        for i, j in self.edges:
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise DimensionMismatchError(f"edge ({i},{j}) outside {self.n} vertices")
        if not self.directed:
            for i, j in self.edges:
                if (j, i) not in self.edges:
                    raise ParseError(f"undirected graph missing reverse of edge ({i},{j})")

    @classmethod
    def build(cls, n: int, edges: Iterable[Edge], directed: bool = False) -> "Graph":
        es = {(int(i), int(j)) for i, j in edges}
        if not directed:
            es |= {(j, i) for i, j in es}
        return cls(n, directed, frozenset(es))

    @property
    def has_loops(self) -> bool:
        return any(i == j for i, j in self.edges)

    def sorted_edges(self) -> List[Edge]:
        return sorted(self.edges)

    def in_degree(self, v: int) -> int:
        return sum(1 for _, j in self.edges if j == v)

    def out_degree(self, v: int) -> int:
        return sum(1 for i, _ in self.edges if i == v)

    def to_json(self) -> Dict[str, Any]:
        edges = self.sorted_edges()
        if not self.directed:
            edges = [e for e in edges if e[0] <= e[1]]
        return {"n": self.n, "directed": self.directed, "edges": [list(e) for e in edges]}

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "Graph":
        try:
            n = int(data["n"])
            directed = bool(data.get("directed", False))
            edges = [(int(i), int(j)) for i, j in data.get("edges", [])]
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed graph document: {exc}") from exc
        return cls.build(n, edges, directed)


class GraphFamily(Enum):
    COMPLETE = "complete"
    LINE = "line"
    TELEVIS = "televis"
    CIRCLE = "circle"
    CYCLE = "cycle"


def adjacency(G: Graph) -> RationalMatrix:
    one, zero = Fraction(1), Fraction(0)
    return RationalMatrix(
        tuple(tuple(one if (i, j) in G.edges else zero for j in range(G.n)) for i in range(G.n))
    )


def make_family(family: GraphFamily, n: int = 2) -> Graph:
    """Build a named family member on n vertices."""
    family = GraphFamily(family)
    if family is GraphFamily.TELEVIS:
        if n != 2:
            raise InvalidSizeError("televis has exactly 2 vertices")
        return Graph.build(2, [(0, 1)])
    if n < 1:
        raise InvalidSizeError(f"{family.value} needs n >= 1")
    if family is GraphFamily.COMPLETE:
        return Graph.build(n, [(i, j) for i in range(n) for j in range(n) if i != j])
    if family is GraphFamily.LINE:
        return Graph.build(n, [(i, i + 1) for i in range(n - 1)])
    if n < 3:
        raise InvalidSizeError(f"{family.value} needs n >= 3")
    if family is GraphFamily.CIRCLE:
        return Graph.build(n, [(i, (i + 1) % n) for i in range(n)])
    return Graph.build(n, [(i, (i + 1) % n) for i in range(n)], directed=True)


def parse_family(text: str) -> Graph:
    """Parse "family:n" (e.g. "cycle:5"); "televis" alone is accepted."""
    name, _, size = text.partition(":")
    try:
        family = GraphFamily(name.strip().lower())
    except ValueError as exc:
        raise ParseError(f"unknown graph family {name!r}") from exc
    if not size:
        if family is GraphFamily.TELEVIS:
            return make_family(family, 2)
        raise ParseError(f"graph family {name!r} needs a size, e.g. {name}:4")
    try:
        n = int(size)
    except ValueError as exc:
        raise ParseError(f"bad graph size {size!r}") from exc
    return make_family(family, n)


def is_weakly_connected(G: Graph) -> bool:
    neighbours: Dict[int, set] = {v: set() for v in range(G.n)}
    for i, j in G.edges:
        neighbours[i].add(j)
        neighbours[j].add(i)
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for w in neighbours[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == G.n


def is_seed_graph(G: Graph) -> bool:
    """Weakly connected with in-degree equal to out-degree at every vertex."""
    if not is_weakly_connected(G):
        return False
    return all(G.in_degree(v) == G.out_degree(v) for v in range(G.n))


def union_graph(G: Graph, R: int) -> Graph:
    """R disjoint copies of G; copy r occupies vertices rν..rν+ν-1."""
    if R < 1:
        raise InvalidSizeError(f"union needs R >= 1, got {R}")
    nu = G.n
    edges = frozenset((r * nu + i, r * nu + j) for r in range(R) for i, j in G.edges)
    return Graph(nu * R, G.directed, edges)


def conjugate_graph(sigma: Permutation, G: Graph) -> Graph:
    """Graph with adjacency X^σ A (X^σ)^-1: (a, b) is an edge iff (σ(a), σ(b)) is an edge of G."""
    if sigma.degree != G.n:
        raise DimensionMismatchError(f"permutation degree {sigma.degree} != {G.n} vertices")
    inv = sigma.inverse().images
    return Graph(G.n, G.directed, frozenset((inv[i], inv[j]) for i, j in G.edges))


def commutation_constraints(G: Graph) -> List[LinearConstraint]:
    """Equalities (XA - AX)_{ij} = 0, one per entry, before canonicalization."""
    n = G.n
    succ: Dict[int, List[int]] = {v: [] for v in range(n)}
    pred: Dict[int, List[int]] = {v: [] for v in range(n)}
    for i, j in G.edges:
        succ[i].append(j)
        pred[j].append(i)
    out = []
    for i in range(n):
        for j in range(n):
            # (XA)_ij = sum over k with (k, j) in E of X_ik; (AX)_ij = sum over k with (i, k) in E of X_kj
            items = [((i, k), 1) for k in pred[j]] + [((k, j), -1) for k in succ[i]]
            out.append(LinearConstraint.build(items, Relation.EQUAL, 0, f"commute[{i},{j}]"))
    return out


def build_graph_constraints(G: Graph) -> ConstraintSet:
    """Doubly stochastic constraints plus X A = A X, canonicalized."""
    L = build_doubly_stochastic(G.n).union(commutation_constraints(G))
    return canonicalize(L)


def is_automorphism(sigma: Permutation, G: Graph) -> bool:
    img = sigma.images
    return all((img[i], img[j]) in G.edges for i, j in G.edges)


def automorphisms_bruteforce(G: Graph, limit: int = AUTOMORPHISM_LIMIT) -> List[Permutation]:
    """All automorphisms in lexicographic order, by scanning S_n."""
    if G.n > limit:
        raise BudgetExceededError(f"brute-force automorphism search refused for n={G.n} > {limit}")
    return [Permutation(p) for p in permutations(range(G.n)) if is_automorphism(Permutation(p), G)]
