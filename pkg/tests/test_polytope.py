from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import all_permutation_matrices, convex_combination
from lpperm.codes import CodeSpec, code_cardinality, encode, wreath_to_matrix
from lpperm.constraints import (
    ConstraintSet,
    LinearConstraint,
    Relation,
    build_doubly_stochastic,
    build_pure_involution,
    build_weak_sums,
    row_sum_index,
    satisfies,
)
from lpperm.errors import BudgetExceededError, NotDoublyStochasticError
from lpperm.graphs import Graph, GraphFamily, automorphisms_bruteforce, build_graph_constraints, conjugate_graph, make_family
from lpperm.lpdecode import code_constraints
from lpperm.matrix import RationalMatrix
from lpperm.permutation import Permutation, perm_to_matrix
from lpperm.polytope import (
    CompactnessReport,
    Method,
    Verdict,
    VertexSet,
    candidate_count,
    check_compact,
    enumerate_vertices,
    implies_doubly_stochastic,
    is_permutation_matrix,
    is_vertex,
    model,
    probe_fractional,
)

P6 = build_pure_involution(6)


def test_model_dimensions():
    assert model(build_doubly_stochastic(3)).dimension == 4
    for n in range(3, 7):
        assert model(build_graph_constraints(make_family(GraphFamily.CYCLE, n))).dimension == n - 1
    empty = build_doubly_stochastic(2).union([LinearConstraint.build({(0, 0): 1}, Relation.EQUAL, 2)])
    M = model(empty)
    assert M.empty
    assert len(enumerate_vertices(empty)) == 0


def test_model_point_parameterization():
    M = model(build_doubly_stochastic(3))
    rng = random.Random(0)
    for _ in range(5):
        t = [Fraction(rng.randint(-3, 3), 5) for _ in range(M.dimension)]
        X = M.point(t)
        for l in build_doubly_stochastic(3).equalities():
            assert l.holds(X)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_birkhoff(n):
    V = enumerate_vertices(build_doubly_stochastic(n))
    assert V.complete
    assert V.as_set() == set(all_permutation_matrices(n))


def test_cycle_vertices_are_shifts():
    for n in range(3, 7):
        V = enumerate_vertices(build_graph_constraints(make_family(GraphFamily.CYCLE, n))).as_set()
        assert V == {perm_to_matrix(Permutation(tuple((i + k) % n for i in range(n)))) for k in range(n)}


def test_pure_involution_vertices():
    assert enumerate_vertices(build_pure_involution(2)).as_set() == {RationalMatrix.from_rows([[0, 1], [1, 0]])}
    V4 = enumerate_vertices(build_pure_involution(4)).as_set()
    assert V4 == {perm_to_matrix(Permutation(p)) for p in [(1, 0, 3, 2), (2, 3, 0, 1), (3, 2, 1, 0)]}


def test_pure_involution_six_has_the_half_triangle_vertices():
    V = enumerate_vertices(P6)
    perms = [X for X in V.vertices if is_permutation_matrix(X)]
    fractional = [X for X in V.vertices if not is_permutation_matrix(X)]
    # 15 perfect matchings of six points, plus 10 ways to split them into two triangles
    assert len(perms) == 15 and len(fractional) == 10
    for X in fractional:
        assert set(X.flat()) == {Fraction(0), Fraction(1, 2)}
        assert is_vertex(P6, X)


@pytest.mark.parametrize(
    "L",
    [
        build_doubly_stochastic(3),
        build_pure_involution(4),
        P6,
        build_graph_constraints(make_family(GraphFamily.CIRCLE, 4)),
        build_graph_constraints(make_family(GraphFamily.CYCLE, 6)),
        build_graph_constraints(Graph.build(5, [(0, 1), (0, 2), (0, 3), (3, 4)])),
    ],
    ids=["ds3", "pinv4", "pinv6", "circle4", "cycle6", "tree5"],
)
def test_double_description_agrees_with_active_set(L):
    a = enumerate_vertices(L, method="active-set")
    d = enumerate_vertices(L, method="double-description")
    assert a.engine == "active-set" and d.engine == "double-description"
    assert a.as_set() == d.as_set()
    assert all(satisfies(V, L) for V in a.vertices)


def test_enumeration_has_no_duplicates():
    V = enumerate_vertices(P6)
    assert len(V.vertices) == len(V.as_set())


@pytest.mark.parametrize("L", [P6, build_graph_constraints(make_family(GraphFamily.CIRCLE, 4))], ids=["pinv6", "circle4"])
def test_vertices_are_extreme(L):
    rng = random.Random(11)
    verts = list(enumerate_vertices(L).vertices)
    vset = set(verts)
    for _ in range(1000):
        V0 = convex_combination(rng.sample(verts, rng.randint(1, 3)), rng)
        V1 = convex_combination(rng.sample(verts, rng.randint(1, 3)), rng)
        if V0 == V1:
            continue
        c0 = Fraction(rng.randint(1, 99), 100)
        mid = V0.scale(c0) + V1.scale(1 - c0)
        assert satisfies(mid, L)
        assert mid not in vset


def test_probe_results_are_enumerated_vertices():
    witness = probe_fractional(P6, 200, seed=4)
    assert witness is not None
    assert witness in enumerate_vertices(P6).as_set()
    assert probe_fractional(build_doubly_stochastic(4), 50, seed=1) is None
    assert probe_fractional(P6, 0) is None


@pytest.mark.parametrize(
    "graph",
    [make_family(GraphFamily.LINE, 5), make_family(GraphFamily.CYCLE, 5), Graph.build(5, [(0, 1), (0, 2), (0, 3), (3, 4)]), make_family(GraphFamily.CIRCLE, 6)],
    ids=["line5", "cycle5", "tree5", "circle6"],
)
def test_conjugation_relabels_vertices(graph):
    rng = random.Random(graph.n)
    base = enumerate_vertices(build_graph_constraints(graph)).as_set()
    for _ in range(3):
        sigma = Permutation(tuple(rng.sample(range(graph.n), graph.n)))
        P = perm_to_matrix(sigma)
        moved = enumerate_vertices(build_graph_constraints(conjugate_graph(sigma, graph))).as_set()
        assert moved == {P @ X @ P.transpose() for X in base}


@pytest.mark.parametrize(
    "graph",
    [make_family(GraphFamily.LINE, 6), make_family(GraphFamily.CIRCLE, 6), make_family(GraphFamily.COMPLETE, 4), Graph.build(6, [(0, 1), (1, 2), (1, 3), (3, 4), (3, 5)])],
    ids=["line6", "circle6", "complete4", "tree6"],
)
def test_compact_graphs_match_bruteforce(graph):
    report = check_compact(build_graph_constraints(graph))
    assert report.verdict is Verdict.COMPACT
    assert report.vertices.as_set() == {perm_to_matrix(s) for s in automorphisms_bruteforce(graph)}


def test_implies_doubly_stochastic():
    assert implies_doubly_stochastic(build_doubly_stochastic(3))
    # dropping one row sum keeps the implication (it follows from the others and the column sums)
    L = build_doubly_stochastic(3)
    first_row = next(l for l in L.constraints if row_sum_index(l, 3) == 0)
    reduced = ConstraintSet.of(3, [l for l in L.constraints if l is not first_row])
    assert implies_doubly_stochastic(reduced)
    assert not implies_doubly_stochastic(build_weak_sums(3))
    with pytest.raises(NotDoublyStochasticError):
        check_compact(build_weak_sums(3))


def test_budget_is_explicit():
    L = build_doubly_stochastic(4)
    with pytest.raises(BudgetExceededError):
        enumerate_vertices(L, limit=10, method="active-set")
    m, d, c = candidate_count(L)
    assert (m, d) == (16, 9) and c == 11440
    r = check_compact(L, limit=10, method="active-set", probe_trials=20)
    assert r.verdict is Verdict.UNKNOWN and r.method is Method.PROBE
    r6 = check_compact(P6, limit=10, method="active-set", probe_trials=200, seed=4)
    assert r6.verdict is Verdict.NOT_COMPACT and r6.method is Method.PROBE
    assert is_vertex(P6, r6.fractional_witness)


def test_report_invariants():
    with pytest.raises(ValueError):
        CompactnessReport(Verdict.NOT_COMPACT, None, 3, Method.EXHAUSTIVE)
    with pytest.raises(ValueError):
        CompactnessReport(Verdict.COMPACT, None, None, Method.PROBE)


def test_vertex_set_json_roundtrip():
    V = enumerate_vertices(build_pure_involution(4))
    doc = V.to_json()
    assert doc["complete"] is True
    assert VertexSet.from_json(doc).as_set() == V.as_set()


def test_is_permutation_matrix():
    assert is_permutation_matrix(RationalMatrix.identity(4))
    half = RationalMatrix.from_rows([["1/2", "1/2"], ["1/2", "1/2"]])
    assert not is_permutation_matrix(half)
    spec = CodeSpec.build(2, 2, ["C", "U"], "S")
    assert all(is_permutation_matrix(wreath_to_matrix(encode(m, spec).element)) for m in range(4))


def test_is_vertex_rejects_interior_and_infeasible_points():
    L = build_doubly_stochastic(3)
    assert not is_vertex(L, RationalMatrix.from_rows([["1/3"] * 3] * 3))
    assert not is_vertex(L, RationalMatrix.zeros(3))
    assert is_vertex(L, RationalMatrix.identity(3))


@given(st.integers(0, 10 ** 6))
def test_code_polytopes_match_their_codebooks(seed):
    rng = random.Random(seed)
    rows = [rng.choice(["C", "U"]) for _ in range(2)]
    spec = CodeSpec.build(2, 2, rows, rng.choice(["C", "S", "U"]))
    V = enumerate_vertices(code_constraints(spec)).as_set()
    size = code_cardinality(spec)
    assert V == {wreath_to_matrix(encode(m, spec).element) for m in range(size)}
