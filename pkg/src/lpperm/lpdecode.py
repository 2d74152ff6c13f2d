"""LP decoding, the brute-force ML oracle, code distances and the noisy-channel simulation."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .codes import CodeSpec, code_cardinality, codebook, consolidation_spec, decode_message, encode
from .consolidation import consolidate
from .constraints import ConstraintSet
from .errors import BudgetExceededError, DecodeFailure, DimensionMismatchError, InvalidSizeError, MembershipError
from .graphs import Graph, automorphisms_bruteforce, union_graph
from .matrix import RationalLike, RationalMatrix, format_rational, to_rational
from .permutation import Permutation
from .polytope import is_permutation_matrix, is_vertex, lp_for
from .simplex import LPProblem, LPStatus

ML_BUDGET = 10 ** 6
EXHAUSTIVE_SEARCH_DEGREE = 8
SEARCH_SAMPLES = 2000
QUANTUM = 2 ** 20

__all__ = [
    "LPProblem",
    "LPStatus",
    "LPSolution",
    "LPDecodeResult",
    "code_constraints",
    "solve_lp_max",
    "lp_decode",
    "ml_bruteforce",
    "kendall_tau_min",
    "euclidean_min",
    "conjugate_group",
    "union_automorphisms",
    "ConjugationResult",
    "best_conjugation_search",
    "TrialRecord",
    "SimulationReport",
    "simulate",
]


@dataclass(frozen=True)
class LPSolution:
    status: LPStatus
    point: Optional[RationalMatrix]
    objective_value: Optional[Fraction]
    is_vertex: bool
    # every nonbasic reduced cost is strictly positive, so no other point attains the optimum
    unique: bool

    def to_json(self) -> Dict[str, Any]:
        return {
            "status": self.status.name,
            "objective": None if self.objective_value is None else format_rational(self.objective_value),
            "is_vertex": self.is_vertex,
            "unique": self.unique,
            "point": None if self.point is None else self.point.to_json(),
        }


def _vector(values: Sequence[RationalLike], n: int, name: str) -> Tuple[Fraction, ...]:
    out = tuple(to_rational(v) for v in values)
    if len(out) != n:
        raise DimensionMismatchError(f"{name} has length {len(out)}, expected {n}")
    return out


def objective_coefficients(lam: Sequence[Fraction], mu: Sequence[Fraction]) -> Dict[int, Fraction]:
    """λᵀXμ as coefficients over the flattened X (entry i·n + j)."""
    n = len(lam)
    return {i * n + j: lam[i] * mu[j] for i in range(n) for j in range(n) if lam[i] and mu[j]}


def solve_lp_max(L: ConstraintSet, lam: Sequence[RationalLike], mu: Sequence[RationalLike]) -> LPSolution:
    """Maximize λᵀXμ over the polytope of L with the exact simplex."""
    lam_v = _vector(lam, L.n, "lambda")
    mu_v = _vector(mu, L.n, "mu")
    res = lp_for(L).maximize(objective_coefficients(lam_v, mu_v))
    if res.status is not LPStatus.OPTIMAL:
        return LPSolution(res.status, None, None, False, False)
    X = RationalMatrix.from_flat(res.x, L.n)
    return LPSolution(res.status, X, res.objective, is_vertex(L, X), res.unique)


@lru_cache(maxsize=64)
def code_constraints(spec: CodeSpec) -> ConstraintSet:
    """The consolidated constraint set whose vertices are the code's matrices."""
    return consolidate(consolidation_spec(spec))


@dataclass(frozen=True)
class LPDecodeResult:
    decoded: Optional[Tuple[Fraction, ...]]
    solution: LPSolution
    message: Optional[int]
    fractional: bool

    def to_json(self) -> Dict[str, Any]:
        return {
            "decoded": None if self.decoded is None else [format_rational(v) for v in self.decoded],
            "message": self.message,
            "fractional": self.fractional,
            "solution": self.solution.to_json(),
        }


def lp_decode(
    lam: Sequence[RationalLike],
    spec_or_L: Union[CodeSpec, ConstraintSet],
    mu: Optional[Sequence[RationalLike]] = None,
) -> LPDecodeResult:
    """Solve max λᵀXμ and output μ₀ = X₀μ; with a code, also the message when X₀ is a permutation."""
    if isinstance(spec_or_L, CodeSpec):
        spec: Optional[CodeSpec] = spec_or_L
        L = code_constraints(spec_or_L)
        mu_v = spec_or_L.mu if mu is None else _vector(mu, L.n, "mu")
    else:
        spec = None
        L = spec_or_L
        if mu is None:
            mu_v = tuple(Fraction(i + 1) for i in range(L.n))
        else:
            mu_v = _vector(mu, L.n, "mu")
    sol = solve_lp_max(L, lam, mu_v)
    if sol.point is None:
        return LPDecodeResult(None, sol, None, False)
    decoded = sol.point.apply(mu_v)
    if not is_permutation_matrix(sol.point):
        return LPDecodeResult(decoded, sol, None, True)
    message = None
    if spec is not None:
        try:
            message = decode_message(sol.point, spec)
        except (DecodeFailure, MembershipError):
            message = None
    return LPDecodeResult(decoded, sol, message, False)


def _squared_distance(X: RationalMatrix, mu: Sequence[Fraction], lam: Sequence[Fraction]) -> Fraction:
    return sum(((a - b) ** 2 for a, b in zip(X.apply(mu), lam)), Fraction(0))


def ml_bruteforce(
    lam: Sequence[RationalLike],
    mu: Sequence[RationalLike],
    G: Sequence[RationalMatrix],
    budget: int = ML_BUDGET,
) -> RationalMatrix:
    """argmin ‖Xμ − λ‖² over G; ties go to the lexicographically smallest flattened matrix."""
    if not G:
        raise InvalidSizeError("empty codebook")
    if len(G) > budget:
        raise BudgetExceededError(f"codebook of {len(G)} exceeds ML budget {budget}")
    n = G[0].rows
    lam_v = _vector(lam, n, "lambda")
    mu_v = _vector(mu, n, "mu")
    return min(G, key=lambda X: (_squared_distance(X, mu_v, lam_v), X.flat()))


def _need_pair(G: Sequence[Permutation]) -> None:
    if len(G) < 2:
        raise InvalidSizeError("a distance needs at least two elements")


def kendall_tau_min(G: Sequence[Permutation], group: bool = False) -> int:
    """Minimum inversion count of g₀g₁⁻¹ over distinct pairs.

    With ``group=True`` G is assumed closed under products and inverses, so the
    minimum runs over non-identity elements only.
    """
    _need_pair(G)
    if group:
        return min(g.inversions() for g in G if not g.is_identity())
    return min(
        G[a].after(G[b].inverse()).inversions() for a in range(len(G)) for b in range(a + 1, len(G))
    )


def euclidean_min(
    G: Sequence[Permutation], mu: Optional[Sequence[RationalLike]] = None, group: bool = False
) -> Fraction:
    """Minimum of ‖g₀μ − g₁μ‖²/2 over distinct pairs, with μ = (1, …, n) by default."""
    _need_pair(G)
    n = G[0].degree
    mu_v = tuple(Fraction(i + 1) for i in range(n)) if mu is None else _vector(mu, n, "mu")

    def half_sq(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
        return sum(((a - b) ** 2 for a, b in zip(u, v)), Fraction(0)) / 2

    if group:
        return min(half_sq(g.permute_vector(mu_v), mu_v) for g in G if not g.is_identity())
    images = [g.permute_vector(mu_v) for g in G]
    return min(half_sq(images[a], images[b]) for a in range(len(G)) for b in range(a + 1, len(G)))


def conjugate_group(sigma: Permutation, G: Sequence[Permutation]) -> List[Permutation]:
    """{σ⁻¹∘π∘σ : π ∈ G}, the automorphism group of the conjugated graph when G = Aut(Γ)."""
    inv = sigma.inverse()
    return [inv.after(pi.after(sigma)) for pi in G]


def union_automorphisms(graph: Graph, R: int) -> List[Permutation]:
    """Aut of R disjoint copies of the graph, by brute force when small, else as Aut(Γ) ≀ S_R."""
    n = graph.n * R
    if n <= EXHAUSTIVE_SEARCH_DEGREE:
        return automorphisms_bruteforce(union_graph(graph, R), EXHAUSTIVE_SEARCH_DEGREE)
    local = automorphisms_bruteforce(graph)
    nu = graph.n
    out = []
    for top in permutations(range(R)):
        stack: List[Tuple[Permutation, ...]] = [()]
        for _ in range(R):
            stack = [prefix + (g,) for prefix in stack for g in local]
        for gs in stack:
            out.append(Permutation(tuple(top[i] * nu + gs[i](a) for i in range(R) for a in range(nu))))
    return sorted(out, key=lambda p: p.images)


@dataclass(frozen=True)
class ConjugationResult:
    sigma: Permutation
    d_l: int
    d_E: Fraction
    exhaustive: bool
    examined: int

    def to_json(self) -> Dict[str, Any]:
        return {
            "sigma": list(self.sigma.images),
            "d_l": self.d_l,
            "d_E": format_rational(self.d_E),
            "exhaustive": self.exhaustive,
            "examined": self.examined,
        }


def best_conjugation_search(
    graph: Graph, R: int, budget: Optional[int] = None, seed: int = 0
) -> ConjugationResult:
    """Search σ maximizing d_l of Aut(σ(Γ⁽ᴿ⁾)), then d_E, then the smallest σ.

    Exhaustive over S_{νR} when νR ≤ 8, otherwise a seeded sample of ``budget``
    permutations (the identity is always included).
    """
    n = graph.n * R
    G = union_automorphisms(graph, R)
    if len(G) < 2:
        raise InvalidSizeError("the union graph has a trivial automorphism group")
    exhaustive = n <= EXHAUSTIVE_SEARCH_DEGREE and budget is None
    if exhaustive:
        candidates = (Permutation(p) for p in permutations(range(n)))
    else:
        rng = np.random.Generator(np.random.PCG64(seed))
        count = SEARCH_SAMPLES if budget is None else budget
        sampled = [Permutation.identity(n)] + [
            Permutation(tuple(int(v) for v in rng.permutation(n))) for _ in range(max(count - 1, 0))
        ]
        candidates = iter(sorted(set(sampled), key=lambda p: p.images))
    best: Optional[Tuple[int, Fraction, Permutation]] = None
    examined = 0
    for sigma in candidates:
        examined += 1
        H = conjugate_group(sigma, G)
        dl = kendall_tau_min(H, group=True)
        if best is not None and dl < best[0]:
            continue
        de = euclidean_min(H, group=True)
        if best is None or (dl, de) > (best[0], best[1]):
            best = (dl, de, sigma)
    assert best is not None
    return ConjugationResult(best[2], best[0], best[1], exhaustive, examined)


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    mes: int
    decoded: Optional[int]
    lp_objective: Optional[Fraction]
    vertex_flag: bool
    unique: bool
    fractional: bool
    ml_agrees: Optional[bool]


@dataclass(frozen=True)
class SimulationReport:
    trials: int
    noise_variance: Fraction
    codeword_errors: int
    ml_mismatches: int
    seed: int
    unique_trials: int
    degenerate_trials: int
    fractional_trials: int
    decode_failures: int
    ml_checked: bool
    records: Tuple[TrialRecord, ...] = ()

    def __post_init__(self) -> None:
        if not 0 <= self.codeword_errors <= self.trials:
            raise ValueError("codeword_errors must lie in 0..trials")

    def to_json(self) -> Dict[str, Any]:
        return {
            "trials": self.trials,
            "noise_variance": format_rational(self.noise_variance),
            "codeword_errors": self.codeword_errors,
            "ml_mismatches": self.ml_mismatches,
            "seed": self.seed,
            "unique_trials": self.unique_trials,
            "degenerate_trials": self.degenerate_trials,
            "fractional_trials": self.fractional_trials,
            "decode_failures": self.decode_failures,
            "ml_checked": self.ml_checked,
        }


def _gaussians(rng: np.random.Generator, count: int) -> List[float]:
    """Box–Muller on uniforms from the stream; 1 − u keeps the logarithm finite."""
    out: List[float] = []
    while len(out) < count:
        u1, u2 = rng.random(2)
        radius = math.sqrt(-2.0 * math.log(1.0 - u1))
        out.append(radius * math.cos(2.0 * math.pi * u2))
        out.append(radius * math.sin(2.0 * math.pi * u2))
    return out[:count]


def quantize(value: float, denominator: int = QUANTUM) -> Fraction:
    return Fraction(round(value * denominator), denominator)


def _trial_stream(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(trial,))))


def simulate(
    spec: CodeSpec,
    sigma2: RationalLike,
    trials: int,
    seed: int = 0,
    L: Optional[ConstraintSet] = None,
    threads: int = 1,
    ml_budget: int = ML_BUDGET,
) -> SimulationReport:
    """Send uniform messages through additive Gaussian noise and LP-decode each one."""
    if trials < 1:
        raise InvalidSizeError("trials must be at least 1")
    variance = to_rational(sigma2)
    if variance < 0:
        raise InvalidSizeError("noise variance must be nonnegative")
    constraints = code_constraints(spec) if L is None else L
    size = code_cardinality(spec)
    book = codebook(spec, ml_budget) if size <= ml_budget else None
    scale = math.sqrt(float(variance))
    n = spec.nu * spec.R

    def run(trial: int) -> TrialRecord:
        rng = _trial_stream(seed, trial)
        mes = int(rng.integers(0, size))
        codeword = encode(mes, spec).codeword
        noise = _gaussians(rng, n) if variance else [0.0] * n
        lam = tuple(c + quantize(scale * z) for c, z in zip(codeword, noise))
        result = lp_decode(lam, spec if L is None else constraints, spec.mu)
        sol = result.solution
        decoded = result.message
        if decoded is None and sol.point is not None and not result.fractional and L is not None:
            try:
                decoded = decode_message(sol.point, spec)
            except (DecodeFailure, MembershipError):
                decoded = None
        agrees = None
        if book is not None and sol.unique and sol.point is not None:
            agrees = ml_bruteforce(lam, spec.mu, book, ml_budget) == sol.point
        return TrialRecord(
            trial, mes, decoded, sol.objective_value, sol.is_vertex, sol.unique, result.fractional, agrees
        )

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = tuple(pool.map(run, range(trials)))
    else:
        records = tuple(run(t) for t in range(trials))
    return SimulationReport(
        trials=trials,
        noise_variance=variance,
        codeword_errors=sum(1 for r in records if r.decoded != r.mes),
        ml_mismatches=sum(1 for r in records if r.ml_agrees is False),
        seed=seed,
        unique_trials=sum(1 for r in records if r.unique),
        degenerate_trials=sum(1 for r in records if not r.unique),
        fractional_trials=sum(1 for r in records if r.fractional),
        decode_failures=sum(1 for r in records if r.decoded is None),
        ml_checked=book is not None,
        records=records,
    )
