"""Command-line interface: ``lpperm <verb> [flags]``.

Every verb writes one JSON document to stdout (or ``--out``).  Library errors
are reported on stderr as ``{"error": <class>, "message": <text>}`` with exit
status 1.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from .codes import CodeSpec, code_cardinality, codebook, decode_message, encode, wreath_to_matrix
from .consolidation import ConsolidationSpec, consolidate, resolve_constraint_ref
from .constraints import ConstraintSet, build_weak_sums
from .errors import LPPermError, ParseError
from .graphs import Graph, automorphisms_bruteforce, build_graph_constraints, conjugate_graph, parse_family, union_graph
from .lpdecode import (
    best_conjugation_search,
    code_constraints,
    conjugate_group,
    euclidean_min,
    kendall_tau_min,
    lp_decode,
    simulate,
    union_automorphisms,
)
from .matrix import RationalMatrix, format_rational, parse_vector
from .permutation import matrix_to_perm, parse_permutation
from .polytope import DEFAULT_LIMIT, check_compact, enumerate_vertices

DEFAULT_SEED = 20240101

VERBS = (
    "graph",
    "constraints",
    "vertices",
    "compact-check",
    "consolidate",
    "encode",
    "decode",
    "lp-decode",
    "distance",
    "simulate",
)


def _read_json(path: str) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc


def _load_spec(path: str) -> Union[CodeSpec, ConsolidationSpec]:
    data = _read_json(path)
    if not isinstance(data, dict):
        raise ParseError(f"{path} must hold a JSON object")
    if "rows" in data:
        return CodeSpec.from_json(data)
    return ConsolidationSpec.from_json(data, Path(path).parent)


def _code_spec(args: argparse.Namespace) -> CodeSpec:
    if not args.spec:
        raise ParseError("this verb needs --spec with a code spec")
    spec = _load_spec(args.spec)
    if not isinstance(spec, CodeSpec):
        raise ParseError(f"{args.spec} is a consolidation spec, not a code spec")
    return spec


def _graph(args: argparse.Namespace) -> Optional[Graph]:
    if args.graph:
        G = parse_family(args.graph)
    elif args.graph_file:
        G = Graph.from_json(_read_json(args.graph_file))
    else:
        return None
    if args.union:
        G = union_graph(G, args.union)
    if args.conjugate:
        G = conjugate_graph(parse_permutation(args.conjugate), G)
    return G


def _constraints(args: argparse.Namespace) -> ConstraintSet:
    """The constraint set named by whichever source flag was given."""
    if args.constraints:
        return ConstraintSet.from_json(_read_json(args.constraints))
    if args.preset:
        name, _, size = args.preset.partition(":")
        try:
            n = int(size)
        except ValueError as exc:
            raise ParseError(f"preset needs a size, e.g. {name}:4") from exc
        if name.strip().lower() == "weak_sums":
            return build_weak_sums(n)
        return resolve_constraint_ref(name, n, Path.cwd())
    G = _graph(args)
    if G is not None:
        return build_graph_constraints(G)
    if args.spec:
        spec = _load_spec(args.spec)
        if isinstance(spec, CodeSpec):
            return code_constraints(spec)
        return consolidate(spec)
    raise ParseError("give one of --constraints, --preset, --graph, --graph-file or --spec")


def _floatify(value: Any) -> Any:
    if isinstance(value, str) and "/" in value:
        try:
            return float(Fraction(value))
        except (ValueError, ZeroDivisionError):
            return value
    if isinstance(value, list):
        return [_floatify(v) for v in value]
    if isinstance(value, dict):
        return {k: _floatify(v) for k, v in value.items()}
    return value


def _matrix_from_input(data: Any) -> RationalMatrix:
    if isinstance(data, dict):
        data = data.get("matrix")
    if not isinstance(data, list):
        raise ParseError("input must be a matrix or an encode document with a 'matrix' field")
    try:
        return RationalMatrix.from_json(data)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad matrix: {exc}") from exc


def cmd_graph(args: argparse.Namespace) -> Dict[str, Any]:
    G = _graph(args)
    if G is None:
        raise ParseError("graph needs --graph or --graph-file")
    out = G.to_json()
    if args.list:
        out["automorphisms"] = [list(p.images) for p in automorphisms_bruteforce(G)]
    return out


def cmd_constraints(args: argparse.Namespace) -> Dict[str, Any]:
    return _constraints(args).to_json()


def cmd_vertices(args: argparse.Namespace) -> Dict[str, Any]:
    vs = enumerate_vertices(_constraints(args), args.limit, args.method)
    out: Dict[str, Any] = {"count": len(vs), "complete": vs.complete, "engine": vs.engine}
    if args.list:
        out["vertices"] = vs.to_json()["vertices"]
    return out


def cmd_compact_check(args: argparse.Namespace) -> Dict[str, Any]:
    return check_compact(_constraints(args), args.limit, seed=args.seed, method=args.method).to_json()


def cmd_consolidate(args: argparse.Namespace) -> Dict[str, Any]:
    if not args.spec:
        raise ParseError("consolidate needs --spec")
    spec = _load_spec(args.spec)
    if isinstance(spec, CodeSpec):
        return code_constraints(spec).to_json()
    return consolidate(spec).to_json()


def cmd_encode(args: argparse.Namespace) -> Dict[str, Any]:
    spec = _code_spec(args)
    if args.mes is None:
        raise ParseError("encode needs --mes")
    enc = encode(args.mes, spec)
    return {
        "mes": args.mes,
        "codeword": [format_rational(v) for v in enc.codeword],
        "element": enc.element.to_json(),
        "matrix": wreath_to_matrix(enc.element).to_json(),
    }


def cmd_decode(args: argparse.Namespace) -> Dict[str, Any]:
    spec = _code_spec(args)
    if not args.input:
        raise ParseError("decode needs --input (a matrix or encode output)")
    return {"mes": decode_message(_matrix_from_input(_read_json(args.input)), spec)}


def cmd_lp_decode(args: argparse.Namespace) -> Dict[str, Any]:
    if not args.lam:
        raise ParseError("lp-decode needs --lambda")
    lam = parse_vector(args.lam)
    mu = parse_vector(args.mu) if args.mu else None
    target: Union[CodeSpec, ConstraintSet]
    if args.spec and not (args.constraints or args.preset or args.graph or args.graph_file):
        spec = _load_spec(args.spec)
        target = spec if isinstance(spec, CodeSpec) else consolidate(spec)
    else:
        target = _constraints(args)
    return lp_decode(lam, target, mu).to_json()


def cmd_distance(args: argparse.Namespace) -> Dict[str, Any]:
    if args.spec:
        spec = _code_spec(args)
        G = [matrix_to_perm(X) for X in codebook(spec)]
        return {
            "size": code_cardinality(spec),
            "d_l": kendall_tau_min(G),
            "d_E": format_rational(euclidean_min(G, spec.mu)),
        }
    if args.graph:
        base = parse_family(args.graph)
    elif args.graph_file:
        base = Graph.from_json(_read_json(args.graph_file))
    else:
        raise ParseError("distance needs --spec, --graph or --graph-file")
    R = args.union or 1
    if args.search:
        return best_conjugation_search(base, R, args.limit if args.limit != DEFAULT_LIMIT else None, args.seed).to_json()
    G = union_automorphisms(base, R)
    out: Dict[str, Any] = {"size": len(G)}
    if args.conjugate:
        sigma = parse_permutation(args.conjugate)
        G = conjugate_group(sigma, G)
        out["sigma"] = list(sigma.images)
    out["d_l"] = kendall_tau_min(G, group=True)
    out["d_E"] = format_rational(euclidean_min(G, group=True))
    return out


def cmd_simulate(args: argparse.Namespace) -> Dict[str, Any]:
    spec = _code_spec(args)
    L = None
    if args.constraints or args.preset or args.graph or args.graph_file:
        L = _constraints(args)
    report = simulate(
        spec,
        Fraction(args.sigma2),
        args.trials,
        seed=args.seed,
        L=L,
        threads=args.threads,
    )
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["trial", "mes", "decoded", "lp_objective", "vertex_flag"])
            for r in report.records:
                objective = "" if r.lp_objective is None else format_rational(r.lp_objective)
                decoded = "" if r.decoded is None else r.decoded
                writer.writerow([r.trial, r.mes, decoded, objective, int(r.vertex_flag)])
    return report.to_json()


COMMANDS = {
    "graph": cmd_graph,
    "constraints": cmd_constraints,
    "vertices": cmd_vertices,
    "compact-check": cmd_compact_check,
    "consolidate": cmd_consolidate,
    "encode": cmd_encode,
    "decode": cmd_decode,
    "lp-decode": cmd_lp_decode,
    "distance": cmd_distance,
    "simulate": cmd_simulate,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lpperm", description="LP-decodable permutation codes from compact constraints.")
    p.add_argument("verb", choices=VERBS)
    src = p.add_argument_group("constraint sources")
    src.add_argument("--graph", help="graph family, e.g. cycle:5 or televis")
    src.add_argument("--graph-file", help="graph JSON document")
    src.add_argument("--union", type=int, help="take R disjoint copies of the graph")
    src.add_argument("--conjugate", help="relabel by a permutation, e.g. 0,2,1,3")
    src.add_argument("--preset", help="DS:n, pure_involution:n, weak_sums:n, unit:n or graph:<family>:n")
    src.add_argument("--constraints", help="ConstraintSet JSON document")
    src.add_argument("--spec", help="code spec or consolidation spec JSON")
    p.add_argument("--mes", type=int, help="message index for encode")
    p.add_argument("--input", help="matrix JSON (or encode output) for decode")
    p.add_argument("--lambda", dest="lam", help="received vector, e.g. 1/2,3,7/4")
    p.add_argument("--mu", help="initial vector (defaults to the code spec's mu or 1..n)")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--sigma2", default="0", help="noise variance as p/q")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--limit", type=int, default=DEFAULT_LIMIT, help="enumeration budget")
    p.add_argument("--method", choices=("auto", "active-set", "double-description"), default="auto")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--search", action="store_true", help="distance: search the best conjugating permutation")
    p.add_argument("--list", action="store_true", help="include full vertex or automorphism lists")
    p.add_argument("--csv", help="simulate: write per-trial records to this CSV file")
    p.add_argument("--float", action="store_true", help="add decimal renderings next to exact values")
    p.add_argument("--out", help="write the JSON result here instead of stdout")
    return p


def _fix_graph_preset(args: argparse.Namespace) -> None:
    # graph:<family>:n is the preset form of --graph <family>:n
    if args.preset and args.preset.lower().startswith("graph:"):
        args.graph = args.preset[len("graph:"):]
        args.preset = None


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    _fix_graph_preset(args)
    try:
        result = COMMANDS[args.verb](args)
    except LPPermError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 1
    except (ValueError, ZeroDivisionError) as exc:
        print(json.dumps({"error": "ParseError", "message": str(exc)}), file=sys.stderr)
        return 1
    if args.float:
        result = {"exact": result, "decimal": _floatify(result)}
    text = json.dumps(result)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
