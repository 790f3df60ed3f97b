"""Command line front end over structured-text tree documents.

A document is a JSON object with ``vertices``, ``edges`` (pairs, or
triples with a multiplicity), and optional ``r`` and ``d`` maps whose
values are decimal strings, so consumers never face native integer
overflow.  All output is deterministic: sorted keys, two-space indent,
decimal strings inside maps, plain integers for small summary scalars.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from math import gcd
from typing import Any, Mapping

from .arithstruct import (
    ArithmeticalStructure,
    ArithStructError,
    critical_group,
    structure_from_r,
    validate,
)
from .chipfiring import (
    ChipFiringError,
    divisor_degree,
    equivalent,
    full_divisor,
    order_in_group,
)
from .construct import (
    ConstructError,
    broom_with_group,
    realize_group,
    realize_on_subdivision,
)
from .enumeration import EnumerationConfig, EnumerationError, enumerate_structures
from .exactlinalg import AbelianGroup, ExactLinalgError
from .graphcore import Graph, GraphError, Tree, build_graph
from .mergestar import MergeStarError, check_merge_additivity, merge_structures
from .treedecomp import (
    TreeDecompError,
    invariant_factor_bound,
    iota,
    starlike_decomposition,
    two_matching_number,
)


class UsageError(Exception):
    """Malformed input or flags; maps to exit code 2."""


DOMAIN_ERRORS = (
    GraphError,
    ArithStructError,
    ChipFiringError,
    TreeDecompError,
    MergeStarError,
    ConstructError,
    EnumerationError,
    ExactLinalgError,
)


def _as_int(value: Any, what: str) -> int:
    if isinstance(value, bool):
        raise UsageError(f"{what}: expected an integer, got {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value, 10)
        except ValueError:
            raise UsageError(f"{what}: {value!r} is not a decimal integer") from None
    raise UsageError(f"{what}: expected an integer, got {value!r}")


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def parse_document(text: str) -> tuple[Graph, dict[str, int] | None, dict[str, int] | None]:
    """Parse a tree document into a graph plus optional r and d maps."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"document is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError("document must be a JSON object")
    for key in ("vertices", "edges"):
        if key not in data:
            raise UsageError(f"document lacks the {key!r} field")
    vertices = data["vertices"]
    edges = data["edges"]
    if not isinstance(vertices, list) or not all(isinstance(v, (str, int)) for v in vertices):
        raise UsageError("'vertices' must be a list of identifiers")
    if not isinstance(edges, list):
        raise UsageError("'edges' must be a list")
    norm_edges = []
    for e in edges:
        if not isinstance(e, list) or len(e) not in (2, 3):
            raise UsageError(f"edge {e!r} is not a pair or triple")
        u, v = str(e[0]), str(e[1])
        if len(e) == 3:
            norm_edges.append((u, v, _as_int(e[2], "edge multiplicity")))
        else:
            norm_edges.append((u, v))
    g = build_graph(norm_edges)
    names = sorted(str(v) for v in vertices)
    if names != list(g.vertices):
        raise UsageError(
            "'vertices' does not match the endpoints of 'edges'"
        )

    def read_map(key: str) -> dict[str, int] | None:
        raw = data.get(key)
        if raw is None:
            return None
        if not isinstance(raw, dict):
            raise UsageError(f"{key!r} must be a map")
        out = {}
        for k, val in raw.items():
            k = str(k)
            if not g.has_vertex(k):
                raise UsageError(f"{key!r} mentions unknown vertex {k!r}")
            out[k] = _as_int(val, f"{key}[{k}]")
        return out

    return g, read_map("r"), read_map("d")


def load_document(path: str) -> tuple[Graph, dict[str, int] | None, dict[str, int] | None]:
    return parse_document(_read_text(path))


def _need_structure(g: Graph, r: Mapping[str, int] | None,
                    d: Mapping[str, int] | None) -> ArithmeticalStructure:
    if r is None:
        raise UsageError("this subcommand needs an 'r' map in the document")
    if d is not None:
        ok, bad = validate(g, d, r)
        if not ok:
            raise ArithStructError(f"invalid structure: {bad[0]}")
        return ArithmeticalStructure(graph=g, r=dict(r), d=dict(d))
    return structure_from_r(g, r)


def _need_tree(g: Graph) -> Tree:
    if isinstance(g, Tree):
        return g
    return Tree.from_graph(g)


def document_of(g: Graph, s: ArithmeticalStructure | None = None,
                extra: dict[str, Any] | None = None) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "vertices": list(g.vertices),
        "edges": [
            [u, v] if mult == 1 else [u, v, mult] for u, v, mult in g.edges()
        ],
    }
    if s is not None:
        doc["r"] = {v: str(s.r[v]) for v in g.vertices}
        doc["d"] = {v: str(s.d[v]) for v in g.vertices}
    if extra:
        doc.update(extra)
    return doc


def _emit(obj: Any) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _parse_chips(g: Graph, text: str, what: str) -> dict[str, int]:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{what} is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise UsageError(f"{what} must be a JSON map")
    out = {}
    for k, val in raw.items():
        k = str(k)
        if not g.has_vertex(k):
            raise UsageError(f"{what} mentions unknown vertex {k!r}")
        out[k] = _as_int(val, f"{what}[{k}]")
    return out


def _parse_group(text: str) -> AbelianGroup:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise UsageError("--group needs at least one integer")
    vals = []
    for p in parts:
        try:
            vals.append(int(p, 10))
        except ValueError:
            raise UsageError(f"--group entry {p!r} is not an integer") from None
    if vals == [1]:
        return AbelianGroup.trivial()
    for x in vals:
        if x < 2:
            raise UsageError(f"--group entry {x} is below 2")
    for a, b in zip(vals, vals[1:]):
        if b % a:
            raise UsageError(
                f"--group must be a divisibility chain smallest-to-largest; "
                f"{a} does not divide {b}"
            )
    return AbelianGroup(tuple(vals))


def _group_json(k: AbelianGroup) -> dict[str, Any]:
    return {
        "invariant_factors": list(k.invariant_factors),
        "order": k.order,
    }


def cmd_validate(ns: argparse.Namespace) -> int:
    g, r, d = load_document(ns.input)
    if r is None:
        raise UsageError("validate needs an 'r' map in the document")
    if d is not None:
        _, problems = validate(g, d, r)
    else:
        try:
            structure_from_r(g, r)
            problems = []
        except ArithStructError as exc:
            problems = [str(exc)]
    _emit({"valid": not problems, "problems": problems})
    return 0


def cmd_group(ns: argparse.Namespace) -> int:
    g, r, d = load_document(ns.input)
    s = _need_structure(g, r, d)
    _emit(_group_json(critical_group(g, s)))
    return 0


def cmd_divisor(ns: argparse.Namespace) -> int:
    g, r, d = load_document(ns.input)
    s = _need_structure(g, r, d)
    chips = _parse_chips(g, ns.chips, "--chips")
    if ns.op == "degree":
        _emit({"degree": divisor_degree(full_divisor(g, chips), s.r)})
    elif ns.op == "order":
        _emit({"order": order_in_group(g, s, chips)})
    else:
        if ns.other is None:
            raise UsageError("--op equivalent needs --other")
        other = _parse_chips(g, ns.other, "--other")
        witness = equivalent(g, s.d, chips, other)
        _emit({
            "equivalent": witness is not None,
            "firing_vector": None if witness is None
            else {v: str(x) for v, x in witness.items()},
        })
    return 0


def cmd_decompose(ns: argparse.Namespace) -> int:
    g, _, _ = load_document(ns.input)
    t = _need_tree(g)
    dec = starlike_decomposition(t)
    pieces = []
    for i, piece in enumerate(dec.pieces):
        is_split = i < len(dec.splittings)
        entry: dict[str, Any] = {
            "vertices": list(piece.vertices),
            "leaves": len(piece.leaves),
            "center": piece.branch_vertices[0] if piece.branch_vertices else None,
        }
        if is_split:
            sp = dec.splittings[i]
            entry["merge_leaf"] = sp.merge_leaf
            entry["target"] = sp.target
            entry["regular"] = sp.regular
        else:
            entry["merge_leaf"] = None
            entry["target"] = None
            entry["regular"] = None
        pieces.append(entry)
    _emit({"iota": dec.irregular_count, "pieces": pieces})
    return 0


def cmd_iota(ns: argparse.Namespace) -> int:
    g, _, _ = load_document(ns.input)
    t = _need_tree(g)
    _emit({
        "iota": iota(t),
        "leaves": len(t.leaves),
        "bound": invariant_factor_bound(t),
    })
    return 0


def cmd_nu2(ns: argparse.Namespace) -> int:
    g, _, _ = load_document(ns.input)
    t = _need_tree(g)
    nu = two_matching_number(t)
    _emit({
        "nu2": nu,
        "edges": t.edge_count,
        "bound": t.edge_count - nu,
    })
    return 0


def cmd_merge(ns: argparse.Namespace) -> int:
    g1, r1, d1 = load_document(ns.left)
    g2, r2, d2 = load_document(ns.right)
    s1 = _need_structure(g1, r1, d1)
    s2 = _need_structure(g2, r2, d2)
    if not g1.has_vertex(ns.left_vertex):
        raise UsageError(f"--left-vertex {ns.left_vertex!r} not in the left graph")
    if not g2.has_vertex(ns.right_vertex):
        raise UsageError(f"--right-vertex {ns.right_vertex!r} not in the right graph")
    k1, k2, km, additive = check_merge_additivity(
        g1, ns.left_vertex, s1, g2, ns.right_vertex, s2
    )
    merged, sm = merge_structures(
        g1, ns.left_vertex, s1, g2, ns.right_vertex, s2
    )
    g0 = gcd(s1.r[ns.left_vertex], s2.r[ns.right_vertex])
    _emit(document_of(merged, sm, extra={
        "merge_report": {
            "glued_gcd": g0,
            "additive": additive,
            "order_identity_holds": km.order == k1.order * k2.order * g0 * g0,
            "left_group": _group_json(k1),
            "right_group": _group_json(k2),
            "merged_group": _group_json(km),
        }
    }))
    return 0


def cmd_construct(ns: argparse.Namespace) -> int:
    target = _parse_group(ns.group)
    if ns.tree is not None:
        if ns.beta is None:
            raise UsageError("--tree needs --beta")
        g, _, _ = load_document(ns.tree)
        t = _need_tree(g)
        tree, s = realize_on_subdivision(t, target, ns.beta)
    elif ns.prongs is not None:
        tree, s = broom_with_group(target, ns.prongs)
    else:
        if ns.beta is not None:
            raise UsageError("--beta needs --tree")
        tree, s = realize_group(target)
    _emit(document_of(tree, s, extra={
        "group": _group_json(critical_group(tree, s)),
    }))
    return 0


def cmd_enumerate(ns: argparse.Namespace) -> int:
    g, _, _ = load_document(ns.input)
    t = _need_tree(g)
    try:
        cfg = EnumerationConfig(r_bound=ns.r_bound, vertex_cap=ns.vertex_cap)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    structures = enumerate_structures(t, cfg)
    _emit({
        "count": len(structures),
        "structures": [
            {
                "r": {v: str(s.r[v]) for v in t.vertices},
                "d": {v: str(s.d[v]) for v in t.vertices},
            }
            for s in structures
        ],
    })
    return 0


def fixture_path(name: str) -> str:
    """Filesystem path of a shipped example document."""
    if not name.endswith(".json"):
        name += ".json"
    ref = resources.files("critforge").joinpath("fixtures").joinpath(name)
    with resources.as_file(ref) as p:
        return str(p)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="critforge",
        description="Arithmetical structures, chip firing, and critical groups on trees.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def with_input(p: argparse.ArgumentParser) -> None:
        p.add_argument("--input", required=True,
                       help="tree document path, or - for stdin")

    p = sub.add_parser("validate", help="check a structure document")
    with_input(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("group", help="critical group of a structure")
    with_input(p)
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("divisor", help="degree, order, or equivalence of chip piles")
    with_input(p)
    p.add_argument("--chips", required=True, help="JSON map of vertex to chip count")
    p.add_argument("--op", required=True, choices=("degree", "order", "equivalent"))
    p.add_argument("--other", help="second chip map for --op equivalent")
    p.set_defaults(func=cmd_divisor)

    p = sub.add_parser("decompose", help="starlike decomposition of a tree")
    with_input(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("iota", help="irregular splitting count and leaf bound")
    with_input(p)
    p.set_defaults(func=cmd_iota)

    p = sub.add_parser("nu2", help="2-matching number and edge bound")
    with_input(p)
    p.set_defaults(func=cmd_nu2)

    p = sub.add_parser("merge", help="merge two structures at a vertex")
    p.add_argument("--left", required=True, help="left document path")
    p.add_argument("--right", required=True, help="right document path")
    p.add_argument("--left-vertex", required=True)
    p.add_argument("--right-vertex", required=True)
    p.set_defaults(func=cmd_merge)

    p = sub.add_parser("construct", help="build a structure with a given group")
    p.add_argument("--group", required=True,
                   help="invariant factors smallest-to-largest, e.g. 3,18; 1 for trivial")
    p.add_argument("--tree", help="realize on a subdivision of this tree document")
    p.add_argument("--beta", type=int, help="required irregularity of the subdivision")
    p.add_argument("--prongs", type=int, help="build a broom with this many prongs")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("enumerate", help="list structures on a small tree")
    with_input(p)
    p.add_argument("--r-bound", type=int, default=60)
    p.add_argument("--vertex-cap", type=int, default=12)
    p.set_defaults(func=cmd_enumerate)

    return parser


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return ns.func(ns)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except DOMAIN_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))
