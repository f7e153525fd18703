"""Command-line front end: ``polyembed <command> ...``.

Reports are JSON with sorted keys, so the same input always gives the same
bytes. ``--human`` prints an indented text rendering instead. Exit codes:
0 success or embeddable, 1 not embeddable (or no result exists), 2 invalid
input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Dict, List, Optional, Sequence, TextIO, Tuple

from .abelian import CoefficientRing, FGAbelianGroup, dim_over_field
from .closure import (
    HypothesisViolation,
    ManifoldPresentation,
    NotRealizable,
    SearchCapExceeded,
    c_of,
    lower_bound_field,
    minimal_closure_field,
    minimal_closure_integral,
    sphere_embeddable,
)
from .fixtures import list_fixtures
from .graphprod import Graph, min_closed_h1_dim, minimum_genus
from .io import InputError, Loaded, load
from .polyhedron import ComplexError, euler_characteristic, singular_structure
from .thickening import Enumeration, ThickeningRejected, thicken_all

__all__ = ["run", "execute", "main", "render_human"]

EXIT_OK, EXIT_NO, EXIT_INVALID = 0, 1, 2

_THICKENINGS: Dict[str, Enumeration] = {}


def _thickenings(loaded: Loaded) -> Enumeration:
    """thicken_all, memoized on the raw complex data for repeated in-process calls."""
    key = json.dumps(loaded.data, sort_keys=True, default=str)
    if key not in _THICKENINGS:
        _THICKENINGS[key] = thicken_all(loaded.value)
    return _THICKENINGS[key]


def _coeff(text: str) -> CoefficientRing:
    try:
        return CoefficientRing.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


# -- commands -------------------------------------------------------------


def cmd_thicken(args) -> Tuple[int, dict]:
    src = load(args.file, ("complex",))
    C = src.value
    K = C.complex
    classes = _thickenings(src)
    report = {
        "h1": str(classes[0].h1) if classes else None,
        "euler_characteristic": euler_characteristic(C.original),
        "singular_structure": singular_structure(K).to_dict(K),
        "count": len(classes),
        "classes": [d.to_dict(K) for d in classes],
    }
    if not classes:
        report["reason"] = classes.reason
        return EXIT_NO, report
    return EXIT_OK, report


def _condition(h1, g: int, G: CoefficientRing) -> dict:
    out = {"g": g, "holds": sphere_embeddable(h1, 2 * g, G)}
    if G.is_field:
        out["dim_h1"] = dim_over_field(h1, G)
    else:
        out["h1"] = str(h1)
        out["required_h1"] = str(FGAbelianGroup(g))
    return out


def cmd_embed_sphere(args) -> Tuple[int, dict]:
    G = args.coeff
    src = load(args.file, ("complex", "manifold"))
    report = {"coeff": str(G), "kind": src.kind}
    if src.kind == "manifold":
        M: ManifoldPresentation = src.value
        if G.kind == "Q" and not M.orientable:
            raise InputError(src.source, "rational coefficients need an orientable manifold", field="orientable")
        cond = _condition(M.h1, M.genus, G)
        report["conditions"] = [cond]
        ok = cond["holds"]
    else:
        K = src.value.complex
        classes = _thickenings(src)
        report["classes"] = len(classes)
        conds = []
        for k, d in enumerate(classes):
            c = _condition(d.h1, d.boundary_genus, G)
            c["class"] = k
            conds.append(c)
        good = [c for c in conds if c["holds"]]
        ok = bool(good)
        if ok:
            k = good[0]["class"]
            report["witness_class"] = k
            report["witness"] = classes[k].to_dict(K)
            report["conditions"] = [good[0]]
        else:
            report["conditions"] = conds
            if not classes:
                report["reason"] = classes.reason
    report["verdict"] = "embeddable" if ok else "not embeddable"
    return (EXIT_OK if ok else EXIT_NO), report


def cmd_close(args) -> Tuple[int, dict]:
    src = load(args.file, ("manifold",))
    M: ManifoldPresentation = src.value
    F = args.coeff
    integral = args.integral or not F.is_field
    report = {"coeff": "Z" if integral else str(F), "h1_m": str(M.h1), "g": M.genus}
    if M.orientable:
        report["c_of"] = str(c_of(M))
    try:
        if integral:
            B, h1q = minimal_closure_integral(M)
        else:
            B, h1q = minimal_closure_field(M, F)
            report["lower_bound"] = lower_bound_field(M, F)
            report["dim"] = dim_over_field(h1q, F)
    except HypothesisViolation as e:
        report["verdict"] = "hypothesis violated"
        report["reason"] = str(e)
        return EXIT_NO, report
    report["verdict"] = "closed"
    report["witness_lagrangian"] = [list(r) for r in B.rows()]
    report["h1_closed"] = str(h1q)
    return EXIT_OK, report


def _rotation_dict(L: Graph, rotation) -> Dict[str, List[str]]:
    out = {}
    for v, cyc in enumerate(rotation.rotation):
        out[L.label(v)] = [f"e{d >> 1}:{L.label(L.tail(d ^ 1))}" for d in cyc]
    return out


def cmd_graph(args) -> Tuple[int, dict]:
    src = load(args.file, ("graph",))
    L: Graph = src.value
    res = minimum_genus(L)
    report = {
        "vertices": L.n,
        "edges": L.num_edges,
        "genus": res.genus,
        "faces": res.faces,
        "rotation_systems_examined": res.examined,
        "rotation": _rotation_dict(L, res.rotation),
    }
    if args.graph_command == "product":
        F = args.coeff
        if not F.is_field:
            raise InputError(src.source, "graph product needs a field coefficient (q, z2 or zp:P)")
        report["coeff"] = str(F)
        report["path_or_cycle"] = L.is_path_or_cycle()
        report["min_closed_h1_dim"] = min_closed_h1_dim(L, F)
    return EXIT_OK, report


def cmd_fixtures(args) -> Tuple[int, dict]:
    return EXIT_OK, {"fixtures": list_fixtures()}


# -- plumbing -------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--human", action="store_true", help="print a text rendering instead of JSON")
    common.add_argument("--timing", action="store_true", help="add elapsed_seconds to the report")

    p = argparse.ArgumentParser(prog="polyembed", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("thicken", parents=[common], help="enumerate orientable 3-thickenings of a 2-complex")
    s.add_argument("file", help="complex JSON file or fixture:NAME")
    s.set_defaults(func=cmd_thicken)

    s = sub.add_parser("embed-sphere", parents=[common], help="decide embeddability into a G-homology 3-sphere")
    s.add_argument("file", help="complex or manifold JSON file, or fixture:NAME")
    s.add_argument("--coeff", type=_coeff, default=CoefficientRing.parse("z"), help="z, q, z2 or zp:P")
    s.set_defaults(func=cmd_embed_sphere)

    s = sub.add_parser("close", parents=[common], help="minimal first-homology closure of a 3-manifold")
    s.add_argument("file", help="manifold JSON file or fixture:NAME")
    s.add_argument("--coeff", type=_coeff, default=CoefficientRing.parse("z"), help="z, q, z2 or zp:P")
    s.add_argument("--integral", action="store_true", help="integral closure (same as --coeff z)")
    s.set_defaults(func=cmd_close)

    g = sub.add_parser("graph", help="graph genus and L x S^1 closures")
    gsub = g.add_subparsers(dest="graph_command", required=True)
    s = gsub.add_parser("genus", parents=[common], help="orientable genus of a graph")
    s.add_argument("file", help="graph JSON file or fixture:NAME")
    s.set_defaults(func=cmd_graph)
    s = gsub.add_parser("product", parents=[common], help="minimal H_1 dimension of closures of L x S^1")
    s.add_argument("file", help="graph JSON file or fixture:NAME")
    s.add_argument("--coeff", type=_coeff, default=CoefficientRing.parse("q"), help="q, z2 or zp:P")
    s.set_defaults(func=cmd_graph)

    f = sub.add_parser("fixtures", help="built-in inputs")
    fsub = f.add_subparsers(dest="fixtures_command", required=True)
    s = fsub.add_parser("list", parents=[common], help="list fixture names")
    s.set_defaults(func=cmd_fixtures)
    return p


def _command_name(args) -> str:
    parts = [args.command]
    for extra in ("graph_command", "fixtures_command"):
        if getattr(args, extra, None):
            parts.append(getattr(args, extra))
    return " ".join(parts)


def _dispatch(args) -> Tuple[int, dict]:
    start = time.perf_counter()
    try:
        code, report = args.func(args)
    except InputError as e:
        code, report = EXIT_INVALID, {"error": str(e)}
    except (ComplexError, ThickeningRejected, NotRealizable) as e:
        code, report = EXIT_INVALID, {"error": f"{args.file}: {e}"}
    except SearchCapExceeded as e:
        code, report = EXIT_INVALID, {"error": f"{e} (raise POLYEMBED_GENUS_CAP to search further)"}
    report["command"] = _command_name(args)
    if hasattr(args, "file"):
        report["input"] = args.file
    if args.timing:
        report["elapsed_seconds"] = round(time.perf_counter() - start, 3)
    return code, report


def execute(argv: Sequence[str]) -> Tuple[int, dict]:
    """Run a command and return (exit code, report) without printing it.

    Argument errors raise SystemExit(2) as usual with argparse.
    """
    return _dispatch(_parser().parse_args(list(argv)))


def _short(x) -> str:
    return json.dumps(x) if isinstance(x, (list, dict)) else str(x)


def render_human(report: dict, indent: int = 0, max_items: int = 12) -> str:
    """Indented text rendering; long lists are elided."""
    pad = "  " * indent
    lines = []
    for key in sorted(report):
        val = report[key]
        if isinstance(val, dict):
            lines.append(f"{pad}{key}:")
            lines.append(render_human(val, indent + 1, max_items))
        elif isinstance(val, list) and val and isinstance(val[0], dict):
            lines.append(f"{pad}{key}: ({len(val)})")
            for k, item in enumerate(val[:max_items]):
                lines.append(f"{pad}  - [{k}]")
                lines.append(render_human(item, indent + 2, max_items))
            if len(val) > max_items:
                lines.append(f"{pad}  ... {len(val) - max_items} more")
        elif isinstance(val, list) and len(val) > max_items:
            lines.append(f"{pad}{key}: {_short(val[:max_items])[:-1]}, ... ({len(val)} total)]")
        else:
            lines.append(f"{pad}{key}: {_short(val)}")
    return "\n".join(line for line in lines if line)


def run(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    try:
        args = _parser().parse_args(sys.argv[1:] if argv is None else list(argv))
    except SystemExit as e:
        return int(e.code or 0)
    code, report = _dispatch(args)
    if "error" in report:
        print(f"polyembed: error: {report['error']}", file=sys.stderr)
    if args.human:
        out.write(render_human(report) + "\n")
    else:
        out.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    return code


def main() -> None:
    sys.exit(run())
