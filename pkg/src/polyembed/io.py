"""Loading complexes, manifold presentations and graphs from JSON or fixtures.

Every failure is raised as :class:`InputError`, whose message names the
file, the line and the offending field.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional, Sequence, Union

from . import fixtures
from .closure import ManifoldPresentation, NotRealizable, validate_hlhd
from .graphprod import Graph
from .polyhedron import CheckedComplex, ComplexError, complex_from_dict, validate_complex

__all__ = ["InputError", "Loaded", "load", "KINDS"]

KINDS = ("complex", "manifold", "graph")


class InputError(ValueError):
    def __init__(self, source: str, message: str, line: Optional[int] = None, field: Optional[str] = None):
        self.source = source
        self.line = line
        self.field = field
        loc = source if line is None else f"{source}:{line}"
        what = f"field '{field}': " if field else ""
        super().__init__(f"{loc}: {what}{message}")


@dataclass
class Loaded:
    kind: str
    value: Union[CheckedComplex, ManifoldPresentation, Graph]
    source: str
    data: Optional[dict] = None  # raw JSON for complexes, used as a cache key


def _field_line(text: str, key: str) -> Optional[int]:
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def _detect(data: dict) -> Optional[str]:
    if "triangles" in data:
        return "complex"
    if "inclusion_matrix" in data or "boundary_genera" in data:
        return "manifold"
    if "edges" in data or "adjacency" in data:
        return "graph"
    return None


def _is_int(x: Any) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _check_matrix(value: Any, fail) -> None:
    if not isinstance(value, list) or not all(isinstance(r, list) for r in value):
        fail("expected a list of integer rows")
    for k, r in enumerate(value):
        if not all(_is_int(x) for x in r):
            fail(f"row {k} contains a non-integer entry")


def _manifold(data: dict, fail) -> ManifoldPresentation:
    for key in ("boundary_genera", "inclusion_matrix"):
        if key not in data:
            fail("missing required field", key)
    genera = data["boundary_genera"]
    if not isinstance(genera, list) or not all(_is_int(g) and g >= 0 for g in genera):
        fail("expected a list of non-negative integers", "boundary_genera")
    inc = data["inclusion_matrix"]
    _check_matrix(inc, lambda m: fail(m, "inclusion_matrix"))
    rels = data.get("h1_relations", [])
    _check_matrix(rels, lambda m: fail(m, "h1_relations"))
    if "orientable" in data and not isinstance(data["orientable"], bool):
        fail("expected true or false", "orientable")
    if "h1_generators" in data and not (_is_int(data["h1_generators"]) and data["h1_generators"] >= 0):
        fail("expected a non-negative integer", "h1_generators")
    n = data.get("h1_generators", len(inc) if inc else (len(rels[0]) if rels else 0))
    for k, r in enumerate(rels):
        if len(r) != n:
            fail(f"relation row {k} has length {len(r)}, expected {n} (one per generator)", "h1_relations")
    if inc and len(inc) != n:
        fail(f"{len(inc)} rows, expected one per H_1 generator ({n})", "inclusion_matrix")
    width = 2 * sum(genera)
    for k, r in enumerate(inc):
        if len(r) != width:
            fail(f"row {k} has length {len(r)}, expected 2g = {width}", "inclusion_matrix")
    try:
        M = ManifoldPresentation.from_dict(data)
        validate_hlhd(M)
    except NotRealizable as e:
        fail(f"not the homology data of a 3-manifold: {e}", "inclusion_matrix")
    except ValueError as e:
        fail(str(e), "inclusion_matrix")
    return M


def _complex_field(msg: str) -> str:
    if msg.startswith(("face closure violated: edge", "degenerate edge", "duplicate edge")):
        return "edges"
    if msg.startswith(("face closure violated: vertex", "duplicate vertex")):
        return "vertices"
    if "lies in no triangle" in msg:
        return "edges" if msg.startswith("edge") else "vertices"
    return "triangles"


def _complex(data: dict, fail) -> CheckedComplex:
    tris = data.get("triangles")
    if not isinstance(tris, list) or not all(isinstance(t, list) for t in tris):
        fail("expected a list of vertex triples", "triangles")
    for key in ("triangles", "edges", "vertices"):
        seq = data.get(key, [])
        flat = [x for t in seq for x in t] if key != "vertices" else seq
        if not isinstance(seq, list) or not all(isinstance(x, (str, int)) and not isinstance(x, bool) for x in flat):
            fail("vertex labels must be strings or integers", key)
    try:
        return validate_complex(complex_from_dict(data))
    except ComplexError as e:
        fail(str(e), _complex_field(str(e)))


def _graph(data: dict, fail) -> Graph:
    field = "edges" if "edges" in data else "adjacency"
    try:
        return Graph.from_dict(data)
    except (ValueError, TypeError, AttributeError) as e:
        fail(str(e), field)


def _from_fixture(name: str, kinds: Sequence[str]) -> Loaded:
    source = f"fixture:{name}"
    getters = {
        "complex": lambda: validate_complex(complex_from_dict(fixtures.complex_fixture(name))),
        "manifold": lambda: fixtures.manifold_fixture(name),
        "graph": lambda: fixtures.graph_fixture(name),
    }
    for kind in kinds:
        try:
            value = getters[kind]()
        except KeyError as e:
            if ":" in name and "expected" in str(e):
                raise InputError(source, f"bad fixture arguments: {e.args[0]}") from None
            continue
        data = fixtures.complex_fixture(name) if kind == "complex" else None
        return Loaded(kind, value, source, data)
    raise InputError(source, f"unknown {' or '.join(kinds)} fixture (see 'fixtures list')")


def load(spec: str, kinds: Sequence[str] = KINDS) -> Loaded:
    """Load ``spec`` (a JSON path or ``fixture:NAME``) as one of ``kinds``."""
    if spec.startswith("fixture:"):
        return _from_fixture(spec[len("fixture:"):], kinds)
    path = Path(spec)
    try:
        text = path.read_text()
    except OSError as e:
        raise InputError(spec, f"cannot read file: {e.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(spec, f"invalid JSON: {e.msg} (column {e.colno})", e.lineno) from None
    if not isinstance(data, dict):
        raise InputError(spec, "top-level JSON value must be an object", 1)

    def fail(message: str, field: Optional[str] = None):
        line = _field_line(text, field) if field else None
        raise InputError(spec, message, line or 1, field)

    kind = data.get("kind") or _detect(data)
    if kind not in KINDS:
        fail("cannot tell the input kind: expected 'triangles' (complex), "
             "'inclusion_matrix' (manifold) or 'edges'/'adjacency' (graph)")
    if kind not in kinds:
        fail(f"this command takes a {' or '.join(kinds)}, got a {kind}", "kind" if "kind" in data else None)
    builder = {"complex": _complex, "manifold": _manifold, "graph": _graph}[kind]
    return Loaded(kind, builder(data, fail), spec, data if kind == "complex" else None)
