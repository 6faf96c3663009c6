"""Canonical JSON serialization for graphs, matrices, and reports.

All numeric output is written with 17 significant digits and dictionary keys
are sorted, so identical inputs always produce identical bytes.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .graphs import ColoredGraph, build_cayley, build_glued_trees, build_hypercube, graph_from_edges
from .perm import generate_group, parse_cycles

__all__ = [
    "canonical_dumps",
    "matrix_to_json",
    "matrix_from_json",
    "graph_to_json",
    "graph_from_json",
]


def _fmt_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise ValueError("non-finite float in canonical JSON output")
    if x == 0.0:
        x = 0.0  # normalize -0.0
    return format(x, ".17g")


def _encode(obj, out: list[str]):
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_fmt_float(float(obj)))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, item in enumerate(obj):
            if i:
                out.append(",")
            _encode(item, out)
        out.append("]")
    elif isinstance(obj, dict):
        out.append("{")
        for i, key in enumerate(sorted(obj)):
            if i:
                out.append(",")
            if not isinstance(key, str):
                raise TypeError("canonical JSON requires string keys")
            out.append(json.dumps(key))
            out.append(":")
            _encode(obj[key], out)
        out.append("}")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def canonical_dumps(obj) -> str:
    out: list[str] = []
    _encode(obj, out)
    return "".join(out) + "\n"


def matrix_to_json(mat: np.ndarray) -> dict:
    mat = np.asarray(mat, dtype=np.complex128)
    return {
        "rows": int(mat.shape[0]),
        "cols": int(mat.shape[1]),
        "re": [float(x) for x in mat.real.reshape(-1)],
        "im": [float(x) for x in mat.imag.reshape(-1)],
    }


def matrix_from_json(data: dict) -> np.ndarray:
    rows, cols = int(data["rows"]), int(data["cols"])
    re = np.asarray(data["re"], dtype=np.float64).reshape(rows, cols)
    im = np.asarray(data["im"], dtype=np.float64).reshape(rows, cols)
    return re + 1j * im


def graph_to_json(graph: ColoredGraph) -> dict:
    arcs = sorted([v, c, w, c2] for (v, c), (w, c2) in graph.arcs.items())
    data = {
        "num_vertices": graph.num_vertices,
        "vertex_labels": list(graph.vertex_labels) if graph.vertex_labels else None,
        "arcs": arcs,
        "colors_at": [list(cs) for cs in graph.colors_at],
    }
    if graph.builder:
        data["builder"] = dict(graph.builder)
    return data


def _rebuild_from_builder(builder: dict) -> ColoredGraph:
    kind = builder.get("kind")
    if kind == "hypercube":
        return build_hypercube(int(builder["n"]))
    if kind == "glued-trees":
        return build_glued_trees(int(builder["n"]))
    if kind == "cayley":
        n = int(builder["domain"])
        gens = [parse_cycles(s, n) for s in builder["generators"]]
        return build_cayley(generate_group(gens), gens)
    raise ValueError(f"unknown builder kind {kind!r}")


def graph_from_json(data: dict) -> ColoredGraph:
    """Load a graph; builder metadata, when present, restores group structure.

    The rebuilt graph must reproduce the stored arcs exactly, so a stale or
    edited file cannot silently change meaning.
    """
    if data.get("builder"):
        graph = _rebuild_from_builder(data["builder"])
        stored = {(v, c): (w, c2) for v, c, w, c2 in map(tuple, data["arcs"])}
        if stored != graph.arcs:
            raise ValueError("stored arcs disagree with the builder metadata")
        return graph
    arcs = {(v, c): (w, c2) for v, c, w, c2 in map(tuple, data["arcs"])}
    labels = data.get("vertex_labels")
    return ColoredGraph(
        num_vertices=int(data["num_vertices"]),
        colors_at=tuple(tuple(cs) for cs in data["colors_at"]),
        arcs=arcs,
        vertex_labels=tuple(labels) if labels else None,
    )
