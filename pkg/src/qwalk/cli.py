"""Command-line front end: build graphs, take quotients, run walks and
hitting analyses, all emitting canonical JSON artifacts.

Every run writes a manifest (config hash, tolerances, versions) next to its
outputs; identical configs produce byte-identical files.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import QwalkError
from .graphs import ColoredGraph, build_cayley, build_glued_trees, build_hypercube, shift_matrix
from .hitting import (
    c_matrix,
    dense_limit,
    hitting_time,
    infinite_projector,
    measurement_for_vertices,
    quotient_infinite_check,
    restrict_measurement,
)
from .perm import generate_group, parse_cycles
from .serialize import canonical_dumps, graph_from_json, graph_to_json, matrix_from_json, matrix_to_json
from .symmetry import (
    compute_orbits,
    glued_trees_column_subgroup,
    lift_vertex_automorphism,
    load_subgroup,
    projector_PH,
    quotient_graph,
    close_subgroup,
    verify_automorphism,
)
from .walk import dft_coin, custom_coin, factor_quotient_walk, grover_coin, induced_walk, walk_unitary

EXIT_FINITE = 0
EXIT_INFINITE = 3
EXIT_INDETERMINATE = 4

TOLERANCES = {
    "unitarity": 1e-12,
    "commutation": 1e-12,
    "evolution": 1e-10,
    "degeneracy": 1e-8,
    "intersection": 1e-8,
    "singularity": 1e-9,
}


def _write(outdir: Path, name: str, obj) -> None:
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / name).write_text(canonical_dumps(obj))


def _manifest(outdir: Path, command: str, config: dict, extra_tols: dict | None = None) -> None:
    tols = dict(TOLERANCES)
    tols.update(extra_tols or {})
    payload = canonical_dumps({"command": command, "config": config})
    _write(
        outdir,
        "manifest.json",
        {
            "command": command,
            "config": config,
            "config_sha256": hashlib.sha256(payload.encode()).hexdigest(),
            "tolerances": tols,
            "dense_limit": dense_limit(),
            "versions": {"qwalk": __version__, "numpy": np.__version__},
        },
    )


def _load_graph(path: str) -> ColoredGraph:
    return graph_from_json(json.loads(Path(path).read_text()))


def _load_subgroup_reps(graph: ColoredGraph, spec: str):
    if spec == "columns":
        vperms = glued_trees_column_subgroup(graph)
        return [lift_vertex_automorphism(graph, vp) for vp in vperms]
    entries = json.loads(Path(spec).read_text())
    return load_subgroup(graph, entries)


def _coin_factory(spec: str):
    if spec == "grover":
        return grover_coin
    if spec == "dft":
        return dft_coin
    if spec.startswith("custom:"):
        mat = matrix_from_json(json.loads(Path(spec[len("custom:") :]).read_text()))

        def fixed(d: int):
            if mat.shape[0] != d:
                raise QwalkError(f"custom coin is {mat.shape[0]}x{mat.shape[0]}, need degree {d}")
            return custom_coin(mat)

        return fixed
    raise QwalkError(f"unknown coin spec {spec!r}")


def _coin_for_graph(graph: ColoredGraph, spec: str):
    factory = _coin_factory(spec)
    degrees = sorted({graph.degree(v) for v in range(graph.num_vertices)})
    if len(degrees) == 1:
        return factory(degrees[0])
    return {d: factory(d) for d in degrees}


def _final_vertices(graph: ColoredGraph, spec: str) -> list[int]:
    return [graph.vertex_by_label(tok.strip()) for tok in spec.split(";") if tok.strip()]


def _parse_amplitudes(tokens: list[str]) -> np.ndarray:
    return np.array([complex(tok.strip().replace("i", "j")) for tok in tokens], dtype=np.complex128)


def _initial_state(graph: ColoredGraph, spec: str, orbits=None) -> np.ndarray:
    """Parse "vertex:uniform", "vertex:a1,a2,..", or "orbit:k" (quotient runs).

    Full-space specs on quotient runs are projected onto the orbit basis and
    must already lie inside it.
    """
    kind, _, rest = spec.partition(":")
    if kind == "orbit":
        if orbits is None:
            raise QwalkError("orbit initial states need a subgroup/quotient run")
        k = int(rest)
        psi = np.zeros(orbits.count, dtype=np.complex128)
        psi[k] = 1.0
        return psi
    v = graph.vertex_by_label(kind)
    d = graph.degree(v)
    if rest in ("uniform", ""):
        amps = np.full(d, 1.0 / np.sqrt(d), dtype=np.complex128)
    else:
        amps = _parse_amplitudes(rest.split(","))
        if amps.size != d:
            raise QwalkError(f"vertex {kind} has degree {d}, got {amps.size} amplitudes")
        amps = amps / np.linalg.norm(amps)
    psi = np.zeros(graph.basis_size, dtype=np.complex128)
    for amp, flat in zip(amps, graph.vertex_flats(v)):
        psi[flat] = amp
    if orbits is None:
        return psi
    coords = orbits.coordinates(psi)
    if abs(np.linalg.norm(coords) - 1.0) > 1e-9:
        raise QwalkError("initial state does not lie in the symmetric subspace")
    return coords


def cmd_build(args) -> int:
    if args.builder == "cayley":
        gen_strings = [s.strip() for s in args.gens.split(";") if s.strip()]
        if not gen_strings:
            raise QwalkError("cayley build needs --gens")
        domain = args.domain
        if domain is None:
            raise QwalkError("cayley build needs --domain (size of the permutation domain)")
        gens = [parse_cycles(s, domain) for s in gen_strings]
        group = generate_group(gens)
        if args.group:
            name = args.group.lower()
            if name.startswith("s") and name[1:].isdigit():
                import math

                expect = math.factorial(int(name[1:]))
                if group.order != expect:
                    raise QwalkError(
                        f"generators produce a group of order {group.order}, not |{args.group.upper()}| = {expect}"
                    )
            else:
                raise QwalkError(f"unknown group name {args.group!r}")
        graph = build_cayley(group, gens)
    elif args.builder == "hypercube":
        graph = build_hypercube(args.n)
    elif args.builder == "glued-trees":
        graph = build_glued_trees(args.n)
    else:
        raise QwalkError(f"unknown builder {args.builder!r}")

    out = Path(args.out)
    _write(out, "graph.json", graph_to_json(graph))
    _write(out, "shift.json", matrix_to_json(shift_matrix(graph)))
    _manifest(out, "build", vars_config(args))
    print(f"wrote graph.json ({graph.num_vertices} vertices) to {out}")
    return 0


def cmd_quotient(args) -> int:
    graph = _load_graph(args.graph)
    reps = _load_subgroup_reps(graph, args.subgroup)
    orbits = compute_orbits(reps, dim=graph.basis_size)
    quotient = quotient_graph(graph, orbits)
    out = Path(args.out)
    listing = []
    for k, orbit in enumerate(orbits.orbits):
        members = [[graph.label(v), c + 1] for v, c in (graph.basis_pair(x) for x in orbit)]
        listing.append(
            {
                "orbit": k,
                "size": len(orbit),
                "quotient_vertex": quotient.orbit_to_vertex[k],
                "members": members,
                "flat_indices": list(orbit),
            }
        )
    _write(out, "quotient.json", graph_to_json(quotient.graph))
    _write(out, "orbits.json", listing)
    _write(out, "ph.json", matrix_to_json(projector_PH(orbits)))
    _manifest(out, "quotient", vars_config(args))
    print(f"{orbits.count} orbits, quotient has {quotient.graph.num_vertices} vertices; wrote to {out}")
    return 0


def cmd_walk(args) -> int:
    graph = _load_graph(args.graph)
    walk = walk_unitary(graph, _coin_for_graph(graph, args.coin))
    out = Path(args.out)
    _write(out, "u.json", matrix_to_json(walk.matrix))
    if args.subgroup:
        reps = _load_subgroup_reps(graph, args.subgroup)
        orbits = compute_orbits(reps, dim=graph.basis_size)
        quotient = quotient_graph(graph, orbits)
        walk_h = induced_walk(walk, orbits)
        s_h, c_h, blocks = factor_quotient_walk(walk_h, quotient)
        _write(out, "u_h.json", matrix_to_json(walk_h.matrix))
        _write(out, "s_h.json", matrix_to_json(s_h))
        _write(out, "c_h.json", matrix_to_json(c_h))
        _write(out, "c_h_blocks.json", [matrix_to_json(b) for b in blocks])
    _manifest(out, "walk", vars_config(args))
    print(f"wrote step operator ({walk.dim}x{walk.dim}) to {out}")
    return 0


def cmd_hitting(args) -> int:
    graph = _load_graph(args.graph)
    walk = walk_unitary(graph, _coin_for_graph(graph, args.coin))
    finals = _final_vertices(graph, args.final)
    measurement = measurement_for_vertices(graph, finals)

    full_inf = infinite_projector(walk, measurement, degeneracy_tol=args.tol_degeneracy)
    orbits = None
    intersection = None
    if args.subgroup:
        reps = _load_subgroup_reps(graph, args.subgroup)
        orbits = compute_orbits(reps, dim=graph.basis_size)
        intersection = quotient_infinite_check(full_inf.projector, projector_PH(orbits))
        run_walk = induced_walk(walk, orbits)
        run_meas = restrict_measurement(measurement, orbits)
        run_inf = None
    else:
        run_walk, run_meas, run_inf = walk, measurement, full_inf

    psi = _initial_state(graph, args.initial, orbits)
    report = hitting_time(
        run_walk,
        run_meas,
        psi,
        horizon=args.horizon,
        degeneracy_tol=args.tol_degeneracy,
        infinite=run_inf,
    )
    report.intersection_dim = intersection

    if args.initial.partition(":")[0] != "orbit":
        v0 = graph.vertex_by_label(args.initial.partition(":")[0])
        spec = c_matrix(full_inf.projector, graph, v0)
        report.c_matrix_spectra = {graph.label(v0): [float(x) for x in spec.eigenvalues]}

    payload = report.to_json()
    payload["p_prefix"] = payload["p_prefix"][: args.report_prefix]
    out = Path(args.out)
    _write(out, "report.json", payload)
    _manifest(out, "hitting", vars_config(args))

    if report.tau_is_infinite:
        print(f"hitting time infinite (never-arrive rank {report.P_rank}); report in {out}")
        return EXIT_INFINITE
    if report.method == "series" and not report.series_converged:
        print(f"hitting time indeterminate (sum p = {report.hit_probability:.9f}); report in {out}")
        return EXIT_INDETERMINATE
    print(f"hitting time {report.tau:.12g} via {report.method}; report in {out}")
    return EXIT_FINITE


def cmd_c_matrix(args) -> int:
    graph = _load_graph(args.graph)
    walk = walk_unitary(graph, _coin_for_graph(graph, args.coin))
    measurement = measurement_for_vertices(graph, _final_vertices(graph, args.final))
    inf = infinite_projector(walk, measurement, degeneracy_tol=args.tol_degeneracy)
    vertices = (
        [graph.vertex_by_label(args.vertex)] if args.vertex else list(range(graph.num_vertices))
    )
    spectra = {}
    matrices = {}
    for v in vertices:
        spec = c_matrix(inf.projector, graph, v)
        spectra[graph.label(v)] = [float(x) for x in spec.eigenvalues]
        matrices[graph.label(v)] = matrix_to_json(spec.matrix)
    out = Path(args.out)
    _write(
        out,
        "c_matrix.json",
        {
            "P_rank": inf.rank,
            "structural_rank": inf.structural_rank,
            "accidental_dim": inf.accidental_dim,
            "spectra": spectra,
            "matrices": matrices,
        },
    )
    _manifest(out, "c-matrix", vars_config(args))
    print(f"never-arrive rank {inf.rank}; wrote c_matrix.json to {out}")
    return 0


def cmd_verify_subgroup(args) -> int:
    graph = _load_graph(args.graph)
    entries = []
    reps = []
    if args.subgroup == "columns":
        reps = _load_subgroup_reps(graph, args.subgroup)
        entries = [{"kind": "columns"}] * len(reps)
    else:
        raw = json.loads(Path(args.subgroup).read_text())
        for entry in raw:
            reps.extend(load_subgroup(graph, [entry]))
            entries.append(entry)
    results = [
        {"entry": e, "description": r.description, "verified": verify_automorphism(r, graph)}
        for e, r in zip(entries, reps)
    ]
    order = None
    if len(reps) and graph.basis_size <= 4096:
        try:
            order = len(close_subgroup(reps))
        except ValueError:
            order = None
    out = Path(args.out)
    _write(out, "verification.json", {"generators": results, "subgroup_order": order})
    _manifest(out, "verify-subgroup", vars_config(args))
    ok = all(r["verified"] for r in results)
    print(f"{len(results)} generators verified={ok}, subgroup order {order}; wrote to {out}")
    return 0 if ok else 1


def vars_config(args) -> dict:
    skip = {"func"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qwalk", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build a graph and dump it with its shift matrix")
    b.add_argument("builder", choices=["cayley", "hypercube", "glued-trees"])
    b.add_argument("--gens", default="", help='cayley generating set, e.g. "(1,2);(2,3)"')
    b.add_argument("--domain", type=int, default=None, help="permutation domain size for cayley")
    b.add_argument("--group", default=None, help='optional group-order check, e.g. "s3"')
    b.add_argument("--n", type=int, default=None, help="dimension / tree depth")
    b.add_argument("--out", required=True)
    b.set_defaults(func=cmd_build)

    q = sub.add_parser("quotient", help="orbit partition, quotient graph, and subspace projector")
    q.add_argument("--graph", required=True)
    q.add_argument("--subgroup", required=True, help='subgroup JSON file or "columns"')
    q.add_argument("--out", required=True)
    q.set_defaults(func=cmd_quotient)

    w = sub.add_parser("walk", help="step operator, optionally with its quotient factorization")
    w.add_argument("--graph", required=True)
    w.add_argument("--coin", default="grover", help="grover | dft | custom:FILE")
    w.add_argument("--subgroup", default=None)
    w.add_argument("--out", required=True)
    w.set_defaults(func=cmd_walk)

    h = sub.add_parser("hitting", help="measured-walk hitting analysis")
    h.add_argument("--graph", required=True)
    h.add_argument("--coin", default="grover")
    h.add_argument("--final", required=True, help='final vertex labels, ";"-separated')
    h.add_argument("--initial", required=True, help='"vertex:uniform", "vertex:a1,a2,..", or "orbit:k"')
    h.add_argument("--subgroup", default=None)
    h.add_argument("--horizon", type=int, default=None)
    h.add_argument("--tol-degeneracy", type=float, default=1e-8)
    h.add_argument("--report-prefix", type=int, default=200, help="p(t) entries kept in the report")
    h.add_argument("--out", required=True)
    h.set_defaults(func=cmd_hitting)

    c = sub.add_parser("c-matrix", help="coin-overlap spectra of the never-arrive projector")
    c.add_argument("--graph", required=True)
    c.add_argument("--coin", default="grover")
    c.add_argument("--final", required=True)
    c.add_argument("--vertex", default=None)
    c.add_argument("--tol-degeneracy", type=float, default=1e-8)
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_c_matrix)

    v = sub.add_parser("verify-subgroup", help="verify each subgroup entry against the shift")
    v.add_argument("--graph", required=True)
    v.add_argument("--subgroup", required=True)
    v.add_argument("--out", required=True)
    v.set_defaults(func=cmd_verify_subgroup)
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except QwalkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
