"""Symmetries of colored graphs and the orbit quotient construction.

A graph symmetry is represented as a BasisPermutation: a permutation of the
flat (vertex, color) basis that conjugates the shift into itself.  All
verification against the shift is an exact integer computation; floating
point only enters once orbit superposition vectors are formed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import NotAnAutomorphism, NotOrbitCompatible, MeasurementSymmetryViolation
from .graphs import ColoredGraph, shift_permutation
from .perm import Permutation, compose, cycle_string, identity, parse_cycles, word_to_element

__all__ = [
    "BasisPermutation",
    "OrbitBasis",
    "QuotientGraph",
    "verify_automorphism",
    "direction_automorphism",
    "left_translation",
    "compute_orbits",
    "quotient_graph",
    "projector_PH",
    "quotient_automorphism",
    "glued_trees_column_subgroup",
    "load_subgroup",
    "close_subgroup",
]


@dataclass
class BasisPermutation:
    """Permutation of flat basis indices, tagged with a provenance string."""

    mapping: np.ndarray
    description: str = ""

    def __post_init__(self):
        self.mapping = np.asarray(self.mapping, dtype=np.int64)
        n = self.mapping.size
        if np.sort(self.mapping).tolist() != list(range(n)):
            raise ValueError("mapping is not a permutation of basis indices")

    @property
    def dim(self) -> int:
        return self.mapping.size

    @cached_property
    def inverse_mapping(self) -> np.ndarray:
        inv = np.empty_like(self.mapping)
        inv[self.mapping] = np.arange(self.mapping.size)
        return inv

    def matrix(self) -> np.ndarray:
        m = np.zeros((self.dim, self.dim), dtype=np.complex128)
        m[self.mapping, np.arange(self.dim)] = 1.0
        return m

    def conjugate(self, op: np.ndarray) -> np.ndarray:
        """Return sigma · op · sigma^{-1}."""
        inv = self.inverse_mapping
        return op[np.ix_(inv, inv)]

    def is_identity(self) -> bool:
        return bool(np.all(self.mapping == np.arange(self.dim)))


def verify_automorphism(sigma: BasisPermutation, target) -> bool:
    """Exact check that sigma preserves the shift (or any exact 0/1 matrix).

    ``target`` may be a ColoredGraph (its shift permutation is used), a flat
    permutation array, or a square matrix with exact entries.
    """
    if isinstance(target, ColoredGraph):
        shift = shift_permutation(target)
        if sigma.dim != shift.size:
            raise ValueError("dimension mismatch between sigma and shift")
        return bool(np.array_equal(sigma.mapping[shift], shift[sigma.mapping]))
    arr = np.asarray(target)
    if arr.ndim == 1:
        if sigma.dim != arr.size:
            raise ValueError("dimension mismatch between sigma and shift")
        return bool(np.array_equal(sigma.mapping[arr], arr[sigma.mapping]))
    if arr.shape != (sigma.dim, sigma.dim):
        raise ValueError("dimension mismatch between sigma and matrix")
    return bool(np.array_equal(sigma.conjugate(arr), arr))


def _require_group_structure(graph: ColoredGraph):
    if graph.cayley is None:
        raise ValueError("graph carries no group structure (not built as a group graph)")
    return graph.cayley


def direction_automorphism(graph: ColoredGraph, dir_perm: Permutation) -> BasisPermutation:
    """Permute edge colors and rewrite each vertex's generator word the same way.

    The induced vertex map sends the vertex with word t_{i1}..t_{ik} to the
    vertex holding t_{pi(i1)}..t_{pi(ik)}.  This recipe does not always yield
    a graph automorphism; the result is checked against the shift and
    rejected with NotAnAutomorphism when it fails.
    """
    st = _require_group_structure(graph)
    d = len(st.generators)
    if dir_perm.n != d:
        raise ValueError(f"direction permutation must act on {{1..{d}}}")

    vertex_map = np.empty(graph.num_vertices, dtype=np.int64)
    for v, word in enumerate(st.vertex_words):
        new_word = [dir_perm(c) for c in word]
        elem = word_to_element(new_word, st.generators, st.group.n)
        vertex_map[v] = st.vertex_of(elem)
    if len(set(vertex_map.tolist())) != graph.num_vertices:
        raise NotAnAutomorphism(
            f"direction permutation {cycle_string(dir_perm)} does not induce a vertex bijection"
        )

    mapping = np.empty(graph.basis_size, dtype=np.int64)
    for v in range(graph.num_vertices):
        for c in graph.colors_at[v]:
            mapping[graph.flat_index(v, c)] = graph.flat_index(int(vertex_map[v]), dir_perm(c))
    sigma = BasisPermutation(mapping, description=f"direction-perm {cycle_string(dir_perm)}")
    if not verify_automorphism(sigma, graph):
        raise NotAnAutomorphism(
            f"direction permutation {cycle_string(dir_perm)} does not preserve the shift"
        )
    return sigma


def left_translation(graph: ColoredGraph, a: Permutation) -> BasisPermutation:
    """The color-preserving symmetry |g, c> -> |a·g, c>.

    Every left translation preserves the shift exactly; the check is still
    performed so a broken group structure cannot slip through.
    """
    st = _require_group_structure(graph)
    if a not in st.group:
        raise ValueError("translation element is not in the graph's group")
    mapping = np.empty(graph.basis_size, dtype=np.int64)
    for v in range(graph.num_vertices):
        w = st.vertex_of(compose(a, st.vertex_elements[v]))
        for c in graph.colors_at[v]:
            mapping[graph.flat_index(v, c)] = graph.flat_index(w, c)
    sigma = BasisPermutation(mapping, description=f"left-translation {cycle_string(a)}")
    if not verify_automorphism(sigma, graph):
        raise NotAnAutomorphism(f"left translation by {cycle_string(a)} broke the shift")
    return sigma


def hypercube_translation(graph: ColoredGraph, bits: str | int) -> BasisPermutation:
    """Translation of a hypercube graph by a bit mask (label like "011")."""
    st = _require_group_structure(graph)
    v = graph.vertex_by_label(bits) if isinstance(bits, str) else int(bits)
    sigma = left_translation(graph, st.vertex_elements[v])
    sigma.description = f"bit-flip translation {graph.label(v)}"
    return sigma


@dataclass
class OrbitBasis:
    """Partition of the flat basis into subgroup orbits.

    Orbits are ordered by their smallest flat index and each orbit lists its
    members ascending; the first member is the representative.  The attached
    generators are the symmetries the orbits were computed from, kept so
    later constructions can re-check commutation.
    """

    dim: int
    orbits: tuple[tuple[int, ...], ...]
    generators: tuple[BasisPermutation, ...] = ()

    @property
    def count(self) -> int:
        return len(self.orbits)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(o) for o in self.orbits)

    @property
    def representatives(self) -> tuple[int, ...]:
        return tuple(o[0] for o in self.orbits)

    @cached_property
    def orbit_of(self) -> np.ndarray:
        out = np.empty(self.dim, dtype=np.int64)
        for k, orbit in enumerate(self.orbits):
            out[list(orbit)] = k
        return out

    @cached_property
    def vectors(self) -> np.ndarray:
        """dim x count matrix whose column k is the normalized orbit state."""
        v = np.zeros((self.dim, self.count), dtype=np.complex128)
        for k, orbit in enumerate(self.orbits):
            v[list(orbit), k] = 1.0 / np.sqrt(len(orbit))
        return v

    def coordinates(self, state: np.ndarray) -> np.ndarray:
        return self.vectors.conj().T @ state

    def lift(self, coords: np.ndarray) -> np.ndarray:
        return self.vectors @ coords


def compute_orbits(reps: Sequence[BasisPermutation], dim: int | None = None) -> OrbitBasis:
    """Orbit partition of the flat basis under the group the reps generate.

    Plain breadth-first sweep; closure of the generating set is never needed
    because orbits of the generated group equal connected components under
    the generators.
    """
    reps = list(reps)
    if not reps:
        raise ValueError("need at least one basis permutation")
    if dim is None:
        dim = reps[0].dim
    if any(r.dim != dim for r in reps):
        raise ValueError("basis permutations have mismatched dimensions")

    seen = np.zeros(dim, dtype=bool)
    orbits = []
    for start in range(dim):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        members = []
        while stack:
            x = stack.pop()
            members.append(x)
            for r in reps:
                for y in (int(r.mapping[x]), int(r.inverse_mapping[x])):
                    if not seen[y]:
                        seen[y] = True
                        stack.append(y)
        orbits.append(tuple(sorted(members)))
    orbits.sort(key=lambda o: o[0])
    return OrbitBasis(dim=dim, orbits=tuple(orbits), generators=tuple(reps))


def projector_PH(orbits: OrbitBasis) -> np.ndarray:
    """Projector onto the span of the orbit states: Hermitian, idempotent,
    rank equal to the orbit count."""
    v = orbits.vectors
    return v @ v.conj().T


@dataclass
class QuotientGraph:
    """The orbit quotient of a colored graph.

    Quotient vertices are maximal families of orbits sharing one vertex set;
    the family's orbits become the colors of the new vertex.  Orbit k of the
    source becomes flat basis index k of the quotient, which works because
    the canonical orbit order lists each family contiguously.
    """

    graph: ColoredGraph
    source: ColoredGraph
    orbit_basis: OrbitBasis
    vertex_sets: tuple[tuple[int, ...], ...]
    orbit_to_vertex: tuple[int, ...]
    orbit_color: tuple[int, ...]
    orbit_shift: np.ndarray

    @property
    def orbit_of_basis(self) -> np.ndarray:
        return self.orbit_basis.orbit_of


def quotient_graph(graph: ColoredGraph, orbits: OrbitBasis, shift: np.ndarray | None = None) -> QuotientGraph:
    """Build the quotient graph induced by an orbit partition.

    Orbits x and y are connected exactly when the shift maps the members of
    x onto the members of y (an all-or-nothing property for orbits of
    verified automorphisms); identical endpoints make a self loop.
    """
    if orbits.dim != graph.basis_size:
        raise ValueError("orbit basis does not match the graph's flat basis")
    if shift is None:
        shift = shift_permutation(graph)

    # Vertex set of each orbit; orbits sharing one vertex set form a family.
    orbit_vsets = []
    for orbit in orbits.orbits:
        vset = frozenset(graph.basis_pair(x)[0] for x in orbit)
        orbit_vsets.append(vset)

    families: dict[frozenset, int] = {}
    orbit_to_vertex = []
    orbit_color = []
    vertex_sets: list[tuple[int, ...]] = []
    degree: list[int] = []
    for k, vset in enumerate(orbit_vsets):
        if vset not in families:
            families[vset] = len(vertex_sets)
            vertex_sets.append(tuple(sorted(vset)))
            degree.append(0)
        fam = families[vset]
        orbit_to_vertex.append(fam)
        orbit_color.append(degree[fam])
        degree[fam] += 1

    # Families must occupy contiguous orbit ranges for the quotient flat
    # basis to coincide with the orbit order.
    for k in range(1, orbits.count):
        if orbit_to_vertex[k] < orbit_to_vertex[k - 1]:
            raise ValueError("orbit families are not contiguous; orbit partition inconsistent")

    orbit_shift = np.empty(orbits.count, dtype=np.int64)
    for k, orbit in enumerate(orbits.orbits):
        images = {int(orbits.orbit_of[int(shift[x])]) for x in orbit}
        if len(images) != 1:
            raise ValueError(f"shift does not map orbit {k} onto a single orbit")
        orbit_shift[k] = images.pop()
    if not np.array_equal(np.sort(orbit_shift), np.arange(orbits.count)):
        raise ValueError("orbit connectivity is not a permutation of orbits")

    arcs = {}
    for k in range(orbits.count):
        j = int(orbit_shift[k])
        arcs[(orbit_to_vertex[k], orbit_color[k])] = (orbit_to_vertex[j], orbit_color[j])
    labels = tuple(
        "{" + ",".join(graph.label(v) for v in vs) + "}" for vs in vertex_sets
    )
    qgraph = ColoredGraph(
        num_vertices=len(vertex_sets),
        colors_at=tuple(tuple(range(d)) for d in degree),
        arcs=arcs,
        vertex_labels=labels,
    )
    return QuotientGraph(
        graph=qgraph,
        source=graph,
        orbit_basis=orbits,
        vertex_sets=tuple(vertex_sets),
        orbit_to_vertex=tuple(orbit_to_vertex),
        orbit_color=tuple(orbit_color),
        orbit_shift=orbit_shift,
    )


def quotient_automorphism(
    g: BasisPermutation, orbits: OrbitBasis, orbit_shift: np.ndarray | None = None
) -> np.ndarray:
    """Orbit permutation induced by an automorphism that maps orbits onto orbits.

    Raises NotOrbitCompatible when some orbit is scattered across several
    orbits.  When ``orbit_shift`` is supplied, the induced permutation is
    also required to preserve the quotient shift.
    """
    member_index = {orbit: k for k, orbit in enumerate(orbits.orbits)}
    out = np.empty(orbits.count, dtype=np.int64)
    for k, orbit in enumerate(orbits.orbits):
        image = tuple(sorted(int(g.mapping[x]) for x in orbit))
        if image not in member_index:
            raise NotOrbitCompatible(
                f"{g.description or 'automorphism'} scatters orbit {k} across orbits"
            )
        out[k] = member_index[image]
    if orbit_shift is not None:
        if not np.array_equal(out[orbit_shift], orbit_shift[out]):
            raise NotOrbitCompatible(
                f"{g.description or 'automorphism'} induces an orbit map that breaks the quotient shift"
            )
    return out


def lift_vertex_automorphism(graph: ColoredGraph, vperm: BasisPermutation) -> BasisPermutation:
    """Lift a vertex permutation to the (vertex, color) basis.

    The image of the arc (v, c) -> (w, c') must be an arc of the graph; its
    color at the image vertex fixes the lifted color map.  Fails with
    NotAnAutomorphism when the vertex map is not a graph automorphism.
    """
    if vperm.dim != graph.num_vertices:
        raise ValueError("vertex permutation does not match the graph")
    neighbor_color: list[dict[int, int]] = [dict() for _ in range(graph.num_vertices)]
    for (v, c), (w, _) in graph.arcs.items():
        if w in neighbor_color[v]:
            raise ValueError("multi-edges prevent an unambiguous lift")
        neighbor_color[v][w] = c
    mapping = np.empty(graph.basis_size, dtype=np.int64)
    for (v, c), (w, _) in graph.arcs.items():
        sv, sw = int(vperm.mapping[v]), int(vperm.mapping[w])
        c_img = neighbor_color[sv].get(sw)
        if c_img is None:
            raise NotAnAutomorphism(
                f"{vperm.description or 'vertex permutation'} does not preserve adjacency"
            )
        mapping[graph.flat_index(v, c)] = graph.flat_index(sv, c_img)
    sigma = BasisPermutation(mapping, description=f"lift of {vperm.description}")
    if not verify_automorphism(sigma, graph):
        raise NotAnAutomorphism(
            f"{vperm.description or 'vertex permutation'} does not lift to a shift symmetry"
        )
    return sigma


def glued_trees_column_subgroup(graph: ColoredGraph) -> list[BasisPermutation]:
    """Vertex-space generators whose orbits are the columns of a glued-trees graph.

    One generator per interior vertex of the left tree: swap its two child
    subtrees and mirror the swap through the shared leaf column into the
    right tree.  Returned permutations act on vertices (the basis of the
    coinless walk), not on (vertex, color) pairs.
    """
    if graph.columns is None or not graph.builder or graph.builder.get("kind") != "glued-trees":
        raise ValueError("graph was not built by build_glued_trees")
    n = graph.builder["n"]
    columns = graph.columns
    gens = []
    for j0 in range(n):
        for i0 in range(len(columns[j0])):
            mapping = np.arange(graph.num_vertices, dtype=np.int64)
            for j in range(2 * n + 1):
                level = min(j, 2 * n - j)
                if level <= j0:
                    continue
                width = level - j0
                for i, v in enumerate(columns[j]):
                    if i >> width == i0:
                        mapping[v] = columns[j][i ^ (1 << (width - 1))]
            gens.append(BasisPermutation(mapping, description=f"subtree-swap {j0}:{i0}"))
    return gens


def close_subgroup(reps: Sequence[BasisPermutation], max_size: int = 20000) -> list[BasisPermutation]:
    """Closure of basis permutations under composition (identity first)."""
    if not reps:
        raise ValueError("empty generating set")
    dim = reps[0].dim
    ident = BasisPermutation(np.arange(dim), description="identity")
    elements = [ident]
    index = {tuple(ident.mapping.tolist()): 0}
    queue = [0]
    while queue:
        k = queue.pop(0)
        for r in reps:
            prod = BasisPermutation(
                r.mapping[elements[k].mapping],
                description=f"{elements[k].description}*{r.description}".strip("*"),
            )
            key = tuple(prod.mapping.tolist())
            if key not in index:
                index[key] = len(elements)
                elements.append(prod)
                queue.append(len(elements) - 1)
                if len(elements) > max_size:
                    raise ValueError(f"subgroup closure exceeded max_size={max_size}")
    return elements


def load_subgroup(graph: ColoredGraph, entries: Sequence[dict]) -> list[BasisPermutation]:
    """Assemble subgroup generators from a JSON-style entry list.

    Each entry is {"kind": "direction", "perm": "(1,2,3)"} or
    {"kind": "translation", "element": "(1,2)" | "011"}.  Every generator is
    verified against the shift before being returned.
    """
    reps = []
    for entry in entries:
        kind = entry.get("kind")
        if kind == "direction":
            st = _require_group_structure(graph)
            dir_perm = parse_cycles(entry["perm"], len(st.generators))
            reps.append(direction_automorphism(graph, dir_perm))
        elif kind == "translation":
            st = _require_group_structure(graph)
            value = entry["element"]
            if graph.builder and graph.builder.get("kind") == "hypercube":
                reps.append(hypercube_translation(graph, value))
            else:
                reps.append(left_translation(graph, parse_cycles(value, st.group.n)))
        else:
            raise ValueError(f"unknown subgroup entry kind: {kind!r}")
    return reps


def check_measurement_symmetry(final_flats: Sequence[int], reps: Sequence[BasisPermutation]):
    """Exact check that a projective final-vertex measurement commutes with
    every symmetry generator (the measured index set must be invariant)."""
    target = set(int(x) for x in final_flats)
    for r in reps:
        image = {int(r.mapping[x]) for x in target}
        if image != target:
            raise MeasurementSymmetryViolation(
                f"measurement does not commute with {r.description or 'a subgroup generator'}"
            )
