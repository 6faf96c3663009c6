"""Colored graphs with half-edge colors, plus the standard graph builders.

A ColoredGraph stores, for every vertex ``v``, the ordered color set ``C_v``
and an arc map pairing ``(v, c)`` with ``(w, c')``.  The pairing is an
involution, so the induced shift is a symmetric permutation of the flat
basis.  The flat basis order is canonical everywhere in this package:
vertices in index order, colors within a vertex in ``C_v`` order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .perm import (
    Permutation,
    PermutationGroup,
    compose,
    cycle_string,
    generate_group,
    identity,
    parse_cycles,
    word_to_element,
)

__all__ = [
    "ColoredGraph",
    "CayleyStructure",
    "build_cayley",
    "build_hypercube",
    "build_glued_trees",
    "graph_from_edges",
    "shift_permutation",
    "shift_matrix",
    "adjacency_matrix",
]


@dataclass
class CayleyStructure:
    """Group data attached to graphs whose vertices carry group elements.

    ``vertex_elements[v]`` is the group element sitting at vertex ``v`` and
    ``vertex_words[v]`` a generator-index word for it.  Both the symmetric
    group Cayley builder and the hypercube builder attach this, so symmetry
    constructions (translations, direction permutations) work on either.
    """

    group: PermutationGroup
    generators: tuple[Permutation, ...]
    vertex_elements: tuple[Permutation, ...]
    vertex_words: tuple[tuple[int, ...], ...]
    element_to_vertex: dict[tuple[int, ...], int] = field(repr=False)

    def vertex_of(self, element: Permutation) -> int:
        try:
            return self.element_to_vertex[element.images]
        except KeyError:
            raise ValueError("element does not label any vertex") from None


@dataclass
class ColoredGraph:
    num_vertices: int
    colors_at: tuple[tuple[int, ...], ...]
    arcs: dict[tuple[int, int], tuple[int, int]]
    vertex_labels: tuple[str, ...] | None = None
    cayley: CayleyStructure | None = None
    columns: tuple[tuple[int, ...], ...] | None = None
    builder: dict | None = None

    def __post_init__(self):
        for (v, c), (w, c2) in self.arcs.items():
            if self.arcs.get((w, c2)) != (v, c):
                raise ValueError(f"arc pairing is not an involution at ({v},{c})")
        for v, colors in enumerate(self.colors_at):
            if len(set(colors)) != len(colors):
                raise ValueError(f"duplicate color at vertex {v}")
            for c in colors:
                if (v, c) not in self.arcs:
                    raise ValueError(f"color {c} at vertex {v} has no outgoing arc")
        offsets = [0]
        for colors in self.colors_at:
            offsets.append(offsets[-1] + len(colors))
        self._offsets = tuple(offsets)
        self._color_pos = tuple(
            {c: k for k, c in enumerate(colors)} for colors in self.colors_at
        )

    @property
    def basis_size(self) -> int:
        return self._offsets[-1]

    def degree(self, v: int) -> int:
        return len(self.colors_at[v])

    def flat_index(self, v: int, c: int) -> int:
        return self._offsets[v] + self._color_pos[v][c]

    def basis_pair(self, flat: int) -> tuple[int, int]:
        """Inverse of flat_index: flat position -> (vertex, color)."""
        v = int(np.searchsorted(self._offsets, flat, side="right")) - 1
        return v, self.colors_at[v][flat - self._offsets[v]]

    def vertex_flats(self, v: int) -> range:
        return range(self._offsets[v], self._offsets[v + 1])

    def label(self, v: int) -> str:
        return self.vertex_labels[v] if self.vertex_labels else str(v)

    def vertex_by_label(self, label: str) -> int:
        """Resolve a vertex from its label, an integer index, or (for group
        graphs) a generator word such as "t1t3t2t1" or a cycle string."""
        if self.vertex_labels and label in self.vertex_labels:
            return self.vertex_labels.index(label)
        if label.isdigit() and self.cayley is None:
            v = int(label)
            if 0 <= v < self.num_vertices:
                return v
        if self.cayley is not None:
            st = self.cayley
            if label in ("e", ""):
                return st.vertex_of(identity(st.group.n))
            word = [int(tok) - 1 for tok in re.findall(r"t(\d+)", label)]
            if word and "".join(f"t{i + 1}" for i in word) == label:
                return st.vertex_of(word_to_element(word, st.generators, st.group.n))
            try:
                return st.vertex_of(parse_cycles(label, st.group.n))
            except ValueError:
                pass
        raise ValueError(f"cannot resolve vertex {label!r}")

    def edge_count(self) -> int:
        # A self-paired arc is a whole edge on its own; every other edge
        # contributes two arcs.
        loops = sum(1 for k, v in self.arcs.items() if k == v)
        return (len(self.arcs) - loops) // 2 + loops


def _finish_edges(num_vertices, edge_list, labels=None, **extra) -> ColoredGraph:
    """Assign per-vertex colors in edge listing order and build the arc map."""
    colors: list[list[int]] = [[] for _ in range(num_vertices)]
    arcs: dict[tuple[int, int], tuple[int, int]] = {}
    for v, w in edge_list:
        cv = len(colors[v])
        colors[v].append(cv)
        if v == w:
            arcs[(v, cv)] = (v, cv)
            continue
        cw = len(colors[w])
        colors[w].append(cw)
        arcs[(v, cv)] = (w, cw)
        arcs[(w, cw)] = (v, cv)
    return ColoredGraph(
        num_vertices=num_vertices,
        colors_at=tuple(tuple(c) for c in colors),
        arcs=arcs,
        vertex_labels=tuple(labels) if labels else None,
        **extra,
    )


def graph_from_edges(num_vertices: int, edges: Sequence[tuple[int, int]], labels=None) -> ColoredGraph:
    """Build an undirected ColoredGraph from an edge list.

    Half-edge colors are assigned per vertex in listing order, so the flat
    basis (and hence all matrices) is determined by the edge order given.
    """
    if num_vertices < 1:
        raise ValueError("graph needs at least one vertex")
    return _finish_edges(num_vertices, list(edges), labels)


def build_cayley(group: PermutationGroup, generating_set: Sequence[Permutation]) -> ColoredGraph:
    """Cayley graph on ``group`` with one color per generator.

    Vertices are the group elements in generation order.  Vertex ``g`` sends
    its arc of color ``i`` to ``g·s_i``, arriving on the color ``j`` with
    ``s_j = s_i^{-1}``; the generating set must therefore be inverse-closed.
    When every generator is an involution the graph is properly d-colored
    (same color on both ends of every edge).
    """
    gens = list(generating_set)
    if not gens:
        raise ValueError("generating set must be non-empty (degree 0 disallowed)")
    from .perm import inverse as perm_inverse

    images = {g.images: i for i, g in enumerate(gens)}
    if len(images) != len(gens):
        raise ValueError("generating set contains duplicates")
    inv_color = []
    for g in gens:
        gi = perm_inverse(g).images
        if gi not in images:
            raise ValueError(f"generating set not closed under inverse: {g!r}")
        inv_color.append(images[gi])
    for g in gens:
        if g not in group:
            raise ValueError(f"generator {g!r} is not in the group")
        if g.is_identity():
            raise ValueError("identity is not allowed in the generating set")

    d = len(gens)
    n_vertices = group.order
    colors = tuple(tuple(range(d)) for _ in range(n_vertices))
    arcs: dict[tuple[int, int], tuple[int, int]] = {}
    for vi, g in enumerate(group.elements):
        for ci, s in enumerate(gens):
            w = group.index_of(compose(g, s))
            arcs[(vi, ci)] = (w, inv_color[ci])

    # Generator words over *this* generating set, found breadth first; they
    # feed the direction-permutation construction.
    words: list[tuple[int, ...] | None] = [None] * n_vertices
    words[group.index_of(identity(group.n))] = ()
    frontier = [group.index_of(identity(group.n))]
    while frontier:
        nxt = []
        for vi in frontier:
            for ci in range(d):
                w, _ = arcs[(vi, ci)]
                if words[w] is None:
                    words[w] = words[vi] + (ci,)
                    nxt.append(w)
        frontier = nxt
    if any(w is None for w in words):
        raise ValueError("generating set does not generate the group (graph disconnected)")

    labels = tuple(
        "e" if not w else "".join(f"t{ci + 1}" for ci in w) for w in words
    )
    structure = CayleyStructure(
        group=group,
        generators=tuple(gens),
        vertex_elements=group.elements,
        vertex_words=tuple(words),
        element_to_vertex={p.images: i for i, p in enumerate(group.elements)},
    )
    graph = ColoredGraph(
        num_vertices=n_vertices,
        colors_at=colors,
        arcs=arcs,
        vertex_labels=labels,
        cayley=structure,
    )
    graph.builder = {
        "kind": "cayley",
        "domain": group.n,
        "generators": [cycle_string(g) for g in gens],
    }
    return graph


def build_hypercube(n: int) -> ColoredGraph:
    """n-dimensional hypercube: vertices are n-bit strings, color d flips bit d.

    Vertex labels print bit 1 rightmost, so vertex 6 of the 3-cube is "110".
    Both ends of every edge carry the same color.
    """
    if n < 1:
        raise ValueError("hypercube dimension must be >= 1")
    num = 1 << n
    colors = tuple(tuple(range(n)) for _ in range(num))
    arcs = {}
    for v in range(num):
        for c in range(n):
            arcs[(v, c)] = (v ^ (1 << c), c)
    labels = tuple(format(v, f"0{n}b") for v in range(num))

    # Realize Z_2^n as a permutation group on 2n points: generator d is the
    # transposition of points (2d+1, 2d+2).  Vertex v carries the product of
    # the generators of its set bits.
    gens = []
    for d in range(n):
        img = list(range(2 * n))
        img[2 * d], img[2 * d + 1] = img[2 * d + 1], img[2 * d]
        gens.append(Permutation(tuple(img)))
    group = generate_group(gens)
    vertex_elements = []
    words = []
    for v in range(num):
        bits = tuple(d for d in range(n) if v & (1 << d))
        words.append(bits)
        vertex_elements.append(word_to_element(bits, gens, 2 * n))
    structure = CayleyStructure(
        group=group,
        generators=tuple(gens),
        vertex_elements=tuple(vertex_elements),
        vertex_words=tuple(words),
        element_to_vertex={p.images: i for i, p in enumerate(vertex_elements)},
    )
    graph = ColoredGraph(
        num_vertices=num,
        colors_at=colors,
        arcs=arcs,
        vertex_labels=labels,
        cayley=structure,
    )
    graph.builder = {"kind": "hypercube", "n": n}
    return graph


def glued_trees_column_sizes(n: int) -> list[int]:
    return [2 ** min(j, 2 * n - j) for j in range(2 * n + 1)]


def build_glued_trees(n: int) -> ColoredGraph:
    """Two depth-n binary trees joined at their leaves.

    Columns j = 0..2n have 2^min(j, 2n-j) vertices; the middle column is the
    shared leaf layer, so its vertices have degree 2 while interior vertices
    have degree 3.  Vertex labels are "column:index".
    """
    if n < 1:
        raise ValueError("tree depth must be >= 1")
    sizes = glued_trees_column_sizes(n)
    starts = [0]
    for s in sizes:
        starts.append(starts[-1] + s)
    num = starts[-1]

    def vid(j, i):
        return starts[j] + i

    edges = []
    for j in range(2 * n):
        if j < n:
            for i in range(sizes[j]):
                edges.append((vid(j, i), vid(j + 1, 2 * i)))
                edges.append((vid(j, i), vid(j + 1, 2 * i + 1)))
        else:
            for i in range(sizes[j]):
                edges.append((vid(j, i), vid(j + 1, i // 2)))
    labels = [f"{j}:{i}" for j in range(2 * n + 1) for i in range(sizes[j])]
    columns = tuple(tuple(range(starts[j], starts[j + 1])) for j in range(2 * n + 1))
    graph = _finish_edges(num, edges, labels, columns=columns)
    graph.builder = {"kind": "glued-trees", "n": n}
    return graph


def shift_permutation(graph: ColoredGraph) -> np.ndarray:
    """The shift as an exact permutation of flat basis indices."""
    perm = np.empty(graph.basis_size, dtype=np.int64)
    for (v, c), (w, c2) in graph.arcs.items():
        perm[graph.flat_index(v, c)] = graph.flat_index(w, c2)
    return perm


def shift_matrix(graph: ColoredGraph) -> np.ndarray:
    """Shift as a dense permutation matrix on the flat basis.

    One 1 per row and column; symmetric (hence squaring to the identity)
    because the arc pairing is an involution.
    """
    perm = shift_permutation(graph)
    d = graph.basis_size
    mat = np.zeros((d, d), dtype=np.complex128)
    mat[perm, np.arange(d)] = 1.0
    return mat


def adjacency_matrix(graph: ColoredGraph) -> np.ndarray:
    """Symmetric 0/1 vertex adjacency matrix (multi-edges collapse to 1)."""
    a = np.zeros((graph.num_vertices, graph.num_vertices), dtype=np.complex128)
    for (v, _), (w, _) in graph.arcs.items():
        if v != w:
            a[v, w] = 1.0
            a[w, v] = 1.0
    return a
