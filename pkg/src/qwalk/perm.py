"""Permutations on {1..n} and explicit enumeration of small permutation groups.

Permutations are stored 0-based internally as the tuple ``images`` with
``images[i]`` the image of point ``i``.  All text boundaries (cycle notation,
JSON) are 1-based.  Groups are enumerated breadth-first from the identity,
which fixes a reproducible element order used as vertex numbering downstream.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

__all__ = [
    "Permutation",
    "PermutationGroup",
    "identity",
    "compose",
    "inverse",
    "parse_cycles",
    "cycle_string",
    "generate_group",
    "group_to_json",
    "group_from_json",
]


@dataclass(frozen=True)
class Permutation:
    """A bijection of {0..n-1}, stored as the tuple of images."""

    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"not a permutation of 0..{len(self.images) - 1}: {self.images}")

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self.images))

    def __repr__(self):
        return f"Permutation({cycle_string(self)!r}, n={self.n})"


def identity(n: int) -> Permutation:
    return Permutation(tuple(range(n)))


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Return p∘q, the permutation mapping i to p(q(i)).

    >>> cycle_string(compose(parse_cycles("(1,2)", 3), parse_cycles("(2,3)", 3)))
    '(1,2,3)'
    """
    if p.n != q.n:
        raise ValueError(f"domain size mismatch: {p.n} != {q.n}")
    return Permutation(tuple(p.images[j] for j in q.images))


def inverse(p: Permutation) -> Permutation:
    inv = [0] * p.n
    for i, v in enumerate(p.images):
        inv[v] = i
    return Permutation(tuple(inv))


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, n: int) -> Permutation:
    """Parse 1-based disjoint cycle notation, e.g. "(1,2,3)" maps 1→2, 2→3, 3→1.

    An empty string (or "e"/"()" ) denotes the identity.  Raises ValueError on
    indices outside {1..n} or on a repeated element.
    """
    text = text.strip()
    if text in ("", "e", "()"):
        return identity(n)
    stripped = _CYCLE_RE.sub("", text)
    if stripped.strip():
        raise ValueError(f"malformed cycle notation: {text!r}")
    images = list(range(n))
    seen: set[int] = set()
    for body in _CYCLE_RE.findall(text):
        entries = [tok for tok in re.split(r"[,\s]+", body.strip()) if tok]
        cycle = []
        for tok in entries:
            try:
                v = int(tok)
            except ValueError:
                raise ValueError(f"non-integer cycle entry {tok!r} in {text!r}") from None
            if not 1 <= v <= n:
                raise ValueError(f"cycle entry {v} out of range 1..{n}")
            if v - 1 in seen:
                raise ValueError(f"repeated element {v} in {text!r}")
            seen.add(v - 1)
            cycle.append(v - 1)
        for a, b in zip(cycle, cycle[1:] + cycle[:1]):
            images[a] = b
    return Permutation(tuple(images))


def cycle_string(p: Permutation) -> str:
    """1-based disjoint-cycle form; fixed points omitted, identity is "e"."""
    out = []
    seen = [False] * p.n
    for i in range(p.n):
        if seen[i] or p.images[i] == i:
            seen[i] = True
            continue
        cyc = [i]
        seen[i] = True
        j = p.images[i]
        while j != i:
            cyc.append(j)
            seen[j] = True
            j = p.images[j]
        out.append("(" + ",".join(str(k + 1) for k in cyc) + ")")
    return "".join(out) if out else "e"


@dataclass
class PermutationGroup:
    """A finite permutation group held as an explicit, ordered element list.

    ``elements[0]`` is the identity; the order is the breadth-first closure
    order (right multiplication by the generators in declared order), so two
    runs over the same generators produce identical lists.  ``words[k]`` is
    the generator-index word discovered for ``elements[k]``.
    """

    n: int
    generators: tuple[Permutation, ...]
    elements: tuple[Permutation, ...]
    words: tuple[tuple[int, ...], ...]
    _index: dict[tuple[int, ...], int] = field(repr=False, default_factory=dict)

    def __post_init__(self):
        if not self._index:
            self._index = {p.images: k for k, p in enumerate(self.elements)}

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, p: Permutation) -> bool:
        return p.images in self._index

    def index_of(self, p: Permutation) -> int:
        try:
            return self._index[p.images]
        except KeyError:
            raise ValueError(f"{p!r} is not an element of this group") from None


def generate_group(generators: Sequence[Permutation], max_size: int = 50000) -> PermutationGroup:
    """Breadth-first closure of the generators under composition.

    >>> generate_group([parse_cycles("(1,2)", 3), parse_cycles("(2,3)", 3)]).order
    6
    """
    gens = list(generators)
    if not gens:
        raise ValueError("need at least one generator")
    n = gens[0].n
    if any(g.n != n for g in gens):
        raise ValueError("generators have mismatched domain sizes")

    ident = identity(n)
    elements = [ident]
    words: list[tuple[int, ...]] = [()]
    index = {ident.images: 0}
    queue = deque([0])
    while queue:
        k = queue.popleft()
        for gi, g in enumerate(gens):
            q = compose(elements[k], g)
            if q.images not in index:
                index[q.images] = len(elements)
                elements.append(q)
                words.append(words[k] + (gi,))
                queue.append(len(elements) - 1)
                if len(elements) > max_size:
                    raise ValueError(f"group closure exceeded max_size={max_size}")
    return PermutationGroup(
        n=n,
        generators=tuple(gens),
        elements=tuple(elements),
        words=tuple(words),
        _index=index,
    )


def word_to_element(word: Iterable[int], generators: Sequence[Permutation], n: int) -> Permutation:
    """Fold a generator-index word into a group element (left-to-right product)."""
    elem = identity(n)
    for gi in word:
        elem = compose(elem, generators[gi])
    return elem


def group_to_json(group: PermutationGroup) -> list[list[int]]:
    """Serialize as a list of 1-based image arrays, in element order."""
    return [[v + 1 for v in p.images] for p in group.elements]


def group_from_json(data: list[list[int]]) -> PermutationGroup:
    """Rebuild a group from 1-based image arrays.

    The list must start with the identity and be closed under composition;
    element order is preserved.
    """
    perms = [Permutation(tuple(v - 1 for v in row)) for row in data]
    if not perms or not perms[0].is_identity():
        raise ValueError("element list must start with the identity")
    group = generate_group(perms)
    if group.order != len(perms) or group.elements != tuple(perms):
        raise ValueError("JSON element list is not closed under composition")
    return group
