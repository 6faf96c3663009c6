"""Shared fixtures: the worked example graphs, walks, and subgroups."""

import json
from pathlib import Path

import numpy as np
import pytest

from qwalk import (
    build_cayley,
    build_hypercube,
    compute_orbits,
    generate_group,
    grover_coin,
    load_subgroup,
    parse_cycles,
    walk_unitary,
)

DATA = Path(__file__).parent / "data"


def subgroup_entries(name):
    return json.loads((DATA / f"{name}.json").read_text())


def load_reps(graph, name):
    return load_subgroup(graph, subgroup_entries(name))


@pytest.fixture(scope="session")
def ex1_graph():
    gens = [parse_cycles("(1,2)", 3), parse_cycles("(2,3)", 3)]
    return build_cayley(generate_group(gens), gens)


@pytest.fixture(scope="session")
def ex1_walk(ex1_graph):
    return walk_unitary(ex1_graph, grover_coin(2))


@pytest.fixture(scope="session")
def ex1_orbits(ex1_graph):
    return compute_orbits(load_reps(ex1_graph, "ex1_h"))


@pytest.fixture(scope="session")
def ex2_graph():
    gens = [parse_cycles(s, 3) for s in ["(1,2)", "(2,3)", "(1,3)"]]
    return build_cayley(generate_group(gens), gens)


@pytest.fixture(scope="session")
def ex2_walk(ex2_graph):
    return walk_unitary(ex2_graph, grover_coin(3))


@pytest.fixture(scope="session")
def ex2_orbits_h1(ex2_graph):
    return compute_orbits(load_reps(ex2_graph, "ex2_h1"))


@pytest.fixture(scope="session")
def ex2_orbits_h2(ex2_graph):
    return compute_orbits(load_reps(ex2_graph, "ex2_h2"))


@pytest.fixture(scope="session")
def ex2_orbits_h3(ex2_graph):
    return compute_orbits(load_reps(ex2_graph, "ex2_h3"))


@pytest.fixture(scope="session")
def ex3_graph():
    gens = [parse_cycles(s, 4) for s in ["(1,2)", "(1,3)", "(1,4)"]]
    return build_cayley(generate_group(gens), gens)


@pytest.fixture(scope="session")
def ex3_walk(ex3_graph):
    return walk_unitary(ex3_graph, grover_coin(3))


@pytest.fixture(scope="session")
def ex3_orbits(ex3_graph):
    return compute_orbits(load_reps(ex3_graph, "ex3_h"))


@pytest.fixture(scope="session")
def cube3():
    return build_hypercube(3)


@pytest.fixture(scope="session")
def cube3_walk(cube3):
    return walk_unitary(cube3, grover_coin(3))


@pytest.fixture(scope="session")
def cube3_orbits_h1(cube3):
    return compute_orbits(load_reps(cube3, "cube3_h1"))


@pytest.fixture(scope="session")
def cube3_orbits_h2(cube3):
    return compute_orbits(load_reps(cube3, "cube3_h2"))


@pytest.fixture(scope="session")
def square():
    return build_hypercube(2)


def paper_orbit_order(graph, orbits, listing):
    """Map a listed orbit order onto computed orbit ids.

    ``listing`` is a sequence of orbits, each a list of (vertex word, 1-based
    color) pairs.  Returns the array ``pi`` with pi[k] = computed index of
    the k-th listed orbit, verifying the membership matches exactly.
    """
    pi = []
    for members in listing:
        flats = sorted(
            graph.flat_index(graph.vertex_by_label(word), color - 1) for word, color in members
        )
        matches = [k for k, orbit in enumerate(orbits.orbits) if list(orbit) == flats]
        assert len(matches) == 1, f"listed orbit {members} does not match a computed orbit"
        pi.append(matches[0])
    assert sorted(pi) == list(range(len(listing)))
    return np.array(pi)
