import itertools
import math

import pytest
from hypothesis import given, strategies as st

from qwalk.perm import (
    Permutation,
    compose,
    cycle_string,
    generate_group,
    group_from_json,
    group_to_json,
    identity,
    inverse,
    parse_cycles,
)


def test_parse_three_cycle():
    p = parse_cycles("(1,2,3)", 3)
    # 1 -> 2, 2 -> 3, 3 -> 1 (0-based storage)
    assert p.images == (1, 2, 0)


def test_parse_empty_is_identity():
    assert parse_cycles("", 4) == identity(4)
    assert parse_cycles("e", 4) == identity(4)


def test_parse_product_of_transpositions_is_involution():
    p = parse_cycles("(1,2)(3,4)", 4)
    assert compose(p, p) == identity(4)


def test_parse_errors():
    with pytest.raises(ValueError):
        parse_cycles("(1,2,1)", 3)
    with pytest.raises(ValueError):
        parse_cycles("(1,5)", 3)
    with pytest.raises(ValueError):
        parse_cycles("(1,x)", 3)
    with pytest.raises(ValueError):
        parse_cycles("(1,2) junk", 3)


def test_compose_self_inverse_transposition():
    t = parse_cycles("(1,2)", 2)
    assert compose(t, t) == identity(2)


def test_compose_right_factor_first():
    # (p∘q)(i) = p(q(i)): the right factor acts first, so
    # (1,2)∘(2,3) sends 1->2, 2->3, 3->1.
    p = parse_cycles("(1,2)", 3)
    q = parse_cycles("(2,3)", 3)
    assert cycle_string(compose(p, q)) == "(1,2,3)"
    assert cycle_string(compose(q, p)) == "(1,3,2)"


def test_compose_identity_neutral():
    p = parse_cycles("(1,3,2)", 4)
    assert compose(p, identity(4)) == p
    assert compose(identity(4), p) == p


def test_compose_size_mismatch():
    with pytest.raises(ValueError):
        compose(identity(3), identity(4))


def test_not_a_permutation_rejected():
    with pytest.raises(ValueError):
        Permutation((0, 0, 2))


def test_generate_s3():
    g = generate_group([parse_cycles("(1,2)", 3), parse_cycles("(2,3)", 3)])
    assert g.order == 6


def test_generate_trivial():
    g = generate_group([identity(5)])
    assert g.order == 1


def test_generate_s4_star_generators():
    gens = [parse_cycles(s, 4) for s in ["(1,2)", "(1,3)", "(1,4)"]]
    g = generate_group(gens)
    # brute-force closure oracle over all of S4
    everything = {p for p in itertools.permutations(range(4))}
    assert g.order == 24
    assert {p.images for p in g.elements} == everything


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_adjacent_transpositions_generate_symmetric_group(n):
    gens = [parse_cycles(f"({i},{i + 1})", n) for i in range(1, n)]
    assert generate_group(gens).order == math.factorial(n)


def test_generation_order_deterministic():
    gens = [parse_cycles(s, 4) for s in ["(1,2)", "(2,3)", "(3,4)"]]
    a = generate_group(gens)
    b = generate_group(gens)
    assert a.elements == b.elements
    assert a.words == b.words
    assert a.elements[0].is_identity()


def test_group_closure_and_inverses():
    g = generate_group([parse_cycles("(1,2)", 4), parse_cycles("(1,3,4)", 4)])
    elems = set(p.images for p in g.elements)
    for p in g.elements:
        assert inverse(p).images in elems
        for q in g.elements:
            assert compose(p, q).images in elems
    assert math.factorial(4) % g.order == 0


def test_words_reproduce_elements():
    gens = [parse_cycles("(1,2)", 3), parse_cycles("(2,3)", 3)]
    g = generate_group(gens)
    for elem, word in zip(g.elements, g.words):
        acc = identity(3)
        for gi in word:
            acc = compose(acc, gens[gi])
        assert acc == elem


def test_group_json_round_trip():
    g = generate_group([parse_cycles("(1,2,3)", 3), parse_cycles("(1,2)", 3)])
    data = group_to_json(g)
    assert data[0] == [1, 2, 3]
    back = group_from_json(data)
    assert back.elements == g.elements


def test_group_json_rejects_non_closed():
    with pytest.raises(ValueError):
        group_from_json([[1, 2, 3], [2, 3, 1]])


perms = st.integers(2, 6).flatmap(
    lambda n: st.permutations(list(range(n))).map(lambda w: Permutation(tuple(w)))
)


@given(perms)
def test_inverse_property(p):
    assert compose(p, inverse(p)) == identity(p.n)
    assert compose(inverse(p), p) == identity(p.n)


@given(st.integers(2, 5).flatmap(lambda n: st.tuples(*[st.permutations(list(range(n)))] * 3)))
def test_compose_associative(triple):
    p, q, r = (Permutation(tuple(w)) for w in triple)
    assert compose(compose(p, q), r) == compose(p, compose(q, r))


@given(perms)
def test_cycle_string_round_trip(p):
    assert parse_cycles(cycle_string(p), p.n) == p
