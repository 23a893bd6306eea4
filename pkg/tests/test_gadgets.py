import itertools
import json

import pytest
from hypothesis import given, settings, strategies as st
from oracles import brute_maps

from bimorph.errors import InvalidSpec
from bimorph.gadgets import (
    GadgetSpec,
    build_gadget,
    candidate_specs,
    check_bimorphism_equivalent,
    default_gadget_family,
    family_to_json,
    find_rigid_spec,
    verify_bimorphism_rigid,
    verify_rigid,
)
from bimorph.graph import build_graph, find_isomorphism, is_tree

K2 = build_graph(2, [(0, 1)])
P3 = build_graph(3, [(0, 1), (1, 2)])


def test_eleven_vertex_spec():
    gad = build_gadget(GadgetSpec.of((2,), (3, 4)))
    assert gad.size == 11 == gad.spec.size
    assert is_tree(gad.graph)
    assert gad.graph.has_edge(gad.p, gad.q)
    assert gad.graph.roles[gad.p].is_p and gad.graph.roles[gad.q].is_q
    assert sorted(gad.graph.degrees[v] for v in gad.graph.adjacency[gad.q]) == [1, 4, 5]


def test_path_spec_is_not_rigid():
    gad = build_gadget(GadgetSpec.of((1,), (1,)))
    assert gad.size == 4
    assert len(brute_maps(4, gad.graph.edges, preserve_non_edges=True)) == 2
    assert not verify_rigid(gad)


@pytest.mark.parametrize("levels", [
    [(2,), (3, 3)],
    [(1,), (2,), (1, 1)],
    [(0,)],
    [(2,), (1,)],
    [(2, 1)],
    [(1,), (-1,)],
])
def test_invalid_specs(levels):
    with pytest.raises(InvalidSpec):
        GadgetSpec.of(*levels).validate()


def test_degenerate_rigidity_examples():
    assert not verify_rigid(K2)
    assert verify_rigid(build_graph(1, []))
    assert not verify_bimorphism_rigid(K2)
    assert not verify_bimorphism_rigid(P3)


def test_smallest_rigid_tree_has_seven_vertices():
    for size in range(2, 7):
        assert find_rigid_spec(size)[0] is None
    spec, _ = find_rigid_spec(7)
    gad = build_gadget(spec)
    assert len(brute_maps(7, gad.graph.edges, preserve_non_edges=True)) == 1


@pytest.mark.parametrize("size", [7, 8])
def test_rigidity_agrees_with_brute_force_on_all_small_specs(size):
    for spec in candidate_specs(size):
        gad = build_gadget(spec)
        assert is_tree(gad.graph)
        truth = brute_maps(size, gad.graph.edges, preserve_non_edges=True)
        assert verify_rigid(gad) == (len(truth) == 1)
        assert verify_bimorphism_rigid(gad) == verify_rigid(gad)


def test_candidate_specs_are_valid_and_sized():
    for size in range(3, 12):
        specs = list(candidate_specs(size))
        assert len(specs) == len(set(specs))
        for spec in specs:
            spec.validate()
            assert spec.size == size


@pytest.mark.parametrize("k,min_size", [(3, 4), (1, 0), (7, 8)])
def test_default_family(k, min_size):
    fam = default_gadget_family(k, min_size)
    sizes = [g.size for g in fam]
    assert len(fam) == k
    assert sizes == sorted(set(sizes)) and min(sizes) > min_size
    for g in fam:
        assert is_tree(g.graph) and verify_rigid(g) and verify_bimorphism_rigid(g)
    for a, b in itertools.combinations(fam, 2):
        assert find_isomorphism(a.graph, b.graph) is None
        assert not check_bimorphism_equivalent(a, b)
    assert default_gadget_family(k, min_size) == fam


def test_large_family_does_not_exhaust_budget():
    fam = default_gadget_family(64, 64)
    assert len(fam) == 64 and fam[0].size == 65 and fam[-1].size == 128


def test_bimorphism_equivalence_examples():
    gad = default_gadget_family(1, 6)[0]
    assert check_bimorphism_equivalent(gad, gad)
    # same size, one edge moved: P4 versus the star K1,3
    p4 = build_graph(4, [(0, 1), (1, 2), (2, 3)])
    star = build_graph(4, [(0, 1), (0, 2), (0, 3)])
    assert not check_bimorphism_equivalent(p4, star)


def _brute_bijective_hom(g, h):
    he = {frozenset(e) for e in h.edges}
    return any(all(frozenset((p[u], p[v])) in he for u, v in g.edges)
               for p in itertools.permutations(range(g.n)))


@st.composite
def trees(draw, n):
    parents = [draw(st.integers(0, i - 1)) for i in range(1, n)]
    return build_graph(n, [(p, i + 1) for i, p in enumerate(parents)])


@settings(max_examples=40)
@given(st.integers(2, 7).flatmap(lambda n: st.tuples(trees(n), trees(n))))
def test_tree_bimorphism_equivalence_is_isomorphism(pair):
    g, h = pair
    iso = find_isomorphism(g, h) is not None
    assert check_bimorphism_equivalent(g, h) == iso
    assert _brute_bijective_hom(g, h) == iso


def test_spec_json_round_trip():
    fam = default_gadget_family(3, 6)
    specs = json.loads(family_to_json(fam))
    assert [GadgetSpec.from_json(s) for s in specs] == [g.spec for g in fam]
    assert GadgetSpec.from_json({"levels": [[2], [3, 4]]}) == GadgetSpec.of((2,), (3, 4))
