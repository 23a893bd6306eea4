import itertools

import pytest
from hypothesis import given, strategies as st
from oracles import brute_maps, corpus_truth, is_edge_preserving, s3_by_hand

from bimorph import engine
from bimorph.algebra import cyclic_group, direct_product, group_from_table, \
    monoid_from_table, submonoid_closure, symmetric_group
from bimorph.construction import build_top_layer
from bimorph.engine import (
    VertexMap,
    brute_force_maps,
    check_regular_left_action,
    enumerate_automorphisms,
    enumerate_bimorphisms,
    enumerate_monomorphisms,
    find_bijective_homomorphism,
    find_monomorphism,
    is_isomorphic_monoid,
    monoid_closure,
)
from bimorph.errors import BudgetExceeded, ClosureBudgetExceeded
from bimorph.gadgets import default_gadget_family
from bimorph.graph import build_graph

K2 = build_graph(2, [(0, 1)])
K3 = build_graph(3, [(0, 1), (1, 2), (0, 2)])
P3 = build_graph(3, [(0, 1), (1, 2)])


def images(maps):
    return [m.images for m in maps]


def test_small_examples():
    assert images(enumerate_bimorphisms(K3)) == sorted(itertools.permutations(range(3)))
    assert images(enumerate_bimorphisms(P3)) == [(0, 1, 2), (2, 1, 0)]
    assert len(enumerate_automorphisms(K2)) == 2


def test_corpus_matches_independent_oracle():
    graphs, truth = corpus_truth()
    for g, (bi, aut) in zip(graphs, truth):
        assert images(enumerate_bimorphisms(g, workers=1)) == bi
        assert images(enumerate_automorphisms(g, workers=1)) == aut
        assert bi == aut


def test_packaged_brute_force_agrees_with_test_oracle():
    graphs, truth = corpus_truth()
    for g, (bi, aut) in list(zip(graphs, truth))[:60]:
        assert images(brute_force_maps(g, preserve_non_edges=False)) == bi
        assert images(brute_force_maps(g, preserve_non_edges=True)) == aut


@st.composite
def graphs(draw, max_n=7):
    n = draw(st.integers(1, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return build_graph(n, edges)


@given(graphs())
def test_pruning_is_sound(g):
    maps = enumerate_bimorphisms(g, workers=1)
    assert images(maps) == brute_maps(g.n, g.edges, preserve_non_edges=False)
    for m in maps:
        assert all(g.degrees[v] <= g.degrees[m(v)] for v in range(g.n))


@given(graphs(max_n=5), graphs(max_n=6))
def test_monomorphisms_match_brute_force(g, h):
    got = images(enumerate_monomorphisms(g, h, workers=1))
    truth = sorted(p for p in itertools.permutations(range(h.n), g.n)
                   if is_edge_preserving(p, g.edges, h.edges))
    assert got == truth
    first = find_monomorphism(g, h)
    assert (first is None) == (not truth)
    if first is not None:
        assert first.images in truth
        assert find_monomorphism(g, h) == first


def test_parallel_output_is_identical(gamma_z4):
    serial = enumerate_bimorphisms(gamma_z4.graph, workers=1)
    parallel = enumerate_bimorphisms(gamma_z4.graph, workers=3)
    assert serial == parallel
    g = build_graph(6, [(i, (i + 1) % 6) for i in range(6)])
    assert enumerate_automorphisms(g, workers=1) == enumerate_automorphisms(g, workers=4)


def test_workers_env(monkeypatch):
    monkeypatch.setenv(engine.WORKERS_ENV, "3")
    assert engine.default_workers() == 3
    monkeypatch.delenv(engine.WORKERS_ENV)
    assert engine.default_workers() == 1


def test_budgets():
    big = build_graph(300, [(i, i + 1) for i in range(299)])
    with pytest.raises(BudgetExceeded):
        enumerate_bimorphisms(big)
    assert len(enumerate_bimorphisms(big, budget=300, workers=1)) == 2
    with pytest.raises(BudgetExceeded):
        brute_force_maps(build_graph(10, []), preserve_non_edges=True)


def test_bijective_homomorphism_direction():
    assert find_bijective_homomorphism(P3, K3) is not None
    assert find_bijective_homomorphism(K3, P3) is None


def test_distinct_size_gadgets_mono_at_most_one_way():
    fam = default_gadget_family(3, 6)
    for a, b in itertools.combinations(fam, 2):
        fwd = find_monomorphism(a.graph, b.graph) is not None
        back = find_monomorphism(b.graph, a.graph) is not None
        assert not (fwd and back)
        assert find_bijective_homomorphism(a.graph, b.graph) is None


def test_monoid_closure_examples():
    triv = monoid_closure([VertexMap.identity(3)])
    assert len(triv) == 1 and triv.table == ((0,),)
    gens = [VertexMap((1, 0, 2)), VertexMap((1, 2, 0))]
    s3 = monoid_closure(gens)
    assert len(s3) == 6
    assert is_isomorphic_monoid(s3, group_from_table(s3_by_hand())) is not None
    bims = enumerate_bimorphisms(K3)
    assert len(monoid_closure(bims)) == len(bims)
    with pytest.raises(ClosureBudgetExceeded):
        monoid_closure(gens, budget=4)


def test_monoid_table_convention():
    gens = [VertexMap((1, 0, 2)), VertexMap((1, 2, 0))]
    m = monoid_closure(gens)
    for i, a in enumerate(m.elements):
        for j, b in enumerate(m.elements):
            assert m.elements[m.table[i][j]] == a.after(b)
            assert all(m.elements[m.table[i][j]](v) == a(b(v)) for v in range(3))
    assert m.elements[m.identity].is_identity()


def test_is_isomorphic_monoid_examples():
    z4, v4 = cyclic_group(4), direct_product(cyclic_group(2), cyclic_group(2))
    assert is_isomorphic_monoid(z4, v4) is None
    s3 = symmetric_group(3)
    assert is_isomorphic_monoid(s3, s3) is not None
    assert is_isomorphic_monoid(s3, cyclic_group(6)) is None
    lz = monoid_from_table([[0, 1, 2], [1, 1, 1], [2, 2, 2]])
    assert is_isomorphic_monoid(lz, lz) is not None
    assert is_isomorphic_monoid(lz, cyclic_group(3)) is None


@pytest.mark.parametrize("g", [cyclic_group(6), symmetric_group(3), symmetric_group(4),
                               direct_product(cyclic_group(2), cyclic_group(4))])
@given(st.randoms(use_true_random=False))
def test_is_isomorphic_monoid_finds_relabelled_copy(g, rnd):
    n = g.order
    sigma = list(range(n))
    rnd.shuffle(sigma)
    inv = {s: i for i, s in enumerate(sigma)}
    relabelled = monoid_from_table([[sigma[g.table[inv[a]][inv[b]]] for b in range(n)]
                                    for a in range(n)])
    f = is_isomorphic_monoid(relabelled, g)
    assert f is not None
    assert sorted(f) == list(range(n))
    t = relabelled.table
    assert all(f[t[a][b]] == g.table[f[a]][f[b]] for a in range(n) for b in range(n))


def test_action_report_z4(gamma_z4):
    bims = enumerate_bimorphisms(gamma_z4.graph)
    assert len(bims) == 4
    rep = check_regular_left_action(monoid_closure(bims), gamma_z4, gamma_z4.group)
    assert rep.passed and sorted(rep.multipliers) == [0, 1, 2, 3]


def test_action_report_s3_a3(gamma_s3, s3):
    a3 = submonoid_closure(s3, [2])
    assert len(a3) == 3
    top = build_top_layer(gamma_s3, a3)
    bims = enumerate_bimorphisms(top.graph, budget=1024)
    assert len(bims) == 3
    rep = check_regular_left_action(bims, top, a3)
    assert rep.passed
    assert set(rep.multipliers) == set(a3.elements)
    e_vertex = top.group_vertex[s3.identity]
    transpositions = [x for x in range(6) if x != s3.identity and s3.table[x][x] == s3.identity]
    assert all(m(e_vertex) not in [top.group_vertex[t] for t in transpositions] for m in bims)


def test_action_report_detects_wrong_target(gamma_z4):
    bims = enumerate_bimorphisms(gamma_z4.graph)
    b = submonoid_closure(gamma_z4.group, [2])
    rep = check_regular_left_action(bims, gamma_z4, b)
    assert not rep.passed
    assert not rep.clauses["no_forbidden_moves"]
    assert rep.witnesses["no_forbidden_moves"]


def test_oracle_self_check():
    assert engine.oracle_self_check(count=20)["passed"]
