import itertools
from math import comb

import pytest

from bimorph.algebra import cyclic_group, submonoid_closure, symmetric_group
from bimorph.construction import (
    build_for_group,
    build_modified_cayley,
    build_top_layer,
    degree_profile,
    expected_top_layer_counts,
)
from bimorph.engine import enumerate_automorphisms, enumerate_bimorphisms
from bimorph.errors import (
    GadgetCountMismatch,
    GadgetNotRigid,
    GadgetSizeTooSmall,
    GroupTooSmall,
    SubmonoidNotInGroup,
    SubmonoidTooSmall,
)
from bimorph.gadgets import GadgetSpec, build_gadget, candidate_specs, default_gadget_family
from bimorph.graph import find_isomorphism, induced_subgraph, is_tree


def _gadget_of_size(n):
    return build_gadget(next(iter(candidate_specs(n))))


def test_z4_counts_with_small_gadgets(z4):
    gads = [_gadget_of_size(s) for s in (5, 6, 7)]
    gamma = build_modified_cayley(z4, gads, check_rigid=False)
    # |V| = 4 + 4(6+7+8), |E| = 3*4*3 + 4(4+5+6), counted by hand from the edge lists
    assert (gamma.graph.n, gamma.graph.num_edges) == (88, 96) == gamma.expected_counts()


def test_small_gadgets_rejected_when_rigidity_checked(z4):
    gads = [_gadget_of_size(s) for s in (5, 6, 7)]
    with pytest.raises(GadgetNotRigid):
        build_modified_cayley(z4, gads)


def test_preconditions(z4):
    with pytest.raises(GroupTooSmall):
        build_for_group(cyclic_group(2))
    with pytest.raises(GroupTooSmall):
        build_for_group(cyclic_group(3))
    fam = default_gadget_family(3, 4)
    with pytest.raises(GadgetCountMismatch):
        build_modified_cayley(z4, fam[:2])
    with pytest.raises(GadgetSizeTooSmall):
        build_modified_cayley(cyclic_group(7), default_gadget_family(6, 0))


@pytest.mark.parametrize("group", [cyclic_group(4), cyclic_group(5), symmetric_group(3)],
                         ids=["Z4", "Z5", "S3"])
def test_structure(group):
    gamma = build_for_group(group)
    g = gamma.graph
    assert (g.n, g.num_edges) == gamma.expected_counts()
    kinds = [r.kind for r in g.roles]
    assert kinds.count("group") == group.order
    assert kinds.count("connector") == group.order * (group.order - 1)
    # every block is an induced copy of its gadget
    for (h, a), block in gamma.blocks.items():
        sub = induced_subgraph(g, block)
        assert is_tree(sub)
        assert find_isomorphism(sub, gamma.gadgets[a].graph) is not None
    # g and ga are joined through (g,a) and (g,p_a)
    for h, a in itertools.product(range(group.order), gamma.generators):
        c, p = gamma.connector[(h, a)], gamma.p_vertex(h, a)
        assert g.has_edge(h, c) and g.has_edge(c, p) and g.has_edge(p, group.table[h][a])
    # the 6-cycle through e
    for h in range(group.order):
        if h == group.identity:
            continue
        cyc = gamma.six_cycle(h)
        assert len(set(cyc)) == 6
        assert all(g.has_edge(cyc[i], cyc[(i + 1) % 6]) for i in range(6))
    prof = degree_profile(gamma)
    assert all(prof["checks"].values())
    assert prof["connector_degrees"] == [2] and prof["p_degrees"] == [3]


def test_gadgets_assigned_by_ascending_size(gamma_s3):
    sizes = [gamma_s3.gadgets[a].size for a in gamma_s3.generators]
    assert sizes == sorted(sizes) == [7, 8, 9, 10, 11]
    assert list(gamma_s3.generators) == sorted(gamma_s3.generators)


def test_top_layer_s3_a3(gamma_s3, s3):
    a3 = submonoid_closure(s3, [2])
    top = build_top_layer(gamma_s3, a3)
    base = gamma_s3.graph
    assert top.graph.n - base.n == 6
    assert top.graph.num_edges - base.num_edges == 6 + comb(3, 2)
    assert (top.graph.n, top.graph.num_edges) == expected_top_layer_counts(top)
    # Γ* restricted to VΓ is Γ
    assert induced_subgraph(top.graph, range(base.n)).edges == base.edges
    inside = set(a3.elements)
    for x, y in itertools.combinations(range(6), 2):
        bx, by = top.bullet_vertex[x], top.bullet_vertex[y]
        assert top.graph.has_edge(bx, by) == (x in inside and y in inside)
    prof = degree_profile(top)
    assert prof["bullet_in_B_degrees"] == [3]
    assert prof["bullet_outside_B_degrees"] == [1]
    assert all(prof["checks"].values())


def test_top_layer_full_group(gamma_z4, z4):
    top = build_top_layer(gamma_z4, submonoid_closure(z4, range(4)))
    bullets = top.bullet_vertex
    assert all(top.graph.has_edge(a, b) for a, b in itertools.combinations(bullets, 2))
    assert all(top.graph.has_edge(gamma_z4.group_vertex[g], bullets[g]) for g in range(4))


def test_top_layer_errors(gamma_z4, z4, s3):
    with pytest.raises(SubmonoidTooSmall):
        build_top_layer(gamma_z4, submonoid_closure(z4, []))
    with pytest.raises(SubmonoidNotInGroup):
        build_top_layer(gamma_z4, submonoid_closure(s3, [1]))


def test_trivial_submonoid_keeps_whole_group(gamma_z4, z4):
    top = build_top_layer(gamma_z4, submonoid_closure(z4, []), allow_trivial=True)
    auts = enumerate_automorphisms(top.graph)
    assert len(auts) == 4
    assert enumerate_bimorphisms(top.graph) == auts


def test_build_is_deterministic(z4):
    assert build_for_group(z4).graph == build_for_group(z4).graph


def test_min_gadget_size_override(z4):
    gamma = build_for_group(z4, min_gadget_size=9)
    assert min(gd.size for gd in gamma.gadgets.values()) == 10
    spec = gamma.gadgets[1].spec
    assert isinstance(spec, GadgetSpec)
