"""Finite witnesses for realizing groups and submonoids as bimorphism monoids of graphs."""

from .algebra import (
    FiniteGroup,
    FiniteMonoid,
    Submonoid,
    cyclic_group,
    group_from_permutation_generators,
    group_from_table,
    monoid_from_table,
    submonoid_closure,
    symmetric_group,
)
from .construction import build_for_group, build_modified_cayley, build_top_layer
from .engine import (
    VertexMap,
    check_block_preservation,
    check_regular_left_action,
    enumerate_automorphisms,
    enumerate_bimorphisms,
    enumerate_monomorphisms,
    is_isomorphic_monoid,
    monoid_closure,
)
from .gadgets import GadgetSpec, build_gadget, default_gadget_family
from .graph import Graph, VertexRole, build_graph, find_isomorphism
from .pipeline import PipelineOptions, replay, run_pipeline

__version__ = "0.1.0"
