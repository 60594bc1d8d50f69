"""Exact diameters of non-commuting, non-generating graphs of finite groups."""

from .errors import CapExceeded, DescriptorError, NcGraphError, PreconditionError, UnsupportedFamily
from .families import group_from_descriptor, make_group
from .graphcore import (
    DiameterReport,
    QuotientGraph,
    ReductionPlan,
    build_quotient_graph,
    diameter,
    distance_and_path,
    graph_diameter,
    intersection_graph_diameter,
    isolated_vertices,
    nc_adjacent,
    nongen_adjacent,
)
from .permgrp import Permutation, PermGroup

__all__ = [
    "CapExceeded", "DescriptorError", "NcGraphError", "PreconditionError", "UnsupportedFamily",
    "group_from_descriptor", "make_group",
    "DiameterReport", "QuotientGraph", "ReductionPlan", "build_quotient_graph", "diameter",
    "distance_and_path", "graph_diameter", "intersection_graph_diameter", "isolated_vertices",
    "nc_adjacent", "nongen_adjacent", "Permutation", "PermGroup",
]
