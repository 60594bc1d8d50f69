import json
from collections import deque
from functools import lru_cache

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ncgraph.errors import CapExceeded, PreconditionError
from ncgraph.families import group_from_descriptor
from ncgraph.graphcore import (
    build_quotient_graph,
    diameter,
    distance_and_path,
    graph_diameter,
    induced_element_diameter,
    isolated_vertices,
    nc_adjacent,
    nongen_adjacent,
)
from ncgraph.permgrp import Permutation, PermGroup, naive_closure


def _mul(a, b):
    return tuple(b[i] for i in a)


@lru_cache(maxsize=None)
def _element_graph(desc, kind):
    """Element-level adjacency lists built from scratch: commutation by
    multiplication, generation by naive closure."""
    G = group_from_descriptor(desc)
    els = sorted(naive_closure(G.generators, G.degree))
    order = len(els)
    central = {x for x in els if all(_mul(x, y) == _mul(y, x) for y in els)}
    ident = tuple(range(G.degree))
    verts = [x for x in els if (x not in central if kind == "nc" else x != ident)]
    adj = {x: set() for x in verts}
    for i, x in enumerate(verts):
        for y in verts[i + 1:]:
            commute = _mul(x, y) == _mul(y, x)
            if kind == "nc" and commute:
                continue
            if len(naive_closure([x, y], G.degree)) < order:
                adj[x].add(y)
                adj[y].add(x)
    return adj


def _element_diameter(adj):
    best = 0
    for s in adj:
        dist = {s: 0}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        if len(dist) < len(adj):
            return None
        best = max(best, max(dist.values()))
    return best


@pytest.mark.parametrize("desc,kind", [("sym:4", "nc"), ("sym:4", "nongen"), ("alt:5", "nc"),
                                       ("alt:5", "nongen"), ("sym:3", "nc"), ("psl:2:7", "nc")])
def test_diameter_matches_element_level_oracle(desc, kind):
    want = _element_diameter(_element_graph(desc, kind))
    G = group_from_descriptor(desc)
    reduced = diameter(G, kind)
    full = diameter(G, kind, reduced=False)
    assert reduced.diameter == full.diameter == want
    assert reduced.infinite == (want is None)


@pytest.mark.parametrize("desc", ["sym:4", "alt:5", "psl:2:7"])
def test_quotient_adjacency_matches_element_oracle(desc):
    adj = _element_graph(desc, "nc")
    g = build_quotient_graph(group_from_descriptor(desc), "nc")
    for x, nbrs in adj.items():
        u = g.reduction(x)
        got = {g.vertex(int(v)) for v in g.neighbors(u)}
        want = {g.vertex(g.reduction(y)) for y in nbrs}
        assert got == want


@pytest.mark.parametrize("desc", ["sym:4", "alt:5", "sym:5", "psl:2:7", "alt:6", "pgl:2:7", "psl:2:11"])
@pytest.mark.parametrize("kind", ["nc", "nongen"])
def test_orbit_route_equals_pairwise_route(desc, kind):
    G = group_from_descriptor(desc)
    a = build_quotient_graph(G, kind, "orbit")
    b = build_quotient_graph(G, kind, "pairwise")
    assert (a.vertex_index == b.vertex_index).all()
    assert (a.adjacency == b.adjacency).all()


@pytest.mark.parametrize("desc", ["alt:6", "psl:2:11", "mathieu:11"])
def test_reduced_sources_agree_with_all_sources(desc):
    g = build_quotient_graph(group_from_descriptor(desc), "nc")
    assert graph_diameter(g, g.plan).diameter == graph_diameter(g, None).diameter


def _graph(desc, kind="nc"):
    return build_quotient_graph(group_from_descriptor(desc), kind)


@lru_cache(maxsize=None)
def _graph_cache(desc, kind="nc"):
    return _graph(desc, kind)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 10**6), st.integers(1, 20), st.integers(1, 20))
def test_quotient_is_well_defined(i, j, k, m):
    g = _graph_cache("psl:2:7")
    el = g.elements
    verts = np.flatnonzero(g.vid >= 0)
    x = el.perm(int(verts[i % verts.size]))
    y = el.perm(int(verts[j % verts.size]))
    # replace x, y by other generators of the same cyclic subgroups
    xk, ym = x ** k, y ** m
    if np.gcd(k, x.order()) != 1 or np.gcd(m, y.order()) != 1:
        return
    assert g.reduction(xk) == g.reduction(x) and g.reduction(ym) == g.reduction(y)
    assert nc_adjacent(g.group, x, y) == nc_adjacent(g.group, xk, ym)
    assert g.adjacent(g.reduction(x), g.reduction(y)) == nc_adjacent(g.group, x, y)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 30))
def test_powers_are_never_adjacent(i, k):
    g = _graph_cache("alt:6")
    el = g.elements
    verts = np.flatnonzero(g.vid >= 0)
    x = el.perm(int(verts[i % verts.size]))
    y = x ** k
    if g.vid[el.index(y)] < 0:
        return
    assert not nc_adjacent(g.group, x, y)


@pytest.mark.parametrize("desc", ["alt:5", "psl:2:7", "alt:6", "sym:5"])
def test_nc_is_spanning_subgraph_of_nongen(desc):
    nc = _graph_cache(desc, "nc")
    ng = _graph_cache(desc, "nongen")
    # trivial centre, so both graphs share the vertex set
    assert (nc.vertex_index == ng.vertex_index).all()
    assert not (nc.dense() & ~ng.dense()).any()
    assert diameter(group_from_descriptor(desc), "nongen").diameter <= diameter(group_from_descriptor(desc), "nc").diameter


def test_dihedral_reflections_generate():
    # two distinct reflections of a regular pentagon generate D_10
    r = Permutation.from_cycles([(0, 1, 2, 3, 4)], 5)
    s = Permutation.from_cycles([(1, 4), (2, 3)], 5)
    D = PermGroup([r, s])
    t = s * r
    assert t.order() == 2 and t != s
    assert not nongen_adjacent(D, s, t)
    assert not nongen_adjacent(D, s, r)
    assert nongen_adjacent(D, r, r ** 2)
    assert not nc_adjacent(D, s, t)


def test_predicates_reject_bad_vertices():
    G = group_from_descriptor("alt:5")
    e = G.identity()
    x = Permutation.from_cycles([(0, 1, 2)], 5)
    with pytest.raises(PreconditionError):
        nc_adjacent(G, e, x)
    with pytest.raises(PreconditionError):
        nongen_adjacent(G, e, x)


def test_symmetric_three_is_disconnected():
    rep = diameter(group_from_descriptor("sym:3"), "nc")
    assert rep.infinite and rep.diameter is None
    assert len(rep.isolated) == 4
    assert sum(c["size"] for c in rep.components) == rep.vertices


def test_isolated_vertices_absent_for_alternating():
    assert isolated_vertices(_graph_cache("alt:5")) == []


def test_witness_path_is_valid():
    G = group_from_descriptor("psl:2:11")
    rep = diameter(G, "nc")
    path = [Permutation.parse(p, G.degree) for p in rep.path]
    assert len(path) - 1 == rep.diameter == 3
    assert all(nc_adjacent(G, a, b) for a, b in zip(path, path[1:]))


def test_distance_and_path():
    g = _graph_cache("alt:5")
    x = Permutation.parse("(0 1 2)", 5)
    y = Permutation.parse("(0 2 1)", 5)
    d, path = distance_and_path(g, x, y)
    assert d == 2 and path[0] == x and path[-1] == y
    z = Permutation.parse("(0 1)(2 3)", 5)
    d2, path2 = distance_and_path(g, x, z)
    assert d2 == len(path2) - 1
    assert all(nc_adjacent(g.group, a, b) for a, b in zip(path2, path2[1:]))
    s3 = _graph_cache("sym:3")
    assert distance_and_path(s3, Permutation.parse("(0 1)", 3), Permutation.parse("(0 1 2)", 3)) == (None, [])


def test_induced_diameter_of_whole_vertex_set():
    g = _graph_cache("alt:5")
    members = np.flatnonzero(g.vid >= 0)
    assert induced_element_diameter(g, members) == diameter(g.group, "nc").diameter


def test_report_is_deterministic():
    a = diameter(group_from_descriptor("alt:5"), "nc").to_dict(timing=False)
    b = diameter(group_from_descriptor("alt:5"), "nc").to_dict(timing=False)
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    assert "timings" not in a


def test_caps():
    with pytest.raises(CapExceeded):
        build_quotient_graph(group_from_descriptor("alt:6"), "nc", max_vertices=10)
    with pytest.raises(CapExceeded):
        build_quotient_graph(group_from_descriptor("alt:12"), "nc")
    with pytest.raises(PreconditionError):
        build_quotient_graph(group_from_descriptor("alt:5"), "commuting")


def test_threads_give_same_answer():
    g = _graph_cache("psl:2:7")
    assert graph_diameter(g, None, threads=3).to_dict(False) == graph_diameter(g, None).to_dict(False)
