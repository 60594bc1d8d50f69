from collections import Counter, deque
from functools import lru_cache
from itertools import combinations

import pytest

from ncgraph.checks import has_odd_order_maximal
from ncgraph.errors import CapExceeded
from ncgraph.families import group_from_descriptor
from ncgraph.graphcore import intersection_graph_diameter
from ncgraph.lattice import SubgroupLattice, maximal_subgroups
from ncgraph.permgrp import naive_closure


@lru_cache(maxsize=None)
def _all_subgroups(desc):
    """Every subgroup generated by at most two elements, by naive closure.
    Each subgroup of the groups used here is two-generated."""
    G = group_from_descriptor(desc)
    els = sorted(naive_closure(G.generators, G.degree))
    subs = {frozenset(naive_closure([a, b], G.degree)) for a, b in combinations(els, 2)}
    subs.add(frozenset(naive_closure([els[0]], G.degree)))
    return len(els), subs


@pytest.mark.parametrize("desc", ["sym:4", "alt:5"])
def test_subgroup_count_matches_naive(desc):
    _, subs = _all_subgroups(desc)
    assert SubgroupLattice(group_from_descriptor(desc)).total() == len(subs)


@pytest.mark.parametrize("desc", ["sym:4", "alt:5"])
def test_maximal_subgroups_match_naive(desc):
    order, subs = _all_subgroups(desc)
    proper = [h for h in subs if len(h) < order]
    maximal = [h for h in proper if not any(h < k for k in proper)]
    lat = SubgroupLattice(group_from_descriptor(desc))
    got = Counter()
    for c in lat.maximal_classes():
        got[c.order] += c.conjugates.shape[0]
    assert got == Counter(len(h) for h in maximal)
    assert len(maximal_subgroups(group_from_descriptor(desc))) == len(lat.maximal_classes())


def test_intersection_diameter_matches_naive():
    order, subs = _all_subgroups("alt:5")
    verts = [h for h in subs if 1 < len(h) < order]
    adj = {h: [k for k in verts if k is not h and len(h & k) > 1] for h in verts}
    best = 0
    for s in verts:
        dist = {s: 0}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        assert len(dist) == len(verts)
        best = max(best, max(dist.values()))
    rep = intersection_graph_diameter(group_from_descriptor("alt:5"))
    assert rep.diameter == best
    assert rep.vertices == len(verts)


@pytest.mark.parametrize("desc", ["alt:5", "alt:6", "psl:2:7", "psl:2:8", "psl:2:11", "psl:2:13"])
def test_odd_order_maximal_list_agrees_with_lattice(desc):
    lat = SubgroupLattice(group_from_descriptor(desc))
    odd = any(c.order % 2 for c in lat.maximal_classes())
    assert odd == has_odd_order_maximal(desc)


def test_closure_and_conjugates():
    lat = SubgroupLattice(group_from_descriptor("alt:5"))
    for c in lat.classes:
        assert (c.conjugates.sum(axis=1) == c.order).all()
        # the number of conjugates is the index of the normaliser, so it divides [G:H]
        assert (60 // c.order) % c.conjugates.shape[0] == 0
        assert (lat.closure(c.gens) == c.mask).all()


def test_lattice_cap():
    with pytest.raises(CapExceeded):
        SubgroupLattice(group_from_descriptor("alt:8"))
