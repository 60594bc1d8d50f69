"""Non-commuting, non-generating graphs and their exact diameters.

Elements generating the same cyclic subgroup have the same neighbours, so the
graphs are stored on cyclic subgroups: one vertex per subgroup, named by its
generator that is least in the lexicographic order of image vectors.
Adjacency is a packed bit-matrix (row ``v``, bit ``u`` in little-endian bit
order).

Two construction routes exist.  ``pairwise`` evaluates the adjacency
predicate on every vertex pair.  ``orbit`` evaluates it only between a
representative ``r`` of each conjugacy class of cyclic subgroups and one
vertex from each orbit of ``C_G(r)``, then transports rows along a Schreier
tree of the conjugation action.  Diameters are computed by breadth-first
search, from the class representatives when a plan is supplied and from
every vertex otherwise.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import CapExceeded, PreconditionError
from .permgrp import (
    ElementIndex,
    Permutation,
    PermGroup,
    _components,
    center_mask,
    commutes,
    generates_group,
)

MAX_GROUP_ORDER = 10**7
MAX_VERTICES = 10**5
KINDS = ("nc", "nongen")
_ROW_CHUNK = 2048


# -- adjacency predicates ------------------------------------------------------

def _is_central(G: PermGroup, x: Sequence[int]) -> bool:
    return all(commutes(x, g) for g in G.generators)


def nc_adjacent(G: PermGroup, x: Sequence[int], y: Sequence[int]) -> bool:
    """``[x, y] != 1`` and ``<x, y> != G``; both must be non-central in G."""
    if not (G.contains(x) and G.contains(y)):
        raise PreconditionError("elements must lie in G")
    if _is_central(G, x) or _is_central(G, y):
        raise PreconditionError("central elements are not vertices")
    if commutes(x, y):
        return False
    return not generates_group(G, x, y, check=False)


def nongen_adjacent(G: PermGroup, x: Sequence[int], y: Sequence[int]) -> bool:
    """``<x, y> != G``; both must be non-identity elements of G."""
    if not (G.contains(x) and G.contains(y)):
        raise PreconditionError("elements must lie in G")
    if Permutation(x).is_identity() or Permutation(y).is_identity():
        raise PreconditionError("the identity is not a vertex")
    return not generates_group(G, x, y, check=False)


ADJACENT = {"nc": nc_adjacent, "nongen": nongen_adjacent}


# -- cyclic subgroups ----------------------------------------------------------

def canonical_generators(el: ElementIndex) -> np.ndarray:
    """For every element ``e``, the index of the lex-least generator of ``<e>``."""
    orders = el.orders
    lex = el.lexpos
    canon = np.arange(el.size, dtype=np.int64)
    for m in np.unique(orders):
        m = int(m)
        if m <= 2:
            continue
        idx = np.flatnonzero(orders == m)
        best = idx.copy()
        cur = idx
        for k in range(2, m):
            cur = el.multiply(cur, idx)
            if math.gcd(k, m) == 1:
                better = lex[cur] < lex[best]
                best = np.where(better, cur, best)
        canon[idx] = best
    return canon


def _row_bytes(n: int) -> int:
    return (n + 7) // 8


def _pack(rows: np.ndarray) -> np.ndarray:
    return np.packbits(rows, axis=-1, bitorder="little")


def _unpack(packed: np.ndarray, n: int) -> np.ndarray:
    return np.unpackbits(packed, axis=-1, count=n, bitorder="little").astype(bool)


# -- reduction plan ------------------------------------------------------------

@dataclass
class ReductionPlan:
    """Conjugacy reduction of the vertex set.

    ``X`` lists all vertices; ``X_prime`` one vertex per conjugacy class of
    cyclic subgroups (the least id in its class); ``Y[r]`` one vertex per
    ``C_G(r)``-orbit for each ``r`` in ``X_prime``.  ``parent``/``via``
    form a Schreier tree: vertex ``v`` is the image of ``parent[v]`` under
    generator ``via[v]`` (``-1`` at the roots).
    """

    X: np.ndarray
    X_prime: list[int]
    class_of: np.ndarray
    Y: dict[int, list[int]]
    parent: np.ndarray
    via: np.ndarray
    vertex_perms: list[np.ndarray]

    def transporter(self, v: int, generators: Sequence[Permutation]) -> tuple[int, Permutation]:
        """``(r, g)`` with ``r`` in ``X_prime`` and ``r ** g`` generating vertex ``v``."""
        word = []
        while self.parent[v] >= 0:
            word.append(int(self.via[v]))
            v = int(self.parent[v])
        degree = len(generators[0]) if generators else 0
        g = Permutation.identity(degree)
        for k in reversed(word):
            g = g * generators[k]
        return v, g


@dataclass
class QuotientGraph:
    group: PermGroup
    kind: str
    elements: ElementIndex
    vertex_index: np.ndarray
    vid: np.ndarray
    adjacency: np.ndarray
    vertex_orders: np.ndarray
    method: str
    plan: ReductionPlan | None = None
    stats: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)

    @property
    def n_vertices(self) -> int:
        return int(self.vertex_index.size)

    def vertex(self, v: int) -> Permutation:
        return self.elements.perm(int(self.vertex_index[v]))

    @property
    def verts(self) -> list[Permutation]:
        return [self.vertex(v) for v in range(self.n_vertices)]

    def reduction(self, g: Sequence[int]) -> int:
        """Vertex id of ``<g>``, or -1 if ``g`` is not a vertex of the graph."""
        i = self.elements.index(g)
        if i < 0:
            raise PreconditionError("element not in G")
        return int(self.vid[i])

    def row(self, v: int) -> np.ndarray:
        return _unpack(self.adjacency[v], self.n_vertices)

    def neighbors(self, v: int) -> np.ndarray:
        return np.flatnonzero(self.row(v))

    def adjacent(self, u: int, v: int) -> bool:
        return bool((self.adjacency[u, v >> 3] >> (v & 7)) & 1)

    def degrees(self) -> np.ndarray:
        return np.unpackbits(self.adjacency, axis=1, bitorder="little").sum(axis=1, dtype=np.int64)

    def edge_count(self) -> int:
        return int(self.degrees().sum()) // 2

    def dense(self) -> np.ndarray:
        return _unpack(self.adjacency, self.n_vertices)


def _vertex_action(el: ElementIndex, canon: np.ndarray, vid: np.ndarray,
                   vertex_index: np.ndarray, g: Sequence[int]) -> np.ndarray:
    return vid[canon[el.conjugate(vertex_index, g)]]


def _schreier_forest(V: int, perms: list[np.ndarray]) -> tuple[np.ndarray, np.ndarray, np.ndarray, list[int]]:
    parent = np.full(V, -1, dtype=np.int64)
    via = np.full(V, -1, dtype=np.int64)
    label = np.full(V, -1, dtype=np.int64)
    roots: list[int] = []
    for start in range(V):
        if label[start] >= 0:
            continue
        c = len(roots)
        roots.append(start)
        label[start] = c
        frontier = np.array([start])
        while frontier.size:
            nxt = []
            for k, p in enumerate(perms):
                img = p[frontier]
                fresh = label[img] < 0
                img, src = img[fresh], frontier[fresh]
                img, first = np.unique(img, return_index=True)
                label[img] = c
                parent[img] = src[first]
                via[img] = k
                nxt.append(img)
            frontier = np.concatenate(nxt) if nxt else np.zeros(0, np.int64)
    return parent, via, label, roots


class _Clock:
    def __init__(self, budget: float | None):
        self.start = time.monotonic()
        self.budget = budget

    def check(self) -> None:
        if self.budget is not None and time.monotonic() - self.start > self.budget:
            raise CapExceeded(f"time budget of {self.budget:g} s exceeded")


def build_quotient_graph(
    G: PermGroup,
    kind: str = "nc",
    method: str = "orbit",
    *,
    max_vertices: int = MAX_VERTICES,
    time_budget: float | None = None,
) -> QuotientGraph:
    """Quotient graph of nc(G) (``kind="nc"``) or of the non-generating
    graph (``kind="nongen"``) on cyclic subgroups."""
    if kind not in KINDS:
        raise PreconditionError(f"unknown graph kind {kind!r}")
    if method not in ("orbit", "pairwise"):
        raise PreconditionError(f"unknown construction method {method!r}")
    if G.order() > MAX_GROUP_ORDER:
        raise CapExceeded(f"group order {G.order()} exceeds {MAX_GROUP_ORDER}")
    clock = _Clock(time_budget)
    timings: dict[str, float] = {}
    t0 = time.perf_counter()
    el = G.elements(cap=MAX_GROUP_ORDER)
    canon = canonical_generators(el)
    if kind == "nc":
        allowed = ~center_mask(G)
    else:
        allowed = np.ones(el.size, dtype=bool)
        allowed[el.identity_index] = False
    reps = np.flatnonzero((canon == np.arange(el.size)) & allowed)
    reps = reps[np.argsort(el.lexpos[reps])]
    V = int(reps.size)
    if V > max_vertices:
        raise CapExceeded(f"{V} vertices exceed the cap of {max_vertices}")
    vid = np.full(el.size, -1, dtype=np.int64)
    rep_vid = np.full(el.size, -1, dtype=np.int64)
    rep_vid[reps] = np.arange(V)
    vid[allowed] = rep_vid[canon[allowed]]
    timings["vertices"] = time.perf_counter() - t0

    graph = QuotientGraph(G, kind, el, reps, vid, np.zeros((V, _row_bytes(V)), np.uint8),
                          el.orders[reps], method, timings=timings)
    t0 = time.perf_counter()
    if method == "pairwise":
        _fill_pairwise(graph, clock)
    else:
        _fill_orbit(graph, canon, clock)
    timings["adjacency"] = time.perf_counter() - t0
    return graph


def _vertex_perm_rows(graph: QuotientGraph) -> np.ndarray:
    return graph.elements.perms[graph.vertex_index].astype(np.int64)


def _fill_pairwise(graph: QuotientGraph, clock: _Clock) -> None:
    G, V = graph.group, graph.n_vertices
    R = _vertex_perm_rows(graph)
    abelian = G.is_abelian()
    tests = 0
    dense = np.zeros((V, V), dtype=bool)
    for i in range(V):
        clock.check()
        x = R[i]
        comm = (x[R] == R[:, x]).all(axis=1)
        xi = tuple(int(v) for v in x)
        for j in range(i + 1, V):
            if comm[j]:
                adj = graph.kind == "nongen" and not abelian
            else:
                tests += 1
                adj = not generates_group(G, xi, tuple(int(v) for v in R[j]), check=False)
            dense[i, j] = dense[j, i] = adj
    graph.adjacency = _pack(dense)
    graph.stats["generation_tests"] = tests


def _fill_orbit(graph: QuotientGraph, canon: np.ndarray, clock: _Clock) -> None:
    G, el, V = graph.group, graph.elements, graph.n_vertices
    gens = list(G.generators)
    perms = [_vertex_action(el, canon, graph.vid, graph.vertex_index, g) for g in gens]
    parent, via, label, roots = _schreier_forest(V, perms)
    abelian = G.is_abelian()
    R = _vertex_perm_rows(graph)
    adjacency = np.zeros((V, _row_bytes(V)), dtype=np.uint8)
    Y: dict[int, list[int]] = {}
    tests = 0
    for r in roots:
        clock.check()
        x = R[r]
        cmask = el.centralizer_mask(x)
        C = el.subgroup_from_mask(cmask)
        cperms = [_vertex_action(el, canon, graph.vid, graph.vertex_index, c) for c in C.generators]
        orbit = _components(V, cperms)
        _, first = np.unique(orbit, return_index=True)
        Y[r] = sorted(int(v) for v in first)
        adj_orbit = np.zeros(first.size, dtype=bool)
        xi = tuple(int(v) for v in x)
        commuting = cmask[graph.vertex_index[first]]
        for k, y in enumerate(first):
            if y == r:
                continue
            if commuting[k]:
                adj_orbit[k] = graph.kind == "nongen" and not abelian
            else:
                tests += 1
                adj_orbit[k] = not generates_group(G, xi, tuple(int(v) for v in R[y]), check=False)
        row = adj_orbit[orbit]
        row[r] = False
        adjacency[r] = _pack(row)
    # transport rows: if v = p ** g then u ~ p  iff  u ** g ~ v
    order = np.argsort(_tree_depth(parent), kind="stable")
    for v in order:
        p = parent[v]
        if p < 0:
            continue
        clock.check() if v % 4096 == 0 else None
        new = np.zeros(V, dtype=bool)
        new[perms[via[v]]] = _unpack(adjacency[p], V)
        adjacency[v] = _pack(new)
    graph.adjacency = adjacency
    graph.plan = ReductionPlan(np.arange(V), list(roots), label, Y, parent, via, perms)
    graph.stats["generation_tests"] = tests
    graph.stats["classes_of_cyclic_subgroups"] = len(roots)


def _tree_depth(parent: np.ndarray) -> np.ndarray:
    depth = np.full(parent.size, -1, dtype=np.int64)
    depth[parent < 0] = 0
    while (depth < 0).any():
        todo = np.flatnonzero(depth < 0)
        ready = depth[parent[todo]] >= 0
        depth[todo[ready]] = depth[parent[todo[ready]]] + 1
    return depth


# -- breadth-first search ------------------------------------------------------

def bfs_layers(adjacency: np.ndarray, V: int, source: int, target: int | None = None) -> list[np.ndarray]:
    """Distance layers from ``source``; stops early once ``target`` is reached."""
    visited = np.zeros(V, dtype=bool)
    visited[source] = True
    frontier = np.array([source], dtype=np.int64)
    layers = [frontier]
    while frontier.size and (target is None or not visited[target]):
        unvisited = np.flatnonzero(~visited)
        if not unvisited.size:
            break
        if frontier.size <= unvisited.size:
            acc = np.zeros(adjacency.shape[1], dtype=np.uint8)
            for s in range(0, frontier.size, _ROW_CHUNK):
                acc |= np.bitwise_or.reduce(adjacency[frontier[s:s + _ROW_CHUNK]], axis=0)
            new = _unpack(acc, V) & ~visited
            frontier = np.flatnonzero(new)
        else:
            fpack = _pack(np.isin(np.arange(V), frontier))
            hits = []
            for s in range(0, unvisited.size, _ROW_CHUNK):
                chunk = unvisited[s:s + _ROW_CHUNK]
                hits.append(chunk[(adjacency[chunk] & fpack).any(axis=1)])
            frontier = np.concatenate(hits)
        if frontier.size:
            visited[frontier] = True
            layers.append(frontier)
    return layers


def _backtrack(adjacency: np.ndarray, V: int, layers: list[np.ndarray], target: int) -> list[int]:
    path = [target]
    cur = target
    for layer in reversed(layers[:-1]):
        mask = np.zeros(V, dtype=bool)
        mask[layer] = True
        cur = int(np.flatnonzero(_unpack(adjacency[cur], V) & mask)[0])
        path.append(cur)
    return path[::-1]


# -- reports -------------------------------------------------------------------

@dataclass
class DiameterReport:
    group: str
    order: int
    kind: str
    diameter: int | None
    infinite: bool
    quotient_diameter: int | None
    witness_pair: tuple[str, str] | None
    path: list[str]
    isolated: list[str]
    components: list[dict]
    vertices: int
    edges: int
    mode: str
    stats: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)

    def to_dict(self, timing: bool = True) -> dict:
        out = {
            "group": self.group,
            "order": self.order,
            "graph": self.kind,
            "diameter": self.diameter,
            "infinite": self.infinite,
            "quotient_diameter": self.quotient_diameter,
            "witness_pair": list(self.witness_pair) if self.witness_pair else None,
            "path": self.path,
            "isolated": self.isolated,
            "components": self.components,
            "vertices": self.vertices,
            "edges": self.edges,
            "mode": self.mode,
            "stats": self.stats,
        }
        if timing:
            out["timings"] = {k: round(v, 6) for k, v in self.timings.items()}
        return out

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), indent=2, sort_keys=True)

    CSV_FIELDS = ("group", "order", "graph", "diameter", "infinite", "vertices", "edges", "mode")

    def csv_row(self) -> dict:
        d = self.to_dict(timing=False)
        return {k: d[k] for k in self.CSV_FIELDS}


def isolated_vertices(graph: QuotientGraph) -> list[int]:
    return [int(v) for v in np.flatnonzero(graph.degrees() == 0)]


def _verify_path(graph: QuotientGraph, path: list[Permutation]) -> None:
    adjacent = ADJACENT[graph.kind]
    if len(set(path)) != len(path):
        raise AssertionError("witness path repeats an element")
    for a, b in zip(path, path[1:]):
        if not adjacent(graph.group, a, b):
            raise AssertionError(f"witness path step {a.cycle_str()} - {b.cycle_str()} is not an edge")


def _lift(graph: QuotientGraph, vpath: list[int], first=None, last=None) -> list[Permutation]:
    elems = [graph.vertex(v) for v in vpath]
    if first is not None:
        elems[0] = Permutation(first)
    if last is not None:
        elems[-1] = Permutation(last)
    return elems


def _multi_generator_vertex(graph: QuotientGraph) -> int | None:
    """A non-isolated vertex whose subgroup has at least two generators."""
    deg = graph.degrees()
    cand = np.flatnonzero((graph.vertex_orders > 2) & (deg > 0))
    return int(cand[0]) if cand.size else None


def _same_vertex_path(graph: QuotientGraph, v: int) -> list[Permutation]:
    """Path between the canonical generator of vertex v and its inverse."""
    x = graph.vertex(v)
    if graph.kind == "nongen":
        return [x, x.inverse()]
    w = int(graph.neighbors(v)[0])
    return [x, graph.vertex(w), x.inverse()]


def _components_of(graph: QuotientGraph) -> np.ndarray:
    V = graph.n_vertices
    label = np.full(V, -1, dtype=np.int64)
    c = 0
    for s in range(V):
        if label[s] >= 0:
            continue
        for layer in bfs_layers(graph.adjacency, V, s):
            label[layer] = c
        c += 1
    return label


def graph_diameter(graph: QuotientGraph, plan: ReductionPlan | None = None, threads: int = 1) -> DiameterReport:
    """Exact diameter of the element graph underlying ``graph``.

    With a plan, breadth-first searches start only at ``plan.X_prime``;
    conjugation preserves distances, so every eccentricity is attained there.
    """
    t0 = time.perf_counter()
    G, V = graph.group, graph.n_vertices
    sources = list(plan.X_prime) if plan is not None else list(range(V))
    mode = "reduced" if plan is not None else "full"
    iso = isolated_vertices(graph)
    base = dict(group=G.name or repr(G), order=G.order(), kind=graph.kind,
                isolated=[graph.vertex(v).cycle_str() for v in iso],
                vertices=V, edges=graph.edge_count(), mode=mode,
                stats=dict(graph.stats, sources=len(sources), method=graph.method))
    if V == 0:
        return DiameterReport(diameter=0, infinite=False, quotient_diameter=0, witness_pair=None,
                              path=[], components=[], timings=dict(graph.timings), **base)

    def ecc(s: int) -> tuple[int, int]:
        layers = bfs_layers(graph.adjacency, V, s)
        return len(layers) - 1, sum(int(l.size) for l in layers)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(ecc, sources))
    else:
        results = [ecc(s) for s in sources]
    connected = all(reached == V for _, reached in results)

    if not connected:
        label = _components_of(graph)
        comps = []
        for c in range(int(label.max()) + 1):
            members = np.flatnonzero(label == c)
            diam = max(len(bfs_layers(graph.adjacency, V, int(s))) - 1 for s in members)
            comps.append({"size": int(members.size), "quotient_diameter": int(diam),
                          "first": graph.vertex(int(members[0])).cycle_str()})
        timings = dict(graph.timings, diameter=time.perf_counter() - t0)
        return DiameterReport(diameter=None, infinite=True, quotient_diameter=None, witness_pair=None,
                              path=[], components=comps, timings=timings, **base)

    eccs = [e for e, _ in results]
    qdiam = max(eccs)
    s = sources[eccs.index(qdiam)]
    layers = bfs_layers(graph.adjacency, V, s)
    t = int(layers[-1].min())
    path = _lift(graph, _backtrack(graph.adjacency, V, layers, t))
    diameter = qdiam
    within = 2 if graph.kind == "nc" else 1
    if within > qdiam:
        v = _multi_generator_vertex(graph)
        if v is not None:
            diameter = within
            path = _same_vertex_path(graph, v)
    _verify_path(graph, path)
    if len(path) - 1 != diameter:
        raise AssertionError("witness path length differs from the diameter")
    timings = dict(graph.timings, diameter=time.perf_counter() - t0)
    comps = [{"size": V, "quotient_diameter": int(qdiam), "first": graph.vertex(0).cycle_str()}]
    return DiameterReport(diameter=int(diameter), infinite=False, quotient_diameter=int(qdiam),
                          witness_pair=(path[0].cycle_str(), path[-1].cycle_str()),
                          path=[p.cycle_str() for p in path], components=comps, timings=timings, **base)


def distance_and_path(graph: QuotientGraph, x: Sequence[int], y: Sequence[int]) -> tuple[int | None, list[Permutation]]:
    """Distance between elements ``x`` and ``y`` with a verified path;
    ``(None, [])`` when they lie in different components."""
    u, v = graph.reduction(x), graph.reduction(y)
    if u < 0 or v < 0:
        raise PreconditionError("both elements must be vertices of the graph")
    x, y = Permutation(x), Permutation(y)
    if x == y:
        return 0, [x]
    V = graph.n_vertices
    if u == v:
        if graph.kind == "nongen":
            path = [x, y]
        else:
            nb = graph.neighbors(u)
            if not nb.size:
                return None, []
            path = [x, graph.vertex(int(nb[0])), y]
    else:
        layers = bfs_layers(graph.adjacency, V, u, target=v)
        if not (layers[-1] == v).any():
            return None, []
        cut = next(i for i, l in enumerate(layers) if (l == v).any())
        path = _lift(graph, _backtrack(graph.adjacency, V, layers[:cut + 1], v), first=x, last=y)
    _verify_path(graph, path)
    return len(path) - 1, path


def diameter(G: PermGroup, kind: str = "nc", *, threads: int = 1, reduced: bool = True,
             time_budget: float | None = None) -> DiameterReport:
    graph = build_quotient_graph(G, kind, "orbit", time_budget=time_budget)
    return graph_diameter(graph, graph.plan if reduced else None, threads=threads)


# -- induced subgraphs -----------------------------------------------------------

def induced_element_diameter(graph: QuotientGraph, members: np.ndarray) -> int | None:
    """Diameter of the element graph induced on the given element indices
    (all must be vertices of the graph); ``None`` if disconnected."""
    vids = graph.vid[members]
    if (vids < 0).any():
        raise PreconditionError("induced set contains non-vertices")
    m = members.size
    if m <= 1:
        return 0
    rows = _unpack(graph.adjacency[vids], graph.n_vertices)
    A = rows[:, vids]
    if graph.kind == "nongen":
        A = A | (vids[:, None] == vids[None, :])
    np.fill_diagonal(A, False)
    reach = A | np.eye(m, dtype=bool)
    d = 1
    Ai = A.astype(np.int32)
    while not reach.all():
        nxt = reach | ((reach.astype(np.int32) @ Ai) > 0)
        if (nxt == reach).all():
            return None
        reach = nxt
        d += 1
    return d


def intersection_graph_diameter(G: PermGroup) -> DiameterReport:
    """Diameter of the intersection graph of G (order at most 10**4)."""
    from .lattice import intersection_graph_diameter as compute

    return compute(G)
