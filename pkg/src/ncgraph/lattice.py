"""Subgroup lattices of small groups, by cyclic extension up to conjugacy.

Every subgroup is generated by cyclic subgroups of prime-power order, so
joining each class representative with each such cyclic subgroup reaches a
conjugate of every subgroup.  Elements are indexed by ``ElementIndex`` and
multiplied through a full table, which caps the group order.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import CapExceeded
from .graphcore import DiameterReport, bfs_layers, canonical_generators, _backtrack, _pack
from .permgrp import PermGroup

MAX_LATTICE_ORDER = 10**4


def _is_prime(m: int) -> bool:
    return m >= 2 and all(m % d for d in range(2, math.isqrt(m) + 1))


def _is_prime_power(m: int) -> bool:
    if m < 2:
        return False
    p = next(d for d in range(2, m + 1) if m % d == 0)
    while m % p == 0:
        m //= p
    return m == 1


@dataclass
class SubgroupClass:
    gens: list[int]
    order: int
    conjugates: np.ndarray  # bool, one row per conjugate
    maximal: bool = False

    @property
    def mask(self) -> np.ndarray:
        return self.conjugates[0]


@dataclass
class SubgroupLattice:
    group: PermGroup
    classes: list[SubgroupClass] = field(default_factory=list)
    seconds: float = 0.0

    def __post_init__(self):
        G = self.group
        if G.order() > MAX_LATTICE_ORDER:
            raise CapExceeded(f"subgroup enumeration is limited to order {MAX_LATTICE_ORDER}")
        t0 = time.perf_counter()
        el = self.el = G.elements()
        N = self.N = el.size
        perms = el.perms.astype(np.int64)
        dtype = np.int16 if N < 2**15 else np.int32
        mt = np.empty((N, N), dtype=dtype)
        for c in range(N):
            mt[:, c] = el.rank(perms[c][perms])
        self.mt = mt
        self.inv = np.argmax(mt == el.identity_index, axis=1)
        canon = canonical_generators(el)
        reps = np.flatnonzero(canon == np.arange(N))
        self.cyclic = [int(c) for c in reps[np.argsort(el.lexpos[reps])]
                       if _is_prime_power(int(el.orders[c]))]
        self._build()
        self.seconds = time.perf_counter() - t0

    def closure(self, gens: list[int]) -> np.ndarray:
        mask = np.zeros(self.N, dtype=bool)
        e = self.el.identity_index
        mask[e] = True
        frontier = np.array([e])
        g = np.asarray(gens, dtype=np.int64)
        while frontier.size and g.size:
            prod = self.mt[frontier[:, None], g[None, :]].ravel().astype(np.int64)
            new = np.unique(prod[~mask[prod]])
            mask[new] = True
            frontier = new
        return mask

    def _conjugates(self, mask: np.ndarray) -> np.ndarray:
        members = np.flatnonzero(mask)
        N = self.N
        left = self.mt[self.inv][:, members].astype(np.int64)
        conj = self.mt[left, np.arange(N)[:, None]].astype(np.int64)
        conj.sort(axis=1)
        uniq = np.unique(conj, axis=0)
        rows = np.zeros((uniq.shape[0], N), dtype=bool)
        rows[np.arange(uniq.shape[0])[:, None], uniq] = True
        # keep the given subgroup first
        first = np.flatnonzero((rows == mask).all(axis=1))[0]
        order = [first] + [i for i in range(rows.shape[0]) if i != first]
        return rows[order]

    def _build(self) -> None:
        seen: dict[bytes, int] = {}

        def register(gens: list[int], mask: np.ndarray) -> None:
            conj = self._conjugates(mask)
            cid = len(self.classes)
            for row in conj:
                seen[_pack(row).tobytes()] = cid
            self.classes.append(SubgroupClass(gens, int(mask.sum()), conj))

        register([], self.closure([]))
        i = 0
        while i < len(self.classes):
            H = self.classes[i]
            i += 1
            if H.order == self.N:
                continue
            maximal = True
            for c in self.cyclic:
                if H.mask[c]:
                    continue
                K = self.closure(H.gens + [c])
                if K.sum() < self.N:
                    maximal = False
                if _pack(K).tobytes() not in seen:
                    register(H.gens + [c], K)
            H.maximal = maximal

    def perm_gens(self, gens: list[int]) -> list:
        return [self.el.perm(g) for g in gens]

    def subgroup(self, cls: SubgroupClass) -> PermGroup:
        return PermGroup(self.perm_gens(cls.gens) or [self.group.identity()], self.group.degree,
                         order=cls.order)

    def total(self) -> int:
        return sum(c.conjugates.shape[0] for c in self.classes)

    def maximal_classes(self) -> list[SubgroupClass]:
        return [c for c in self.classes if c.maximal]

    def proper_nontrivial(self) -> np.ndarray:
        rows = [c.conjugates for c in self.classes if 1 < c.order < self.N]
        return np.vstack(rows) if rows else np.zeros((0, self.N), dtype=bool)


def maximal_subgroups(G: PermGroup) -> list[PermGroup]:
    """One representative per conjugacy class of maximal subgroups."""
    lat = SubgroupLattice(G)
    return [lat.subgroup(c) for c in lat.maximal_classes()]


def _describe(lat: SubgroupLattice, mask: np.ndarray) -> str:
    members = np.flatnonzero(mask)
    gens = lat.el.subgroup_from_mask(mask).generators
    return f"order {members.size} <" + ", ".join(g.cycle_str() for g in gens) + ">"


def intersection_graph_diameter(G: PermGroup) -> DiameterReport:
    """Diameter of the graph on proper nontrivial subgroups, edges joining
    subgroups that intersect nontrivially."""
    t0 = time.perf_counter()
    lat = SubgroupLattice(G)
    subs = lat.proper_nontrivial()
    S = subs.shape[0]
    orders = lat.el.orders
    prime = np.array([_is_prime(int(m)) for m in orders])
    # nontrivial intersection iff a common element of prime order
    inc = subs[:, prime].astype(np.float32)
    dense = (inc @ inc.T) > 0
    np.fill_diagonal(dense, False)
    adj = _pack(dense)
    iso = [int(v) for v in np.flatnonzero(~dense.any(axis=1))]
    best, src, reached_all = -1, 0, True
    for s in range(S):
        layers = bfs_layers(adj, S, s)
        if sum(int(l.size) for l in layers) < S:
            reached_all = False
            break
        if len(layers) - 1 > best:
            best, src = len(layers) - 1, s
    base = dict(group=G.name or repr(G), order=G.order(), kind="intersection",
                isolated=[_describe(lat, subs[v]) for v in iso], vertices=S,
                edges=int(dense.sum()) // 2, mode="full",
                stats={"subgroups": lat.total(), "subgroup_classes": len(lat.classes)})
    if S == 0 or not reached_all:
        return DiameterReport(diameter=None if S else 0, infinite=bool(S), quotient_diameter=None,
                              witness_pair=None, path=[], components=[],
                              timings={"total": time.perf_counter() - t0}, **base)
    layers = bfs_layers(adj, S, src)
    vpath = _backtrack(adj, S, layers, int(layers[-1].min()))
    for a, b in zip(vpath, vpath[1:]):
        if (subs[a] & subs[b]).sum() < 2:
            raise AssertionError("intersection witness step has trivial intersection")
    path = [_describe(lat, subs[v]) for v in vpath]
    return DiameterReport(diameter=best, infinite=False, quotient_diameter=best,
                          witness_pair=(path[0], path[-1]), path=path,
                          components=[{"size": S, "quotient_diameter": best, "first": path[0]}],
                          timings={"total": time.perf_counter() - t0}, **base)
