"""Permutation groups with base and strong generating set machinery.

Points are ``0 .. degree-1``.  A permutation is stored as its image tuple and
acts on the right: ``(a * b)[i] == b[a[i]]``, so ``a * b`` means "apply ``a``
first".  Conjugation is ``x ** g == g**-1 * x * g``.
"""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import CapExceeded, PreconditionError

MAX_ENUM_ORDER = 10**7
NAIVE_CLOSURE_CAP = 10**5


class Permutation(tuple):
    """Immutable permutation of ``{0, ..., n-1}`` given by its images."""

    __slots__ = ()

    def __new__(cls, images: Iterable[int]):
        return super().__new__(cls, images)

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> "Permutation":
        img = list(range(degree))
        seen: set[int] = set()
        for cyc in cycles:
            cyc = list(cyc)
            for a in cyc:
                if not 0 <= a < degree:
                    raise PreconditionError(f"point {a} outside 0..{degree - 1}")
                if a in seen:
                    raise PreconditionError(f"point {a} repeated in cycle notation")
                seen.add(a)
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                img[a] = b
        return cls(img)

    @classmethod
    def parse(cls, text: str, degree: int) -> "Permutation":
        """Parse disjoint-cycle notation such as ``(0 1 2)(3,4)``; ``()`` is the identity."""
        text = text.strip()
        if not re.fullmatch(r"(\(\s*[\d\s,]*\))+", text):
            raise PreconditionError(f"cannot parse permutation {text!r}")
        cycles = []
        for body in re.findall(r"\(([^)]*)\)", text):
            pts = [int(t) for t in re.split(r"[\s,]+", body.strip()) if t]
            if pts:
                cycles.append(pts)
        return cls.from_cycles(cycles, degree)

    @property
    def degree(self) -> int:
        return len(self)

    def __mul__(self, other):  # type: ignore[override]
        if not isinstance(other, tuple):
            return NotImplemented
        return Permutation(map(other.__getitem__, self))

    def __rmul__(self, other):  # type: ignore[override]
        if not isinstance(other, tuple):
            return NotImplemented
        return Permutation(map(self.__getitem__, other))

    def inverse(self) -> "Permutation":
        return Permutation(_inv(self))

    def __invert__(self) -> "Permutation":
        return self.inverse()

    def __pow__(self, k):
        if isinstance(k, tuple):
            return Permutation(_conj(self, k))
        return Permutation(_power(self, int(k)))

    def is_identity(self) -> bool:
        return all(i == a for i, a in enumerate(self))

    def cycles(self, include_fixed: bool = False) -> list[tuple[int, ...]]:
        seen = [False] * len(self)
        out = []
        for start in range(len(self)):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            nxt = self[start]
            while nxt != start:
                cyc.append(nxt)
                seen[nxt] = True
                nxt = self[nxt]
            if len(cyc) > 1 or include_fixed:
                out.append(tuple(cyc))
        return out

    def order(self) -> int:
        return math.lcm(*(len(c) for c in self.cycles(include_fixed=True))) if len(self) else 1

    def support(self) -> frozenset[int]:
        return frozenset(i for i, a in enumerate(self) if i != a)

    def fixed_points(self) -> list[int]:
        return [i for i, a in enumerate(self) if i == a]

    def sign(self) -> int:
        return -1 if sum(len(c) - 1 for c in self.cycles()) % 2 else 1

    def commutes_with(self, other: Sequence[int]) -> bool:
        return all(other[a] == self[b] for a, b in zip(self, other))

    def cycle_str(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)

    def __repr__(self) -> str:
        return f"Permutation({self.cycle_str()}, degree={len(self)})"

    __str__ = cycle_str


# -- raw tuple helpers (hot paths avoid the Permutation wrapper) ----------

def _mul(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    return tuple(map(b.__getitem__, a))


def _inv(a: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


def _conj(x: Sequence[int], g: Sequence[int]) -> tuple[int, ...]:
    gi = _inv(g)
    return tuple(g[x[gi[i]]] for i in range(len(x)))


def _power(a: Sequence[int], k: int) -> tuple[int, ...]:
    n = len(a)
    if k < 0:
        a = _inv(a)
        k = -k
    result = tuple(range(n))
    base = tuple(a)
    while k:
        if k & 1:
            result = _mul(result, base)
        base = _mul(base, base)
        k >>= 1
    return result


def _is_id(a: Sequence[int]) -> bool:
    return all(i == x for i, x in enumerate(a))


def _first_moved(a: Sequence[int]) -> int:
    for i, x in enumerate(a):
        if i != x:
            return i
    return -1


def commutes(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(b[x] == a[y] for x, y in zip(a, b))


def commutator(a: Sequence[int], b: Sequence[int]) -> Permutation:
    """``[a, b] = a^-1 b^-1 a b``."""
    return Permutation(_mul(_mul(_inv(a), _inv(b)), _mul(a, b)))


# -- stabiliser chains -----------------------------------------------------

class StabChain:
    """Base, strong generators and explicit transversals.

    ``trans[i]`` maps each point of the i-th basic orbit ``gamma`` to a pair
    ``(u, u^-1)`` with ``u`` in the i-th stabiliser and ``base[i]^u == gamma``.
    """

    __slots__ = ("degree", "base", "sgens", "trans")

    def __init__(self, degree: int):
        self.degree = degree
        self.base: list[int] = []
        self.sgens: list[list[tuple[int, ...]]] = []
        self.trans: list[dict[int, tuple[tuple[int, ...], tuple[int, ...]]]] = []

    def order(self) -> int:
        return math.prod(len(t) for t in self.trans)

    def sift(self, g: Sequence[int], start: int = 0) -> tuple[tuple[int, ...], int]:
        h = tuple(g)
        for i in range(start, len(self.base)):
            pt = h[self.base[i]]
            entry = self.trans[i].get(pt)
            if entry is None:
                return h, i
            h = tuple(map(entry[1].__getitem__, h))
        return h, len(self.base)

    def contains(self, g: Sequence[int]) -> bool:
        h, _ = self.sift(g)
        return _is_id(h)

    def _orbit(self, i: int) -> None:
        b = self.base[i]
        ident = tuple(range(self.degree))
        trans = {b: (ident, ident)}
        frontier = [b]
        gens = self.sgens[i]
        while frontier:
            nxt = []
            for pt in frontier:
                u = trans[pt][0]
                for s in gens:
                    img = s[pt]
                    if img not in trans:
                        v = tuple(map(s.__getitem__, u))
                        trans[img] = (v, _inv(v))
                        nxt.append(img)
            frontier = nxt
        self.trans[i] = trans


def schreier_sims(
    gens: Iterable[Sequence[int]],
    degree: int,
    base: Sequence[int] = (),
    target_order: int | None = None,
) -> StabChain:
    """Deterministic Schreier-Sims.

    When ``target_order`` is given the construction stops as soon as the
    basic orbit lengths multiply to it; the chain is then complete because
    the product of basic orbit lengths never exceeds the group order.
    """
    chain = StabChain(degree)
    gens = [tuple(g) for g in gens if not _is_id(g)]
    chain.base = list(base)
    for g in gens:
        if all(g[b] == b for b in chain.base):
            chain.base.append(_first_moved(g))
    k = len(chain.base)
    chain.sgens = [[g for g in gens if all(g[b] == b for b in chain.base[:i])] for i in range(k)]
    chain.trans = [{} for _ in range(k)]
    for i in range(k):
        chain._orbit(i)
    if target_order is not None and chain.order() == target_order:
        return chain
    i = k - 1
    while i >= 0:
        added = False
        trans_i = chain.trans[i]
        for beta, (u_beta, _) in list(trans_i.items()):
            for s in chain.sgens[i]:
                gamma = s[beta]
                us = tuple(map(s.__getitem__, u_beta))
                sg = tuple(map(trans_i[gamma][1].__getitem__, us))
                if _is_id(sg):
                    continue
                h, j = chain.sift(sg, i + 1)
                if j == len(chain.base) and _is_id(h):
                    continue
                if j == len(chain.base):
                    chain.base.append(_first_moved(h))
                    chain.sgens.append([])
                    chain.trans.append({})
                for level in range(i + 1, j + 1):
                    chain.sgens[level].append(h)
                    chain._orbit(level)
                if target_order is not None and chain.order() == target_order:
                    return chain
                i = j
                added = True
                break
            if added:
                break
        if not added:
            i -= 1
    return chain


# -- groups -------------------------------------------------------------------

class PermGroup:
    """A permutation group given by generators, with a lazily built BSGS."""

    def __init__(
        self,
        generators: Iterable[Sequence[int]],
        degree: int | None = None,
        *,
        order: int | None = None,
        name: str | None = None,
    ):
        gens = [Permutation(g) for g in generators]
        if degree is None:
            if not gens:
                raise PreconditionError("degree required for a group without generators")
            degree = len(gens[0])
        for g in gens:
            if len(g) != degree:
                raise PreconditionError("generators must share one degree")
            if sorted(g) != list(range(degree)):
                raise PreconditionError(f"{tuple(g)} is not a permutation")
        self.degree = degree
        self.generators: tuple[Permutation, ...] = tuple(gens)
        self.name = name
        self._known_order = order
        self._chain: StabChain | None = None
        self._elements: ElementIndex | None = None

    def __repr__(self) -> str:
        label = self.name or f"<{len(self.generators)} generators>"
        return f"PermGroup({label}, degree={self.degree})"

    @property
    def chain(self) -> StabChain:
        if self._chain is None:
            self._chain = schreier_sims(self.generators, self.degree, target_order=self._known_order)
            if self._known_order is not None and self._chain.order() != self._known_order:
                raise AssertionError(
                    f"{self.name}: BSGS order {self._chain.order()} != expected {self._known_order}")
        return self._chain

    def order(self) -> int:
        return self.chain.order()

    def verified_order(self) -> int:
        """Order from a full Schreier-Sims run that ignores any expected order.

        An expected order only lets the construction stop early; this recomputes
        from scratch so that a wrong generating set cannot go unnoticed.
        """
        return schreier_sims(self.generators, self.degree).order()

    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def contains(self, g: Sequence[int]) -> bool:
        if len(g) != self.degree:
            return False
        return self.chain.contains(g)

    __contains__ = contains

    def is_abelian(self) -> bool:
        gs = self.generators
        return all(commutes(a, b) for i, a in enumerate(gs) for b in gs[i + 1:])

    def orbits(self) -> list[list[int]]:
        return _orbits(self.generators, self.degree)

    def is_transitive(self) -> bool:
        return len(self.orbits()) == 1

    def random_element(self, rng: random.Random) -> Permutation:
        g = tuple(range(self.degree))
        for t in reversed(self.chain.trans):
            u = t[rng.choice(list(t))][0]
            g = _mul(g, u)
        return Permutation(g)

    def elements(self, cap: int = MAX_ENUM_ORDER) -> "ElementIndex":
        if self._elements is None:
            if self.order() > cap:
                raise CapExceeded(f"|G| = {self.order()} exceeds the enumeration cap {cap}")
            self._elements = ElementIndex(self)
        return self._elements

    def subgroup(self, gens: Iterable[Sequence[int]], order: int | None = None) -> "PermGroup":
        return PermGroup(gens, self.degree, order=order)


def _orbits(gens: Sequence[Sequence[int]], degree: int) -> list[list[int]]:
    parent = list(range(degree))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for g in gens:
        for i, x in enumerate(g):
            ri, rx = find(i), find(x)
            if ri != rx:
                parent[max(ri, rx)] = min(ri, rx)
    groups: dict[int, list[int]] = {}
    for i in range(degree):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def bsgs_build(gens: Iterable[Sequence[int]], degree: int | None = None) -> PermGroup:
    G = PermGroup(gens, degree)
    G.chain  # noqa: B018 - force construction
    return G


def group_order(G: PermGroup) -> int:
    return G.order()


def naive_closure(gens: Sequence[Sequence[int]], degree: int, cap: int = NAIVE_CLOSURE_CAP) -> set[tuple[int, ...]]:
    """All elements of ``<gens>`` by breadth-first multiplication."""
    ident = tuple(range(degree))
    seen = {ident}
    frontier = [ident]
    gens = [tuple(g) for g in gens]
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                hg = _mul(h, g)
                if hg not in seen:
                    seen.add(hg)
                    nxt.append(hg)
                    if len(seen) > cap:
                        raise CapExceeded("naive closure exceeded its cap")
        frontier = nxt
    return seen


def generated_order(gens: Sequence[Sequence[int]], degree: int, target: int | None = None) -> int:
    return schreier_sims(gens, degree, target_order=target).order()


def generates_group(G: PermGroup, x: Sequence[int], y: Sequence[int], check: bool = True) -> bool:
    """Whether ``<x, y> == G``."""
    if check and not (G.contains(x) and G.contains(y)):
        raise PreconditionError("elements must lie in G")
    target = G.order()
    if target == 1:
        return True
    if G.is_transitive() and len(_orbits((x, y), G.degree)) > 1:
        return False
    return schreier_sims((x, y), G.degree, base=G.chain.base, target_order=target).order() == target


def normal_closure(G: PermGroup, gens: Iterable[Sequence[int]]) -> PermGroup:
    """Smallest normal subgroup of G containing ``gens``."""
    n = G.degree
    found = [Permutation(g) for g in gens if not _is_id(g)]
    chain = schreier_sims(found, n)
    queue = list(found)
    while queue:
        h = queue.pop()
        for g in G.generators:
            c = Permutation(_conj(h, g))
            if not chain.contains(c):
                found.append(c)
                queue.append(c)
                chain = schreier_sims(found, n)
    return PermGroup(found or [Permutation.identity(n)], n, order=chain.order())


def derived_subgroup(G: PermGroup) -> PermGroup:
    gens = G.generators
    return normal_closure(G, [commutator(a, b) for i, a in enumerate(gens) for b in gens[i + 1:]])


def is_soluble(G: PermGroup) -> bool:
    H = G
    while H.order() > 1:
        D = derived_subgroup(H)
        if D.order() == H.order():
            return False
        H = D
    return True


# -- element enumeration ----------------------------------------------------

class ElementIndex:
    """Every element of a group as a row of an array, with vectorised ranking.

    Row ``r`` is the element whose transversal coordinates, read as a
    mixed-radix number (first base point least significant), equal ``r``.
    """

    CHUNK = 1 << 16

    def __init__(self, G: PermGroup):
        self.group = G
        chain = G.chain
        n = G.degree
        self.degree = n
        self.dtype = np.uint8 if n <= 256 else np.uint16
        self.base = list(chain.base)
        self._levels = []
        for i, t in enumerate(chain.trans):
            pts = list(t)
            U = np.array([t[p][0] for p in pts], dtype=np.int64).reshape(len(pts), n)
            Ui = np.array([t[p][1] for p in pts], dtype=np.int64).reshape(len(pts), n)
            pos = np.full(n, -1, dtype=np.int64)
            pos[pts] = np.arange(len(pts))
            self._levels.append((self.base[i], U, Ui, pos))
        sizes = [lv[1].shape[0] for lv in self._levels]
        self.radix = np.cumprod([1] + sizes[:-1]).astype(np.int64) if sizes else np.zeros(0, np.int64)
        self.size = int(math.prod(sizes))
        self.perms = self._enumerate()

    def _enumerate(self) -> np.ndarray:
        n = self.degree
        E = np.arange(n, dtype=np.int64)[None, :]
        for _, U, _, _ in reversed(self._levels):
            # rows h * u for h in E (slow index) and u in U (fast index)
            prod = U[:, E]  # [j, m, i] = U[j, E[m, i]]
            E = prod.transpose(1, 0, 2).reshape(-1, n)
        return E.astype(self.dtype)

    def __len__(self) -> int:
        return self.size

    def rank(self, rows: np.ndarray) -> np.ndarray:
        """Indices of the given permutations (rows); -1 for non-members."""
        rows = np.asarray(rows)
        single = rows.ndim == 1
        rows = rows.reshape(-1, self.degree)
        out = np.empty(rows.shape[0], dtype=np.int64)
        for s in range(0, rows.shape[0], self.CHUNK):
            E = rows[s:s + self.CHUNK].astype(np.int64)
            idx = np.zeros(E.shape[0], dtype=np.int64)
            bad = np.zeros(E.shape[0], dtype=bool)
            for (b, _, Ui, pos), r in zip(self._levels, self.radix):
                j = pos[E[:, b]]
                bad |= j < 0
                j = np.where(j < 0, 0, j)
                idx += j * r
                E = Ui[j[:, None], E]
            bad |= (E != np.arange(self.degree)).any(axis=1)
            idx[bad] = -1
            out[s:s + self.CHUNK] = idx
        return out[0] if single else out

    def index(self, g: Sequence[int]) -> int:
        return int(self.rank(np.asarray(g)))

    def perm(self, i: int) -> Permutation:
        return Permutation(int(v) for v in self.perms[i])

    @cached_property
    def identity_index(self) -> int:
        return self.index(tuple(range(self.degree)))

    @cached_property
    def lexpos(self) -> np.ndarray:
        """Position of each element in the lexicographic order of image vectors."""
        order = np.lexsort(self.perms.T[::-1])
        pos = np.empty(self.size, dtype=np.int64)
        pos[order] = np.arange(self.size)
        return pos

    @cached_property
    def lex_order(self) -> np.ndarray:
        return np.lexsort(self.perms.T[::-1])

    @cached_property
    def orders(self) -> np.ndarray:
        n = self.degree
        out = np.ones(self.size, dtype=np.int64)
        ident = np.arange(n)
        for s in range(0, self.size, self.CHUNK):
            E = self.perms[s:s + self.CHUNK].astype(np.int64)
            cyc = np.zeros_like(E)
            cur = E.copy()
            rows = np.arange(E.shape[0])[:, None]
            for t in range(1, n + 1):
                hit = (cur == ident) & (cyc == 0)
                cyc[hit] = t
                if (cyc > 0).all():
                    break
                cur = E[rows, cur]
            out[s:s + self.CHUNK] = np.lcm.reduce(cyc, axis=1)
        return out

    def multiply(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Indices of ``a[i] * b[i]`` (apply a first)."""
        A = self.perms[np.asarray(a)].astype(np.int64)
        B = self.perms[np.asarray(b)].astype(np.int64)
        return self.rank(np.take_along_axis(B, A, axis=1))

    def right_multiply(self, idx: np.ndarray, g: Sequence[int]) -> np.ndarray:
        """Indices of ``e * g`` for the elements ``e`` at ``idx``."""
        g = np.asarray(g, dtype=np.int64)
        return self.rank(g[self.perms[np.asarray(idx)].astype(np.int64)])

    def conjugate(self, idx: np.ndarray, g: Sequence[int]) -> np.ndarray:
        """Indices of ``e ** g = g^-1 e g`` for the elements at ``idx``."""
        g = np.asarray(g, dtype=np.int64)
        gi = np.empty_like(g)
        gi[g] = np.arange(len(g))
        rows = self.perms[np.asarray(idx)].astype(np.int64)
        return self.rank(g[rows[:, gi]])

    def power_index(self, idx: np.ndarray, k: int) -> np.ndarray:
        """Indices of the k-th powers of the elements at ``idx``."""
        idx = np.asarray(idx)
        E = self.perms[idx].astype(np.int64)
        n = self.degree
        result = np.broadcast_to(np.arange(n), E.shape).copy()
        base = E
        rows = np.arange(E.shape[0])[:, None]
        while k:
            if k & 1:
                result = base[rows, result]
            base = base[rows, base]
            k >>= 1
        return self.rank(result)

    def centralizer_mask(self, x: Sequence[int]) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        mask = np.empty(self.size, dtype=bool)
        for s in range(0, self.size, self.CHUNK):
            E = self.perms[s:s + self.CHUNK].astype(np.int64)
            mask[s:s + self.CHUNK] = (x[E] == E[:, x]).all(axis=1)
        return mask

    def subgroup_from_mask(self, mask: np.ndarray, seed: int = 0) -> PermGroup:
        """Generators for the subgroup whose elements are flagged by ``mask``."""
        members = np.flatnonzero(mask)
        target = members.size
        rng = random.Random(seed)
        gens: list[Permutation] = []
        order = 1
        candidates = members[np.argsort(self.lexpos[members])]
        while order < target:
            g = self.perm(int(candidates[rng.randrange(len(candidates))]))
            new_order = generated_order(gens + [g], self.degree)
            if new_order > order:
                gens.append(g)
                order = new_order
        return PermGroup(gens, self.degree, order=target)


# -- conjugacy ------------------------------------------------------------------

@dataclass
class ClassData:
    """Conjugacy classes of a group with full element enumeration."""

    group: PermGroup
    reps: list[Permutation]
    rep_index: np.ndarray
    sizes: list[int]
    centralizer_orders: list[int]
    element_class: np.ndarray

    def __len__(self) -> int:
        return len(self.reps)

    def power_map(self, k: int) -> list[int]:
        """Class of ``rep**k`` for each class."""
        el = self.group.elements()
        return [int(c) for c in self.element_class[el.power_index(self.rep_index, k)]]

    def class_of(self, g: Sequence[int]) -> int:
        return int(self.element_class[self.group.elements().index(g)])


def _components(n: int, maps: Sequence[np.ndarray]) -> np.ndarray:
    if not maps:
        return np.arange(n)
    src = np.concatenate([np.arange(n)] * len(maps))
    dst = np.concatenate(maps)
    graph = coo_matrix((np.ones(src.size, dtype=np.int8), (src, dst)), shape=(n, n))
    _, labels = connected_components(graph, directed=True, connection="weak")
    return labels


def conjugation_maps(G: PermGroup) -> list[np.ndarray]:
    el = G.elements()
    allidx = np.arange(el.size)
    return [el.conjugate(allidx, g) for g in G.generators]


def conjugacy_classes(G: PermGroup) -> ClassData:
    el = G.elements()
    labels = _components(el.size, conjugation_maps(G))
    lex = el.lexpos
    # relabel classes by (order of rep, lex position of rep)
    nlab = int(labels.max()) + 1 if labels.size else 0
    best = np.full(nlab, np.iinfo(np.int64).max)
    np.minimum.at(best, labels, lex)
    rep_idx = el.lex_order[best]
    sizes = np.bincount(labels, minlength=nlab)
    key = sorted(range(nlab), key=lambda c: (int(el.orders[rep_idx[c]]), int(best[c])))
    remap = np.empty(nlab, dtype=np.int64)
    remap[key] = np.arange(nlab)
    order = G.order()
    return ClassData(
        group=G,
        reps=[el.perm(int(rep_idx[c])) for c in key],
        rep_index=np.array([rep_idx[c] for c in key], dtype=np.int64),
        sizes=[int(sizes[c]) for c in key],
        centralizer_orders=[order // int(sizes[c]) for c in key],
        element_class=remap[labels],
    )


def centralizer(G: PermGroup, x: Sequence[int]) -> PermGroup:
    el = G.elements()
    if el.index(x) < 0:
        raise PreconditionError("element not in G")
    return el.subgroup_from_mask(el.centralizer_mask(x))


def center(G: PermGroup) -> PermGroup:
    el = G.elements()
    mask = np.ones(el.size, dtype=bool)
    for g in G.generators:
        mask &= el.centralizer_mask(g)
    return el.subgroup_from_mask(mask)


def center_mask(G: PermGroup) -> np.ndarray:
    el = G.elements()
    mask = np.ones(el.size, dtype=bool)
    for g in G.generators:
        mask &= el.centralizer_mask(g)
    return mask


# -- derangements (natural action) --------------------------------------------

def derangement_data(G: PermGroup, x: Sequence[int]) -> tuple[bool, list[list[int]]]:
    """Whether ``x`` fixes no point, and the orbits of ``<x>``."""
    px = Permutation(x)
    orbits = [list(c) for c in px.cycles(include_fixed=True)]
    return all(len(o) > 1 for o in orbits), orbits


def derangement_neighbor(G: PermGroup, x: Sequence[int]) -> Permutation:
    """An element adjacent to the derangement ``x`` in the non-commuting,
    non-generating graph of an alternating group.

    Take 2-subsets ``{a1, a2}`` and ``{b1, b2}`` of two distinct orbits of
    ``<x>``, the first orbit being a longest one; return ``(a1 a2)(b1 b2)``
    when ``<x>`` has exactly two orbits and ``(a1 a2 b1)`` otherwise.
    """
    n = G.degree
    is_der, orbits = derangement_data(G, x)
    if not is_der:
        raise PreconditionError("x has a fixed point")
    if len(orbits) < 2:
        raise PreconditionError("<x> is transitive")
    orbits = sorted(orbits, key=lambda o: (-len(o), o[0]))
    a, b = orbits[0], orbits[1]
    if len(orbits) == 2:
        g = Permutation.from_cycles([(a[0], a[1]), (b[0], b[1])], n)
    else:
        g = Permutation.from_cycles([(a[0], a[1], b[0])], n)
    if commutes(x, g):
        raise AssertionError("constructed element commutes with x")
    if len(_orbits((x, g), n)) == 1:
        raise AssertionError("constructed pair is transitive")
    return g
