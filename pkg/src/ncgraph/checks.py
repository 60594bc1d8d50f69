"""Verification suites.  Each suite returns a list of ``CheckReport``s."""

from __future__ import annotations

from typing import Callable, Iterable

import numpy as np

from .errors import CapExceeded
from .factor_oracle import berlekamp_factor, trial_division_factor
from .families import group_from_descriptor, parse_descriptor
from .finfield import gf, binomial, binomial_factors, is_prime, product
from .graphcore import (
    DiameterReport,
    QuotientGraph,
    build_quotient_graph,
    graph_diameter,
    induced_element_diameter,
    nc_adjacent,
)
from .lattice import SubgroupLattice, intersection_graph_diameter
from .matgrp import (
    CheckReport,
    verify_cycle_companion,
    verify_diagonal_triple,
    verify_irreducible_central_power,
    verify_line_stabilizers,
    verify_scalar_obstruction_exhaustive,
    verify_singer,
    verify_unitary_witnesses,
)
from .permgrp import _orbits, derangement_neighbor, is_soluble

DESK_SIMPLE = [
    "alt:5", "alt:6", "alt:7", "alt:8", "alt:9",
    "psl:2:4", "psl:2:5", "psl:2:7", "psl:2:8", "psl:2:9", "psl:2:11", "psl:2:13",
    "psl:3:3", "psl:3:4", "psl:4:2",
    "psu:3:3", "psu:3:4", "psu:4:2",
    "mathieu:11", "mathieu:12",
]
DESK_NONSIMPLE = ["sym:5", "sym:7", "pgl:2:7"]
SMALL_SIMPLE = ["alt:5", "alt:6", "alt:7", "psl:2:7"]
KEEP_GRAPH_VERTICES = 5000


class ReportCache:
    """Diameter reports keyed by (descriptor, graph kind); small graphs are kept too."""

    def __init__(self, threads: int = 1):
        self.threads = threads
        self.reports: dict[tuple[str, str], DiameterReport] = {}
        self.graphs: dict[tuple[str, str], QuotientGraph] = {}
        self.groups: dict[str, object] = {}

    def group(self, desc: str):
        if desc not in self.groups:
            self.groups[desc] = group_from_descriptor(desc)
        return self.groups[desc]

    def graph(self, desc: str, kind: str = "nc") -> QuotientGraph:
        key = (desc, kind)
        if key in self.graphs:
            return self.graphs[key]
        g = build_quotient_graph(self.group(desc), kind)
        if g.n_vertices <= KEEP_GRAPH_VERTICES:
            self.graphs[key] = g
        return g

    def report(self, desc: str, kind: str = "nc") -> DiameterReport:
        key = (desc, kind)
        if key not in self.reports:
            g = self.graph(desc, kind)
            self.reports[key] = graph_diameter(g, g.plan, threads=self.threads)
        return self.reports[key]


def has_odd_order_maximal(desc: str) -> bool:
    """Whether the simple group named by ``desc`` has a maximal subgroup of
    odd order, by the classification of such groups (desk families only)."""
    fam, params = parse_descriptor(desc)
    p = [int(v) for v in params]
    if fam == "alternating":
        n = p[0]
        return is_prime(n) and n % 4 == 3 and n not in (7, 11, 23)
    if fam == "psl":
        n, q = p
        return is_prime(n) and (n, q) != (3, 4) and (n != 2 or q % 4 == 3)
    if fam == "psu":
        n, q = p
        return n > 2 and is_prime(n) and (n, q) not in ((3, 3), (3, 5), (5, 2))
    if fam == "mathieu":
        return p[0] == 23
    raise ValueError(f"{desc} is not a simple group of a supported family")


# -- algebraic suites ------------------------------------------------------------

BINOMIAL_QS = (4, 5, 7, 8, 9, 11, 13, 16, 25)
TRIAL_BUDGET = 200_000


def check_binomial(q: int) -> CheckReport:
    """Binomial factors of ``x^(q-1) - a`` against a generic factoriser, for every nonzero a."""
    spec = gf(q)
    bad = []
    trial_checked = 0
    for a in range(1, q):
        f = binomial(spec, q - 1, a)
        got = binomial_factors(spec, a)
        oracle = berlekamp_factor(f)
        if len(oracle) != len(got) or set(oracle) != got:
            bad.append(a)
            continue
        try:
            trial = trial_division_factor(f, budget=TRIAL_BUDGET)
        except CapExceeded:  # search space too large; the Berlekamp comparison stands
            trial = None
        if trial is not None:
            trial_checked += 1
            if len(trial) != len(oracle) or set(trial) != set(oracle):
                bad.append(a)
                continue
        if product(got, spec) != f:
            bad.append(a)
    return CheckReport("binomial", {"q": q}, not bad, {"failures": bad, "trial_division_cross_checks": trial_checked})


def suite_binomial(qs: Iterable[int] = BINOMIAL_QS) -> list[CheckReport]:
    return [check_binomial(q) for q in qs]


def suite_irreducible_central_power(qs=(3, 4, 5, 7, 9, 11, 13)) -> list[CheckReport]:
    return [verify_irreducible_central_power(q) for q in qs]


def suite_line_stabilizers(pairs=((2, 4), (2, 5), (2, 7), (3, 2), (3, 3), (4, 2))) -> list[CheckReport]:
    return [verify_line_stabilizers(n, q) for n, q in pairs]


def suite_unitary_witnesses(pairs=((3, 2), (3, 3), (3, 4), (4, 2), (5, 2))) -> list[CheckReport]:
    return [verify_unitary_witnesses(n, q) for n, q in pairs]


def suite_scalar_obstruction(pairs=((3, 2),)) -> list[CheckReport]:
    return [verify_scalar_obstruction_exhaustive(n, q) for n, q in pairs]


def suite_diagonal_triple(qs=(2, 3, 4, 5)) -> list[CheckReport]:
    return [verify_diagonal_triple(q) for q in qs]


def suite_cycle_companion(ns=(3, 5, 7), qs=(2, 3, 4)) -> list[CheckReport]:
    return [verify_cycle_companion(n, q) for n in ns for q in qs]


def suite_singer(linear=((2, 3), (2, 4), (2, 5), (3, 2), (3, 3)), unitary=((3, 3), (3, 4))) -> list[CheckReport]:
    return [verify_singer(n, q) for n, q in linear] + [verify_singer(n, q, unitary=True) for n, q in unitary]


# -- graph suites ------------------------------------------------------------------

def suite_derangement(degrees=range(5, 10), cache: ReportCache | None = None) -> list[CheckReport]:
    """Every derangement of A_n with intransitive cyclic subgroup has the
    constructed neighbour in nc(A_n)."""
    cache = cache or ReportCache()
    out = []
    for n in degrees:
        G = cache.group(f"alt:{n}")
        el = G.elements()
        perms = el.perms.astype(np.int64)
        moves_all = (perms != np.arange(n)).all(axis=1)
        checked, bad = 0, []
        for i in np.flatnonzero(moves_all):
            x = el.perm(int(i))
            if len(_orbits([x], n)) < 2:
                continue
            checked += 1
            y = derangement_neighbor(G, x)
            if not nc_adjacent(G, x, y):
                bad.append(x.cycle_str())
        out.append(CheckReport("derangement", {"n": n}, not bad, {"checked": checked, "failures": bad[:10]}))
    return out


def suite_isolated(descs: Iterable[str] = DESK_SIMPLE + DESK_NONSIMPLE, cache: ReportCache | None = None) -> list[CheckReport]:
    """No isolated vertices in nc(G) for insoluble G (soluble inputs pass vacuously)."""
    cache = cache or ReportCache()
    out = []
    for d in descs:
        G = cache.group(d)
        insoluble = not is_soluble(G)
        iso = cache.report(d, "nc").isolated
        out.append(CheckReport("isolated", {"group": d}, not (insoluble and iso),
                               {"insoluble": insoluble, "isolated": len(iso)}))
    return out


def suite_induced_subgraph(descs: Iterable[str] = SMALL_SIMPLE, cache: ReportCache | None = None) -> list[CheckReport]:
    """For each class of maximal subgroups H, the subgraph of nc(G) induced on
    H minus its centre is connected of diameter at most 2."""
    cache = cache or ReportCache()
    out = []
    for d in descs:
        G = cache.group(d)
        graph = cache.graph(d, "nc")
        lat = SubgroupLattice(G)
        found = []
        ok = True
        for cls in lat.maximal_classes():
            H = cls.mask
            members = np.flatnonzero(H)
            mt = lat.mt
            # centre of H: members commuting with every member
            sub = mt[np.ix_(members, members)]
            central = (sub == sub.T).all(axis=1)
            if central.all():
                continue
            diam = induced_element_diameter(graph, members[~central])
            found.append({"order": cls.order, "diameter": diam})
            ok &= diam is not None and diam <= 2
        out.append(CheckReport("induced-subgraph", {"group": d}, ok and bool(found), {"maximal_classes": found}))
    return out


def suite_intersection_bound(descs=("alt:5", "psl:2:7"), cache: ReportCache | None = None) -> list[CheckReport]:
    """diam(nc(G)) and diam of the non-generating graph are at least the
    intersection-graph diameter minus one (trivial centre, connected graphs)."""
    cache = cache or ReportCache()
    out = []
    for d in descs:
        delta = intersection_graph_diameter(cache.group(d))
        nc = cache.report(d, "nc").diameter
        ng = cache.report(d, "nongen").diameter
        ok = None not in (delta.diameter, nc, ng) and nc >= delta.diameter - 1 and ng >= delta.diameter - 1
        out.append(CheckReport("intersection-bound", {"group": d}, ok,
                               {"intersection": delta.diameter, "nc": nc, "nongen": ng,
                                "subgroups": delta.stats["subgroups"]}))
    return out


def suite_alternating_bound(degrees=range(5, 10), cache: ReportCache | None = None) -> list[CheckReport]:
    cache = cache or ReportCache()
    out = []
    for n in degrees:
        bound = 3 if n % 2 == 0 else 4
        diam = cache.report(f"alt:{n}", "nc").diameter
        out.append(CheckReport("alternating-bound", {"n": n}, diam is not None and diam <= bound,
                               {"diameter": diam, "bound": bound}))
    return out


def suite_nc_bound(descs: Iterable[str] = DESK_SIMPLE, cache: ReportCache | None = None) -> list[CheckReport]:
    """nc(G) connected of diameter at most 5, and at most 4 for PSL(n, q)."""
    cache = cache or ReportCache()
    out = []
    for d in descs:
        bound = 4 if d.startswith("psl") else 5
        diam = cache.report(d, "nc").diameter
        out.append(CheckReport("nc-bound", {"group": d}, diam is not None and diam <= bound,
                               {"diameter": diam, "bound": bound}))
    return out


def suite_nongen_bound(descs: Iterable[str] = DESK_SIMPLE, cache: ReportCache | None = None) -> list[CheckReport]:
    """Non-generating graph connected of diameter at most 4, or at most 3 when
    every maximal subgroup has even order."""
    cache = cache or ReportCache()
    out = []
    for d in descs:
        odd = has_odd_order_maximal(d)
        bound = 4 if odd else 3
        ng = cache.report(d, "nongen").diameter
        nc = cache.report(d, "nc").diameter
        ok = ng is not None and ng <= bound and nc is not None and ng <= nc
        out.append(CheckReport("nongen-bound", {"group": d}, ok,
                               {"diameter": ng, "bound": bound, "odd_order_maximal": odd, "nc": nc}))
    return out


GRAPH_SUITES = {
    "derangement": suite_derangement,
    "isolated": suite_isolated,
    "induced-subgraph": suite_induced_subgraph,
    "intersection-bound": suite_intersection_bound,
    "alternating-bound": suite_alternating_bound,
    "nc-bound": suite_nc_bound,
    "nongen-bound": suite_nongen_bound,
}

ALGEBRA_SUITES: dict[str, Callable[[], list[CheckReport]]] = {
    "binomial": suite_binomial,
    "irreducible-central-power": suite_irreducible_central_power,
    "line-stabilizers": suite_line_stabilizers,
    "unitary-witnesses": suite_unitary_witnesses,
    "scalar-obstruction": suite_scalar_obstruction,
    "diagonal-triple": suite_diagonal_triple,
    "cycle-companion": suite_cycle_companion,
    "singer": suite_singer,
}

SUITES = list(ALGEBRA_SUITES) + list(GRAPH_SUITES)


def run_suite(name: str, cache: ReportCache | None = None, **params) -> list[CheckReport]:
    if name in ALGEBRA_SUITES:
        return ALGEBRA_SUITES[name](**params)
    if name in GRAPH_SUITES:
        return GRAPH_SUITES[name](cache=cache or ReportCache(), **params)
    raise KeyError(name)
