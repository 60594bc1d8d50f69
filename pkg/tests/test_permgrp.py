import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ncgraph.errors import CapExceeded, DescriptorError, PreconditionError, UnsupportedFamily
from ncgraph.families import group_from_descriptor, parse_generator_text
from ncgraph.permgrp import (
    Permutation,
    PermGroup,
    center,
    centralizer,
    commutator,
    conjugacy_classes,
    derangement_neighbor,
    derived_subgroup,
    generates_group,
    is_soluble,
    naive_closure,
)


def perms(n):
    return st.permutations(list(range(n))).map(Permutation)


@settings(max_examples=100, deadline=None)
@given(perms(7), perms(7), perms(7))
def test_permutation_group_laws(a, b, c):
    e = Permutation.identity(7)
    assert (a * b) * c == a * (b * c)
    assert a * ~a == e and ~a * a == e
    assert (a * b)[3] == b[a[3]]
    assert (a ** a.order()).is_identity()
    assert a ** -1 == ~a
    assert (a * b).sign() == a.sign() * b.sign()


def test_parse_and_print_cycles():
    p = Permutation.parse("(0 1 2)(3,4)", 6)
    assert p == Permutation((1, 2, 0, 4, 3, 5))
    assert Permutation.parse(p.cycle_str(), 6) == p
    assert Permutation.parse("()", 3).is_identity()
    with pytest.raises(PreconditionError):
        Permutation.parse("(0 1)(1 2)", 3)
    with pytest.raises(PreconditionError):
        Permutation.parse("0 1", 3)


@settings(max_examples=40, deadline=None)
@given(st.lists(perms(6), min_size=1, max_size=3))
def test_bsgs_order_matches_naive_closure(gens):
    G = PermGroup(gens, 6)
    closure = naive_closure(gens, 6)
    assert G.order() == len(closure)
    for g in random.Random(0).sample(sorted(closure), min(5, len(closure))):
        assert G.contains(g)


def test_bsgs_membership_rejects_outsider():
    G = group_from_descriptor("alt:6")
    assert not G.contains(Permutation.from_cycles([(0, 1)], 6))
    assert G.contains(Permutation.from_cycles([(0, 1, 2)], 6))


@pytest.mark.parametrize("desc,order", [
    ("alt:5", 60), ("alt:7", 2520), ("sym:5", 120), ("psl:2:7", 168), ("psl:2:8", 504),
    ("psl:2:11", 660), ("psl:3:3", 5616), ("psl:3:4", 20160), ("psl:4:2", 20160),
    ("pgl:2:7", 336), ("psu:3:3", 6048), ("psu:3:4", 62400), ("psu:4:2", 25920),
    ("mathieu:11", 7920), ("mathieu:12", 95040),
])
def test_family_orders_from_scratch(desc, order):
    # orders from the standard formulas for these families
    assert group_from_descriptor(desc).verified_order() == order


def _naive_classes(G):
    els = [Permutation(g) for g in naive_closure(G.generators, G.degree)]
    seen, sizes = set(), []
    for x in els:
        if x in seen:
            continue
        cls = {~g * x * g for g in els}
        seen |= cls
        sizes.append(len(cls))
    return sorted(sizes)


@pytest.mark.parametrize("desc", ["sym:4", "alt:5", "sym:5", "psl:2:7"])
def test_classes_match_naive_conjugation(desc):
    G = group_from_descriptor(desc)
    cd = conjugacy_classes(G)
    assert sorted(cd.sizes) == _naive_classes(G)
    assert sum(cd.sizes) == G.order()
    for rep, size, cent in zip(cd.reps, cd.sizes, cd.centralizer_orders):
        assert size * cent == G.order()
        assert centralizer(G, rep).order() == cent


@pytest.mark.parametrize("desc", ["alt:6", "psu:3:3", "mathieu:11", "pgl:2:7"])
def test_class_equation(desc):
    G = group_from_descriptor(desc)
    cd = conjugacy_classes(G)
    assert sum(cd.sizes) == G.order()
    assert all(G.order() % s == 0 for s in cd.sizes)
    assert cd.reps[0].is_identity()


def test_center_and_solubility():
    assert center(group_from_descriptor("sym:3")).order() == 1
    D8 = PermGroup([Permutation.from_cycles([(0, 1, 2, 3)], 4), Permutation.from_cycles([(0, 2)], 4)])
    assert center(D8).order() == 2
    assert is_soluble(group_from_descriptor("sym:4"))
    assert not is_soluble(group_from_descriptor("alt:5"))
    assert derived_subgroup(group_from_descriptor("sym:5")).order() == 60


def test_generates_group():
    G = group_from_descriptor("sym:5")
    assert generates_group(G, Permutation.from_cycles([(0, 1)], 5), Permutation.from_cycles([(0, 1, 2, 3, 4)], 5))
    assert not generates_group(G, Permutation.from_cycles([(0, 1)], 5), Permutation.from_cycles([(2, 3, 4)], 5))


def test_commutator_is_trivial_iff_commuting():
    a = Permutation.from_cycles([(0, 1, 2)], 5)
    b = Permutation.from_cycles([(3, 4)], 5)
    c = Permutation.from_cycles([(1, 3)], 5)
    assert commutator(a, b).is_identity()
    assert not commutator(a, c).is_identity()


@pytest.mark.parametrize("n", [6, 7, 8])
def test_derangement_neighbour(n):
    # A_5 has no derangement with more than one cycle
    G = group_from_descriptor(f"alt:{n}")
    rng = random.Random(n)
    tried = 0
    for _ in range(5000):
        x = G.random_element(rng)
        if x.fixed_points() or len(x.cycles()) < 2:
            continue
        tried += 1
        g = derangement_neighbor(G, x)
        assert G.contains(g)
        assert not x.commutes_with(g)
        assert PermGroup([x, g], n).order() < G.order()
    assert tried > 0


def test_element_index_round_trip():
    G = group_from_descriptor("psl:2:7")
    el = G.elements()
    assert len(el) == 168
    idx = np.arange(len(el))
    assert (el.rank(el.perms) == idx).all()
    g = G.generators[0]
    conj = el.conjugate(idx, g)
    assert sorted(conj) == list(idx)
    i = 17
    assert el.perm(int(conj[i])) == ~g * el.perm(i) * g
    assert el.orders[el.identity_index] == 1
    assert all(el.perm(int(k)).order() == el.orders[k] for k in idx[:40])


def test_enumeration_cap():
    with pytest.raises(CapExceeded):
        group_from_descriptor("alt:9").elements(cap=1000)


def test_descriptors():
    assert group_from_descriptor("a:5").order() == 60
    with pytest.raises(DescriptorError):
        group_from_descriptor("psl")
    with pytest.raises(UnsupportedFamily):
        group_from_descriptor("foo:1")
    with pytest.raises(UnsupportedFamily):
        group_from_descriptor("psl:2:6")


def test_generator_file_text(tmp_path):
    G = parse_generator_text("degree 5\n(0 1 2 3 4)\n(0 1)  # transposition\n")
    assert G.order() == math.factorial(5)
    with pytest.raises(DescriptorError):
        parse_generator_text("5\n(0 1)\n")
    path = tmp_path / "s4.txt"
    path.write_text("degree 4\n(0 1 2 3)\n(0 1)\n")
    assert group_from_descriptor(f"file:{path}").order() == 24
