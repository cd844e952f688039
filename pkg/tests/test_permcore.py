from __future__ import annotations

import os
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.combinatorics import Permutation as SymPerm
from sympy.combinatorics import PermutationGroup as SymGroup

from branching.errors import BudgetExceeded, DomainError, FormatError
from branching.grouplib import GroupSpec, build_group, catalog, closed_form_order
from branching.permcore import (
    Permutation,
    PermGroup,
    abelian_invariants,
    centralizer,
    conjugacy_classes,
    element_order,
    generates,
    group_order,
    perm_from_cycle_string,
    perm_from_image_row,
)

FULL = os.environ.get("BRANCHING_FULL") == "1"


# -- independent helpers: plain 1-based image tuples ------------------------

def compose(p, q):
    """Apply p, then q."""
    return tuple(q[x - 1] for x in p)


def closure(gens):
    ident = tuple(range(1, len(gens[0]) + 1))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = compose(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def inverse(p):
    r = [0] * len(p)
    for i, x in enumerate(p, start=1):
        r[x - 1] = i
    return tuple(r)


def brute_classes(elements):
    remaining = set(elements)
    classes = []
    while remaining:
        x = min(remaining)
        cls = {compose(compose(inverse(h), x), h) for h in elements}
        classes.append(cls)
        remaining -= cls
    return classes


def sym(G):
    return SymGroup([SymPerm([x - 1 for x in g.images]) for g in G.generators])


perms = st.integers(1, 30).flatmap(lambda n: st.permutations(list(range(1, n + 1))))


# -- perm_from_image_row ----------------------------------------------------

def test_image_row_has_expected_cycles():
    p = perm_from_image_row("1 6 4 3 9 2 8 7 5", 9)
    assert p.cycles() == [(2, 6), (3, 4), (5, 9), (7, 8)]
    assert p.cycle_string(" ") == "(2 6)(3 4)(5 9)(7 8)"


def test_image_row_identity_and_errors():
    assert perm_from_image_row("1 2 3", 3).is_identity()
    with pytest.raises(FormatError):
        perm_from_image_row("2 2 3", 3)
    with pytest.raises(FormatError):
        perm_from_image_row("1 2 3", 4)
    with pytest.raises(FormatError):
        perm_from_image_row("1 x 3")


@settings(max_examples=1000, deadline=None)
@given(perms)
def test_image_row_round_trip(images):
    p = Permutation(images)
    assert perm_from_image_row(p.image_row(), p.degree) == p


@settings(max_examples=200, deadline=None)
@given(perms)
def test_cycle_string_round_trip(images):
    p = Permutation(images)
    assert perm_from_cycle_string(p.cycle_string(), p.degree) == p


def test_cycle_string_keeps_omitted_fixed_points():
    p = perm_from_cycle_string("(2,3)", 9)
    assert p.images == (1, 3, 2, 4, 5, 6, 7, 8, 9)
    assert perm_from_cycle_string("()", 4).is_identity()
    with pytest.raises(FormatError):
        perm_from_cycle_string("(1,2")


# -- element_order ----------------------------------------------------------

def test_element_orders_of_hurwitz_entries(hurwitz_vector):
    assert [element_order(p) for p in hurwitz_vector] == [2, 3, 7]
    assert hurwitz_vector[2].cycles() == [(1, 5, 6, 9, 3, 8, 4)]
    assert element_order(Permutation.identity(5)) == 1


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 12).flatmap(
    lambda n: st.tuples(st.permutations(list(range(1, n + 1))), st.permutations(list(range(1, n + 1))))))
def test_order_is_conjugation_invariant(pair):
    p, q = Permutation(pair[0]), Permutation(pair[1])
    assert element_order(p * q * p.inverse()) == element_order(q)
    # order is the least k with q^k = 1
    k = element_order(q)
    assert (q ** k).is_identity()
    assert all(not (q ** j).is_identity() for j in range(1, k))


def test_product_convention_satisfies_relation(hurwitz_vector):
    a, b, c = hurwitz_vector
    assert (a * b * c).is_identity()
    assert a * b == Permutation(compose(a.images, b.images))


# -- group_order ------------------------------------------------------------

def test_group_order_examples(psl28):
    assert group_order(psl28) == 504
    assert group_order(PermGroup([Permutation.identity(4)])) == 1
    s3 = PermGroup([perm_from_cycle_string("(1,2)", 3), perm_from_cycle_string("(1,2,3)", 3)])
    assert group_order(s3) == 6


def test_mixed_degrees_rejected():
    with pytest.raises(DomainError):
        PermGroup([Permutation.identity(3), Permutation.identity(4)])


def _order(spec):
    n = closed_form_order(spec)
    return build_group(spec).order if n is None else n


def _small_catalog():
    specs = catalog(2000)
    if FULL:
        return specs
    rng = random.Random(20240601)
    small = [s for s in specs if _order(s) <= 120]
    rest = [s for s in specs if s not in small]
    return small + rng.sample(rest, 40)


@pytest.mark.parametrize("spec", _small_catalog(), ids=lambda s: f"{s.family}{list(s.params)}")
def test_group_order_matches_closure(spec):
    G = build_group(spec)
    assert G.order == len(closure([g.images for g in G.generators]))


@pytest.mark.parametrize("spec", [s for s in catalog(60)], ids=lambda s: f"{s.family}{list(s.params)}")
def test_membership_agrees_with_closure(spec):
    G = build_group(spec)
    elems = closure([g.images for g in G.generators])
    rng = random.Random(7)
    for _ in range(30):
        img = list(range(1, G.degree + 1))
        rng.shuffle(img)
        assert (Permutation(img) in G) == (tuple(img) in elems)
    for e in list(elems)[:30]:
        assert Permutation(e) in G


# -- conjugacy classes ------------------------------------------------------

def test_psl28_classes_against_brute_force(psl28):
    classes = conjugacy_classes(psl28)
    assert sorted(c.element_order for c in classes) == [1, 2, 3, 7, 7, 7, 9, 9, 9]
    elements = closure([g.images for g in psl28.generators])
    brute = brute_classes(list(elements))
    assert sorted(len(c) for c in brute) == sorted(c.size for c in classes)
    for c in classes:
        members = {p.images for p in psl28.class_members(c.index)}
        assert members in brute
        assert min(members) == c.representative.images
    assert [c.index for c in classes] == list(range(1, 10))
    assert len([c for c in classes if c.element_order == 7]) == 3


def test_class_ordering_is_canonical(psl28):
    keys = [(c.element_order, c.size, c.representative.images) for c in conjugacy_classes(psl28)]
    assert keys == sorted(keys)


def test_trivial_group_has_one_class():
    classes = conjugacy_classes(PermGroup([Permutation.identity(3)]))
    assert len(classes) == 1 and classes[0].size == 1 and classes[0].element_order == 1


def _class_catalog():
    specs = catalog(5000)
    if FULL:
        return specs
    rng = random.Random(99)
    small = [s for s in specs if _order(s) <= 200]
    big_nonabelian = [s for s in specs if s.family in ("symmetric", "alternating", "psl2", "explicit")
                      and s not in small]
    rest = [s for s in specs if s not in small and s not in big_nonabelian]
    return small + big_nonabelian + rng.sample(rest, 15)


@pytest.mark.parametrize("spec", _class_catalog(), ids=lambda s: f"{s.family}{list(s.params)}")
def test_class_equation(spec):
    G = build_group(spec)
    classes = conjugacy_classes(G)
    assert sum(c.size for c in classes) == G.order
    for c in classes:
        assert G.order % c.size == 0


@pytest.mark.parametrize("spec", [GroupSpec("symmetric", (5,)), GroupSpec("dihedral", (7,)),
                                  GroupSpec("psl2", (7,)), GroupSpec("abelian", (2, 6))],
                         ids=str)
def test_members_share_order_and_are_conjugate_to_representative(spec):
    G = build_group(spec)
    elems = G.elements()
    rng = random.Random(3)
    for g in rng.sample(elems, min(25, len(elems))):
        c = G.conjugacy_classes()[G.class_index(g) - 1]
        assert g.order() == c.element_order
        assert any(c.representative.conjugate(h) == g for h in elems)


def test_sympy_agrees_on_class_count():
    for spec in [GroupSpec("symmetric", (5,)), GroupSpec("psl2", (11,)), GroupSpec("dihedral", (9,))]:
        G = build_group(spec)
        assert len(G.conjugacy_classes()) == len(list(sym(G).conjugacy_classes()))


def test_budget_is_enforced():
    G = build_group(GroupSpec("symmetric", (8,)))
    small = PermGroup(G.generators, budget=1000)
    with pytest.raises(BudgetExceeded):
        small.conjugacy_classes()
    assert small.order == 40320


# -- centralizer ------------------------------------------------------------

def test_centralizer_examples(psl28):
    assert centralizer(psl28, psl28.identity()).order == 504
    s3 = PermGroup([perm_from_cycle_string("(1,2)", 3), perm_from_cycle_string("(1,2,3)", 3)])
    assert centralizer(s3, perm_from_cycle_string("(1,2)", 3)).order == 2
    inv = [c for c in psl28.conjugacy_classes() if c.element_order == 2][0]
    assert inv.size == 63
    assert centralizer(psl28, inv.representative).order * 63 == 504


def test_centralizer_orbit_stabilizer(psl28):
    for c in psl28.conjugacy_classes():
        C = centralizer(psl28, c.representative)
        assert C.order * c.size == psl28.order
        assert all(g * c.representative == c.representative * g for g in C.generators)


def test_centralizer_rejects_foreign_element(psl28):
    with pytest.raises(DomainError):
        centralizer(psl28, perm_from_cycle_string("(1,2)", 9))


# -- abelian invariants -----------------------------------------------------

def test_abelian_invariant_examples(psl28):
    assert abelian_invariants(build_group(GroupSpec("cyclic", (6,)))) == [6]
    assert abelian_invariants(psl28) == []
    klein = PermGroup([perm_from_cycle_string("(1,2)", 4), perm_from_cycle_string("(3,4)", 4)])
    assert abelian_invariants(klein) == [2, 2]


def test_psl28_is_perfect_by_enumeration(psl28):
    elems = list(closure([g.images for g in psl28.generators]))
    rng = random.Random(1)
    comms = set()
    for _ in range(200):
        a, b = rng.sample(elems, 2)
        comms.add(compose(compose(inverse(a), inverse(b)), compose(a, b)))
    assert len(closure(sorted(comms))) == 504


@pytest.mark.parametrize("spec", catalog(64), ids=lambda s: f"{s.family}{list(s.params)}")
def test_abelian_invariants_against_sympy(spec):
    G = build_group(spec)
    ours = abelian_invariants(G)
    theirs = sorted(x for x in sym(G).abelian_invariants() if x > 1)
    # both are invariants of G/G'; compare as multisets of prime-power parts
    assert _primary(ours) == _primary(theirs)


def _primary(factors):
    out = []
    for d in factors:
        p = 2
        while d > 1:
            if d % p == 0:
                q = 1
                while d % p == 0:
                    d //= p
                    q *= p
                out.append(q)
            p += 1
    return sorted(out)


# -- generates ---------------------------------------------------------------

def test_generates_examples(psl28, hurwitz_vector):
    assert generates(psl28, hurwitz_vector)
    assert not generates(psl28, [psl28.identity()])
    assert generates(PermGroup([Permutation.identity(2)]), [Permutation.identity(2)])
    s4 = build_group(GroupSpec("symmetric", (4,)))
    klein = [perm_from_cycle_string("(1,2)(3,4)", 4), perm_from_cycle_string("(1,3)(2,4)", 4)]
    assert not generates(s4, klein)
