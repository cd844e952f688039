from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from branching.errors import DomainError, FormatError
from branching.signatures import (
    Signature,
    admissible_signatures,
    is_large_group,
    mu_measure,
    parse_signature,
    rh_genus,
)

S = Signature.of


def brute_signatures(g, n):
    """Independent enumeration: every period multiset over divisors, bounded by length.

    Each period contributes at least 1/2 to the measure, so the genus formula
    caps the number of periods at 4(g-1)/n + 4.
    """
    if n > 84 * (g - 1):
        return []
    divisors = [d for d in range(2, n + 1) if n % d == 0]
    out = []
    for g0 in range(0, g + 1):
        for r in range(0, 4 * (g - 1) // n + 5):
            for periods in itertools.combinations_with_replacement(divisors, r):
                sig = Signature(g0, periods)
                if mu_measure(sig) > 0 and rh_genus(n, sig) == g:
                    out.append(sig)
    return sorted(out, key=lambda s: (s.orbit_genus, s.r, s.periods))


def test_mu_examples():
    assert mu_measure(S(0, 2, 3, 7)) == Fraction(1, 42)
    assert Fraction(-2) + Fraction(1, 2) + Fraction(2, 3) + Fraction(6, 7) == Fraction(1, 42)
    assert mu_measure(S(1)) == 0
    assert mu_measure(S(0, 2, 3, 8)) == Fraction(1, 24)


def test_rh_genus_examples():
    assert rh_genus(504, S(0, 2, 3, 7)) == 7
    assert rh_genus(12180, S(0, 2, 3, 7)) == 146
    for g in range(0, 6):
        assert rh_genus(1, S(g)) == g


def test_admissible_examples():
    assert admissible_signatures(7, 504) == [S(0, 2, 3, 7)]
    assert admissible_signatures(2, 85) == []
    sigs = admissible_signatures(2, 2)
    assert S(0, 2, 2, 2, 2, 2, 2) in sigs and S(1, 2, 2) in sigs
    assert admissible_signatures(3, 1) == [S(3)]


@pytest.mark.parametrize("g,n", [(2, n) for n in range(1, 85)] + [(3, n) for n in range(1, 49)]
                         + [(4, n) for n in (1, 2, 3, 4, 6, 8, 12, 24, 36, 72, 120, 252)])
def test_admissible_matches_brute_force(g, n):
    assert admissible_signatures(g, n) == brute_signatures(g, n)


def test_is_large_group():
    assert is_large_group(7, 504)
    assert not is_large_group(2, 4)
    assert is_large_group(46, 2160)
    with pytest.raises(DomainError):
        is_large_group(1, 3)


def test_large_group_lemma():
    for g in range(2, 11):
        for n in range(4 * (g - 1) + 1, 84 * (g - 1) + 1):
            for sig in admissible_signatures(g, n):
                assert sig.orbit_genus == 0 and sig.r <= 4


def test_hurwitz_signature_is_extremal():
    # with four or more periods mu >= mu(0;2,2,2,3) = 1/6, so triangles decide the minimum
    assert mu_measure(S(0, 2, 2, 2, 3)) == Fraction(1, 6)
    best = []
    for r in (3,):
        for periods in itertools.combinations_with_replacement(range(2, 85), r):
            sig = Signature(0, periods)
            mu = mu_measure(sig)
            if 0 < mu <= Fraction(1, 42):
                best.append(sig)
    assert best == [S(0, 2, 3, 7)]


def test_determinism_and_no_duplicates():
    for g, n in [(2, 2), (3, 4), (5, 8), (10, 6)]:
        a = admissible_signatures(g, n)
        assert a == admissible_signatures(g, n)
        assert len(a) == len(set(a))


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 12), st.integers(1, 200))
def test_emitted_signatures_are_exact(g, n):
    for sig in admissible_signatures(g, n):
        assert mu_measure(sig) > 0
        assert rh_genus(n, sig) == g
        assert all(n % m == 0 for m in sig.periods)


def test_text_forms():
    sig = S(0, 2, 3, 7)
    assert sig.text() == "[0; 2, 3, 7]"
    assert sig.flat() == "[0,2,3,7]"
    assert sig.flat(spaced=True) == "[ 0, 2, 3, 7 ]"
    for text in ("[0; 2, 3, 7]", "[0,2,3,7]", "[ 0, 2, 3, 7 ]", "[0;7,3,2]"):
        assert parse_signature(text) == sig
    assert parse_signature("[2]") == S(2)
    assert parse_signature(S(2).text()) == S(2)
    for bad in ("0,2,3", "[]", "[0; x]", "[0;1]", "[;2,3]"):
        with pytest.raises(FormatError):
            parse_signature(bad)


def test_signature_invariants():
    with pytest.raises(DomainError):
        Signature(0, (3, 2))
    with pytest.raises(DomainError):
        Signature(-1, ())
