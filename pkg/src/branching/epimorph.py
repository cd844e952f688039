"""Generating vectors: surjections from a Fuchsian group onto a permutation group.

A signature (g0; m1, ..., mr) presents the group

    < a_1, b_1, ..., a_g0, b_g0, c_1, ..., c_r |
      c_j^m_j,  [a_1, b_1] ... [a_g0, b_g0] c_1 ... c_r >

and a generating vector lists the images of these generators in G.  Two
vectors related by conjugating every entry with the same h in G describe the
same action; :func:`representatives_epimorphisms` returns one canonical
vector per such orbit.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import BudgetExceeded
from .permcore import Permutation, PermGroup, _StabChain, _conj, _inv, _mul, _order
from .signatures import Signature
from .smith import smith_diagonal

DEFAULT_SEARCH_BUDGET = 10**7
DEFAULT_ORACLE_BUDGET = 10**8


@dataclass(frozen=True)
class GeneratingVector:
    hyperbolic: tuple[Permutation, ...]
    branch: tuple[Permutation, ...]
    class_tuple: tuple[int, ...] = ()

    @property
    def entries(self) -> tuple[Permutation, ...]:
        return self.hyperbolic + self.branch

    def sort_key(self):
        return tuple(p._a for p in self.entries)


@dataclass(frozen=True)
class EpimorphismRecord:
    signature: Signature
    con: tuple[int, ...]
    group: PermGroup
    genimages: GeneratingVector

    @property
    def label(self):
        return self.group.label


# -- class tuples and the abelianized pretest -------------------------------

def class_tuples(G: PermGroup, sig: Signature) -> list[tuple[int, ...]]:
    """Every r-tuple of class indices whose element orders match the periods."""
    classes = G.conjugacy_classes()
    options = [[c.index for c in classes if c.element_order == m] for m in sig.periods]
    return list(itertools.product(*options))


def fuchsian_abelianization(sig: Signature) -> tuple[int, list[int]]:
    """(free rank, torsion invariant factors) of the abelianized Fuchsian group."""
    r = sig.r
    if r == 0:
        return 2 * sig.orbit_genus, []
    rows = [[m if i == j else 0 for j in range(r)] for i, m in enumerate(sig.periods)]
    rows.append([1] * r)
    diag = smith_diagonal(rows)
    free = 2 * sig.orbit_genus + sum(1 for d in diag if d == 0) + (r - len(diag))
    return free, [d for d in diag if d > 1]


def _p_exponents(factors, p):
    out = []
    for d in factors:
        e = 0
        while d % p == 0:
            d //= p
            e += 1
        if e:
            out.append(e)
    return sorted(out, reverse=True)


def abelian_surjects(free_rank: int, torsion: Sequence[int], target: Sequence[int]) -> bool:
    """Whether Z^free_rank + sum Z/torsion maps onto sum Z/target."""
    primes = set()
    for d in target:
        p = 2
        while p * p <= d:
            if d % p == 0:
                primes.add(p)
                while d % p == 0:
                    d //= p
            p += 1
        if d > 1:
            primes.add(d)
    for p in primes:
        src = [math.inf] * free_rank + _p_exponents(torsion, p)
        dst = _p_exponents(target, p)
        if len(dst) > len(src) or any(b > a for a, b in zip(src, dst)):
            return False
    return True


def abelianized_surjection_exists(sig: Signature, G: PermGroup) -> bool:
    """Necessary condition for an epimorphism: surjectivity on abelianizations."""
    free, torsion = fuchsian_abelianization(sig)
    return abelian_surjects(free, torsion, G.abelian_invariants())


# -- verification and canonical forms ---------------------------------------

def _relator(hyperbolic, branch, ident):
    acc = ident
    for a, b in zip(hyperbolic[::2], hyperbolic[1::2]):
        acc = _mul(acc, _mul(_mul(_inv(a), _inv(b)), _mul(a, b)))
    for c in branch:
        acc = _mul(acc, c)
    return acc


def is_generating_vector(G: PermGroup, sig: Signature, v: GeneratingVector) -> bool:
    """Check relation, branch orders, membership and generation of G."""
    if len(v.hyperbolic) != 2 * sig.orbit_genus or len(v.branch) != sig.r:
        return False
    entries = v.entries
    if any(p.degree != G.degree for p in entries):
        return False
    if any(p not in G for p in entries):
        return False
    ident = tuple(range(G.degree))
    if _relator([p._a for p in v.hyperbolic], [p._a for p in v.branch], ident) != ident:
        return False
    if any(p.order() != m for p, m in zip(v.branch, sig.periods)):
        return False
    return G.generates(entries) if entries else G.order == 1


def _canonical(vec: tuple, elems) -> tuple:
    return min(tuple(_conj(x, h) for x in vec) for h in elems)


def _to_vector(G: PermGroup, raw: tuple, g0: int) -> GeneratingVector:
    perms = tuple(Permutation._raw(x) for x in raw)
    hyp, branch = perms[:2 * g0], perms[2 * g0:]
    return GeneratingVector(hyp, branch, tuple(G.class_index(c) for c in branch))


def orbit_representatives(G: PermGroup, vectors: Iterable[GeneratingVector]) -> list[GeneratingVector]:
    """One canonical vector per simultaneous-conjugation orbit.

    The canonical vector is the least one, comparing concatenated image rows.
    """
    elems = G._raw_elements
    reps = {}
    for v in vectors:
        key = _canonical(v.sort_key(), elems)
        if key not in reps:
            reps[key] = _to_vector(G, key, len(v.hyperbolic) // 2)
    return sorted(reps.values(), key=lambda w: (w.class_tuple, w.sort_key()))


# -- backtracking search ----------------------------------------------------

def _candidate_count(G: PermGroup, sig: Signature, ctuple) -> int:
    members = G._classes[2]
    mid = math.prod(len(members[j - 1]) for j in ctuple[1:-1]) if sig.r >= 2 else 1
    return G.order ** (2 * sig.orbit_genus) * mid


def _search_class_tuple(G: PermGroup, sig: Signature, ctuple: tuple, budget: int) -> list[tuple]:
    """Canonical raw vectors for one class tuple, sorted."""
    count = _candidate_count(G, sig, ctuple)
    if count > budget:
        raise BudgetExceeded(
            f"class tuple {list(ctuple)} for {sig.text()} needs {count} candidates; "
            f"search budget is {budget}")
    elems = G._raw_elements
    _, class_of, members = G._classes
    ident = tuple(range(G.degree))
    target_order = G.order
    g0, r = sig.orbit_genus, sig.r
    if r:
        first = min(members[ctuple[0] - 1])
        middle = [members[j - 1] for j in ctuple[1:-1]]
        last_class = ctuple[-1]

    seen: set[tuple] = set()
    found: list[tuple] = []

    def consider(vec):
        if vec in seen:
            return
        if _StabChain(list(vec), G.degree).order != target_order:
            return
        orbit = {tuple(_conj(x, h) for x in vec) for h in elems}
        seen.update(orbit)
        found.append(min(orbit))

    for hyp in itertools.product(elems, repeat=2 * g0):
        H = _relator(hyp, (), ident)
        if r == 0:
            if H == ident:
                consider(hyp)
            continue
        prefix = _mul(H, first)
        if r == 1:
            if prefix == ident:
                consider(hyp + (first,))
            continue
        for mids in itertools.product(*middle):
            acc = prefix
            for x in mids:
                acc = _mul(acc, x)
            last = _inv(acc)
            if class_of.get(last) == last_class:
                consider(hyp + (first,) + mids + (last,))
    found.sort()
    return found


def _search_job(args):
    return _search_class_tuple(*args)


def representatives_epimorphisms(G: PermGroup, sig: Signature, *, budget: int = DEFAULT_SEARCH_BUDGET,
                                 workers: int = 1, pretest: bool = True) -> list[EpimorphismRecord]:
    """All generating vectors of ``sig`` in ``G`` up to simultaneous conjugation.

    Records are ordered by class tuple, then by canonical vector.  The result
    does not depend on ``workers``.
    """
    if pretest and not abelianized_surjection_exists(sig, G):
        return []
    tuples = class_tuples(G, sig) if sig.r else [()]
    if not tuples:
        return []
    G.conjugacy_classes()
    jobs = [(G, sig, t, budget) for t in tuples]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_search_job, jobs))
    else:
        results = [_search_job(j) for j in jobs]
    records = []
    for ctuple, found in zip(tuples, results):
        for raw in found:
            v = _to_vector(G, raw, sig.orbit_genus)
            records.append(EpimorphismRecord(sig, tuple(ctuple), G, v))
    return records


# -- brute force oracle -----------------------------------------------------

def brute_force_epimorphisms(G: PermGroup, sig: Signature, *,
                             budget: int = DEFAULT_ORACLE_BUDGET) -> list[EpimorphismRecord]:
    """Enumerate every element tuple, solving only the last branch entry.

    Independent of the class machinery used by the backtracking search; meant
    for cross-checking on small groups.
    """
    g0, r = sig.orbit_genus, sig.r
    free = 2 * g0 + max(r - 1, 0)
    total = G.order ** free
    if total > budget:
        raise BudgetExceeded(f"brute force over {total} tuples exceeds oracle budget {budget}")
    elems = G._raw_elements
    ident = tuple(range(G.degree))
    periods = sig.periods
    canon: dict[tuple, bool] = {}
    for tup in itertools.product(elems, repeat=free):
        acc = _relator(tup[:2 * g0], tup[2 * g0:], ident)
        if r:
            vec = tup + (_inv(acc),)
        elif acc == ident:
            vec = tup
        else:
            continue
        branch = vec[2 * g0:]
        if any(_order(c) != m for c, m in zip(branch, periods)):
            continue
        key = _canonical(vec, elems)
        if key not in canon:
            canon[key] = _StabChain(list(key), G.degree).order == G.order
    records = []
    for key, ok in canon.items():
        if ok:
            v = _to_vector(G, key, g0)
            records.append(EpimorphismRecord(sig, v.class_tuple, G, v))
    records.sort(key=lambda rec: (rec.con, rec.genimages.sort_key()))
    return records
