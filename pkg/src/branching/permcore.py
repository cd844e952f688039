"""Finite permutation groups: elements, stabilizer chains, classes, abelianization.

Points are 1-based at every public boundary (image rows, cycle notation).
Internally a permutation is a tuple of 0-based images, and products are
read left to right: ``p * q`` applies ``p`` first, then ``q``.  This is the
convention the legacy data files were written in, so that the product of a
generating vector's entries is the identity exactly as stored.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import BudgetExceeded, DomainError, FormatError

DEFAULT_ENUMERATION_BUDGET = 50_000


# -- raw tuple arithmetic (hot loops use these directly) --------------------

def _mul(p, q):
    return tuple([q[i] for i in p])


def _inv(p):
    r = [0] * len(p)
    for i, j in enumerate(p):
        r[j] = i
    return tuple(r)


def _conj(x, h):
    """Return h^-1 x h on raw tuples."""
    r = [0] * len(x)
    for j, xj in enumerate(x):
        r[h[j]] = h[xj]
    return tuple(r)


def _order(p):
    seen = bytearray(len(p))
    k = 1
    for i in range(len(p)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = 1
            j = p[j]
            length += 1
        k = k * length // math.gcd(k, length)
    return k


class Permutation:
    """A bijection of {1..degree}, stored by its image row."""

    __slots__ = ("_a", "_hash")

    def __init__(self, images: Iterable[int]):
        img = tuple([x - 1 for x in map(int, images)])
        n = len(img)
        if not n:
            raise DomainError("permutation degree must be positive")
        if min(img) != 0 or max(img) != n - 1 or len(set(img)) != n:
            raise DomainError(f"not a bijection of 1..{len(img)}: {[x + 1 for x in img]}")
        self._a = img
        self._hash = hash(img)

    @classmethod
    def _raw(cls, arr: tuple) -> Permutation:
        p = object.__new__(cls)
        p._a = arr
        p._hash = hash(arr)
        return p

    @classmethod
    def identity(cls, degree: int) -> Permutation:
        if degree < 1:
            raise DomainError("permutation degree must be positive")
        return cls._raw(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> Permutation:
        img = list(range(degree))
        touched = set()
        for cyc in cycles:
            pts = [int(c) - 1 for c in cyc]
            for x in pts:
                if not 0 <= x < degree:
                    raise DomainError(f"point {x + 1} outside 1..{degree}")
                if x in touched:
                    raise DomainError(f"point {x + 1} appears in two cycles")
                touched.add(x)
            for a, b in zip(pts, pts[1:] + pts[:1]):
                img[a] = b
        return cls._raw(tuple(img))

    @property
    def degree(self) -> int:
        return len(self._a)

    @property
    def images(self) -> tuple[int, ...]:
        return tuple(x + 1 for x in self._a)

    def __call__(self, point: int) -> int:
        return self._a[point - 1] + 1

    def __mul__(self, other: Permutation) -> Permutation:
        if not isinstance(other, Permutation):
            return NotImplemented
        if other.degree != self.degree:
            raise DomainError("cannot multiply permutations of different degree")
        return Permutation._raw(_mul(self._a, other._a))

    def inverse(self) -> Permutation:
        return Permutation._raw(_inv(self._a))

    __invert__ = inverse

    def __pow__(self, k: int) -> Permutation:
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = tuple(range(self.degree))
        b = base._a
        while k:
            if k & 1:
                result = _mul(result, b)
            b = _mul(b, b)
            k >>= 1
        return Permutation._raw(result)

    def conjugate(self, h: Permutation) -> Permutation:
        """Return ``h^-1 * self * h``."""
        return Permutation._raw(_conj(self._a, h._a))

    def commutator(self, other: Permutation) -> Permutation:
        """Return ``self^-1 other^-1 self other``."""
        return self.inverse() * other.inverse() * self * other

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self._a))

    def order(self) -> int:
        return _order(self._a)

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, each starting at its smallest point."""
        seen = set()
        out = []
        for i in range(self.degree):
            if i in seen or self._a[i] == i:
                continue
            cyc = [i]
            seen.add(i)
            j = self._a[i]
            while j != i:
                seen.add(j)
                cyc.append(j)
                j = self._a[j]
            out.append(tuple(c + 1 for c in cyc))
        return out

    def cycle_string(self, sep: str = ",") -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + sep.join(map(str, c)) + ")" for c in cyc)

    def image_row(self) -> str:
        return " ".join(str(x + 1) for x in self._a)

    def __eq__(self, other):
        if not isinstance(other, Permutation):
            return NotImplemented
        return self._a == other._a

    def __lt__(self, other: Permutation) -> bool:
        return self._a < other._a

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Permutation({self.cycle_string()}, degree={self.degree})"

    def __reduce__(self):
        return (Permutation, (self.images,))


def perm_from_image_row(row: str, degree: int | None = None) -> Permutation:
    """Parse a whitespace separated image row such as ``"1 6 4 3 9 2 8 7 5"``."""
    parts = row.split()
    try:
        values = list(map(int, parts))
    except ValueError as exc:
        raise FormatError(f"non-integer entry in image row {row!r}") from exc
    if degree is not None and len(values) != degree:
        raise FormatError(f"image row has {len(values)} entries, expected {degree}")
    try:
        return Permutation(values)
    except DomainError as exc:
        raise FormatError(str(exc)) from exc


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def perm_from_cycle_string(text: str, degree: int | None = None) -> Permutation:
    """Parse cycle notation such as ``"(2,3)(4,6)"``; ``"()"`` is the identity.

    Points are separated by commas or whitespace.  When ``degree`` is omitted
    it is the largest point mentioned (at least 1).
    """
    s = text.strip()
    if not s:
        raise FormatError("empty cycle notation")
    cycles = []
    pos = 0
    for m in _CYCLE_RE.finditer(s):
        if s[pos:m.start()].strip():
            raise FormatError(f"unexpected text in cycle notation {text!r}", column=pos + 1)
        pos = m.end()
        body = m.group(1).replace(",", " ").split()
        try:
            cycles.append([int(x) for x in body])
        except ValueError as exc:
            raise FormatError(f"bad point in cycle notation {text!r}", column=m.start() + 1) from exc
    if s[pos:].strip():
        raise FormatError(f"unbalanced parentheses in {text!r}", column=pos + 1)
    top = max((max(c) for c in cycles if c), default=1)
    if degree is None:
        degree = top
    elif top > degree:
        raise FormatError(f"point {top} exceeds degree {degree}")
    try:
        return Permutation.from_cycles(cycles, degree)
    except DomainError as exc:
        raise FormatError(str(exc)) from exc


def element_order(p: Permutation) -> int:
    return p.order()


# -- stabilizer chain -------------------------------------------------------

class _StabChain:
    """Deterministic Schreier-Sims.  Base points: smallest moved point first."""

    def __init__(self, gens: Sequence[tuple], degree: int):
        self.degree = degree
        ident = tuple(range(degree))
        self.identity = ident
        strong = [g for g in dict.fromkeys(gens) if g != ident]
        self.base: list[int] = []
        for g in strong:
            if all(g[b] == b for b in self.base):
                self.base.append(self._moved(g))
        self.strong = strong
        self.level_gens: list[list[tuple]] = []
        self.trans: list[dict] = []
        self.tree: list[set] = []
        for i in range(len(self.base)):
            self._rebuild(i)
        self._complete()

    @staticmethod
    def _moved(g):
        for i, x in enumerate(g):
            if i != x:
                return i
        raise AssertionError("identity has no moved point")

    def _rebuild(self, i):
        fixed = self.base[:i]
        gens = [s for s in self.strong if all(s[b] == b for b in fixed)]
        b = self.base[i]
        trans = {b: (self.identity, self.identity)}
        # (point, generator index) pairs on the BFS tree give trivial Schreier generators
        tree = set()
        queue = [b]
        for x in queue:
            u = trans[x][0]
            for k, s in enumerate(gens):
                y = s[x]
                if y not in trans:
                    v = _mul(u, s)
                    trans[y] = (v, _inv(v))
                    tree.add((x, k))
                    queue.append(y)
        if i < len(self.level_gens):
            self.level_gens[i] = gens
            self.trans[i] = trans
            self.tree[i] = tree
        else:
            self.level_gens.append(gens)
            self.trans.append(trans)
            self.tree.append(tree)

    def sift(self, g, start=0):
        for lvl in range(start, len(self.base)):
            t = self.trans[lvl].get(g[self.base[lvl]])
            if t is None:
                return g, lvl
            g = _mul(g, t[1])
        return g, len(self.base)

    def _complete(self):
        i = len(self.base) - 1
        while i >= 0:
            i = self._check_level(i)

    def _check_level(self, i):
        trans = self.trans[i]
        tree = self.tree[i]
        for beta, (u, _) in list(trans.items()):
            for k, s in enumerate(self.level_gens[i]):
                if (beta, k) in tree:
                    continue
                h = _mul(_mul(u, s), trans[s[beta]][1])
                if h == self.identity:
                    continue
                h, j = self.sift(h, i + 1)
                if h == self.identity:
                    continue
                self.strong.append(h)
                if j == len(self.base):
                    self.base.append(self._moved(h))
                for lvl in range(i + 1, j + 1):
                    self._rebuild(lvl)
                return j
        return i - 1

    @property
    def order(self) -> int:
        return math.prod(len(t) for t in self.trans)

    def contains(self, g) -> bool:
        h, _ = self.sift(g)
        return h == self.identity


# -- groups -----------------------------------------------------------------

@dataclass(frozen=True)
class ConjClass:
    representative: Permutation
    size: int
    element_order: int
    index: int


class PermGroup:
    """A permutation group given by generators.

    The stabilizer chain and order are computed on construction.  Element
    lists, conjugacy classes and the abelianization are computed on first use
    and cached; all of these are pure functions of the generators.
    """

    def __init__(self, generators: Iterable[Permutation], degree: int | None = None,
                 label=None, budget: int = DEFAULT_ENUMERATION_BUDGET):
        gens = list(generators)
        degrees = {g.degree for g in gens}
        if degree is not None:
            degrees.add(degree)
        if not degrees:
            raise DomainError("a group needs at least one generator or an explicit degree")
        if len(degrees) > 1:
            raise DomainError(f"generators have mixed degrees {sorted(degrees)}")
        self.degree = degrees.pop()
        if not gens:
            gens = [Permutation.identity(self.degree)]
        self.generators: tuple[Permutation, ...] = tuple(gens)
        self.label = label
        self.budget = budget
        self._chain = _StabChain([g._a for g in gens], self.degree)

    def __repr__(self):
        name = getattr(self.label, "text", None) or "PermGroup"
        return f"<{name} degree={self.degree} order={self.order}>"

    def __reduce__(self):
        return (PermGroup, (self.generators, self.degree, self.label, self.budget))

    @property
    def order(self) -> int:
        return self._chain.order

    @property
    def base(self) -> tuple[int, ...]:
        return tuple(b + 1 for b in self._chain.base)

    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def __contains__(self, p: Permutation) -> bool:
        return p.degree == self.degree and self._chain.contains(p._a)

    def _check_budget(self, what: str):
        if self.order > self.budget:
            raise BudgetExceeded(
                f"{what} needs all {self.order} elements; enumeration budget is {self.budget}")

    @cached_property
    def _raw_elements(self) -> tuple[tuple, ...]:
        self._check_budget("element enumeration")
        ident = self._chain.identity
        gens = [g._a for g in self.generators]
        seen = {ident}
        out = [ident]
        for x in out:
            for s in gens:
                y = _mul(x, s)
                if y not in seen:
                    seen.add(y)
                    out.append(y)
        return tuple(out)

    def elements(self) -> list[Permutation]:
        return [Permutation._raw(x) for x in self._raw_elements]

    @cached_property
    def _classes(self):
        elems = self._raw_elements
        gens = [g._a for g in self.generators]
        class_of: dict[tuple, int] = {}
        orbits = []
        if self.is_abelian():
            gens = []
        for x in elems:
            if x in class_of:
                continue
            key = len(orbits)
            class_of[x] = key
            orbit = [x]
            for y in orbit:
                for s in gens:
                    z = _conj(y, s)
                    if z not in class_of:
                        class_of[z] = key
                        orbit.append(z)
            orbits.append(orbit)
        keyed = sorted(
            ((_order(o[0]), len(o), min(o), k) for k, o in enumerate(orbits)))
        renumber = {}
        classes = []
        members = []
        for idx, (order, size, least, k) in enumerate(keyed, start=1):
            renumber[k] = idx
            classes.append(ConjClass(Permutation._raw(least), size, order, idx))
            members.append(orbits[k])
        class_of = {x: renumber[k] for x, k in class_of.items()}
        return tuple(classes), class_of, members

    def conjugacy_classes(self) -> list[ConjClass]:
        self._check_budget("conjugacy class computation")
        return list(self._classes[0])

    def class_index(self, p: Permutation) -> int:
        """1-based index of the class containing ``p``."""
        self._check_budget("conjugacy class computation")
        try:
            return self._classes[1][p._a]
        except KeyError:
            raise DomainError(f"{p!r} is not an element of the group") from None

    def class_members(self, index: int) -> list[Permutation]:
        return [Permutation._raw(x) for x in self._classes[2][index - 1]]

    def subgroup(self, elems: Iterable[Permutation], label=None) -> PermGroup:
        return PermGroup(list(elems), degree=self.degree, label=label, budget=self.budget)

    def _subgroup_from_elements(self, raw_elems) -> PermGroup:
        gens: list[tuple] = []
        chain = None
        for e in raw_elems:
            if chain is not None and chain.contains(e):
                continue
            if chain is None and e == self._chain.identity:
                continue
            gens.append(e)
            chain = _StabChain(gens, self.degree)
        return PermGroup([Permutation._raw(g) for g in gens], degree=self.degree,
                         budget=self.budget)

    def centralizer(self, p: Permutation) -> PermGroup:
        if p not in self:
            raise DomainError(f"{p!r} is not an element of the group")
        x = p._a
        return self._subgroup_from_elements(
            e for e in sorted(self._raw_elements) if _mul(e, x) == _mul(x, e))

    def generates(self, elems: Iterable[Permutation]) -> bool:
        raw = [e._a for e in elems]
        if any(len(e) != self.degree for e in raw):
            return False
        return _StabChain(raw, self.degree).order == self.order

    def is_abelian(self) -> bool:
        gens = [g._a for g in self.generators]
        return all(_mul(a, b) == _mul(b, a) for a in gens for b in gens)

    @cached_property
    def derived_subgroup(self) -> PermGroup:
        gens = [g._a for g in self.generators]
        ident = self._chain.identity
        comms = []
        for i, a in enumerate(gens):
            for b in gens[i + 1:]:
                c = _mul(_mul(_inv(a), _inv(b)), _mul(a, b))
                if c != ident:
                    comms.append(c)
        if not comms:
            return PermGroup([], degree=self.degree, budget=self.budget)
        chain = _StabChain(comms, self.degree)
        current = list(dict.fromkeys(comms))
        changed = True
        while changed:
            changed = False
            for g in list(current):
                for s in gens:
                    c = _conj(g, s)
                    if not chain.contains(c):
                        current.append(c)
                        chain = _StabChain(current, self.degree)
                        changed = True
        return PermGroup([Permutation._raw(g) for g in current], degree=self.degree,
                         budget=self.budget)

    @cached_property
    def _abelian_invariants(self) -> tuple[int, ...]:
        derived = self.derived_subgroup
        index = self.order // derived.order
        if index == 1:
            return ()
        self._check_budget("abelian invariants")
        dchain = derived._chain
        sub = derived._raw_elements
        coset: dict[tuple, int] = {}
        reps = []
        for g in self._raw_elements:
            if g in coset:
                continue
            reps.append(g)
            for h in sub:
                coset[_mul(h, g)] = len(reps) - 1
        orders = []
        for g in reps:
            k, x = 1, g
            while not dchain.contains(x):
                x = _mul(x, g)
                k += 1
            orders.append(k)
        return _invariants_from_orders(orders)

    def abelian_invariants(self) -> list[int]:
        return list(self._abelian_invariants)


def _prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _ilog(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    if n != 1:
        raise AssertionError("count of p-torsion elements is not a power of p")
    return k


def _invariants_from_orders(orders: Sequence[int]) -> tuple[int, ...]:
    """Invariant factors of a finite abelian group from its element orders."""
    n = len(orders)
    parts: dict[int, list[int]] = {}
    for p in _prime_factors(n):
        sylow_log = 0
        m = n
        while m % p == 0:
            m //= p
            sylow_log += 1
        # |{x : x^(p^k) = 1}| = p^(sum_i min(k, e_i)); stop once it is the Sylow order
        logs = [0]
        while logs[-1] < sylow_log:
            pk = p ** len(logs)
            logs.append(_ilog(sum(1 for o in orders if pk % o == 0), p))
        at_least = [logs[j] - logs[j - 1] for j in range(1, len(logs))] + [0]
        exps = []
        for k in range(1, len(logs)):
            exps.extend([k] * (at_least[k - 1] - at_least[k]))
        parts[p] = sorted(exps, reverse=True)
    width = max((len(v) for v in parts.values()), default=0)
    factors = []
    for i in range(width):
        f = 1
        for p, exps in parts.items():
            if i < len(exps):
                f *= p ** exps[i]
        factors.append(f)
    return tuple(sorted(factors))


# -- module level API -------------------------------------------------------

def group_order(G: PermGroup) -> int:
    return G.order


def conjugacy_classes(G: PermGroup) -> list[ConjClass]:
    return G.conjugacy_classes()


def centralizer(G: PermGroup, p: Permutation) -> PermGroup:
    return G.centralizer(p)


def abelian_invariants(G: PermGroup) -> list[int]:
    return G.abelian_invariants()


def generates(G: PermGroup, elems: Iterable[Permutation]) -> bool:
    return G.generates(elems)
