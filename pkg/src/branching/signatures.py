"""Fuchsian signatures and their Riemann-Hurwitz enumeration.

All arithmetic is exact (:class:`fractions.Fraction`).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .errors import DomainError, FormatError

Rational = Fraction


@dataclass(frozen=True, order=True)
class Signature:
    """Orbit genus plus the nondecreasing list of branch periods."""

    orbit_genus: int
    periods: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "periods", tuple(int(m) for m in self.periods))
        if self.orbit_genus < 0:
            raise DomainError(f"orbit genus must be >= 0, got {self.orbit_genus}")
        if any(m < 2 for m in self.periods):
            raise DomainError(f"periods must be >= 2, got {list(self.periods)}")
        if list(self.periods) != sorted(self.periods):
            raise DomainError(f"periods must be nondecreasing, got {list(self.periods)}")

    @classmethod
    def of(cls, g0: int, *periods: int) -> Signature:
        return cls(g0, tuple(sorted(periods)))

    @property
    def r(self) -> int:
        return len(self.periods)

    @property
    def sort_key(self):
        return (self.orbit_genus, self.r, self.periods)

    def __str__(self):
        return self.text()

    def text(self) -> str:
        """``[g0; m1, m2, ...]``"""
        if not self.periods:
            return f"[{self.orbit_genus};]"
        return f"[{self.orbit_genus}; " + ", ".join(map(str, self.periods)) + "]"

    def flat(self, spaced: bool = False) -> str:
        """Legacy flat form: ``[0,2,3,7]`` or, spaced, ``[ 0, 2, 3, 7 ]``."""
        items = [self.orbit_genus, *self.periods]
        if spaced:
            return "[ " + ", ".join(map(str, items)) + " ]"
        return "[" + ",".join(map(str, items)) + "]"


_INT_LIST = re.compile(r"^\s*(\d+(\s*,\s*\d+)*)?\s*$")


def parse_signature(text: str) -> Signature:
    """Read either ``[g0; m1, ..., mr]`` or the flat ``[g0,m1,...,mr]``.

    Periods are sorted on input, matching the way signatures are always
    written.
    """
    s = text.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise FormatError(f"signature must be bracketed: {text!r}")
    body = s[1:-1]
    if ";" in body:
        head, _, tail = body.partition(";")
        if not _INT_LIST.match(head) or not head.strip() or not _INT_LIST.match(tail):
            raise FormatError(f"malformed signature {text!r}")
        g0 = int(head)
        periods = [int(x) for x in tail.split(",") if x.strip()]
    else:
        if not _INT_LIST.match(body) or not body.strip():
            raise FormatError(f"malformed signature {text!r}")
        items = [int(x) for x in body.split(",")]
        g0, periods = items[0], items[1:]
    try:
        return Signature(g0, tuple(sorted(periods)))
    except DomainError as exc:
        raise FormatError(str(exc)) from None


def mu_measure(sig: Signature) -> Fraction:
    """2*g0 - 2 + sum(1 - 1/m_i); positive exactly for hyperbolic signatures."""
    return 2 * sig.orbit_genus - 2 + sum((1 - Fraction(1, m) for m in sig.periods), Fraction(0))


def rh_genus(n: int, sig: Signature) -> Fraction:
    """Genus of a surface with an order-n group action of this signature."""
    if n < 1:
        raise DomainError("group order must be positive")
    return 1 + Fraction(n, 2) * mu_measure(sig)


def hurwitz_bound(g: int) -> int:
    return 84 * (g - 1)


def is_large_group(g: int, n: int) -> bool:
    if g < 2:
        raise DomainError("genus must be >= 2")
    return n > 4 * (g - 1)


def _period_tuples(target: Fraction, divisors: list[int], start: int) -> Iterator[tuple[int, ...]]:
    """Nondecreasing tuples from divisors[start:] with sum(1 - 1/m) == target."""
    if target == 0:
        yield ()
        return
    # each term lies in [1/2, 1)
    if target < Fraction(1, 2):
        return
    for i in range(start, len(divisors)):
        m = divisors[i]
        term = 1 - Fraction(1, m)
        if term > target:
            break
        for tail in _period_tuples(target - term, divisors, i):
            yield (m,) + tail


def admissible_signatures(g: int, n: int) -> list[Signature]:
    """Signatures whose Riemann-Hurwitz genus for order n is exactly g.

    Periods must divide n.  Output is sorted by (g0, r, periods).
    """
    if g < 2:
        raise DomainError("genus must be >= 2")
    if n < 1:
        raise DomainError("group order must be positive")
    if n > hurwitz_bound(g):
        return []
    mu = Fraction(2 * (g - 1), n)
    divisors = [d for d in range(2, n + 1) if n % d == 0]
    out = []
    g0 = 0
    # mu >= 2*g0 - 2 bounds the orbit genus
    while 2 * g0 - 2 <= mu:
        remainder = mu - (2 * g0 - 2)
        for periods in _period_tuples(remainder, divisors, 0):
            out.append(Signature(g0, periods))
        g0 += 1
    out.sort(key=lambda s: s.sort_key)
    return out
