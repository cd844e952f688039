"""Named catalog of finite groups, each built as a permutation group."""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterator

from .errors import DomainError, FormatError, UnsupportedError
from .permcore import Permutation, PermGroup, perm_from_image_row

FAMILIES = ("cyclic", "abelian", "dihedral", "symmetric", "alternating", "psl2", "explicit")


@dataclass(frozen=True)
class GroupLabel:
    text: str
    legacy_id: tuple[int, int] | None = None

    def __post_init__(self):
        if self.legacy_id is not None and len(self.legacy_id) != 2:
            raise DomainError(f"legacy id must be an (order, id) pair: {self.legacy_id!r}")

    @classmethod
    def legacy(cls, order: int, ident: int) -> GroupLabel:
        return cls(f"({order},{ident})", (order, ident))

    def __str__(self):
        return self.text


@dataclass(frozen=True)
class GroupSpec:
    family: str
    params: tuple[int, ...] = ()
    explicit_generators: tuple[str, ...] = field(default=(), compare=False)
    degree: int | None = None
    name: str | None = None


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1))


def _cycle(n: int, start: int = 0, degree: int | None = None) -> Permutation:
    degree = degree or n
    img = list(range(1, degree + 1))
    for i in range(n):
        img[start + i] = start + (i + 1) % n + 1
    return Permutation(img)


def spec_text(spec: GroupSpec) -> str:
    f, p = spec.family, spec.params
    if spec.name:
        return spec.name
    if f == "cyclic":
        return f"C{p[0]}"
    if f == "abelian":
        return "x".join(f"C{d}" for d in p)
    if f == "dihedral":
        return f"D{p[0]}"
    if f == "symmetric":
        return f"S{p[0]}"
    if f == "alternating":
        return f"A{p[0]}"
    if f == "psl2":
        return f"psl(2,{p[0]})"
    return "explicit:" + _rows_hash(spec.explicit_generators)


def _rows_hash(rows) -> str:
    norm = "\n".join(" ".join(r.split()) for r in rows)
    return hashlib.sha256(norm.encode()).hexdigest()[:12]


def _single_param(spec: GroupSpec, lo: int) -> int:
    if len(spec.params) != 1:
        raise DomainError(f"{spec.family} takes exactly one parameter, got {list(spec.params)}")
    n = spec.params[0]
    if n < lo:
        raise DomainError(f"{spec.family} needs parameter >= {lo}, got {n}")
    return n


def build_group(spec: GroupSpec) -> PermGroup:
    """Construct the group described by ``spec`` on its standard action."""
    f = spec.family
    if f not in FAMILIES:
        raise DomainError(f"unknown group family {f!r}")
    label = GroupLabel(spec_text(spec))

    if f == "cyclic":
        n = _single_param(spec, 1)
        return PermGroup([_cycle(n)], label=label)

    if f == "abelian":
        if not spec.params or any(d < 2 for d in spec.params):
            raise DomainError(f"abelian factors must be integers >= 2, got {list(spec.params)}")
        degree = sum(spec.params)
        gens, start = [], 0
        for d in spec.params:
            gens.append(_cycle(d, start, degree))
            start += d
        return PermGroup(gens, label=label)

    if f == "dihedral":
        n = _single_param(spec, 3)
        reflection = Permutation([1] + [n + 2 - i for i in range(2, n + 1)])
        return PermGroup([_cycle(n), reflection], label=label)

    if f == "symmetric":
        n = _single_param(spec, 1)
        if n <= 2:
            return PermGroup([_cycle(n)], label=label)
        return PermGroup([_cycle(n), _cycle(2, 0, n)], label=label)

    if f == "alternating":
        n = _single_param(spec, 1)
        if n <= 2:
            return PermGroup([], degree=n, label=label)
        gens = [Permutation.from_cycles([(1, 2, i)], n) for i in range(3, n + 1)]
        return PermGroup(gens, label=label)

    if f == "psl2":
        q = _single_param(spec, 2)
        if not _is_prime(q):
            raise UnsupportedError(f"psl2 is only built for prime q, got {q}")
        if q == 2:
            raise DomainError("psl2 needs an odd prime q")
        # 0-based slots: infinity -> 0, field element x -> x + 1
        inf = 0

        def pt(x):
            return x + 1

        translate = [0] * (q + 1)
        invert = [0] * (q + 1)
        translate[inf] = inf
        invert[inf] = pt(0)
        invert[pt(0)] = inf
        for x in range(q):
            translate[pt(x)] = pt((x + 1) % q)
            if x:
                invert[pt(x)] = pt((-pow(x, -1, q)) % q)
        return PermGroup([Permutation([v + 1 for v in translate]),
                          Permutation([v + 1 for v in invert])], label=label)

    rows = spec.explicit_generators
    if not rows:
        raise DomainError("explicit group needs at least one generator row")
    gens = [perm_from_image_row(r, spec.degree) for r in rows]
    return PermGroup(gens, label=label)


def closed_form_order(spec: GroupSpec) -> int | None:
    f, p = spec.family, spec.params
    if f == "cyclic":
        return p[0]
    if f == "abelian":
        return math.prod(p)
    if f == "dihedral":
        return 2 * p[0]
    if f == "symmetric":
        return math.factorial(p[0])
    if f == "alternating":
        return max(1, math.factorial(p[0]) // 2)
    if f == "psl2":
        return p[0] * (p[0] ** 2 - 1) // 2
    return None


def read_generator_text(text: str, source: str = "<text>") -> GroupSpec:
    """Parse a generator file: first line the degree, then one image row per line."""
    degree = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if degree is None:
            try:
                degree = int(line)
            except ValueError:
                raise FormatError(f"{source}: expected degree on first line", line=lineno) from None
            if degree < 1:
                raise FormatError(f"{source}: degree must be positive", line=lineno)
            continue
        try:
            perm_from_image_row(line, degree)
        except FormatError as exc:
            raise FormatError(f"{source}: {exc}", line=lineno) from None
        rows.append(line)
    if degree is None:
        raise FormatError(f"{source}: empty generator file")
    if not rows:
        rows = [" ".join(str(i) for i in range(1, degree + 1))]
    return GroupSpec("explicit", (), tuple(rows), degree)


def group_from_generator_file(path) -> PermGroup:
    path = Path(path)
    spec = read_generator_text(path.read_text(), str(path))
    return build_group(spec)


# -- shipped fixtures -------------------------------------------------------

FIXTURES = {
    "psl(2,8)-paper": "psl28_paper.txt",
    "q8": "q8.txt",
}


def data_text(filename: str) -> str:
    return resources.files("branching").joinpath("data").joinpath(filename).read_text()


def fixture_spec(name: str) -> GroupSpec:
    if name not in FIXTURES:
        raise DomainError(f"unknown fixture {name!r}; known: {', '.join(sorted(FIXTURES))}")
    spec = read_generator_text(data_text(FIXTURES[name]), name)
    return GroupSpec("explicit", (), spec.explicit_generators, spec.degree, name)


def fixture_group(name: str) -> PermGroup:
    return build_group(fixture_spec(name))


# -- spec text and catalog --------------------------------------------------

def parse_group_spec(text: str) -> GroupSpec:
    """Parse ``family:params`` such as ``psl2:29``, ``abelian:2,4`` or ``fixture:q8``.

    ``file:path`` is resolved by :func:`resolve_group`, not here.
    """
    family, sep, rest = text.partition(":")
    family = family.strip().lower()
    if not sep:
        raise DomainError(f"group spec must look like family:params, got {text!r}")
    if family == "fixture":
        return fixture_spec(rest.strip())
    if family not in FAMILIES or family == "explicit":
        raise DomainError(f"unknown group family {family!r}")
    try:
        params = tuple(int(x) for x in rest.split(",") if x.strip())
    except ValueError:
        raise DomainError(f"group parameters must be integers: {rest!r}") from None
    return GroupSpec(family, params)


def resolve_group(text: str) -> PermGroup:
    if text.startswith("file:"):
        return group_from_generator_file(text[len("file:"):])
    return build_group(parse_group_spec(text))


def _abelian_invariant_lists(n: int) -> Iterator[tuple[int, ...]]:
    """Non-cyclic invariant-factor lists d1 | d2 | ... with product n."""

    def rec(remaining, prev, acc):
        if remaining == 1:
            if len(acc) >= 2:
                yield tuple(acc)
            return
        for d in range(prev, remaining + 1):
            if remaining % d == 0 and (not acc or d % acc[-1] == 0):
                # the remaining factors must all be multiples of d
                if (remaining // d) % d == 0 or remaining == d:
                    yield from rec(remaining // d, d, acc + [d])

    yield from rec(n, 2, [])


def catalog(max_order: int, families=None) -> list[GroupSpec]:
    """Specs for catalog groups of order <= max_order, one per isomorphism type.

    Overlaps are removed by construction: S3 is D3, A3 is C3, psl(2,3) is A4 and
    psl(2,5) is A5, so those members are only listed once.
    """
    families = set(families or list(FAMILIES) + ["fixture"])
    specs: list[GroupSpec] = []
    if "cyclic" in families:
        specs += [GroupSpec("cyclic", (n,)) for n in range(1, max_order + 1)]
    if "abelian" in families:
        for n in range(4, max_order + 1):
            specs += [GroupSpec("abelian", inv) for inv in _abelian_invariant_lists(n)]
    if "dihedral" in families:
        specs += [GroupSpec("dihedral", (n,)) for n in range(3, max_order // 2 + 1)]
    if "symmetric" in families:
        n = 4
        while math.factorial(n) <= max_order:
            specs.append(GroupSpec("symmetric", (n,)))
            n += 1
    if "alternating" in families:
        n = 4
        while math.factorial(n) // 2 <= max_order:
            specs.append(GroupSpec("alternating", (n,)))
            n += 1
    if "psl2" in families:
        q = 7
        while q * (q * q - 1) // 2 <= max_order:
            if _is_prime(q):
                specs.append(GroupSpec("psl2", (q,)))
            q += 1
    if "fixture" in families or "explicit" in families:
        for name in sorted(FIXTURES):
            spec = fixture_spec(name)
            if build_group(spec).order <= max_order:
                specs.append(spec)
    return specs
