"""Readers and writers for the three legacy branching-data text formats.

``groupsignaturedata`` lines::

    [*7, 504, [0,2,3,7], ( 504,156 ) *]

Generating-vector blocks, separated by a lone ``*``::

    (504,156)
    [ 0, 2, 3, 7 ]
    [ 2, 3, 4 ]
    1 6 4 3 9 2 8 7 5
    4 5 8 9 6 2 3 7 1
    5 2 8 1 6 9 7 4 3
    *

Bracket rows with elements in cycle notation::

    [ 504, 156 ][ 0, 2, 3, 7 ][ 5, 6, 2 ][ (2,3)(4,6)(5,8)(7,9), ... ]

When a signature has no branch points the block ends with the marker line
``[ ]`` after the hyperbolic rows.  Class indices read from files are kept
verbatim; they follow whatever class ordering produced the file.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .epimorph import EpimorphismRecord, GeneratingVector
from .errors import FormatError
from .grouplib import GroupLabel
from .permcore import Permutation, PermGroup, perm_from_cycle_string, perm_from_image_row
from .signatures import Signature, parse_signature

MARKER = "[ ]"
SEPARATOR = "*"

_LEGACY_ID = re.compile(r"^\(\s*(\d+)\s*,\s*(\d+)\s*\)$")


def parse_label(text: str) -> GroupLabel:
    t = text.strip()
    m = _LEGACY_ID.match(t)
    if m:
        return GroupLabel.legacy(int(m.group(1)), int(m.group(2)))
    if not t:
        raise FormatError("empty group label")
    return GroupLabel(t)


def _int_list(text: str, what: str, line=None) -> tuple[int, ...]:
    body = text.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise FormatError(f"{what} must be bracketed: {text!r}", line=line)
    inner = body[1:-1].strip()
    if not inner:
        return ()
    try:
        return tuple(int(x) for x in inner.split(","))
    except ValueError:
        raise FormatError(f"{what} must be a list of integers: {text!r}", line=line) from None


# -- groupsignaturedata -----------------------------------------------------

@dataclass(frozen=True)
class GroupSignatureLine:
    genus: int
    order: int
    signature: Signature
    group_id: GroupLabel
    raw: str | None = field(default=None, compare=False)

    def text(self) -> str:
        if self.raw is not None:
            return self.raw
        gid = self.group_id
        ident = f"( {gid.legacy_id[0]},{gid.legacy_id[1]} )" if gid.legacy_id else gid.text
        return f"[*{self.genus}, {self.order}, {self.signature.flat()}, {ident} *]"


_NUM = re.compile(r"\s*(\d+)\s*")


def parse_group_signature_line(text: str) -> GroupSignatureLine:
    line = text.rstrip("\r\n")
    pos = len(line) - len(line.lstrip())
    if not line.startswith("[*", pos):
        raise FormatError("expected '[*' at start of line", column=pos + 1)
    end = line.rstrip()
    if not end.endswith("*]"):
        raise FormatError("unterminated entry, expected '*]'", column=len(line) + 1)
    stop = len(end) - 2
    pos += 2

    def number():
        nonlocal pos
        m = _NUM.match(line, pos)
        if not m or m.end() > stop:
            raise FormatError("expected an integer", column=pos + 1)
        pos = m.end()
        return int(m.group(1))

    def comma():
        nonlocal pos
        if pos >= stop or line[pos] != ",":
            raise FormatError("expected ','", column=pos + 1)
        pos += 1

    genus = number()
    comma()
    order = number()
    comma()
    while pos < stop and line[pos] == " ":
        pos += 1
    if pos >= stop or line[pos] != "[":
        raise FormatError("expected '[' opening the signature", column=pos + 1)
    close = line.find("]", pos, stop)
    if close < 0:
        raise FormatError("unterminated signature", column=pos + 1)
    try:
        sig = parse_signature(line[pos:close + 1])
    except FormatError as exc:
        raise FormatError(str(exc), column=pos + 1) from None
    pos = close + 1
    while pos < stop and line[pos] == " ":
        pos += 1
    comma()
    label_text = line[pos:stop]
    if not label_text.strip():
        raise FormatError("missing group identifier", column=pos + 1)
    return GroupSignatureLine(genus, order, sig, parse_label(label_text), raw=line)


def format_group_signature_line(entry: GroupSignatureLine) -> str:
    return entry.text()


# -- vector blocks ----------------------------------------------------------

@dataclass(frozen=True)
class VectorBlock:
    group_id: GroupLabel
    signature: Signature
    class_tuple: tuple[int, ...]
    rows: tuple[Permutation, ...]
    legacy_indexed: bool = field(default=True, compare=False)
    line: int | None = field(default=None, compare=False)

    @property
    def unramified(self) -> bool:
        return self.signature.r == 0

    @property
    def degree(self) -> int:
        return self.rows[0].degree if self.rows else 1

    @property
    def hyperbolic(self) -> tuple[Permutation, ...]:
        return self.rows[:2 * self.signature.orbit_genus]

    @property
    def branch(self) -> tuple[Permutation, ...]:
        return self.rows[2 * self.signature.orbit_genus:]

    def vector(self) -> GeneratingVector:
        return GeneratingVector(self.hyperbolic, self.branch, self.class_tuple)

    def build_group(self) -> PermGroup:
        """The group generated by this block's own entries."""
        return PermGroup(self.rows, degree=self.degree, label=self.group_id)


def record_to_block(rec: EpimorphismRecord) -> VectorBlock:
    label = rec.group.label or GroupLabel(f"group of order {rec.group.order}")
    return VectorBlock(label, rec.signature, tuple(rec.con), rec.genimages.entries,
                       legacy_indexed=False)


def block_to_record(block: VectorBlock, group: PermGroup | None = None) -> EpimorphismRecord:
    G = group if group is not None else block.build_group()
    return EpimorphismRecord(block.signature, block.class_tuple, G, block.vector())


def _check_shape(sig: Signature, ctuple, rows, marker, line):
    if len(ctuple) != sig.r:
        raise FormatError(f"class tuple has {len(ctuple)} entries but signature has "
                          f"{sig.r} periods", line=line)
    expect = 2 * sig.orbit_genus + sig.r
    if marker and sig.r:
        raise FormatError("unramified marker in a block with branch points", line=line)
    if len(rows) != expect and not (sig.r == 0 and not rows):
        raise FormatError(f"block has {len(rows)} permutation rows, expected {expect}", line=line)
    degrees = {p.degree for p in rows}
    if len(degrees) > 1:
        raise FormatError(f"permutation rows of mixed degree {sorted(degrees)}", line=line)


def parse_block(lines: list[tuple[int, str]]) -> VectorBlock:
    """Parse one block given as (line number, stripped text) pairs."""
    if len(lines) < 3:
        first = lines[0][0] if lines else None
        raise FormatError("block needs a group line, a signature and a class tuple", line=first)
    (l0, head), (l1, sig_text), (l2, cls_text) = lines[:3]
    label = parse_label(head)
    try:
        sig = parse_signature(sig_text)
    except FormatError as exc:
        raise FormatError(str(exc), line=l1) from None
    ctuple = _int_list(cls_text, "class tuple", l2)
    rows = []
    marker = False
    for ln, text in lines[3:]:
        if marker:
            raise FormatError("rows after the unramified marker", line=ln)
        if text.replace(" ", "") == "[]":
            marker = True
            continue
        try:
            rows.append(perm_from_image_row(text))
        except FormatError as exc:
            raise FormatError(str(exc), line=ln) from None
    _check_shape(sig, ctuple, rows, marker, l0)
    return VectorBlock(label, sig, ctuple, tuple(rows), line=l0)


def iter_raw_blocks(lines: Iterable[str]) -> Iterator[list[tuple[int, str]]]:
    """Group lines into blocks; blank lines and '#' comments are skipped."""
    current: list[tuple[int, str]] = []
    for lineno, raw in enumerate(lines, start=1):
        text = raw.strip()
        if not text or text.startswith("#"):
            continue
        if text == SEPARATOR:
            if not current:
                raise FormatError("empty block", line=lineno)
            yield current
            current = []
        else:
            current.append((lineno, text))
    if current:
        yield current


def iter_vector_blocks(lines: Iterable[str]) -> Iterator[VectorBlock]:
    for raw in iter_raw_blocks(lines):
        yield parse_block(raw)


def parse_vector_blocks(text: str) -> list[VectorBlock]:
    return list(iter_vector_blocks(text.splitlines()))


def format_vector_block(block: VectorBlock) -> str:
    out = [block.group_id.text, block.signature.flat(spaced=True),
           "[ " + ", ".join(map(str, block.class_tuple)) + " ]" if block.class_tuple else MARKER]
    out += [p.image_row() for p in block.rows]
    if block.unramified:
        out.append(MARKER)
    out.append(SEPARATOR)
    return "\n".join(out) + "\n"


def write_vector_blocks(records: Iterable[EpimorphismRecord]) -> str:
    return "".join(format_vector_block(record_to_block(r)) for r in records)


# -- bracket rows -----------------------------------------------------------

def _bracket_fields(line: str) -> list[tuple[int, str]]:
    fields = []
    pos = 0
    n = len(line)
    while pos < n:
        if line[pos].isspace():
            pos += 1
            continue
        if line[pos] != "[":
            raise FormatError(f"expected '[' but found {line[pos]!r}", column=pos + 1)
        close = line.find("]", pos)
        if close < 0:
            raise FormatError("unterminated '['", column=pos + 1)
        fields.append((pos + 1, line[pos + 1:close]))
        pos = close + 1
    return fields


def _split_top_level(text: str, col: int) -> list[str]:
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
            if depth > 1:
                raise FormatError("nested parentheses", column=col + i + 1)
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise FormatError("unbalanced ')'", column=col + i + 1)
        elif ch == "," and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    if depth:
        raise FormatError("unbalanced '('", column=col + len(text))
    parts.append(text[start:])
    return [p.strip() for p in parts if p.strip()] if text.strip() else []


def parse_bracket_row(line: str, lineno: int | None = None) -> VectorBlock:
    try:
        fields = _bracket_fields(line.strip())
        if len(fields) != 4:
            raise FormatError(f"expected 4 bracketed fields, found {len(fields)}")
        (_, gtext), (scol, stext), (ccol, ctext), (vcol, vtext) = fields
        items = [x.strip() for x in gtext.split(",")]
        if len(items) == 2 and all(x.isdigit() for x in items):
            label = GroupLabel.legacy(int(items[0]), int(items[1]))
        else:
            label = parse_label(gtext)
        try:
            sig = parse_signature("[" + stext + "]")
        except FormatError as exc:
            raise FormatError(str(exc), column=scol) from None
        ctuple = _int_list("[" + ctext + "]", "class tuple")
        cycles = _split_top_level(vtext, vcol)
        degree = 1
        for c in cycles:
            for num in re.findall(r"\d+", c):
                degree = max(degree, int(num))
        rows = tuple(perm_from_cycle_string(c, degree) for c in cycles)
        _check_shape(sig, ctuple, rows, False, None)
    except FormatError as exc:
        if lineno is None:
            raise
        raise FormatError(str(exc), line=lineno) from None
    return VectorBlock(label, sig, ctuple, rows, line=lineno)


def iter_bracket_rows(lines: Iterable[str]) -> Iterator[VectorBlock]:
    for lineno, raw in enumerate(lines, start=1):
        text = raw.strip()
        if text and not text.startswith("#"):
            yield parse_bracket_row(text, lineno)


def parse_bracket_rows(text: str) -> list[VectorBlock]:
    return list(iter_bracket_rows(text.splitlines()))


def format_bracket_row(block: VectorBlock) -> str:
    gid = block.group_id
    group = f"{gid.legacy_id[0]}, {gid.legacy_id[1]}" if gid.legacy_id else gid.text
    sig = ", ".join(map(str, (block.signature.orbit_genus,) + block.signature.periods))
    cls = ", ".join(map(str, block.class_tuple))
    vec = ", ".join(p.cycle_string(",") for p in block.rows)
    return f"[ {group} ][ {sig} ][ {cls} ][ {vec} ]"


def write_bracket_rows(records: Iterable[EpimorphismRecord]) -> str:
    return "".join(format_bracket_row(record_to_block(r)) + "\n" for r in records)


def write_group_signature_lines(records: Iterable[EpimorphismRecord], genus: int) -> str:
    """One ``[*genus, order, signature, id *]`` line per distinct (group, signature)."""
    seen = []
    for r in records:
        label = r.group.label or GroupLabel(f"group of order {r.group.order}")
        entry = GroupSignatureLine(genus, r.group.order, r.signature, label)
        if entry not in seen:
            seen.append(entry)
    return "".join(e.text() + "\n" for e in seen)


# -- format detection -------------------------------------------------------

def detect_format(first_line: str) -> str:
    """'line', 'bracket-row' or 'block' from the first meaningful line."""
    t = first_line.strip()
    if t.startswith("[*"):
        return "line"
    if t.startswith("[") and "][" in t.replace(" ", ""):
        return "bracket-row"
    return "block"
