"""Predicate-driven scans over branching-data files.

Files are read one entry at a time, so scanning cost in memory is bounded by
the largest single entry rather than by the file.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator, Union

from . import datafmt
from .epimorph import GeneratingVector
from .errors import FormatError
from .grouplib import GroupLabel
from .permcore import PermGroup
from .signatures import Signature, parse_signature

Predicate = Callable[[Union[GroupLabel, PermGroup], Signature, Union[GeneratingVector, None]], bool]


@dataclass(frozen=True)
class Entry:
    index: int
    group: GroupLabel | PermGroup
    signature: Signature
    vector: GeneratingVector | None
    source: datafmt.VectorBlock | datafmt.GroupSignatureLine

    @property
    def label(self) -> GroupLabel:
        return self.source.group_id

    def text(self, fmt: str) -> str:
        """The entry rendered in the format it was read from."""
        if fmt == "line":
            return self.source.text() + "\n"
        if fmt == "bracket-row":
            return datafmt.format_bracket_row(self.source) + "\n"
        return datafmt.format_vector_block(self.source)


def file_format(path) -> str:
    with open(path) as fh:
        for line in fh:
            if line.strip() and not line.strip().startswith("#"):
                return datafmt.detect_format(line)
    return "block"


def iter_entries(path, build_groups: bool = False) -> Iterator[Entry]:
    """Stream the entries of a data file of any of the three formats."""
    fmt = file_format(path)
    with open(path) as fh:
        if fmt == "line":
            numbered = ((i, ln) for i, ln in enumerate(fh, start=1) if ln.strip()
                        and not ln.strip().startswith("#"))
            for index, (lineno, ln) in enumerate(numbered):
                try:
                    item = datafmt.parse_group_signature_line(ln)
                except FormatError as exc:
                    raise FormatError(f"entry {index}: {exc}", line=lineno) from None
                yield Entry(index, item.group_id, item.signature, None, item)
            return
        if fmt == "bracket-row":
            blocks = datafmt.iter_bracket_rows(fh)
        else:
            blocks = (datafmt.parse_block(raw) for raw in datafmt.iter_raw_blocks(fh))
        index = 0
        while True:
            try:
                block = next(blocks)
            except StopIteration:
                return
            except FormatError as exc:
                raise FormatError(f"entry {index}: {exc}") from None
            group = block.build_group() if build_groups else block.group_id
            yield Entry(index, group, block.signature, block.vector(), block)
            index += 1


def read_data(path, pred: Predicate, build_groups: bool = False) -> list[Entry]:
    """Entries for which ``pred(group, signature, vector)`` holds, in file order.

    ``group`` is the entry's label unless ``build_groups`` is set, in which
    case it is the permutation group generated by the entry's own vector.
    """
    return [e for e in iter_entries(path, build_groups) if pred(e.group, e.signature, e.vector)]


def _label_of(group) -> GroupLabel | None:
    return group.label if isinstance(group, PermGroup) else group


def find_group(path, order: int, ident: int) -> list[Entry]:
    return read_data(path, lambda g, s, v: _label_of(g).legacy_id == (order, ident))


def find_signature(path, sig: Signature | str) -> list[Entry]:
    if isinstance(sig, str):
        sig = parse_signature(sig)
    return read_data(path, lambda g, s, v: s == sig)


def load_all(path) -> list[Entry]:
    return read_data(path, lambda g, s, v: True)


def scan_files(paths, pred: Predicate, workers: int = 4) -> dict[str, list[Entry]]:
    """Run :func:`read_data` over several files; results keyed by filename."""
    paths = [str(p) for p in paths]
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        results = pool.map(read_data, paths, itertools.repeat(pred))
        return dict(zip(paths, results))
