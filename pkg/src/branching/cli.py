"""Command line front end.

Exit codes: 0 success (empty results included), 1 validation failure,
2 usage or I/O error, 3 search budget exceeded.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import datafmt, searchkit
from .epimorph import (DEFAULT_SEARCH_BUDGET, abelianized_surjection_exists, is_generating_vector,
                       representatives_epimorphisms)
from .errors import BudgetExceeded, DomainError, FormatError
from .grouplib import FAMILIES, build_group, catalog, resolve_group
from .signatures import admissible_signatures, hurwitz_bound, parse_signature, rh_genus

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
FORMATS = ("block", "bracket-row", "line")


class UsageError(Exception):
    pass


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _emit(args, text: str):
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _render(records, fmt: str, genus: int | None) -> str:
    if fmt == "bracket-row":
        return datafmt.write_bracket_rows(records)
    if fmt == "line":
        return datafmt.write_group_signature_lines(records, genus)
    return datafmt.write_vector_blocks(records)


def _check_genus(g):
    if g < 2:
        raise UsageError(f"genus must be at least 2, got {g}")


def cmd_signatures(args) -> int:
    _check_genus(args.genus)
    orders = [args.order] if args.order else range(1, hurwitz_bound(args.genus) + 1)
    lines = []
    for n in orders:
        for sig in admissible_signatures(args.genus, n):
            prefix = "" if args.order else f"{n}\t"
            lines.append(f"{prefix}{sig.text()}\t{sig.flat()}\n")
    _emit(args, "".join(lines))
    return EXIT_OK


def cmd_genvec(args) -> int:
    G = resolve_group(args.group)
    sig = parse_signature(args.signature)
    records = representatives_epimorphisms(G, sig, budget=args.budget, workers=args.workers)
    genus = rh_genus(G.order, sig)
    if not records:
        print(f"no epimorphisms from {sig.text()} onto {G.label or G}", file=sys.stderr)
    if args.format == "line" and genus.denominator != 1:
        raise UsageError(f"signature {sig.text()} gives non-integral genus {genus} for order {G.order}")
    _emit(args, _render(records, args.format, int(genus) if genus.denominator == 1 else None))
    return EXIT_OK


def cmd_classify(args) -> int:
    _check_genus(args.genus)
    g = args.genus
    bound = hurwitz_bound(g)
    max_order = min(args.max_order or bound, bound)
    families = args.families.split(",") if args.families else None
    if families:
        unknown = set(families) - set(FAMILIES) - {"fixture"}
        if unknown:
            raise UsageError(f"unknown families: {', '.join(sorted(unknown))}")
    header = (f"# catalog sweep for genus {g}: built-in families "
              f"{','.join(families or list(FAMILIES) + ['fixture'])}, orders <= {max_order}"
              f"{', large groups only' if args.large_only else ''}. "
              f"Groups outside the catalog are not searched.\n")
    chunks = [header]
    skipped = []
    for spec in catalog(max_order, families):
        G = build_group(spec)
        n = G.order
        if args.large_only and n <= 4 * (g - 1):
            continue
        for sig in admissible_signatures(g, n):
            if not abelianized_surjection_exists(sig, G):
                continue
            try:
                records = representatives_epimorphisms(G, sig, budget=args.budget,
                                                       workers=args.workers)
            except BudgetExceeded as exc:
                skipped.append(f"{G.label} {sig.text()}: {exc}")
                continue
            if records:
                chunks.append(_render(records, args.format, g))
    _emit(args, "".join(chunks))
    for s in skipped:
        print(f"budget exceeded, skipped {s}", file=sys.stderr)
    return EXIT_BUDGET if skipped else EXIT_OK


def _require_file(path):
    if not Path(path).is_file():
        raise OSError(f"no such file: {path}")


def cmd_search(args) -> int:
    _require_file(args.file)
    if (args.order is None) != (args.id is None):
        raise UsageError("--order and --id must be given together")
    sig = parse_signature(args.signature) if args.signature else None

    def pred(group, s, v):
        if args.order is not None and group.legacy_id != (args.order, args.id):
            return False
        return sig is None or s == sig

    fmt = searchkit.file_format(args.file)
    hits = searchkit.read_data(args.file, pred)
    _emit(args, "".join(e.text(fmt) for e in hits))
    print(f"{len(hits)} entries", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    _require_file(args.file)
    fmt = searchkit.file_format(args.file)
    total = valid = 0
    failures = []
    with open(args.file) as fh:
        if fmt == "line":
            items = [(i, ln.strip()) for i, ln in enumerate(fh, start=1)
                     if ln.strip() and not ln.strip().startswith("#")]
            for index, (lineno, text) in enumerate(items):
                total += 1
                try:
                    entry = datafmt.parse_group_signature_line(text)
                except FormatError as exc:
                    failures.append(f"entry {index} (line {lineno}): {exc}")
                    continue
                if rh_genus(entry.order, entry.signature) == entry.genus:
                    valid += 1
                else:
                    failures.append(f"entry {index} (line {lineno}): order {entry.order} and "
                                    f"{entry.signature.text()} do not give genus {entry.genus}")
        else:
            if fmt == "bracket-row":
                units = [(i, ln) for i, ln in enumerate(fh, start=1)
                         if ln.strip() and not ln.strip().startswith("#")]
                parse = lambda u: datafmt.parse_bracket_row(u[1], u[0])  # noqa: E731
                where = lambda u: u[0]  # noqa: E731
            else:
                units = list(datafmt.iter_raw_blocks(fh))
                parse = datafmt.parse_block
                where = lambda u: u[0][0]  # noqa: E731
            for index, unit in enumerate(units):
                total += 1
                name = f"block {index} (line {where(unit)})"
                try:
                    block = parse(unit)
                except FormatError as exc:
                    failures.append(f"{name}: {exc}")
                    continue
                G = block.build_group()
                if is_generating_vector(G, block.signature, block.vector()):
                    valid += 1
                else:
                    failures.append(f"{name}: {block.group_id} {block.signature.text()} "
                                    "is not a generating vector")
    for f in failures:
        print(f"invalid {f}", file=sys.stderr)
    print(f"{valid}/{total} valid")
    return EXIT_OK if valid == total else EXIT_INVALID


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="branching",
        description="Signatures, generating vectors and branching-data files for group actions on "
                    "Riemann surfaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("signatures", help="list admissible signatures")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--order", type=_positive)
    p.add_argument("--out")
    p.set_defaults(func=cmd_signatures)

    def search_opts(p):
        p.add_argument("--format", choices=FORMATS, default="block")
        p.add_argument("--budget", type=_positive, default=DEFAULT_SEARCH_BUDGET,
                       help="candidate tuples allowed per class tuple")
        p.add_argument("--workers", type=_positive, default=1)
        p.add_argument("--out")

    p = sub.add_parser("genvec", help="generating vectors for one group and signature")
    p.add_argument("--group", required=True,
                   help="family:params, e.g. psl2:29, cyclic:6, abelian:2,4, fixture:q8, file:PATH")
    p.add_argument("--signature", required=True, help='"[0; 2, 3, 7]" or "[0,2,3,7]"')
    search_opts(p)
    p.set_defaults(func=cmd_genvec)

    p = sub.add_parser("classify", help="sweep the built-in catalog for one genus")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--max-order", type=_positive)
    p.add_argument("--families", help="comma separated subset of " + ",".join(FAMILIES) + ",fixture")
    p.add_argument("--large-only", action="store_true", help="only groups of order > 4(g-1)")
    search_opts(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("search", help="filter entries of a data file")
    p.add_argument("--file", required=True)
    p.add_argument("--order", type=_positive)
    p.add_argument("--id", type=_positive)
    p.add_argument("--signature")
    p.add_argument("--out")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("verify", help="check every vector in a data file")
    p.add_argument("--file", required=True)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (DomainError, FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE if args.command in ("genvec", "signatures") else EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
