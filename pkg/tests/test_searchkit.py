from __future__ import annotations

import random
import subprocess
import sys

import pytest

from branching.errors import FormatError
from branching.permcore import PermGroup
from branching.searchkit import find_group, find_signature, load_all, read_data, scan_files
from branching.signatures import Signature

S = Signature.of
FIXTURES = ["g7_large_blocks.txt", "g7_gap_rows.txt", "groupsignaturedata_g7.txt"]


@pytest.fixture
def g7(data_dir):
    return data_dir / "g7_large_blocks.txt"


def test_read_data_examples(g7):
    assert len(read_data(g7, lambda g, s, v: True)) == 3
    assert read_data(g7, lambda g, s, v: False) == []
    hits = read_data(g7, lambda g, s, v: s == S(0, 2, 3, 7))
    assert [e.index for e in hits] == [0, 1, 2]
    assert [e.vector.class_tuple for e in hits] == [(2, 3, 4), (2, 3, 5), (2, 3, 6)]


def test_find_group(g7, data_dir):
    assert len(find_group(g7, 504, 156)) == 3
    assert find_group(g7, 504, 1) == []
    (line,) = find_group(data_dir / "groupsignaturedata_g7.txt", 504, 156)
    assert line.vector is None and line.source.genus == 7
    assert len(find_group(data_dir / "g7_gap_rows.txt", 504, 156)) == 3


def test_find_signature(g7):
    assert len(find_signature(g7, S(0, 2, 3, 7))) == 3
    assert find_signature(g7, S(0, 2, 3, 8)) == []
    assert find_signature(g7, "[0,2,3,7]") == find_signature(g7, S(0, 2, 3, 7))


@pytest.mark.parametrize("name", FIXTURES)
def test_read_data_is_filtered_load_all(data_dir, name):
    path = data_dir / name
    everything = load_all(path)
    assert everything
    preds = [lambda g, s, v: True, lambda g, s, v: False,
             lambda g, s, v: v is not None and v.class_tuple[-1] % 2 == 0,
             lambda g, s, v: s.r == 3]
    for p in preds:
        assert read_data(path, p) == [e for e in everything if p(e.group, e.signature, e.vector)]


def test_build_groups_opt_in(g7):
    seen = []

    def pred(group, sig, vec):
        seen.append(group)
        return isinstance(group, PermGroup) and group.order == 504

    assert len(read_data(g7, pred, build_groups=True)) == 3
    assert all(isinstance(g, PermGroup) for g in seen)
    assert all(e.label.legacy_id == (504, 156) for e in load_all(g7))


def test_parse_error_names_entry(tmp_path, g7):
    text = g7.read_text().replace("4 8 9 6 3 1 2 7 5", "4 8 9 6 3 1 2 7 7")
    bad = tmp_path / "bad.txt"
    bad.write_text(text)
    with pytest.raises(FormatError, match="entry 1"):
        load_all(bad)


def test_scan_files_keys_by_filename(data_dir):
    paths = [data_dir / n for n in FIXTURES]
    out = scan_files(paths, lambda g, s, v: True, workers=3)
    assert list(out) == [str(p) for p in paths]
    assert [len(v) for v in out.values()] == [3, 3, 1]


_RSS_SCRIPT = """
import resource, sys
from branching.searchkit import read_data
if sys.argv[1] != "-":
    n = len(read_data(sys.argv[1], lambda g, s, v: False))
print(resource.getrusage(resource.RUSAGE_SELF).ru_maxrss)
"""


def test_scan_memory_is_bounded_per_entry(tmp_path):
    # 100 MB of wide blocks; a full load would hold hundreds of MB of tuples
    rng = random.Random(1)
    rows = []
    for _ in range(3):
        img = list(range(1, 2001))
        rng.shuffle(img)
        rows.append(" ".join(map(str, img)))
    block = "(504,156)\n[ 0, 2, 3, 7 ]\n[ 2, 3, 4 ]\n" + "\n".join(rows) + "\n*\n"
    big = tmp_path / "big.txt"
    with open(big, "w") as fh:
        for _ in range(100 * 2**20 // len(block) + 1):
            fh.write(block)
    assert big.stat().st_size >= 100 * 2**20

    def peak_kib(arg):
        out = subprocess.run([sys.executable, "-c", _RSS_SCRIPT, arg], check=True,
                             capture_output=True, text=True)
        return int(out.stdout)

    baseline, scanned = peak_kib("-"), peak_kib(str(big))
    assert scanned - baseline < 16 * 1024, (baseline, scanned)
