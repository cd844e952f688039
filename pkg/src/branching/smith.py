"""Smith normal form diagonal of small integer matrices."""

from __future__ import annotations

from typing import Sequence


def smith_diagonal(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Return the Smith normal form diagonal d1 | d2 | ... (length min(rows, cols)).

    Entries are nonnegative; trailing zeros record rank deficiency.
    """
    A = [list(map(int, row)) for row in matrix]
    m = len(A)
    n = len(A[0]) if m else 0
    diag = []
    for t in range(min(m, n)):
        pivot = _min_entry(A, t, m, n)
        if pivot is None:
            diag.extend([0] * (min(m, n) - t))
            break
        while True:
            i, j = pivot
            A[t], A[i] = A[i], A[t]
            for row in A:
                row[t], row[j] = row[j], row[t]
            p = A[t][t]
            clean = True
            for i in range(t + 1, m):
                q = A[i][t] // p
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                clean &= A[i][t] == 0
            for j in range(t + 1, n):
                q = A[t][j] // p
                if q:
                    for row in A:
                        row[j] -= q * row[t]
                clean &= A[t][j] == 0
            if not clean:
                pivot = _min_in_cross(A, t, m, n)
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % p), None)
            if bad is None:
                break
            # fold the offending row in, then the remainder pivots below p
            A[t] = [a + b for a, b in zip(A[t], A[bad[0]])]
            pivot = _min_in_cross(A, t, m, n)
        diag.append(abs(A[t][t]))
    return diag


def _min_entry(A, t, m, n):
    best = None
    for i in range(t, m):
        for j in range(t, n):
            if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                best = (i, j)
    return best


def _min_in_cross(A, t, m, n):
    cells = [(t, j) for j in range(t, n) if A[t][j]] + [(i, t) for i in range(t + 1, m) if A[i][t]]
    return min(cells, key=lambda c: abs(A[c[0]][c[1]]))
