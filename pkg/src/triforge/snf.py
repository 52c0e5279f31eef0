"""Exact integer matrix routines: rank and Smith normal form.

Torsion must come out exact, so everything is integer arithmetic.  The
boundary matrices of our triangulations are large but extremely sparse
and almost entirely reducible by +-1 pivots, so the main entry point runs
a sparse unit-pivot sweep (greedy Markowitz ordering) and only hands the
small residual core to a dense classical SNF.
"""

from __future__ import annotations

import heapq
from collections import defaultdict


# -- dense classical SNF (used for the small residual core) ---------------

def _smith_dense(a):
    m = len(a)
    n = len(a[0]) if m else 0
    divisors = []
    top = 0
    while top < m and top < n:
        pr = pc = -1
        best = None
        for i in range(top, m):
            row = a[i]
            for j in range(top, n):
                v = row[j]
                if v:
                    av = abs(v)
                    if best is None or av < best:
                        best, pr, pc = av, i, j
        if best is None:
            break
        if pr != top:
            a[top], a[pr] = a[pr], a[top]
        if pc != top:
            for row in a:
                row[top], row[pc] = row[pc], row[top]
        while True:
            p = a[top][top]
            done = True
            for i in range(top + 1, m):
                v = a[i][top]
                if v:
                    q = v // p
                    if q:
                        arow, prow = a[i], a[top]
                        for j in range(top, n):
                            arow[j] -= q * prow[j]
                    if a[i][top]:
                        a[top], a[i] = a[i], a[top]
                        done = False
            row0 = a[top]
            p = row0[top]
            for j in range(top + 1, n):
                v = row0[j]
                if v:
                    q = v // p
                    if q:
                        for i in range(top, m):
                            a[i][j] -= q * a[i][top]
                    if row0[j]:
                        for i in range(top, m):
                            a[i][top], a[i][j] = a[i][j], a[i][top]
                        done = False
            if done:
                break
        p = abs(a[top][top])
        fixed = True
        for i in range(top + 1, m):
            row = a[i]
            for j in range(top + 1, n):
                if row[j] % p:
                    prow = a[top]
                    for k in range(top, n):
                        prow[k] += row[k]
                    fixed = False
                    break
            if not fixed:
                break
        if not fixed:
            continue
        divisors.append(p)
        top += 1
    return divisors


# -- sparse reduction ------------------------------------------------------

def _smith_sparse(entries, presorted=False):
    """Diagonal of the SNF from an iterable of (row, col, value) entries."""
    rows = defaultdict(dict)
    cols = defaultdict(set)
    for r, c, v in entries:
        if v:
            rows[r][c] = v
            cols[c].add(r)

    heap = []

    def push_row_units(r):
        row = rows.get(r)
        if not row:
            return
        lr = len(row)
        for c, v in row.items():
            if v == 1 or v == -1:
                score = (lr - 1) * (len(cols[c]) - 1)
                heapq.heappush(heap, (score, r, c))

    for r in list(rows):
        push_row_units(r)

    nunits = 0
    while True:
        while heap:
            _, r, c = heapq.heappop(heap)
            row = rows.get(r)
            if not row:
                continue
            v = row.get(c)
            if v != 1 and v != -1:
                continue
            # eliminate with pivot (r, c)
            piv = rows.pop(r)
            for cc in piv:
                cols[cc].discard(r)
            touched = []
            for r2 in list(cols[c]):
                row2 = rows[r2]
                q = row2[c] * v
                for cc, vv in piv.items():
                    nv = row2.get(cc, 0) - q * vv
                    if nv:
                        row2[cc] = nv
                        cols[cc].add(r2)
                    elif cc in row2:
                        del row2[cc]
                        cols[cc].discard(r2)
                if not row2:
                    del rows[r2]
                else:
                    touched.append(r2)
            cols.pop(c, None)
            nunits += 1
            for r2 in touched:
                push_row_units(r2)
        # no unit entries reachable: confirm with one global scan
        rescan = False
        for r in list(rows):
            row = rows[r]
            for c, v in row.items():
                if v == 1 or v == -1:
                    push_row_units(r)
                    rescan = True
                    break
        if not rescan:
            break

    # residual core (no +-1 entries left) -> dense SNF
    live_rows = sorted(rows)
    if not live_rows:
        return [1] * nunits
    col_ids = sorted({c for r in live_rows for c in rows[r]})
    cindex = {c: i for i, c in enumerate(col_ids)}
    dense = [[0] * len(col_ids) for _ in live_rows]
    for i, r in enumerate(live_rows):
        for c, v in rows[r].items():
            dense[i][cindex[c]] = v
    rest = _smith_dense(dense)
    return [1] * nunits + sorted(rest)


# -- public API -------------------------------------------------------------

def smith_normal_form(mat):
    """Nonzero diagonal entries of the SNF of a dense integer matrix.

    Entries are positive and sorted so that each divides the next (the 1s
    come first; the nontrivial part of a boundary matrix's chain is its
    sorted elementary divisors).
    """
    entries = []
    for r, row in enumerate(mat):
        for c, v in enumerate(row):
            if v:
                entries.append((r, c, v))
    return _smith_sparse(entries)


def smith_from_entries(entries):
    """SNF diagonal from sparse (row, col, value) entries."""
    return _smith_sparse(entries)


def rank(mat):
    """Rank over Q (equivalently over Z) of an integer matrix."""
    return len(smith_normal_form(mat))


def elementary_divisors(mat):
    """Nontrivial (>1) elementary divisors in divisibility order."""
    return sorted(d for d in smith_normal_form(mat) if d > 1)


def cokernel(mat):
    """Structure of Z^rows / column-span(mat) as (free_rank, torsion list)."""
    m = len(mat)
    divs = smith_normal_form(mat) if m else []
    free = m - len(divs)
    torsion = sorted(d for d in divs if d > 1)
    return free, torsion
