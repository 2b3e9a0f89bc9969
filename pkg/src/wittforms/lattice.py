"""Integer lattices given by generator rows: Hermite and Smith normal forms.

All arithmetic is on Python ints, so nothing can overflow.
"""

from __future__ import annotations

import csv
from typing import Iterable, Sequence, TextIO

Row = list[int]


def hnf(rows: Iterable[Sequence[int]], ncols: int | None = None) -> list[Row]:
    """Row-style Hermite normal form of the Z-span of ``rows``.

    Returns the nonzero rows, in echelon order, with positive pivots and
    entries above each pivot reduced into ``[0, pivot)``.
    """
    A = [list(r) for r in rows if any(r)]
    if not A:
        return []
    m = ncols if ncols is not None else len(A[0])
    piv = 0
    for col in range(m):
        if piv == len(A):
            break
        while True:
            nz = [i for i in range(piv, len(A)) if A[i][col] != 0]
            if not nz:
                break
            best = min(nz, key=lambda i: abs(A[i][col]))
            A[piv], A[best] = A[best], A[piv]
            p = A[piv]
            clean = True
            for i in range(piv + 1, len(A)):
                a = A[i][col]
                if a:
                    q = a // p[col]
                    if q:
                        A[i] = [x - q * y for x, y in zip(A[i], p)]
                    if A[i][col]:
                        clean = False
            if clean:
                break
        if not any(A[i][col] for i in range(piv, len(A))):
            continue
        if A[piv][col] < 0:
            A[piv] = [-x for x in A[piv]]
        p = A[piv]
        for i in range(piv):
            q = A[i][col] // p[col]
            if q:
                A[i] = [x - q * y for x, y in zip(A[i], p)]
        piv += 1
    return [r for r in A[:piv] if any(r)]


def _pivot(row: Sequence[int]) -> int:
    for j, x in enumerate(row):
        if x:
            return j
    raise ValueError("zero row has no pivot")


def coords(v: Sequence[int], basis: Sequence[Sequence[int]]) -> list[int] | None:
    """Integer coordinates of ``v`` in an HNF ``basis``, or None if v is outside."""
    w = list(v)
    out = []
    for row in basis:
        c = _pivot(row)
        if w[c] % row[c]:
            return None
        k = w[c] // row[c]
        out.append(k)
        if k:
            w = [x - k * y for x, y in zip(w, row)]
    if any(w):
        return None
    return out


def in_lattice(v: Sequence[int], basis: Sequence[Sequence[int]]) -> bool:
    return coords(v, basis) is not None


def contains(outer: Sequence[Sequence[int]], inner: Iterable[Sequence[int]]) -> bool:
    """True iff every row of ``inner`` lies in the lattice with HNF ``outer``."""
    return all(in_lattice(v, outer) for v in inner)


def smith_diagonal(M: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero diagonal of the Smith normal form of an integer matrix.

    Each entry divides the next; the length is the rank.
    """
    A = [list(r) for r in M]
    if not A or not A[0]:
        return []
    r, c = len(A), len(A[0])
    diag: list[int] = []
    t = 0
    while t < min(r, c):
        cand = [(abs(A[i][j]), i, j) for i in range(t, r) for j in range(t, c) if A[i][j]]
        if not cand:
            break
        _, i0, j0 = min(cand)
        A[t], A[i0] = A[i0], A[t]
        for row in A:
            row[t], row[j0] = row[j0], row[t]
        while True:
            dirty = False
            for i in range(t + 1, r):
                q = A[i][t] // A[t][t]
                if q:
                    A[i] = [x - q * y for x, y in zip(A[i], A[t])]
                if A[i][t]:
                    dirty = True
            for j in range(t + 1, c):
                q = A[t][j] // A[t][t]
                if q:
                    for row in A:
                        row[j] -= q * row[t]
                if A[t][j]:
                    dirty = True
            if dirty:
                cand = [(abs(A[i][t]), i, t) for i in range(t, r) if A[i][t]]
                cand += [(abs(A[t][j]), t, j) for j in range(t, c) if A[t][j]]
                _, i0, j0 = min(cand)
                if i0 != t:
                    A[t], A[i0] = A[i0], A[t]
                if j0 != t:
                    for row in A:
                        row[t], row[j0] = row[j0], row[t]
                continue
            bad = next(
                (i for i in range(t + 1, r) for j in range(t + 1, c) if A[i][j] % A[t][t]),
                None,
            )
            if bad is None:
                break
            A[t] = [x + y for x, y in zip(A[t], A[bad])]
        diag.append(abs(A[t][t]))
        t += 1
    return diag


def quotient_invariants(outer: Sequence[Sequence[int]], inner: Iterable[Sequence[int]]) -> list[int]:
    """Invariant factors of ``outer / inner`` for lattices inner <= outer.

    ``outer`` must be in HNF. Trivial factors are dropped and each free
    summand Z is reported as 0, so ``[3]`` means Z/3 and ``[]`` the zero group.
    """
    C = []
    for v in inner:
        x = coords(v, outer)
        if x is None:
            raise ValueError("inner lattice is not contained in outer lattice")
        C.append(x)
    rank = len(outer)
    diag = smith_diagonal(C) if C else []
    return [x for x in diag if x != 1] + [0] * (rank - len(diag))


def dump_rows(rows: Iterable[Sequence[int]], fh: TextIO) -> None:
    """Write generator rows as integer CSV (debug dump format)."""
    w = csv.writer(fh, lineterminator="\n")
    for r in rows:
        w.writerow(r)
