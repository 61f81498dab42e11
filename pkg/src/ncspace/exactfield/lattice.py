"""Index of integer sublattices."""

from __future__ import annotations

from typing import Sequence

from ..errors import RankError, ShapeError


def _hermite_rows(vectors: list[list[int]], dim: int) -> list[list[int]]:
    """Integer row echelon form by repeated gcd elimination (unimodular ops only)."""
    rows = [list(v) for v in vectors if any(v)]
    out = []
    for col in range(dim):
        active = [r for r in rows if r[col] != 0]
        rest = [r for r in rows if r[col] == 0]
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[col]))
            piv = active[0]
            nxt = [piv]
            for r in active[1:]:
                q = r[col] // piv[col]
                r = [a - q * b for a, b in zip(r, piv)]
                if r[col] != 0:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            active = nxt
        if active:
            out.append(active[0])
        rows = rest
    return out


def smith_index(m: Sequence[Sequence[int]]) -> int:
    """Index [Z^r : column span of m] for an r x k integer matrix of rank r.

    Equals the product of the Smith invariant factors; computed here as the
    absolute product of the pivots of an integer echelon form.
    """
    rows = [[int(x) for x in r] for r in m]
    if not rows:
        raise ShapeError("empty matrix")
    k = len(rows[0])
    if any(len(r) != k for r in rows):
        raise ShapeError("ragged matrix")
    r = len(rows)
    cols = [[rows[i][j] for i in range(r)] for j in range(k)]
    ech = _hermite_rows(cols, r)
    if len(ech) < r:
        raise RankError(f"column span has rank {len(ech)} < {r}")
    idx = 1
    for i, row in enumerate(ech):
        idx *= row[i]
    return abs(idx)
