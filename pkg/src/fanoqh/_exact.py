"""Exact integer linear algebra used by the hull and the polytope predicates."""

from __future__ import annotations

from math import gcd
from typing import Sequence

IntVec = tuple[int, ...]


def bareiss_det(rows: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix by fraction-free elimination."""
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // prev
        prev = pivot
    return sign * m[n - 1][n - 1]


def rank(rows: Sequence[Sequence[int]]) -> int:
    m = [list(r) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        for i in range(r + 1, len(m)):
            if m[i][c]:
                q = m[i][c]
                m[i] = [x * p - y * q for x, y in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def affine_rank(points: Sequence[Sequence[int]]) -> int:
    """Dimension of the affine hull of ``points`` (-1 for the empty set)."""
    if not points:
        return -1
    p0 = points[0]
    return rank([[a - b for a, b in zip(p, p0)] for p in points[1:]])


def primitive(v: Sequence[int]) -> IntVec:
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in v)


def kernel_vector(rows: Sequence[Sequence[int]], d: int) -> IntVec:
    """Primitive integer generator of the kernel of a (d-1) x d matrix of rank d-1.

    Components are the signed maximal minors (generalized cross product).
    """
    if len(rows) != d - 1:
        raise ValueError("expected d-1 rows")
    out = []
    for j in range(d):
        minor = [[r[c] for c in range(d) if c != j] for r in rows]
        out.append((-1) ** j * bareiss_det(minor))
    return primitive(out)


def dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))
