"""Incremental (beneath-beyond) convex hull over the integers.

Facets are kept as ``(normal, offset)`` hyperplanes with a primitive integer
normal pointing away from the hull, together with a bitmask of every
processed input point lying on the hyperplane.  No floating point is used, so
coplanar and degenerate configurations are decided exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ._exact import IntVec, affine_rank, dot, kernel_vector


class DegenerateError(ValueError):
    """Raised when a point set does not span its ambient space."""


@dataclass(frozen=True)
class HullFacet:
    normal: IntVec
    offset: int
    mask: int


@dataclass(frozen=True)
class Hull:
    dim: int
    points: tuple[IntVec, ...]
    facets: tuple[HullFacet, ...]
    vertex_mask: int

    def members(self, mask: int) -> list[int]:
        return [i for i in range(len(self.points)) if mask >> i & 1]


def _bits(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def _independent_subset(pts: Sequence[IntVec], idx: list[int], want: int) -> list[int]:
    """Greedily pick ``want`` affinely independent points among ``idx``."""
    chosen = [idx[0]]
    for i in idx[1:]:
        if len(chosen) == want:
            break
        if affine_rank([pts[j] for j in chosen + [i]]) == len(chosen):
            chosen.append(i)
    return chosen


def _hyperplane(pts: Sequence[IntVec], idx: list[int], inner: IntVec, k: int) -> tuple[IntVec, int]:
    p0 = pts[idx[0]]
    rows = [[a - b for a, b in zip(pts[i], p0)] for i in idx[1:]]
    normal = kernel_vector(rows, len(p0))
    offset = dot(normal, p0)
    # inner / k is a strictly interior point
    if dot(normal, inner) > offset * k:
        normal = tuple(-x for x in normal)
        offset = -offset
    return normal, offset


def convex_hull(points: Sequence[Sequence[int]]) -> Hull:
    pts = tuple(tuple(int(x) for x in p) for p in points)
    if not pts:
        raise DegenerateError("empty point set")
    d = len(pts[0])
    if any(len(p) != d for p in pts):
        raise ValueError("points have inconsistent dimensions")
    n = len(pts)

    simplex = _independent_subset(pts, list(range(n)), d + 1)
    if len(simplex) < d + 1:
        raise DegenerateError(f"points span an affine space of dimension < {d}")
    inner = tuple(sum(pts[i][c] for i in simplex) for c in range(d))
    k = d + 1

    processed = 0
    for i in simplex:
        processed |= 1 << i

    facets: dict[tuple[IntVec, int], int] = {}

    def scan(normal: IntVec, offset: int) -> int:
        mask = 0
        for j in _bits(processed):
            if dot(normal, pts[j]) == offset:
                mask |= 1 << j
        return mask

    for omit in simplex:
        face = [i for i in simplex if i != omit]
        key = _hyperplane(pts, face, inner, k)
        facets[key] = scan(*key)

    for i in range(n):
        if processed >> i & 1:
            continue
        p = pts[i]
        visible = []
        hidden = []
        for key, mask in facets.items():
            side = dot(key[0], p) - key[1]
            if side > 0:
                visible.append((key, mask))
            else:
                hidden.append((key, mask, side == 0))
        if not visible:
            processed |= 1 << i
            for key, mask, on in hidden:
                if on:
                    facets[key] = mask | 1 << i
            continue

        new_keys = set()
        for _, fmask in visible:
            fsimplicial = fmask.bit_count() == d
            for gkey, gmask, _ in hidden:
                common = fmask & gmask
                c = common.bit_count()
                if c < d - 1:
                    continue
                members = _bits(common)
                if not (fsimplicial and gmask.bit_count() == d and c == d - 1):
                    if affine_rank([pts[j] for j in members]) != d - 2:
                        continue
                    members = _independent_subset(pts, members, d - 1)
                new_keys.add(_hyperplane(pts, members + [i], inner, k))

        for key, _ in visible:
            del facets[key]
        processed |= 1 << i
        for key, mask, on in hidden:
            if on:
                facets[key] = mask | 1 << i
        for key in new_keys:
            facets[key] = scan(*key)

    ordered = tuple(HullFacet(nrm, off, m) for (nrm, off), m in sorted(facets.items()))
    vertex_mask = 0
    for j in range(n):
        normals = [f.normal for f in ordered if f.mask >> j & 1]
        if len(normals) >= d and affine_rank([(0,) * d] + normals) == d:
            vertex_mask |= 1 << j
    return Hull(d, pts, ordered, vertex_mask)


def face_dimension(hull: Hull, mask: int) -> int:
    return affine_rank([hull.points[j] for j in _bits(mask)])


def triangulate_face(hull: Hull, mask: int, fdim: int) -> list[list[int]]:
    """Pulling triangulation of the face ``mask`` (of dimension ``fdim``) into point indices."""
    members = _bits(mask & hull.vertex_mask)
    if len(members) == fdim + 1:
        return [members]
    apex = members[0]
    seen = set()
    out: list[list[int]] = []
    for f in hull.facets:
        sub = mask & f.mask & hull.vertex_mask
        if sub == mask & hull.vertex_mask or sub in seen or sub >> apex & 1:
            continue
        if sub.bit_count() < fdim or face_dimension(hull, sub) != fdim - 1:
            continue
        seen.add(sub)
        for simplex in triangulate_face(hull, sub, fdim - 1):
            out.append([apex] + simplex)
    return out
