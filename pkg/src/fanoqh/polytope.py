"""Lattice polytopes: generators of the three smooth Fano families, convex-hull products, facets, duality.

All combinatorics is exact.  A :class:`LatticePolytope` is the polytope that
carries the superpotential monomials, i.e. the dual of the moment polytope.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache, reduce

from typing import Iterable, Sequence, Union

from ._exact import IntVec, bareiss_det
from ._hull import DegenerateError, Hull, convex_hull, triangulate_face

__all__ = [
    "DegenerateError",
    "Facet",
    "FamilyExpr",
    "LatticePolytope",
    "PolytopeError",
    "Atom",
    "Product",
    "convex_hull_product",
    "dual",
    "enumerate_facets",
    "is_facet_symmetric",
    "is_reflexive",
    "is_smooth",
    "make_del_pezzo",
    "make_pseudo_del_pezzo",
    "make_segment",
    "normalized_volume",
    "parse_family",
    "realize",
]


class PolytopeError(ValueError):
    """Invalid polytope input or a failed predicate precondition."""


@dataclass(frozen=True, order=True)
class Facet:
    """Facet ``{x : <x, normal> <= offset}`` with a primitive outward normal."""

    normal: IntVec
    offset: int


class LatticePolytope:
    """Full-dimensional lattice polytope given by its vertices.

    Vertices are validated against an exact hull: every input point must be a
    vertex.  The hull is computed once and cached.
    """

    def __init__(self, vertices: Iterable[Sequence[int]], dim: int | None = None):
        verts = [tuple(int(x) for x in v) for v in vertices]
        if not verts:
            raise PolytopeError("a polytope needs at least one vertex")
        if dim is None:
            dim = len(verts[0])
        if dim < 1:
            raise PolytopeError("dimension must be positive")
        if any(len(v) != dim for v in verts):
            raise PolytopeError(f"every vertex must have {dim} coordinates")
        if len(set(verts)) != len(verts):
            raise PolytopeError("vertices must be pairwise distinct")
        self.dim = dim
        self.vertices: tuple[IntVec, ...] = tuple(sorted(verts))
        try:
            hull = self._hull
        except DegenerateError as exc:
            raise PolytopeError(f"polytope is not full-dimensional: {exc}") from None
        if hull.vertex_mask != (1 << len(self.vertices)) - 1:
            bad = [self.vertices[j] for j in range(len(self.vertices)) if not hull.vertex_mask >> j & 1]
            raise PolytopeError(f"points are not vertices of the hull: {bad}")

    @cached_property
    def _hull(self) -> Hull:
        return convex_hull(self.vertices)

    @cached_property
    def facets(self) -> tuple[Facet, ...]:
        return tuple(Facet(f.normal, f.offset) for f in self._hull.facets)

    def facet_vertices(self, facet_index: int) -> list[IntVec]:
        mask = self._hull.facets[facet_index].mask
        return [self.vertices[j] for j in self._hull.members(mask)]

    @property
    def origin_interior(self) -> bool:
        return all(f.offset > 0 for f in self.facets)

    def require_interior_origin(self) -> None:
        if not self.origin_interior:
            raise PolytopeError("the origin is not an interior point")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LatticePolytope):
            return NotImplemented
        return self.dim == other.dim and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash((self.dim, self.vertices))

    def __repr__(self) -> str:
        return f"LatticePolytope(dim={self.dim}, n_vertices={len(self.vertices)})"

    def to_json(self) -> str:
        return json.dumps({"dim": self.dim, "vertices": [list(v) for v in self.vertices]})

    @classmethod
    def from_json(cls, text: str) -> "LatticePolytope":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise PolytopeError(f"malformed polytope JSON: {exc}") from None
        if not isinstance(data, dict) or "vertices" not in data:
            raise PolytopeError('polytope JSON must be an object with "dim" and "vertices"')
        verts = data["vertices"]
        if not isinstance(verts, list) or not all(
            isinstance(v, list) and all(isinstance(x, int) and not isinstance(x, bool) for x in v) for v in verts
        ):
            raise PolytopeError("vertices must be a list of integer lists")
        dim = data.get("dim")
        if dim is not None and (not isinstance(dim, int) or isinstance(dim, bool)):
            raise PolytopeError('"dim" must be an integer')
        return cls(verts, dim)


def _unit(n: int, i: int, s: int = 1) -> IntVec:
    return tuple(s if j == i else 0 for j in range(n))


def make_segment() -> LatticePolytope:
    return LatticePolytope([(1,), (-1,)])


def _check_k(k: int) -> int:
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise PolytopeError(f"family index must be a positive integer, got {k!r}")
    return k


def make_pseudo_del_pezzo(k: int) -> LatticePolytope:
    """``conv(±e_1, ..., ±e_2k, e_1 + ... + e_2k)``."""
    n = 2 * _check_k(k)
    verts = [_unit(n, i, s) for i in range(n) for s in (1, -1)]
    verts.append((1,) * n)
    return LatticePolytope(verts)


def make_del_pezzo(k: int) -> LatticePolytope:
    """``conv(±e_1, ..., ±e_2k, ±(e_1 + ... + e_2k))``."""
    n = 2 * _check_k(k)
    verts = [_unit(n, i, s) for i in range(n) for s in (1, -1)]
    verts += [(1,) * n, (-1,) * n]
    return LatticePolytope(verts)


def convex_hull_product(q: LatticePolytope, q2: LatticePolytope) -> LatticePolytope:
    """``conv((Q x 0) u (0 x Q2))``; the vertex set is verified by the hull."""
    q.require_interior_origin()
    q2.require_interior_origin()
    pad1 = (0,) * q2.dim
    pad0 = (0,) * q.dim
    union = [v + pad1 for v in q.vertices] + [pad0 + v for v in q2.vertices]
    # LatticePolytope rejects any union point that is not a hull vertex
    return LatticePolytope(union, q.dim + q2.dim)


def enumerate_facets(p: LatticePolytope) -> list[Facet]:
    return list(p.facets)


def is_reflexive(p: LatticePolytope) -> bool:
    p.require_interior_origin()
    return all(f.offset == 1 for f in p.facets)


def dual(p: LatticePolytope) -> LatticePolytope:
    """Convex hull of ``normal / offset`` over the facets; lattice only if ``p`` is reflexive."""
    p.require_interior_origin()
    pts = []
    for f in p.facets:
        if any(x % f.offset for x in f.normal):
            raise PolytopeError(f"not reflexive: facet {f.normal} has offset {f.offset}")
        pts.append(tuple(x // f.offset for x in f.normal))
    return LatticePolytope(pts, p.dim)


def is_smooth(p: LatticePolytope) -> bool:
    """Delzant condition on the moment polytope ``dual(p)``.

    For reflexive ``p`` the facets of ``dual(p)`` are ``<x, v> <= 1`` for the
    vertices ``v`` of ``p``, so the facet normals incident to the vertex
    ``n_F`` of ``dual(p)`` are exactly the vertices of ``p`` on ``F``.  This
    avoids a second hull computation on the (much larger) dual.
    """
    if not is_reflexive(p):
        raise PolytopeError("smoothness is only defined here for reflexive polytopes")
    for i, f in enumerate(p.facets):
        normals = p.facet_vertices(i)
        if len(normals) != p.dim:
            raise PolytopeError(
                f"vertex {f.normal} of the moment polytope is not simple "
                f"({len(normals)} incident facets in dimension {p.dim})"
            )
        if abs(bareiss_det(normals)) != 1:
            return False
    return True


def is_facet_symmetric(p: LatticePolytope) -> bool:
    p.require_interior_origin()
    facets = set(p.facets)
    return any(Facet(tuple(-x for x in f.normal), f.offset) in facets for f in p.facets)


def normalized_volume(p: LatticePolytope) -> int:
    """``dim! * vol(p)`` from an exact fan triangulation of the hull."""
    hull = p._hull
    d = p.dim
    if p.origin_interior:
        apex: IntVec = (0,) * d
        skip = -1
    else:
        skip = next(j for j in range(len(hull.points)) if hull.vertex_mask >> j & 1)
        apex = hull.points[skip]
    total = 0
    for f in hull.facets:
        if skip >= 0 and f.mask >> skip & 1:
            continue
        for simplex in triangulate_face(hull, f.mask, d - 1):
            rows = [[a - b for a, b in zip(hull.points[j], apex)] for j in simplex]
            total += abs(bareiss_det(rows))
    return total


# ---------------------------------------------------------------------------
# family expressions


@dataclass(frozen=True)
class Atom:
    kind: str  # "seg", "dp" or "pdp"
    k: int = 0

    @property
    def dim(self) -> int:
        return 1 if self.kind == "seg" else 2 * self.k

    def __str__(self) -> str:
        return "seg" if self.kind == "seg" else f"{self.kind}({self.k})"


@dataclass(frozen=True)
class Product:
    left: "FamilyExpr"
    right: Atom

    @property
    def dim(self) -> int:
        return self.left.dim + self.right.dim

    def __str__(self) -> str:
        return f"{self.left}*{self.right}"


FamilyExpr = Union[Atom, Product]


def atoms(expr: FamilyExpr) -> list[Atom]:
    if isinstance(expr, Atom):
        return [expr]
    return atoms(expr.left) + [expr.right]


_TOKEN = re.compile(r"\s*(?:(seg)|(dp|pdp)\(\s*(-?\d+)\s*\)|(\*))")


def parse_family(text: str) -> FamilyExpr:
    """Parse ``atom ("*" atom)*`` with atoms ``seg``, ``dp(k)``, ``pdp(k)``."""
    pos = 0
    items: list[Atom] = []
    expect_atom = True
    text_len = len(text)
    while True:
        while pos < text_len and text[pos].isspace():
            pos += 1
        if pos == text_len:
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            raise PolytopeError(f"parse error at position {pos}: unexpected {text[pos:pos + 8]!r}")
        start = m.start(m.lastindex)
        if m.group(4):
            if expect_atom:
                raise PolytopeError(f"parse error at position {start}: expected an atom before '*'")
            expect_atom = True
        else:
            if not expect_atom:
                raise PolytopeError(f"parse error at position {start}: expected '*' between atoms")
            if m.group(1):
                items.append(Atom("seg"))
            else:
                k = int(m.group(3))
                if k < 1:
                    raise PolytopeError(f"{m.group(2)}({k}): family index must be at least 1")
                items.append(Atom(m.group(2), k))
            expect_atom = False
        pos = m.end()
    if expect_atom:
        raise PolytopeError(f"parse error at position {pos}: expected an atom")
    return reduce(Product, items[1:], items[0])


@lru_cache(maxsize=None)
def realize_atom(atom: Atom) -> LatticePolytope:
    if atom.kind == "seg":
        return make_segment()
    if atom.kind == "dp":
        return make_del_pezzo(atom.k)
    return make_pseudo_del_pezzo(atom.k)


@lru_cache(maxsize=64)
def realize(expr: FamilyExpr) -> LatticePolytope:
    if isinstance(expr, Atom):
        return realize_atom(expr)
    return convex_hull_product(realize(expr.left), realize_atom(expr.right))
