"""Complete critical sets of the family superpotentials and their products."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field, replace
from math import prod
from typing import Sequence

import mpmath
import numpy as np

from . import laurent
from .config import Config
from .laurent import LaurentPoly, superpotential
from .polytope import Atom, FamilyExpr, PolytopeError, atoms, normalized_volume, realize, realize_atom
from .relations import dp_roots, pdp_polynomial
from .roots import RootFindingError, aberth


class SolverError(RuntimeError):
    pass


@dataclass(frozen=True)
class PointMeta:
    """Structure of one atom block: ``L`` coordinates equal ``A``, the rest ``B``.

    ``assignment`` has bit ``i`` set when coordinate ``offset + i`` equals ``A``.
    """

    family: str
    offset: int
    dim: int
    L: int
    A: complex
    B: complex
    Z: complex
    assignment: int

    def shifted(self, by: int) -> "PointMeta":
        return replace(self, offset=self.offset + by)

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "offset": self.offset,
            "dim": self.dim,
            "L": self.L,
            "A": _cjson(self.A),
            "B": _cjson(self.B),
            "Z": _cjson(self.Z),
            "assignment": self.assignment,
        }


@dataclass(frozen=True)
class CriticalPoint:
    coords: tuple[complex, ...]
    residual: float
    meta: tuple[PointMeta, ...] = ()
    converged: bool = True

    @property
    def dim(self) -> int:
        return len(self.coords)

    def to_dict(self) -> dict:
        out = {"coords": [_cjson(z) for z in self.coords], "residual": self.residual}
        if self.meta:
            out["meta"] = [m.to_dict() for m in self.meta]
        return out


@dataclass(frozen=True)
class CriticalSet:
    points: tuple[CriticalPoint, ...] = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def coords_array(self) -> np.ndarray:
        return np.array([p.coords for p in self.points], dtype=complex)

    def to_json(self) -> str:
        return json.dumps([p.to_dict() for p in self.points])


def _cjson(z: complex) -> list[float]:
    z = complex(z)
    return [z.real + 0.0, z.imag + 0.0]


def _sort_key(p: CriticalPoint) -> tuple:
    # rounding keeps the order stable under last-bit noise
    return tuple((round(z.real, 9) + 0.0, round(z.imag, 9) + 0.0) for z in p.coords)


def dedupe(points: Sequence[CriticalPoint], tol: float) -> CriticalSet:
    """Drop points within ``tol`` (max coordinate distance) of an earlier one, then sort."""
    kept: list[CriticalPoint] = []
    arr: list[np.ndarray] = []
    for p in points:
        c = np.asarray(p.coords, dtype=complex)
        if any(np.max(np.abs(c - q)) <= tol for q in arr):
            continue
        kept.append(p)
        arr.append(c)
    return CriticalSet(tuple(sorted(kept, key=_sort_key)))


def _residual(w: LaurentPoly, x) -> float:
    return float(np.max(np.abs(laurent.gradient_at(w, x)))) if w.dim else 0.0


def newton_refine(
    w: LaurentPoly,
    p: Sequence[complex],
    max_iter: int = 20,
    tol: float = 1e-10,
    precision: str = "double",
    meta: tuple[PointMeta, ...] = (),
) -> CriticalPoint:
    """Newton iteration on ``grad W = 0`` until the residual is at most ``tol``.

    A point already within ``tol`` is returned unchanged.  On a singular
    Hessian, or when ``max_iter`` is exhausted, the last iterate is returned
    with ``converged=False``.
    """
    x = np.asarray(p, dtype=complex)
    res = _residual(w, x)
    if res <= tol:
        return CriticalPoint(tuple(complex(z) for z in x), res, meta)
    if precision == "high":
        return _newton_high(w, x, max_iter, tol, meta)
    for _ in range(max_iter):
        g = laurent.gradient_at(w, x)
        try:
            step = np.linalg.solve(laurent.hessian_at(w, x), g)
        except np.linalg.LinAlgError:
            break
        x_new = x - step
        if not np.all(np.isfinite(x_new)) or np.any(x_new == 0):
            break
        x, res = x_new, _residual(w, x_new)
        if res <= tol:
            break
    return CriticalPoint(tuple(complex(z) for z in x), res, meta, res <= tol)


def _newton_high(w, x, max_iter, tol, meta) -> CriticalPoint:
    with mpmath.workdps(laurent.HIGH_DPS):
        xm = mpmath.matrix([mpmath.mpc(z) for z in x])
        converged = False
        for _ in range(max_iter):
            g = mpmath.matrix(laurent.gradient_at(w, list(xm), "high"))
            try:
                step = mpmath.lu_solve(laurent.hessian_at(w, list(xm), "high"), g)
            except ZeroDivisionError:
                break
            xm = xm - step
            if max(abs(v) for v in laurent.gradient_at(w, list(xm), "high")) < mpmath.mpf(10) ** (-25):
                converged = True
                break
        coords = tuple(complex(v) for v in xm)
    res = _residual(w, coords)
    return CriticalPoint(coords, res, meta, converged and res <= tol)


def crit_segment() -> CriticalSet:
    pts = [
        CriticalPoint((complex(x),), 0.0, (PointMeta("seg", 0, 1, 1, complex(x), complex(-1 / x), complex(x), 1),))
        for x in (1.0, -1.0)
    ]
    return CriticalSet(tuple(sorted(pts, key=_sort_key)))


def _assignments(n: int, L: int):
    for chosen in itertools.combinations(range(n), L):
        yield sum(1 << i for i in chosen)


def _structured_points(family: str, n: int, pairs, w: LaurentPoly, config: Config) -> CriticalSet:
    raw: list[CriticalPoint] = []
    for L, A in pairs:
        B = -1 / A
        Z = A**L * B ** (n - L)
        for mask in _assignments(n, L):
            coords = tuple(A if mask >> i & 1 else B for i in range(n))
            meta = (PointMeta(family, 0, n, L, A, B, Z, mask),)
            raw.append(newton_refine(w, coords, tol=config.tolerance_residual, precision=config.precision, meta=meta))
    good = [p for p in raw if p.converged and p.residual <= config.tolerance_residual]
    return dedupe(good, config.tolerance_dedupe)


def dp_pairs(k: int) -> list[tuple[int, complex]]:
    n = 2 * k
    return [(L, A) for L in range(n + 1) for A in dp_roots(L, n)]


def crit_del_pezzo(k: int, config: Config | None = None) -> CriticalSet:
    config = config or Config()
    w = superpotential(realize_atom(Atom("dp", k)))
    return _structured_points("dp", 2 * k, dp_pairs(k), w, config)


def pdp_pairs(k: int, dedupe_tol: float = 1e-8) -> list[tuple[int, complex]]:
    """Admissible ``(L, A)`` for the pseudo del Pezzo family, after the Z-consistency filter."""
    n = 2 * k
    out = []
    for L in range(n + 1):
        try:
            roots = aberth(pdp_polynomial(L, n))
        except RootFindingError as exc:
            raise SolverError(str(exc)) from None
        for A in roots:
            if abs(A) < 1e-12:
                continue
            B = -1 / A
            # the quadratic X^2 + Z X - 1 has root sum -Z
            Z = A**L * B ** (n - L)
            if abs(A + B + Z) > dedupe_tol * max(1.0, abs(Z)):
                continue
            out.append((L, complex(A)))
    return out


def crit_pseudo_del_pezzo(k: int, config: Config | None = None) -> CriticalSet:
    config = config or Config()
    w = superpotential(realize_atom(Atom("pdp", k)))
    return _structured_points("pdp", 2 * k, pdp_pairs(k, config.tolerance_dedupe), w, config)


def crit_product(sets: Sequence[CriticalSet], dims: Sequence[int]) -> CriticalSet:
    """Cartesian product of factor critical sets (sums of functions in disjoint variables)."""
    if len(sets) != len(dims):
        raise ValueError("one dimension per factor is required")
    if any(len(s) == 0 for s in sets):
        raise SolverError("empty factor critical set")
    offsets = [sum(dims[:i]) for i in range(len(dims))]
    pts = []
    for combo in itertools.product(*[s.points for s in sets]):
        coords = tuple(itertools.chain.from_iterable(p.coords for p in combo))
        meta = tuple(m.shifted(off) for p, off in zip(combo, offsets) for m in p.meta)
        pts.append(CriticalPoint(coords, max(p.residual for p in combo), meta, all(p.converged for p in combo)))
    return CriticalSet(tuple(sorted(pts, key=_sort_key)))


def crit_atom(atom: Atom, config: Config | None = None) -> CriticalSet:
    if atom.kind == "seg":
        return crit_segment()
    if atom.kind == "dp":
        return crit_del_pezzo(atom.k, config)
    return crit_pseudo_del_pezzo(atom.k, config)


def crit_for_family(expr: FamilyExpr, config: Config | None = None) -> CriticalSet:
    config = config or Config()
    if expr.dim > config.max_dim:
        raise PolytopeError(f"dimension {expr.dim} exceeds the configured maximum {config.max_dim}")
    parts = atoms(expr)
    sets = [crit_atom(a, config) for a in parts]
    if len(sets) == 1:
        return sets[0]
    return crit_product(sets, [a.dim for a in parts])


def family_superpotential(expr: FamilyExpr) -> LaurentPoly:
    """Superpotential of the realized polytope of ``expr``."""
    return superpotential(realize(expr))


def factor_counts(expr: FamilyExpr) -> list[int]:
    return [normalized_volume(realize_atom(a)) for a in atoms(expr)]


def expected_count(expr: FamilyExpr) -> int:
    return prod(factor_counts(expr))


__all__ = [
    "CriticalPoint",
    "CriticalSet",
    "PointMeta",
    "SolverError",
    "crit_atom",
    "crit_del_pezzo",
    "crit_for_family",
    "crit_product",
    "crit_pseudo_del_pezzo",
    "crit_segment",
    "dedupe",
    "dp_pairs",
    "expected_count",
    "factor_counts",
    "family_superpotential",
    "newton_refine",
    "pdp_pairs",
]
