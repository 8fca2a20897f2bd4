"""Non-degeneracy certification and the semisimplicity verdict."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import prod
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import laurent
from .config import Config
from .critsolve import (
    CriticalPoint,
    CriticalSet,
    PointMeta,
    SolverError,
    crit_del_pezzo,
    crit_for_family,
    dp_pairs,
    expected_count,
    family_superpotential,
    pdp_pairs,
)
from .hessian import (
    IdentityError,
    StructuredParams,
    assemble_structured,
    chi_dp,
    dense_det,
    dp_params,
    pdp_params,
    quadratic_constant,
    structured_det,
    structured_eigen,
    u_poly_pdp,
)
from .polytope import (
    Atom,
    FamilyExpr,
    LatticePolytope,
    PolytopeError,
    Product,
    atoms,
    is_reflexive,
    is_smooth,
)
from .relations import dp_unity_residual, pdp_polynomial, pdp_residual, pdp_residual_b
from .roots import RootFindingError, aberth

SEMISIMPLE = "SEMISIMPLE"
DEGENERATE = "DEGENERATE"
INCONCLUSIVE = "INCONCLUSIVE"

CROSS_TOL = 1e-12
STRUCT_ENTRY_TOL = 1e-9
STRUCT_DET_RTOL = 1e-8
NONZERO_FLOOR = 1e-6


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    worst_margin: float

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": bool(self.passed), "detail": self.detail,
                "worst_margin": float(self.worst_margin)}


@dataclass
class PointRecord:
    coords: tuple[complex, ...]
    residual: float
    det_hessian: complex
    structured_det: complex | None
    degenerate: bool

    def to_dict(self) -> dict:
        return {
            "coords": [_cjson(z) for z in self.coords],
            "residual": self.residual,
            "det_hessian": _cjson(self.det_hessian),
            "structured_det": None if self.structured_det is None else _cjson(self.structured_det),
            "degenerate": bool(self.degenerate),
        }


@dataclass
class SemisimplicityReport:
    input: str
    dim: int
    critical_count: int
    expected_count: int
    points: list[PointRecord]
    min_abs_det: float
    checks: list[CheckResult]
    verdict: str | None
    error: str | None = None
    coordinate_order: list[int] | None = field(default=None)

    def to_dict(self) -> dict:
        out = {
            "input": self.input,
            "dim": self.dim,
            "critical_count": self.critical_count,
            "expected_count": self.expected_count,
            "min_abs_det": self.min_abs_det,
            "verdict": self.verdict,
            "checks": [c.to_dict() for c in self.checks],
            "points": [p.to_dict() for p in self.points],
        }
        if self.error is not None:
            out["error"] = self.error
        if self.coordinate_order is not None:
            out["coordinate_order"] = self.coordinate_order
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    def to_text(self) -> str:
        lines = [
            f"input:          {self.input}",
            f"dimension:      {self.dim}",
            f"critical points {self.critical_count} (expected {self.expected_count})",
            f"min |det Hess|  {self.min_abs_det:.6g}",
        ]
        if self.error:
            lines.append(f"error:          {self.error}")
        for c in self.checks:
            lines.append(f"  [{'pass' if c.passed else 'FAIL'}] {c.name}: {c.detail}")
        lines.append(f"verdict:        {self.verdict}")
        return "\n".join(lines)


def _cjson(z: complex) -> list[float]:
    z = complex(z)
    return [z.real + 0.0, z.imag + 0.0]


def _check(name: str, margins: Iterable[float], detail: str) -> CheckResult:
    margins = list(margins)
    worst = min(margins) if margins else 0.0
    return CheckResult(name, bool(margins) and bool(worst > 0), detail, float(worst))


# ---------------------------------------------------------------------------
# structured parameters per atom block


def block_params(meta: PointMeta) -> StructuredParams:
    if meta.family == "seg":
        return StructuredParams(2 / meta.A**3, 0, 0, 0, 0, 1, 1)
    if meta.family == "dp":
        return dp_params(meta.A, meta.L, meta.dim)
    return pdp_params(meta.A, meta.L, meta.dim)


def a_block_order(meta: PointMeta) -> list[int]:
    """Block-local coordinate order with the ``A`` coordinates first."""
    idx = range(meta.dim)
    return [i for i in idx if meta.assignment >> i & 1] + [i for i in idx if not meta.assignment >> i & 1]


def hessian_block(h: np.ndarray, meta: PointMeta, sort_a_first: bool = True) -> np.ndarray:
    o = meta.offset
    block = h[o:o + meta.dim, o:o + meta.dim]
    if sort_a_first:
        order = a_block_order(meta)
        block = block[np.ix_(order, order)]
    return block


def structured_mismatch(h: np.ndarray, meta: PointMeta) -> float:
    """Max entrywise gap between the sorted dense block and the assembled structured matrix."""
    expected = assemble_structured(block_params(meta))
    got = hessian_block(h, meta)
    scale = max(1.0, float(np.max(np.abs(expected))))
    return float(np.max(np.abs(got - expected))) / scale


# ---------------------------------------------------------------------------
# family checks


def check_product_block_structure(expr: FamilyExpr, crit: CriticalSet | None = None,
                                  config: Config | None = None) -> CheckResult:
    """All Hessian entries coupling different factors vanish at every critical point."""
    parts = atoms(expr)
    if len(parts) < 2:
        raise ValueError("block structure needs a product of at least two atoms")
    config = config or Config()
    crit = crit if crit is not None else crit_for_family(expr, config)
    w = family_superpotential(expr)
    mask = np.ones((expr.dim, expr.dim), dtype=bool)
    o = 0
    for a in parts:
        mask[o:o + a.dim, o:o + a.dim] = False
        o += a.dim
    worst = 0.0
    for p in crit:
        h = laurent.hessian_at(w, p.coords)
        worst = max(worst, float(np.max(np.abs(h[mask]))))
    return CheckResult(
        "product_block_structure",
        worst < CROSS_TOL,
        f"max cross-factor |Hessian entry| {worst:.3g} over {len(crit)} points",
        CROSS_TOL - worst,
    )


def check_product_determinant(expr: FamilyExpr, crit: CriticalSet, rtol: float = 1e-9) -> CheckResult:
    w = family_superpotential(expr)
    parts = atoms(expr)
    offsets = np.cumsum([0] + [a.dim for a in parts])
    worst = 0.0
    for p in crit:
        h = laurent.hessian_at(w, p.coords)
        full = dense_det(h)
        blocks = prod(dense_det(h[s:e, s:e]) for s, e in zip(offsets[:-1], offsets[1:]))
        worst = max(worst, abs(full - blocks) / max(abs(full), abs(blocks), 1e-300))
    return CheckResult(
        "product_determinant",
        worst <= rtol,
        f"max relative gap between det(H) and the product of block dets {worst:.3g}",
        rtol - worst,
    )


def check_dp_identities(k: int, config: Config | None = None,
                        roots: Sequence[tuple[int, complex]] | None = None,
                        crit: CriticalSet | None = None) -> list[CheckResult]:
    """Consistency of the del Pezzo reduction at every ``(L, A)``.

    ``roots`` replaces the emitted parameters (used to inject bad values).
    """
    config = config or Config()
    n = 2 * k
    pairs = list(roots) if roots is not None else dp_pairs(k)
    label = f"dp({k})"
    unity, a_zero, chi_gap, chi_nz, not_i, af_bh = [], [], [], [], [], []
    failures = []
    for L, A in pairs:
        unity.append(1e-12 - dp_unity_residual(A, L, n))
        not_i.append(min(abs(A - 1j), abs(A + 1j)) - NONZERO_FLOOR)
        chi = (2 * L - n - 1) * (A + 1 / A) ** 2
        chi_nz.append(abs(chi) - NONZERO_FLOOR)
        try:
            p = dp_params(A, L, n)
            chi_dp(A, L, n)
        except IdentityError as exc:
            failures.append(str(exc))
            a_zero.append(-1.0)
            chi_gap.append(-1.0)
            continue
        a_zero.append(1e-10 - abs(p.a))
        const = quadratic_constant(p)
        chi_gap.append(1e-9 * max(abs(chi), abs(const), 1e-12) - abs(chi - const))
        af_bh.append(min(abs(p.a - p.f), abs(p.b - p.h)) - NONZERO_FLOOR)

    crit = crit if crit is not None else (crit_del_pezzo(k, config) if roots is None else CriticalSet())
    eq3 = []
    for pt in crit:
        x = np.asarray(pt.coords)
        Z = np.prod(x)
        lhs = -(x - 1 / x)
        eq3.append(1e-10 - float(np.max(np.abs(lhs - (Z - 1 / Z)))))

    extra = f"; {len(failures)} parameter identity failures" if failures else ""
    out = [
        _check(f"{label}: A^(2L-n-1) = (-1)^(L-1)", unity, f"{len(pairs)} roots, residual < 1e-12"),
        _check(f"{label}: Hessian diagonal a = 0 on the A-block", a_zero, "|a| < 1e-10" + extra),
        _check(f"{label}: chi = (2L-n-1)(A+1/A)^2 matches the structured constant", chi_gap, "relative 1e-9"),
        _check(f"{label}: chi nonzero", chi_nz, "|chi| > 1e-6"),
        _check(f"{label}: A is not +-i", not_i, "distance > 1e-6"),
        _check(f"{label}: a-f and b-h nonzero", af_bh, "> 1e-6"),
    ]
    if roots is None:
        out.append(_check(f"{label}: -(X_k - 1/X_k) = Z - 1/Z at every point", eq3, f"{len(crit)} points, 1e-10"))
    return out


def _root_separation(p: np.ndarray, q: np.ndarray) -> float:
    rp = aberth(p)
    rq = aberth(q)
    return min(abs(x - y) for x in rp for y in rq)


def check_pdp_cases(k: int, config: Config | None = None) -> list[CheckResult]:
    """Pseudo del Pezzo: quartic pattern, root separation, and nonvanishing at critical ``A``."""
    config = config or Config()
    n = 2 * k
    label = f"pdp({k})"
    pattern, separation, u_nz, relation, relation_b, af_bh, chi_u = [], [], [], [], [], [], []
    sep_detail = []
    for L in range(n + 1):
        u = u_poly_pdp(L, n)
        ok = u[1] == 0 and u[3] == 0 and [int(c) % 2 for c in u] == [1, 0, 0, 0, 1]
        pattern.append(1.0 if ok else -1.0)
        if 2 * L - n in (-2, 0, 2):
            d = _root_separation(u, pdp_polynomial(L, n))
            separation.append(d - NONZERO_FLOOR)
            sep_detail.append(f"L={L}: {d:.3g}")
    for L, A in pdp_pairs(k, config.tolerance_dedupe):
        u = u_poly_pdp(L, n)
        uA = np.polyval(u, A)
        u_nz.append(abs(uA) - 1e-8)
        scale = max(1.0, abs(A), abs(1 / A))
        relation.append(1e-10 * scale - abs(pdp_residual(A, L, n)))
        relation_b.append(1e-10 * scale - abs(pdp_residual_b(-1 / A, L, n)))
        p = pdp_params(A, L, n)
        af_bh.append(min(abs(p.a - p.f), abs(p.b - p.h)) - NONZERO_FLOOR)
        const = quadratic_constant(p)
        chi_u.append(1e-9 * max(abs(const), 1e-12) - abs(uA / A**2 - const))
    return [
        _check(f"{label}: U has zero odd coefficients and reduces to A^4+1 mod 2", pattern, f"L = 0..{n}"),
        _check(f"{label}: roots of U separated from critical roots when 2L-n in {{-2,0,2}}", separation,
               "min distance > 1e-6 (" + ", ".join(sep_detail) + ")"),
        _check(f"{label}: A - 1/A = (-1)^(L+1) A^(2L-n)", relation, "residual < 1e-10"),
        _check(f"{label}: B - 1/B = (-1)^(L+1) B^(n-2L)", relation_b, "residual < 1e-10"),
        _check(f"{label}: a-f and b-h nonzero", af_bh, "> 1e-6"),
        _check(f"{label}: U(A)/A^2 equals the structured constant", chi_u, "relative 1e-9"),
        _check(f"{label}: U(A) nonzero at every critical A", u_nz, "|U(A)| > 1e-8"),
    ]


# ---------------------------------------------------------------------------
# analysis


def _point_records(w, crit: CriticalSet, config: Config):
    recs = []
    entry_gaps, det_gaps, meta_gaps = [], [], []
    for p in crit:
        h = laurent.hessian_at(w, p.coords)
        det = dense_det(h)
        sdet = None
        if p.meta and sum(m.dim for m in p.meta) == p.dim:
            sdet = 1 + 0j
            for m in p.meta:
                sdet *= structured_det(block_params(m))
                entry_gaps.append(STRUCT_ENTRY_TOL - structured_mismatch(h, m))
                meta_gaps.append(1e-10 - _meta_gap(p, m))
            det_gaps.append(STRUCT_DET_RTOL * max(abs(det), abs(sdet), 1e-12) - abs(det - sdet))
        recs.append(PointRecord(p.coords, p.residual, det, sdet, False))
    return recs, entry_gaps, det_gaps, meta_gaps


def _meta_gap(p: CriticalPoint, m: PointMeta) -> float:
    x = np.asarray(p.coords[m.offset:m.offset + m.dim])
    is_a = np.array([bool(m.assignment >> i & 1) for i in range(m.dim)])
    gap = abs(m.A * m.B + 1)
    gap = max(gap, float(np.max(np.abs(np.where(is_a, x - m.A, x - m.B)))))
    if m.family != "seg":
        gap = max(gap, abs(np.prod(x) - m.Z) / max(1.0, abs(m.Z)))
    return gap


def analyze(expr: FamilyExpr, config: Config | None = None) -> SemisimplicityReport:
    config = config or Config()
    parts = atoms(expr)
    expected = expected_count(expr)
    try:
        crit = crit_for_family(expr, config)
        w = family_superpotential(expr)
        recs, entry_gaps, det_gaps, meta_gaps = _point_records(w, crit, config)
        family_checks: list[CheckResult] = []
        seen = set()
        for a in parts:
            if a in seen:
                continue
            seen.add(a)
            if a.kind == "dp":
                family_checks += check_dp_identities(a.k, config)
            elif a.kind == "pdp":
                family_checks += check_pdp_cases(a.k, config)
        if len(parts) > 1:
            family_checks.append(check_product_block_structure(expr, crit, config))
            family_checks.append(check_product_determinant(expr, crit))
    except (SolverError, IdentityError, RootFindingError) as exc:
        return SemisimplicityReport(str(expr), expr.dim, 0, expected, [], 0.0,
                                    [CheckResult("solver", False, str(exc), -1.0)], INCONCLUSIVE)
    return _assemble(str(expr), expr.dim, crit, recs, expected, entry_gaps, det_gaps, meta_gaps,
                     family_checks, config)


def _assemble(label, dim, crit, recs, expected, entry_gaps, det_gaps, meta_gaps, family_checks, config):
    dets = [abs(r.det_hessian) for r in recs]
    max_det = max(dets, default=0.0)
    threshold = config.degeneracy_threshold * max(1.0, max_det)
    for r in recs:
        r.degenerate = abs(r.det_hessian) < threshold
    min_det = min(dets, default=0.0)
    residuals = [r.residual for r in recs]

    count_ok = len(recs) == expected
    checks = [
        CheckResult("critical_count", count_ok, f"{len(recs)} distinct points, expected {expected}",
                    0.0 if count_ok else -float(abs(len(recs) - expected))),
        _check("residuals", [config.tolerance_residual - r for r in residuals],
               f"max |grad W| {max(residuals, default=0.0):.3g} < {config.tolerance_residual:g}"),
        _check("converged", [1.0 if p.converged else -1.0 for p in crit], "Newton refinement converged"),
        _check("nondegenerate", [d - threshold for d in dets],
               f"min |det| {min_det:.6g} > {threshold:.3g}"),
        _check("structure_metadata", meta_gaps, "A*B = -1, X_k in {A, B}, Z = prod X to 1e-10"),
        _check("structured_hessian", entry_gaps, f"A-block-sorted Hessian equals the structured matrix to {STRUCT_ENTRY_TOL:g}"),
        _check("structured_determinant", det_gaps, f"dense det equals the closed form to relative {STRUCT_DET_RTOL:g}"),
    ]
    checks += family_checks

    degenerate = any(r.degenerate for r in recs)
    basics = count_ok and checks[1].passed and checks[2].passed
    if basics and not degenerate and all(c.passed for c in checks):
        verdict = SEMISIMPLE
    elif basics and degenerate:
        verdict = DEGENERATE
    else:
        verdict = INCONCLUSIVE
    return SemisimplicityReport(label, dim, len(recs), expected, recs, float(min_det), checks, verdict)


# ---------------------------------------------------------------------------
# user polytopes


def _atom_vertices(kind: str, n: int) -> set[tuple[int, ...]]:
    verts = {tuple(s if j == i else 0 for j in range(n)) for i in range(n) for s in (1, -1)}
    if kind == "seg":
        return verts
    verts.add((1,) * n)
    if kind == "dp":
        verts.add((-1,) * n)
    return verts


def recognize(p: LatticePolytope) -> tuple[FamilyExpr, list[int]] | None:
    """Factor ``p`` into family atoms by the vertex-set identity of convex-hull products.

    Returns the expression and the list of original coordinates in expression
    order, or ``None`` when no exact factorization exists.
    """
    n = p.dim
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for v in p.vertices:
        support = [i for i, x in enumerate(v) if x]
        if not support:
            return None
        for i in support[1:]:
            parent[find(i)] = find(support[0])
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    blocks = sorted(groups.values())

    found: list[Atom] = []
    covered = 0
    for coords in blocks:
        local = {tuple(v[i] for i in coords) for v in p.vertices if any(v[i] for i in coords)}
        m = len(coords)
        if m == 1 and local == _atom_vertices("seg", 1):
            found.append(Atom("seg"))
        elif m % 2 == 0 and local == _atom_vertices("dp", m):
            found.append(Atom("dp", m // 2))
        elif m % 2 == 0 and local == _atom_vertices("pdp", m):
            found.append(Atom("pdp", m // 2))
        else:
            return None
        covered += len(local)
    if covered != len(p.vertices):
        return None
    expr: FamilyExpr = found[0]
    for a in found[1:]:
        expr = Product(expr, a)
    return expr, [i for b in blocks for i in b]


def _error_report(label: str, dim: int, message: str) -> SemisimplicityReport:
    return SemisimplicityReport(label, dim, 0, 0, [], 0.0, [], None, error=message)


def analyze_polytope(p: LatticePolytope, config: Config | None = None) -> SemisimplicityReport:
    """Analyze a user polytope by recognizing it as a product of family atoms.

    Predicate failures produce a report with ``error`` set and no verdict;
    an unrecognized reflexive smooth polytope is INCONCLUSIVE.
    """
    config = config or Config()
    label = f"polytope with {len(p.vertices)} vertices in dimension {p.dim}"
    try:
        if not is_reflexive(p):
            return _error_report(label, p.dim, "polytope is not reflexive")
        if not is_smooth(p):
            return _error_report(label, p.dim, "polytope is not smooth")
    except PolytopeError as exc:
        return _error_report(label, p.dim, str(exc))
    found = recognize(p)
    if found is None:
        return SemisimplicityReport(label, p.dim, 0, 0, [], 0.0,
                                    [CheckResult("recognition", False, "unrecognized polytope", -1.0)],
                                    INCONCLUSIVE)
    expr, order = found
    if expr.dim > config.max_dim:
        return _error_report(str(expr), p.dim, f"dimension {expr.dim} exceeds the configured maximum {config.max_dim}")
    report = analyze(expr, config)
    if order != list(range(p.dim)):
        inv = [0] * p.dim
        for j, i in enumerate(order):
            inv[i] = j
        for r in report.points:
            r.coords = tuple(r.coords[inv[i]] for i in range(p.dim))
        report.points.sort(key=lambda r: tuple((round(z.real, 9) + 0.0, round(z.imag, 9) + 0.0) for z in r.coords))
        report.coordinate_order = order
    return report


# ---------------------------------------------------------------------------
# closed-form determinant property harness


@dataclass
class LemmaSummary:
    trials: int
    max_n: int
    seed: int
    worst_det_rel: float
    worst_eig_rel: float
    det_failures: int
    eig_failures: int

    @property
    def passed(self) -> bool:
        return self.det_failures == 0 and self.eig_failures == 0

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "max_n": self.max_n,
            "seed": self.seed,
            "worst_det_rel": self.worst_det_rel,
            "worst_eig_rel": self.worst_eig_rel,
            "det_failures": self.det_failures,
            "eig_failures": self.eig_failures,
            "passed": self.passed,
        }


def random_params(rng: np.random.Generator, n: int, L: int) -> StructuredParams:
    z = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    return StructuredParams(*(complex(v) for v in z), L=L, n=n)


def eigen_gap(p: StructuredParams, eigen_fn=None) -> float:
    """Relative distance between the closed-form spectrum and a dense eigensolver's, optimally matched."""
    eigen_fn = eigen_fn or structured_eigen
    closed = np.array([v for v, k in eigen_fn(p) for _ in range(k)], dtype=complex)
    dense = np.linalg.eigvals(assemble_structured(p))
    cost = np.abs(closed[:, None] - dense[None, :])
    rows, cols = linear_sum_assignment(cost)
    scale = max(float(np.max(np.abs(dense))), 1e-12)
    return float(cost[rows, cols].max()) / scale


def lemma_trials(trials: int = 1000, max_n: int = 12, seed: int = 0, det_fn=structured_det,
                 det_rtol: float = 1e-9, eig_rtol: float = 1e-8) -> LemmaSummary:
    """Closed-form vs dense LU determinant (and spectrum) on random structured matrices.

    Every fourth trial forces ``L = 0`` and the next one ``L = n`` so the edge
    formulas are always exercised.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = np.random.default_rng(seed)
    worst_det = worst_eig = 0.0
    det_fail = eig_fail = 0
    for t in range(trials):
        n = int(rng.integers(1, max_n + 1))
        L = 0 if t % 4 == 0 else n if t % 4 == 1 else int(rng.integers(0, n + 1))
        p = random_params(rng, n, L)
        s = det_fn(p)
        d = dense_det(assemble_structured(p))
        rel = abs(s - d) / max(abs(s), abs(d), 1e-300)
        worst_det = max(worst_det, rel)
        det_fail += rel > det_rtol
        e = eigen_gap(p)
        worst_eig = max(worst_eig, e)
        eig_fail += e > eig_rtol
    return LemmaSummary(trials, max_n, seed, worst_det, worst_eig, det_fail, eig_fail)
