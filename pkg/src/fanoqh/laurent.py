"""Sparse Laurent polynomials with exact rational coefficients.

Evaluation happens in complex double precision (vectorized with numpy) or,
with ``precision="high"``, in mpmath at :data:`HIGH_DPS` significant digits.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import mpmath
import numpy as np

from .polytope import LatticePolytope

HIGH_DPS = 32

Exps = tuple[int, ...]


class TorusError(ValueError):
    """Evaluation point has a zero coordinate."""


class LaurentPoly:
    """Immutable map from exponent vectors to nonzero rational coefficients."""

    def __init__(self, dim: int, terms: Mapping[Sequence[int], object] | Iterable = ()):
        if dim < 1:
            raise ValueError("dimension must be positive")
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Exps, Fraction] = {}
        for e, c in items:
            e = tuple(int(x) for x in e)
            if len(e) != dim:
                raise ValueError(f"exponent {e} does not have length {dim}")
            acc[e] = acc.get(e, Fraction(0)) + Fraction(c)
        self.dim = dim
        self._terms: tuple[tuple[Exps, Fraction], ...] = tuple(sorted((e, c) for e, c in acc.items() if c != 0))

    @property
    def terms(self) -> dict[Exps, Fraction]:
        return dict(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.dim == other.dim and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.dim, self._terms))

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        return add(self, other)

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in self._terms:
            mono = "*".join(f"X{i + 1}^{k}" if k != 1 else f"X{i + 1}" for i, k in enumerate(e) if k)
            if not mono:
                parts.append(str(c))
            else:
                parts.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(parts)

    def to_json(self) -> list[dict]:
        return [{"exps": list(e), "coeff": str(c)} for e, c in self._terms]

    @classmethod
    def from_json(cls, dim: int, data: list[dict]) -> "LaurentPoly":
        return cls(dim, [(t["exps"], Fraction(t["coeff"])) for t in data])

    # numeric views, built once per polynomial
    @cached_property
    def _exp_array(self) -> np.ndarray:
        if not self._terms:
            return np.zeros((0, self.dim), dtype=np.int64)
        return np.array([e for e, _ in self._terms], dtype=np.int64)

    @cached_property
    def _coef_array(self) -> np.ndarray:
        return np.array([float(c) for _, c in self._terms], dtype=complex)


def add(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    if p.dim != q.dim:
        raise ValueError(f"dimension mismatch: {p.dim} vs {q.dim}")
    return LaurentPoly(p.dim, list(p._terms) + list(q._terms))


def zero(dim: int) -> LaurentPoly:
    return LaurentPoly(dim, {})


def embed(w: LaurentPoly, total_dim: int, offset: int) -> LaurentPoly:
    """Place ``w`` on the coordinates ``[offset, offset + w.dim)`` of a larger torus."""
    if offset < 0 or offset + w.dim > total_dim:
        raise ValueError(f"cannot embed dimension {w.dim} at offset {offset} into {total_dim}")
    pre = (0,) * offset
    post = (0,) * (total_dim - offset - w.dim)
    return LaurentPoly(total_dim, [(pre + e + post, c) for e, c in w._terms])


def superpotential(p: LatticePolytope) -> LaurentPoly:
    """One monomial ``x^v`` with coefficient 1 per vertex ``v`` of ``p``."""
    p.require_interior_origin()
    return LaurentPoly(p.dim, [(v, 1) for v in p.vertices])


def partial(w: LaurentPoly, k: int) -> LaurentPoly:
    if not 0 <= k < w.dim:
        raise IndexError(f"axis {k} out of range for dimension {w.dim}")
    out = []
    for e, c in w._terms:
        if e[k]:
            e2 = e[:k] + (e[k] - 1,) + e[k + 1:]
            out.append((e2, c * e[k]))
    return LaurentPoly(w.dim, out)


def _check_point(w: LaurentPoly, p: Sequence) -> None:
    if len(p) != w.dim:
        raise ValueError(f"point has {len(p)} coordinates, polynomial has {w.dim}")
    if any(x == 0 for x in p):
        raise TorusError("evaluation point must lie on the torus (no zero coordinate)")


def _monomials(w: LaurentPoly, p: np.ndarray) -> np.ndarray:
    return w._coef_array * np.prod(p[None, :] ** w._exp_array, axis=1)


def _mp_monomials(w: LaurentPoly, p: Sequence) -> list:
    out = []
    for e, c in w._terms:
        m = mpmath.mpf(c.numerator) / c.denominator
        for x, k in zip(p, e):
            if k:
                m *= x**k
        out.append(m)
    return out


def eval(w: LaurentPoly, p: Sequence, precision: str = "double"):  # noqa: A001
    _check_point(w, p)
    if precision == "high":
        with mpmath.workdps(HIGH_DPS):
            return mpmath.fsum(_mp_monomials(w, [mpmath.mpc(x) for x in p]))
    return complex(_monomials(w, np.asarray(p, dtype=complex)).sum())


def gradient_at(w: LaurentPoly, p: Sequence, precision: str = "double"):
    """``dW/dX_k = sum_e c e_k x^e / X_k``."""
    _check_point(w, p)
    if precision == "high":
        with mpmath.workdps(HIGH_DPS):
            x = [mpmath.mpc(v) for v in p]
            mons = _mp_monomials(w, x)
            return [
                mpmath.fsum(m * e[k] for m, (e, _) in zip(mons, w._terms)) / x[k] for k in range(w.dim)
            ]
    x = np.asarray(p, dtype=complex)
    mons = _monomials(w, x)
    return (mons @ w._exp_array) / x


def hessian_at(w: LaurentPoly, p: Sequence, precision: str = "double"):
    """``d2W/dX_j dX_k = sum_e c e_j (e_k - [j = k]) x^e / (X_j X_k)``."""
    _check_point(w, p)
    if precision == "high":
        with mpmath.workdps(HIGH_DPS):
            x = [mpmath.mpc(v) for v in p]
            mons = _mp_monomials(w, x)
            n = w.dim
            h = mpmath.matrix(n, n)
            for j in range(n):
                for k in range(j, n):
                    s = mpmath.fsum(
                        m * e[j] * (e[k] - (j == k)) for m, (e, _) in zip(mons, w._terms)
                    )
                    h[j, k] = h[k, j] = s / (x[j] * x[k])
            return h
    x = np.asarray(p, dtype=complex)
    mons = _monomials(w, x)
    e = w._exp_array
    h = (e.T * mons) @ e - np.diag(mons @ e)
    h = h / np.outer(x, x)
    # BLAS summation order is not symmetric; restore exact symmetry
    return (h + h.T) / 2
