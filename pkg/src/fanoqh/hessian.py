"""Two-block structured symmetric matrices and their closed-form determinant.

The matrix ``M(a, f, b, h, d; L, n)`` has an ``L x L`` block with ``a`` on
the diagonal and ``f`` elsewhere, an ``(n-L) x (n-L)`` block with ``b`` and
``h``, and every cross entry equal to ``d``.  Hessians of the del Pezzo and
pseudo del Pezzo superpotentials at critical points have this shape once the
coordinates equal to ``A`` are listed first.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .relations import dp_unity_residual, pdp_residual

RELATION_TOL = 1e-10


class IdentityError(ArithmeticError):
    """Two algebraically equal expressions disagreed numerically."""


@dataclass(frozen=True)
class StructuredParams:
    a: complex
    f: complex
    b: complex
    h: complex
    d: complex
    L: int
    n: int

    def __post_init__(self):
        if self.n < 1 or not 0 <= self.L <= self.n:
            raise ValueError(f"need n >= 1 and 0 <= L <= n, got L={self.L}, n={self.n}")

    @property
    def alpha_top(self) -> complex:
        """Eigenvalue ``a + (L-1) f`` of the first block on the all-ones vector."""
        return self.a + (self.L - 1) * self.f

    @property
    def delta_top(self) -> complex:
        return self.b + (self.n - self.L - 1) * self.h


def rel_close(x, y, rtol: float, floor: float = 1e-12) -> bool:
    return abs(x - y) <= rtol * max(abs(x), abs(y), floor)


def assemble_structured(p: StructuredParams) -> np.ndarray:
    n, L = p.n, p.L
    m = np.empty((n, n), dtype=complex)
    m[:L, :L] = p.f
    m[L:, L:] = p.h
    m[:L, L:] = p.d
    m[L:, :L] = p.d
    idx = np.arange(n)
    m[idx[:L], idx[:L]] = p.a
    m[idx[L:], idx[L:]] = p.b
    return m


def quadratic_constant(p: StructuredParams) -> complex:
    """``(a + f(L-1)) (b + (n-L-1) h) - d^2 L (n-L)``."""
    return p.alpha_top * p.delta_top - p.d**2 * p.L * (p.n - p.L)


def structured_det(p: StructuredParams) -> complex:
    n, L = p.n, p.L
    if L == 0:
        return (p.b - p.h) ** (n - 1) * (p.b + (n - 1) * p.h)
    if L == n:
        return (p.a - p.f) ** (n - 1) * (p.a + (n - 1) * p.f)
    return (p.a - p.f) ** (L - 1) * (p.b - p.h) ** (n - L - 1) * quadratic_constant(p)


def structured_eigen(p: StructuredParams) -> list[tuple[complex, int]]:
    """Eigenvalues with multiplicities; entries of multiplicity zero are omitted."""
    n, L = p.n, p.L
    if L == 0:
        out = [(p.b - p.h, n - 1), (p.b + (n - 1) * p.h, 1)]
    elif L == n:
        out = [(p.a - p.f, n - 1), (p.a + (n - 1) * p.f, 1)]
    else:
        # restriction to span(v, w): [[alpha_top, d (n-L)], [d L, delta_top]]
        s, t = p.alpha_top, p.delta_top
        if p.d == 0:
            r1, r2 = s, t
        else:
            tr = s + t
            disc = cmath.sqrt((s - t) ** 2 + 4 * p.d**2 * L * (n - L))
            r1 = (tr + disc) / 2 if abs(tr + disc) >= abs(tr - disc) else (tr - disc) / 2
            const = quadratic_constant(p)
            r2 = const / r1 if r1 != 0 else tr - r1
        out = [(p.a - p.f, L - 1), (p.b - p.h, n - L - 1), (r1, 1), (r2, 1)]
    return [(v, k) for v, k in out if k > 0]


def dense_det(m: np.ndarray) -> complex:
    """LU with partial pivoting in complex arithmetic; 0 for an exactly singular matrix."""
    a = np.array(m, dtype=complex)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    det = 1 + 0j
    for k in range(n):
        piv = k + int(np.argmax(np.abs(a[k:, k])))
        if a[piv, k] == 0:
            return 0j
        if piv != k:
            a[[k, piv]] = a[[piv, k]]
            det = -det
        det *= a[k, k]
        a[k + 1:, k] /= a[k, k]
        a[k + 1:, k + 1:] -= np.outer(a[k + 1:, k], a[k, k + 1:])
    return complex(det)


def _agree(name: str, x: complex, y: complex, rtol: float = RELATION_TOL, scale: float = 1.0) -> None:
    if not rel_close(x, y, rtol, scale):
        raise IdentityError(f"{name}: {x} != {y}")


def dp_params(A: complex, L: int, n: int) -> StructuredParams:
    """Hessian blocks of the del Pezzo superpotential at the critical point of type ``(L, A)``.

    Returns the raw second-derivative values at ``X_1 = A``, ``X_2 = B = -1/A``
    after checking them against the power forms and the simplified forms
    ``a = 0``, ``b = -2A^3 - 2A``, ``f = -1/A - 1/A^3``, ``h = -A^3 - A``,
    ``d = A + 1/A``.
    """
    if n % 2:
        raise ValueError("del Pezzo dimension must be even")
    if dp_unity_residual(A, L, n) > RELATION_TOL:
        raise IdentityError(f"A={A} does not satisfy A^(2L-n-1) = (-1)^(L-1) for L={L}, n={n}")
    B = -1 / A
    k = n - L
    a = 2 / A**3 + 2 * A ** -(L + 2) * B**-k
    b = 2 / B**3 + 2 * A**-L * B ** -(k + 2)
    f = A ** (L - 2) * B**k + A ** -(L + 2) * B**-k
    h = A**L * B ** (k - 2) + A**-L * B ** -(k + 2)
    d = A ** (L - 1) * B ** (k - 1) + A ** -(L + 1) * B ** -(k + 1)

    sg = (-1) ** L
    power = {
        "a": 2 / A**3 + sg * 2 * A ** (n - 2 * L - 2),
        "b": -2 * A**3 + sg * 2 * A ** (n - 2 * L + 2),
        "f": sg * A ** (2 * L - n - 2) + sg * A ** (n - 2 * L - 2),
        "h": sg * A ** (2 * L - n + 2) + sg * A ** (n - 2 * L + 2),
        "d": -sg * A ** (2 * L - n) - sg * A ** (n - 2 * L),
    }
    simple = {"a": 0, "b": -2 * A**3 - 2 * A, "f": -1 / A - 1 / A**3, "h": -A**3 - A, "d": A + 1 / A}
    raw = {"a": a, "b": b, "f": f, "h": h, "d": d}
    for key in raw:
        _agree(f"dp {key} (power form)", raw[key], power[key])
        if key == "a":
            if abs(raw[key]) > RELATION_TOL * max(1.0, abs(b)):
                raise IdentityError(f"dp a should vanish, got {raw[key]}")
        else:
            _agree(f"dp {key} (simplified)", raw[key], simple[key])
    return StructuredParams(a, f, b, h, d, L, n)


def chi_dp(A: complex, L: int, n: int) -> complex:
    """``(2L - n - 1)(A + 1/A)^2``; checked against the structured constant when ``A`` is admissible."""
    if n % 2:
        raise ValueError("del Pezzo dimension must be even")
    chi = (2 * L - n - 1) * (A + 1 / A) ** 2
    if dp_unity_residual(A, L, n) <= RELATION_TOL:
        _agree("dp chi", chi, quadratic_constant(dp_params(A, L, n)), 1e-9)
    return chi


def pdp_params(A: complex, L: int, n: int) -> StructuredParams:
    """Hessian blocks of the pseudo del Pezzo superpotential at the critical point of type ``(L, A)``.

    The raw values ``a = 2/A^3``, ``b = 2/B^3``, ``f = A^(L-2) B^(n-L)``,
    ``h = A^L B^(n-L-2)``, ``d = A^(L-1) B^(n-L-1)`` are checked against
    their power forms in ``A`` and against ``f = -(A - 1/A)/A^2``,
    ``h = -(A - 1/A) A^2``, ``d = A - 1/A``, which use the critical relation.
    """
    if n % 2:
        raise ValueError("pseudo del Pezzo dimension must be even")
    if abs(pdp_residual(A, L, n)) > RELATION_TOL * max(1.0, abs(A), abs(1 / A)):
        raise IdentityError(f"A={A} does not satisfy the pseudo del Pezzo relation for L={L}, n={n}")
    B = -1 / A
    k = n - L
    a = 2 / A**3
    b = 2 / B**3
    f = A ** (L - 2) * B**k
    h = A**L * B ** (k - 2)
    d = A ** (L - 1) * B ** (k - 1)

    sg = (-1) ** L
    s = A - 1 / A
    power = {"b": -2 * A**3, "f": sg * A ** (2 * L - n - 2), "h": sg * A ** (2 * L - n + 2), "d": -sg * A ** (2 * L - n)}
    simple = {"f": -s / A**2, "h": -s * A**2, "d": s}
    raw = {"b": b, "f": f, "h": h, "d": d}
    for key, val in raw.items():
        _agree(f"pdp {key} (power form)", val, power[key])
        if key in simple:
            _agree(f"pdp {key} (simplified)", val, simple[key])
    return StructuredParams(a, f, b, h, d, L, n)


def pdp_simplified_params(A: complex, L: int, n: int) -> StructuredParams:
    """Pseudo del Pezzo blocks as functions of ``A`` alone, valid at admissible ``A``."""
    s = A - 1 / A
    return StructuredParams(2 / A**3, -s / A**2, -2 * A**3, -s * A**2, s, L, n)


_U_SAMPLES = (0.7 + 0.2j, -1.3 + 0.5j, 0.4 - 1.1j, 2.1 + 0.3j, -0.6 - 0.9j, 1.7j, -2.4 + 0j, 0.9 + 1.4j, -1.1 - 1.6j)


def u_poly_pdp(L: int, n: int) -> np.ndarray:
    """Quartic ``U`` with ``U(A) = A^2 * quadratic_constant`` on admissible pseudo del Pezzo points.

    ``U(A) = (2L-n-1) A^4 - 2 A^2 + (n-2L-1)``, highest degree first.  The
    identity is re-checked at fixed sample points using the simplified block
    values, which are rational functions of ``A`` only.
    """
    if n % 2:
        raise ValueError("pseudo del Pezzo dimension must be even")
    coeffs = np.array([2 * L - n - 1, 0, -2, 0, n - 2 * L - 1], dtype=np.int64)
    for A in _U_SAMPLES:
        lhs = np.polyval(coeffs, A)
        rhs = A**2 * quadratic_constant(pdp_simplified_params(A, L, n))
        _agree(f"U(A) for L={L}, n={n} at A={A}", lhs, rhs, 1e-9)
    return coeffs
