"""Univariate critical relations of the del Pezzo and pseudo del Pezzo superpotentials.

At a critical point of either family every coordinate is one of two roots
``A``, ``B = -1/A`` of a quadratic, with ``L`` coordinates equal to ``A``.
Writing ``n = 2k`` and ``Z`` for the product of all coordinates:

* del Pezzo: ``X^2 + (Z - 1/Z) X - 1 = 0`` has roots ``-Z`` and ``1/Z``; with
  ``A = -Z`` this forces ``A^(2L-n-1) = (-1)^(L-1)``.
* pseudo del Pezzo: ``X^2 + Z X - 1 = 0`` has roots summing to ``-Z``; with
  ``Z = (-1)^L A^(2L-n)`` this gives ``A - 1/A = (-1)^(L+1) A^(2L-n)``.
"""

from __future__ import annotations

import cmath

import numpy as np


def dp_exponent(L: int, n: int) -> int:
    return 2 * L - n - 1


def dp_unity_residual(A: complex, L: int, n: int) -> float:
    """``|A^(2L-n-1) - (-1)^(L-1)|``."""
    return abs(A ** dp_exponent(L, n) - (-1) ** (L - 1))


def dp_roots(L: int, n: int) -> list[complex]:
    """All ``|2L-n-1|`` solutions of ``A^(2L-n-1) = (-1)^(L-1)``, ordered by angle."""
    m = abs(dp_exponent(L, n))
    # A^m = c and A^-m = c have the same roots when c = +-1
    theta = 0.0 if (L - 1) % 2 == 0 else 1.0
    return [cmath.exp(1j * cmath.pi * (theta + 2 * j) / m) for j in range(m)]


def pdp_sign(L: int) -> int:
    return -1 if L % 2 == 0 else 1


def pdp_residual(A: complex, L: int, n: int) -> complex:
    """``A - 1/A - (-1)^(L+1) A^(2L-n)``; zero exactly at admissible ``A``."""
    return A - 1 / A - pdp_sign(L) * A ** (2 * L - n)


def pdp_residual_b(B: complex, L: int, n: int) -> complex:
    """Same relation written for the other root: ``B - 1/B - (-1)^(L+1) B^(n-2L)``."""
    return B - 1 / B - pdp_sign(L) * B ** (n - 2 * L)


def pdp_polynomial(L: int, n: int) -> np.ndarray:
    """Integer coefficients (highest degree first) of the cleared pseudo del Pezzo relation.

    ``m = 2L - n >= 0``: ``A^2 - 1 - s A^(m+1)``;
    ``m < 0``: ``A^(1-m) - A^(-m-1) - s`` (already divided by the common factor ``A``).
    """
    m = 2 * L - n
    s = pdp_sign(L)
    coeffs: dict[int, int] = {}

    def put(deg: int, c: int) -> None:
        coeffs[deg] = coeffs.get(deg, 0) + c

    if m >= 0:
        put(2, 1)
        put(0, -1)
        put(m + 1, -s)
    else:
        put(1 - m, 1)
        put(-m - 1, -1)
        put(0, -s)
    deg = max(d for d, c in coeffs.items() if c)
    out = np.zeros(deg + 1, dtype=np.int64)
    for d, c in coeffs.items():
        out[deg - d] += c
    if out[0] < 0:
        out = -out
    return out
