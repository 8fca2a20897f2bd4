"""Simultaneous (Aberth-Ehrlich) root finding for univariate polynomials."""

from __future__ import annotations

import cmath
import math
from typing import Sequence

import numpy as np


class RootFindingError(RuntimeError):
    pass


def _horner(coeffs: Sequence[complex], z: complex) -> tuple[complex, complex]:
    p = 0j
    dp = 0j
    for c in coeffs:
        dp = dp * z + p
        p = p * z + c
    return p, dp


def aberth(coeffs: Sequence[complex], tol: float = 1e-15, max_iter: int = 500) -> list[complex]:
    """All complex roots of ``sum coeffs[i] z^(deg - i)``.

    Starting points lie on a circle of radius given by the Cauchy bound, with
    an irrational angular offset so no start is a fixed point of symmetric
    polynomials.  Each converged root gets a final Newton polish.
    """
    c = [complex(x) for x in coeffs]
    while c and c[0] == 0:
        c.pop(0)
    deg = len(c) - 1
    if deg < 1:
        return []
    c = [x / c[0] for x in c]
    radius = 1 + max(abs(x) for x in c[1:])
    z = [radius * 0.5 * cmath.exp(1j * (2 * math.pi * j / deg + 0.4)) for j in range(deg)]
    done = [False] * deg
    for _ in range(max_iter):
        for i in range(deg):
            if done[i]:
                continue
            p, dp = _horner(c, z[i])
            if p == 0:
                done[i] = True
                continue
            ratio = p / dp if dp != 0 else complex(radius)
            repulse = sum(1 / (z[i] - z[j]) for j in range(deg) if j != i)
            step = ratio / (1 - ratio * repulse)
            z[i] -= step
            if abs(step) <= tol * max(1.0, abs(z[i])):
                done[i] = True
        if all(done):
            break
    else:
        raise RootFindingError(f"Aberth iteration did not converge for degree {deg}")
    return [polish(c, r) for r in z]


def polish(coeffs: Sequence[complex], z: complex, steps: int = 3) -> complex:
    for _ in range(steps):
        p, dp = _horner(coeffs, z)
        if dp == 0 or p == 0:
            break
        z2 = z - p / dp
        if abs(_horner(coeffs, z2)[0]) >= abs(p):
            break
        z = z2
    return z


def companion_roots(coeffs: Sequence[complex]) -> np.ndarray:
    """Eigenvalues of the companion matrix; an independent cross-check for :func:`aberth`."""
    return np.roots(np.asarray(coeffs, dtype=complex))
