import itertools
import math
from math import factorial

import numpy as np
import pytest
import sympy

from fanoqh.polytope import make_del_pezzo, make_pseudo_del_pezzo, make_segment


def brute_force_facets(vertices):
    """Facets from every affinely independent d-subset whose hyperplane supports all vertices."""
    verts = [tuple(v) for v in vertices]
    d = len(verts[0])
    found = set()
    for subset in itertools.combinations(verts, d):
        rows = sympy.Matrix([[a - b for a, b in zip(v, subset[0])] for v in subset[1:]]) if d > 1 else sympy.zeros(0, 1)
        ns = rows.nullspace() if d > 1 else [sympy.Matrix([1])]
        if len(ns) != 1:
            continue
        nrm = ns[0]
        nrm = [int(x * math.lcm(*[sympy.Rational(y).q for y in nrm])) for x in nrm]
        g = math.gcd(*nrm)
        nrm = [x // g for x in nrm]
        off = sum(a * b for a, b in zip(nrm, subset[0]))
        sides = {(s > 0) - (s < 0) for s in (sum(a * b for a, b in zip(nrm, v)) - off for v in verts)}
        if sides <= {0, -1}:
            found.add((tuple(nrm), off))
        elif sides <= {0, 1}:
            found.add((tuple(-x for x in nrm), -off))
    return found


def scipy_normalized_volume(vertices):
    from scipy.spatial import ConvexHull

    pts = np.asarray(vertices, dtype=float)
    d = pts.shape[1]
    if d == 1:
        return float(pts.max() - pts.min())
    return ConvexHull(pts).volume * factorial(d)


@pytest.fixture(scope="session")
def atoms_small():
    return {
        "seg": make_segment(),
        "dp(1)": make_del_pezzo(1),
        "pdp(1)": make_pseudo_del_pezzo(1),
        "dp(2)": make_del_pezzo(2),
        "pdp(2)": make_pseudo_del_pezzo(2),
    }


def random_torus_point(rng, n):
    r = rng.uniform(0.5, 2.0, n)
    t = rng.uniform(0, 2 * np.pi, n)
    return r * np.exp(1j * t)
