"""Quadrature rules on segments, triangles and simple polygons.

Polygon rules are built by fan-triangulating convex polygons from the
centroid (ear clipping for the non-convex case) and composing a collapsed
tensor-product Gauss rule on each triangle, so they are exact for bivariate
polynomials up to the requested degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .geometry import ear_clip, is_convex, polygon_area, polygon_centroid


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and positive weights; weights sum to the measure of the domain."""

    points: np.ndarray  # (n, 2)
    weights: np.ndarray  # (n,)

    def integrate(self, values: np.ndarray) -> float:
        return float(self.weights @ np.asarray(values, dtype=float))

    def __len__(self) -> int:
        return len(self.weights)


@lru_cache(maxsize=None)
def _leggauss(n: int):
    nodes, weights = np.polynomial.legendre.leggauss(n)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def gauss_segment(p0, p1, degree: int) -> QuadratureRule:
    """Gauss-Legendre rule on the segment p0-p1, exact for polynomials of
    the given degree along the segment; weights sum to the segment length."""
    p0 = np.asarray(p0, dtype=float)
    p1 = np.asarray(p1, dtype=float)
    length = float(np.hypot(*(p1 - p0)))
    if length == 0.0:
        raise ValueError("zero-length segment")
    n = max(1, degree // 2 + 1)
    t, w = _leggauss(n)
    points = 0.5 * (p0 + p1)[None, :] + 0.5 * np.outer(t, p1 - p0)
    return QuadratureRule(points, 0.5 * length * w.copy())


@lru_cache(maxsize=None)
def _reference_triangle_rule(degree: int):
    # Collapse the square [0,1]^2 onto the reference triangle via
    # (a, b) -> (a, b*(1-a)); the jacobian (1-a) raises the degree in a by
    # one, hence degree+1 Gauss accuracy is needed in that direction.
    na = (degree + 1) // 2 + 1
    nb = degree // 2 + 1
    ta, wa = _leggauss(na)
    tb, wb = _leggauss(nb)
    A, B = np.meshgrid(0.5 * (ta + 1.0), 0.5 * (tb + 1.0), indexing="ij")
    WA, WB = np.meshgrid(0.5 * wa, 0.5 * wb, indexing="ij")
    xi = A.ravel()
    eta = (B * (1.0 - A)).ravel()
    wts = (WA * WB * (1.0 - A)).ravel()
    xi.setflags(write=False)
    eta.setflags(write=False)
    wts.setflags(write=False)
    return xi, eta, wts


def triangle_rule(v0, v1, v2, degree: int) -> QuadratureRule:
    """Rule exact to `degree` on the triangle (v0, v1, v2)."""
    v0 = np.asarray(v0, dtype=float)
    v1 = np.asarray(v1, dtype=float)
    v2 = np.asarray(v2, dtype=float)
    xi, eta, wts = _reference_triangle_rule(degree)
    jac = (v1[0] - v0[0]) * (v2[1] - v0[1]) - (v1[1] - v0[1]) * (v2[0] - v0[0])
    if jac <= 0.0:
        raise ValueError("triangle vertices must be counterclockwise")
    points = v0[None, :] + np.outer(xi, v1 - v0) + np.outer(eta, v2 - v0)
    return QuadratureRule(points, wts * jac)


def polygon_quadrature(vertices, degree: int) -> QuadratureRule:
    """Rule exact to `degree` on a simple CCW polygon.

    Convex polygons (180 degree corners allowed) are fanned from the
    centroid; non-convex ones fall back to ear clipping. All weights stay
    positive either way.
    """
    verts = np.asarray(vertices, dtype=float)
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    area = polygon_area(verts)
    scale = max(np.abs(verts).max(), 1.0) ** 2
    if abs(area) <= 1e-14 * scale:
        raise ValueError("degenerate (zero-area) polygon")
    if area < 0.0:
        raise ValueError("polygon vertices must be counterclockwise")

    n = len(verts)
    if n == 3:
        return triangle_rule(verts[0], verts[1], verts[2], degree)

    if is_convex(verts):
        center = polygon_centroid(verts)
        tris = []
        for i in range(n):
            a, b = verts[i], verts[(i + 1) % n]
            jac = (a[0] - center[0]) * (b[1] - center[1]) - (a[1] - center[1]) * (b[0] - center[0])
            if jac > 1e-14 * scale:
                tris.append((center, a, b))
    else:
        tris = [(verts[i], verts[j], verts[m]) for i, j, m in ear_clip(verts)]

    pieces = [triangle_rule(a, b, c, degree) for a, b, c in tris]
    points = np.vstack([r.points for r in pieces])
    weights = np.concatenate([r.weights for r in pieces])
    return QuadratureRule(points, weights)
