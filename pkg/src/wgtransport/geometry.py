"""Planar polygon primitives shared by the mesh and quadrature layers.

All polygons are given as (n, 2) float arrays of vertices in counterclockwise
order. Collinear (180 degree) vertices are allowed.
"""

from __future__ import annotations

import numpy as np


def polygon_area(verts: np.ndarray) -> float:
    """Signed area by the shoelace formula (positive for CCW order)."""
    x, y = verts[:, 0], verts[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def polygon_centroid(verts: np.ndarray) -> np.ndarray:
    """Area centroid of a simple polygon."""
    x, y = verts[:, 0], verts[:, 1]
    cross = x * np.roll(y, -1) - np.roll(x, -1) * y
    area = 0.5 * cross.sum()
    cx = float(((x + np.roll(x, -1)) * cross).sum()) / (6.0 * area)
    cy = float(((y + np.roll(y, -1)) * cross).sum()) / (6.0 * area)
    return np.array([cx, cy])


def polygon_diameter(verts: np.ndarray) -> float:
    """Largest pairwise vertex distance."""
    diff = verts[:, None, :] - verts[None, :, :]
    return float(np.sqrt((diff * diff).sum(axis=-1)).max())


def polygon_perimeter(verts: np.ndarray) -> float:
    edges = np.roll(verts, -1, axis=0) - verts
    return float(np.hypot(edges[:, 0], edges[:, 1]).sum())


def is_convex(verts: np.ndarray, rel_tol: float = 1e-12) -> bool:
    """True when every corner turns left or is straight (CCW input)."""
    a = verts
    b = np.roll(verts, -1, axis=0)
    c = np.roll(verts, -2, axis=0)
    cross = (b[:, 0] - a[:, 0]) * (c[:, 1] - b[:, 1]) - (b[:, 1] - a[:, 1]) * (c[:, 0] - b[:, 0])
    scale = polygon_diameter(verts) ** 2
    return bool((cross >= -rel_tol * scale).all())


def point_on_segment(p, a, b, tol: float) -> bool:
    """Whether p lies on segment a-b within absolute distance tol."""
    d = b - a
    length2 = float(d @ d)
    if length2 == 0.0:
        return bool(np.hypot(*(p - a)) <= tol)
    t = float((p - a) @ d) / length2
    t = min(1.0, max(0.0, t))
    closest = a + t * d
    return bool(np.hypot(*(p - closest)) <= tol)


def point_in_polygon(p, verts: np.ndarray, tol: float | None = None) -> bool:
    """Boundary-inclusive containment test (crossing number)."""
    if tol is None:
        tol = 1e-12 * max(polygon_diameter(verts), 1.0)
    n = len(verts)
    for i in range(n):
        if point_on_segment(np.asarray(p, dtype=float), verts[i], verts[(i + 1) % n], tol):
            return True
    px, py = float(p[0]), float(p[1])
    inside = False
    for i in range(n):
        ax, ay = verts[i]
        bx, by = verts[(i + 1) % n]
        if (ay > py) != (by > py):
            xint = ax + (py - ay) * (bx - ax) / (by - ay)
            if px < xint:
                inside = not inside
    return inside


def _point_in_triangle(p, a, b, c, scale: float) -> bool:
    # closed triangle, used only for ear validity checks
    eps = -1e-14 * scale
    d1 = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
    d2 = (c[0] - b[0]) * (p[1] - b[1]) - (c[1] - b[1]) * (p[0] - b[0])
    d3 = (a[0] - c[0]) * (p[1] - c[1]) - (a[1] - c[1]) * (p[0] - c[0])
    return d1 >= eps and d2 >= eps and d3 >= eps


def ear_clip(verts: np.ndarray) -> list[tuple[int, int, int]]:
    """Triangulate a simple CCW polygon into vertex-index triples.

    Collinear vertices are dropped silently (their ears are degenerate).
    """
    ids = list(range(len(verts)))
    scale = polygon_diameter(verts) ** 2
    tris: list[tuple[int, int, int]] = []
    guard = 0
    while len(ids) > 3:
        guard += 1
        if guard > 10 * len(verts) ** 2:
            raise ValueError("ear clipping failed; polygon may be non-simple")
        clipped = False
        for j in range(len(ids)):
            i_prev = ids[j - 1]
            i_cur = ids[j]
            i_next = ids[(j + 1) % len(ids)]
            a, b, c = verts[i_prev], verts[i_cur], verts[i_next]
            cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
            if abs(cross) <= 1e-14 * scale:
                # straight corner, removing it leaves the polygon unchanged
                ids.pop(j)
                clipped = True
                break
            if cross < 0.0:
                continue
            if any(
                _point_in_triangle(verts[m], a, b, c, scale)
                for m in ids
                if m not in (i_prev, i_cur, i_next)
            ):
                continue
            tris.append((i_prev, i_cur, i_next))
            ids.pop(j)
            clipped = True
            break
        if not clipped:
            raise ValueError("no ear found; polygon may be non-simple")
    if len(ids) == 3:
        a, b, c = (verts[i] for i in ids)
        cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        if abs(cross) > 1e-14 * scale:
            tris.append(tuple(ids))
    return tris
