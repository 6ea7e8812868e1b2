"""Scaled monomial bases on elements and interfaces.

Element bases are the monomials ((x-xc)/h)^a ((y-yc)/h)^b with a+b <= k,
graded order, constant first; the centroid/diameter scaling keeps the mass
matrix condition number independent of the element size. Interface bases
are 1D monomials in the arclength coordinate mapped to [-1, 1], shared by
both neighboring elements so trace unknowns stay single valued.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np


def pk_dim(degree: int) -> int:
    """Dimension of the bivariate polynomial space of total degree <= k."""
    return (degree + 1) * (degree + 2) // 2


@lru_cache(maxsize=None)
def pk_exponents(degree: int) -> np.ndarray:
    """Graded exponent pairs (a, b), a+b <= degree, (0, 0) first."""
    exps = np.array(
        [(d - j, j) for d in range(degree + 1) for j in range(d + 1)],
        dtype=np.int64,
    )
    exps.setflags(write=False)
    return exps


@dataclass(frozen=True)
class ElementBasis:
    degree: int
    center: np.ndarray
    scale: float

    @property
    def dim(self) -> int:
        return pk_dim(self.degree)

    def _local(self, points: np.ndarray):
        # keep the caller's float dtype (error integrals pass extended
        # precision nodes)
        pts = np.atleast_2d(np.asarray(points))
        sx = (pts[:, 0] - self.center[0]) / self.scale
        sy = (pts[:, 1] - self.center[1]) / self.scale
        powers = np.arange(self.degree + 1)
        return np.power.outer(sx, powers), np.power.outer(sy, powers)

    def values(self, points) -> np.ndarray:
        """Basis function values, shape (n_points, dim)."""
        px, py = self._local(points)
        e = pk_exponents(self.degree)
        return px[:, e[:, 0]] * py[:, e[:, 1]]

    def gradients(self, points) -> tuple[np.ndarray, np.ndarray]:
        """d/dx and d/dy values; the 1/h chain-rule factor is included."""
        px, py = self._local(points)
        e = pk_exponents(self.degree)
        a, b = e[:, 0], e[:, 1]
        gx = np.zeros((px.shape[0], len(e)))
        gy = np.zeros_like(gx)
        mask = a > 0
        gx[:, mask] = a[mask] * px[:, a[mask] - 1] * py[:, b[mask]] / self.scale
        mask = b > 0
        gy[:, mask] = b[mask] * px[:, a[mask]] * py[:, b[mask] - 1] / self.scale
        return gx, gy


@dataclass(frozen=True)
class EdgeBasis:
    degree: int
    p0: np.ndarray = field(repr=False)
    p1: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.degree + 1

    def parameter(self, points) -> np.ndarray:
        """Arclength coordinate of on-segment points, mapped to [-1, 1]."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        d = self.p1 - self.p0
        return 2.0 * ((pts - self.p0) @ d) / float(d @ d) - 1.0

    def values(self, points) -> np.ndarray:
        return self.values_at(self.parameter(points))

    def values_at(self, t) -> np.ndarray:
        """Values at given parameter coordinates, shape (n, dim)."""
        return np.power.outer(np.atleast_1d(np.asarray(t, dtype=float)), np.arange(self.degree + 1))
