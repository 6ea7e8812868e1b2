"""Polygonal meshes with explicit interface topology.

Interfaces, not geometric edges, are the unit on which trace unknowns are
single valued: each interface is a straight segment bordered by exactly one
element (boundary) or two (interior). Hanging nodes are represented by
splitting both neighbors' boundaries into matching interface fragments, and
two boundary interfaces may coincide geometrically while staying
topologically distinct, which is what slit domains need.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .exceptions import MeshFormatError, MeshValidationError
from .geometry import (
    point_in_polygon,
    point_on_segment,
    polygon_area,
    polygon_centroid,
    polygon_diameter,
    polygon_perimeter,
)
from .quadrature import gauss_segment

BOUNDARY = -1
INTERFACE_TAGS = ("interior", "boundary", "top-slit", "bottom-slit")

#: default quadrature degree for face classification; matches 2k+2 for the
#: largest supported polynomial degree
DEFAULT_CLASSIFY_DEGREE = 10


@dataclass(frozen=True)
class Element:
    vertex_ids: tuple[int, ...]
    interface_ids: tuple[int, ...]
    centroid: np.ndarray = field(repr=False)
    diameter: float
    area: float
    perimeter: float


@dataclass(frozen=True)
class Interface:
    v0: int
    v1: int
    left: int
    right: int  # BOUNDARY (-1) when on the domain boundary
    tag: str
    length: float
    normal: np.ndarray = field(repr=False)  # unit, from left toward right / outward

    @property
    def is_boundary(self) -> bool:
        return self.right == BOUNDARY


def _make_element(vertices: np.ndarray, vertex_ids, interface_ids) -> Element:
    verts = vertices[list(vertex_ids)]
    area = polygon_area(verts)
    return Element(
        vertex_ids=tuple(int(v) for v in vertex_ids),
        interface_ids=tuple(int(i) for i in interface_ids),
        centroid=polygon_centroid(verts),
        diameter=polygon_diameter(verts),
        area=area,
        perimeter=polygon_perimeter(verts),
    )


def _make_interface(vertices: np.ndarray, v0: int, v1: int, left: int, right: int, tag: str) -> Interface:
    d = vertices[v1] - vertices[v0]
    length = float(np.hypot(d[0], d[1]))
    if length == 0.0:
        raise MeshValidationError(f"interface between vertices {v0} and {v1} has zero length")
    normal = np.array([d[1], -d[0]]) / length
    normal.setflags(write=False)
    return Interface(int(v0), int(v1), int(left), int(right), tag, length, normal)


class PolygonalMesh:
    """Immutable partition of a 2D polygonal domain into simple polygons."""

    def __init__(self, vertices, elements, interfaces, validate: bool = True):
        self.vertices = np.asarray(vertices, dtype=float)
        self.vertices.setflags(write=False)
        self.elements: list[Element] = list(elements)
        self.interfaces: list[Interface] = list(interfaces)
        if validate:
            self.validate()

    @property
    def n_elements(self) -> int:
        return len(self.elements)

    @property
    def n_interfaces(self) -> int:
        return len(self.interfaces)

    def element_vertices(self, elem_id: int) -> np.ndarray:
        return self.vertices[list(self.elements[elem_id].vertex_ids)]

    def interface_endpoints(self, iface_id: int) -> tuple[np.ndarray, np.ndarray]:
        iface = self.interfaces[iface_id]
        return self.vertices[iface.v0], self.vertices[iface.v1]

    def interface_sides(self, iface_id: int) -> tuple[int, ...]:
        """Element ids bordering the interface (one or two)."""
        iface = self.interfaces[iface_id]
        if iface.is_boundary:
            return (iface.left,)
        return (iface.left, iface.right)

    def signed_normal(self, elem_id: int, iface_id: int) -> np.ndarray:
        """Unit normal of the interface, oriented outward of the element."""
        iface = self.interfaces[iface_id]
        if elem_id == iface.left:
            return iface.normal
        if elem_id == iface.right:
            return -iface.normal
        raise ValueError(f"element {elem_id} does not border interface {iface_id}")

    def max_diameter(self) -> float:
        return max(el.diameter for el in self.elements)

    def total_area(self) -> float:
        return sum(el.area for el in self.elements)

    def bounding_box(self) -> tuple[float, float, float, float]:
        return (
            float(self.vertices[:, 0].min()),
            float(self.vertices[:, 1].min()),
            float(self.vertices[:, 0].max()),
            float(self.vertices[:, 1].max()),
        )

    # -- validation -----------------------------------------------------

    def validate(self) -> None:
        if not np.isfinite(self.vertices).all():
            raise MeshValidationError("non-finite vertex coordinates")
        for i, iface in enumerate(self.interfaces):
            if iface.tag not in INTERFACE_TAGS:
                raise MeshValidationError(f"interface {i} has unknown tag {iface.tag!r}")
            if iface.left == BOUNDARY:
                raise MeshValidationError(f"interface {i} borders zero elements")
            if (iface.right == BOUNDARY) == (iface.tag == "interior"):
                raise MeshValidationError(f"interface {i}: tag {iface.tag!r} inconsistent with right={iface.right}")
            for side in self.interface_sides(i):
                if not 0 <= side < self.n_elements:
                    raise MeshValidationError(f"interface {i} references missing element {side}")
                if i not in self.elements[side].interface_ids:
                    raise MeshValidationError(f"element {side} does not list its interface {i}")
            if iface.length <= 0.0:
                raise MeshValidationError(f"interface {i} has non-positive length")

        for e, el in enumerate(self.elements):
            verts = self.element_vertices(e)
            if len(verts) < 3:
                raise MeshValidationError(f"element {e} has fewer than 3 vertices")
            area = polygon_area(verts)
            if area <= 0.0:
                raise MeshValidationError(f"element {e} is clockwise or degenerate (area {area:g})")
            tol = 1e-12 * el.diameter
            total = 0.0
            for i in el.interface_ids:
                iface = self.interfaces[i]
                if e not in (iface.left, iface.right):
                    raise MeshValidationError(f"element {e} lists foreign interface {i}")
                p0, p1 = self.interface_endpoints(i)
                for p in (p0, p1, 0.5 * (p0 + p1)):
                    if not self._on_element_boundary(p, verts, tol):
                        raise MeshValidationError(f"interface {i} does not lie on the boundary of element {e}")
                total += iface.length
            if abs(total - el.perimeter) > 1e-12 * el.perimeter:
                raise MeshValidationError(
                    f"interfaces of element {e} do not tile its boundary "
                    f"(lengths sum to {total:.17g}, perimeter {el.perimeter:.17g})"
                )

        for i, iface in enumerate(self.interfaces):
            mid = 0.5 * (self.vertices[iface.v0] + self.vertices[iface.v1])
            probe = 1e-6 * min(iface.length, self.elements[iface.left].diameter)
            if not point_in_polygon(mid - probe * iface.normal, self.element_vertices(iface.left)):
                raise MeshValidationError(f"interface {i}: normal does not point away from its left element")
            if not iface.is_boundary:
                if not point_in_polygon(mid + probe * iface.normal, self.element_vertices(iface.right)):
                    raise MeshValidationError(f"interface {i}: normal does not point into its right element")

    @staticmethod
    def _on_element_boundary(p, verts: np.ndarray, tol: float) -> bool:
        n = len(verts)
        return any(point_on_segment(p, verts[i], verts[(i + 1) % n], tol) for i in range(n))


# -- construction from cell polygons -------------------------------------


def mesh_from_cells(vertices, cells, slit_edges=None) -> PolygonalMesh:
    """Build a mesh by pairing opposite directed edges of cell polygons.

    `cells` are CCW vertex-id sequences. Neighboring cells must subdivide
    shared straight sides identically (hanging nodes appear as collinear
    vertices on both sides). Undirected vertex pairs listed in `slit_edges`
    are kept unpaired: each side becomes its own boundary interface, tagged
    top-slit/bottom-slit by the direction of its outward normal.
    """
    vertices = np.asarray(vertices, dtype=float)
    slit_edges = frozenset(frozenset(e) for e in (slit_edges or ()))

    interfaces: list[Interface] = []
    edge_to_iface: dict[tuple[int, int], int] = {}
    pending: dict[tuple[int, int], int] = {}
    boundary_edges: list[tuple[int, int, int]] = []  # (v0, v1, element)

    for elem_id, cell in enumerate(cells):
        m = len(cell)
        for j in range(m):
            a, b = int(cell[j]), int(cell[(j + 1) % m])
            if frozenset((a, b)) in slit_edges:
                boundary_edges.append((a, b, elem_id))
                continue
            if (b, a) in pending:
                left = pending.pop((b, a))
                iface_id = len(interfaces)
                interfaces.append(_make_interface(vertices, b, a, left, elem_id, "interior"))
                edge_to_iface[(b, a)] = iface_id
                edge_to_iface[(a, b)] = iface_id
            else:
                pending[(a, b)] = elem_id

    for (a, b), elem_id in pending.items():
        boundary_edges.append((a, b, elem_id))
    boundary_edges.sort(key=lambda t: t[2])

    for a, b, elem_id in boundary_edges:
        key = frozenset((a, b))
        if key in slit_edges:
            d = vertices[b] - vertices[a]
            tag = "top-slit" if d[0] > 0 else "bottom-slit"
        else:
            tag = "boundary"
        iface_id = len(interfaces)
        interfaces.append(_make_interface(vertices, a, b, elem_id, BOUNDARY, tag))
        edge_to_iface[(a, b)] = iface_id

    elements = []
    for cell in cells:
        m = len(cell)
        iface_ids = [edge_to_iface[(int(cell[j]), int(cell[(j + 1) % m]))] for j in range(m)]
        elements.append(_make_element(vertices, cell, iface_ids))

    return PolygonalMesh(vertices, elements, interfaces)


# -- generators -----------------------------------------------------------


def generate_structured_triangles(n: int, domain=(0.0, 0.0, 1.0, 1.0)) -> PolygonalMesh:
    """2*n^2 right triangles on an n x n grid, every square split along the
    same (lower-left to upper-right) diagonal."""
    if n < 1:
        raise ValueError("n must be >= 1")
    x0, y0, x1, y1 = domain
    xs = np.linspace(x0, x1, n + 1)
    ys = np.linspace(y0, y1, n + 1)
    xx, yy = np.meshgrid(xs, ys, indexing="xy")
    vertices = np.column_stack([xx.ravel(), yy.ravel()])

    def vid(i, j):
        return j * (n + 1) + i

    cells = []
    for j in range(n):
        for i in range(n):
            v00, v10 = vid(i, j), vid(i + 1, j)
            v01, v11 = vid(i, j + 1), vid(i + 1, j + 1)
            cells.append((v00, v10, v11))
            cells.append((v00, v11, v01))
    return mesh_from_cells(vertices, cells)


def generate_noncompatible_quads(
    n: int,
    refine_fraction: float = 0.3,
    seed: int = 0,
    domain=(0.0, 0.0, 1.0, 1.0),
) -> PolygonalMesh:
    """n x n quad grid with a seeded random subset of cells cut in half.

    Cut cells insert midpoint vertices on two opposite sides; uncut
    neighbors keep those midpoints as collinear vertices, so the shared
    side splits into two matching interfaces (a hanging node).
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if not 0.0 <= refine_fraction <= 1.0:
        raise ValueError("refine_fraction must lie in [0, 1]")
    x0, y0, x1, y1 = domain
    hx2 = (x1 - x0) / (2 * n)
    hy2 = (y1 - y0) / (2 * n)

    rng = np.random.default_rng(seed)
    split = rng.random((n, n)) < refine_fraction
    vertical = rng.integers(0, 2, size=(n, n)) == 0  # cut line x = const

    lattice: dict[tuple[int, int], int] = {}

    def vertex(ix, iy):
        key = (ix, iy)
        if key not in lattice:
            lattice[key] = len(lattice)
        return lattice[key]

    for j in range(n + 1):
        for i in range(n + 1):
            vertex(2 * i, 2 * j)
    for j in range(n):
        for i in range(n):
            if not split[i, j]:
                continue
            if vertical[i, j]:
                vertex(2 * i + 1, 2 * j)
                vertex(2 * i + 1, 2 * j + 2)
            else:
                vertex(2 * i, 2 * j + 1)
                vertex(2 * i + 2, 2 * j + 1)

    def walk_rect(ax, ay, bx, by):
        corners = [(ax, ay), (bx, ay), (bx, by), (ax, by)]
        cell = []
        for c0, c1 in zip(corners, corners[1:] + corners[:1]):
            cell.append(vertex(*c0))
            dx = np.sign(c1[0] - c0[0])
            dy = np.sign(c1[1] - c0[1])
            x, y = c0[0] + dx, c0[1] + dy
            while (x, y) != c1:
                if (x, y) in lattice:
                    cell.append(lattice[(x, y)])
                x, y = x + dx, y + dy
        return tuple(cell)

    cells = []
    for j in range(n):
        for i in range(n):
            ax, ay = 2 * i, 2 * j
            if not split[i, j]:
                cells.append(walk_rect(ax, ay, ax + 2, ay + 2))
            elif vertical[i, j]:
                cells.append(walk_rect(ax, ay, ax + 1, ay + 2))
                cells.append(walk_rect(ax + 1, ay, ax + 2, ay + 2))
            else:
                cells.append(walk_rect(ax, ay, ax + 2, ay + 1))
                cells.append(walk_rect(ax, ay + 1, ax + 2, ay + 2))

    vertices = np.empty((len(lattice), 2))
    for (ix, iy), vid in lattice.items():
        vertices[vid] = (x0 + ix * hx2, y0 + iy * hy2)
    return mesh_from_cells(vertices, cells)


def generate_slit_mesh(n: int) -> PolygonalMesh:
    """n x n quad mesh of (-1,1)^2 slit along [0,1] x {0}; n even.

    Interfaces on the slit segment appear twice, tagged top-slit for the
    elements above and bottom-slit for the elements below.
    """
    if n < 2 or n % 2:
        raise ValueError("n must be even and >= 2")
    coords = np.linspace(-1.0, 1.0, n + 1)
    xx, yy = np.meshgrid(coords, coords, indexing="xy")
    vertices = np.column_stack([xx.ravel(), yy.ravel()])

    def vid(i, j):
        return j * (n + 1) + i

    cells = []
    for j in range(n):
        for i in range(n):
            cells.append((vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)))

    half = n // 2
    slit = {(vid(i, half), vid(i + 1, half)) for i in range(half, n)}
    return mesh_from_cells(vertices, cells, slit_edges=slit)


# -- face classification ---------------------------------------------------


class FlowClass(enum.Enum):
    INFLOW = "inflow"
    OUTFLOW = "outflow"
    CHARACTERISTIC = "characteristic"
    MIXED = "mixed"


@dataclass
class FaceClassification:
    """Per (element, interface) flow labels and flow-tangency flags.

    A side is characteristic when |beta.n| stays below a scale-relative
    tolerance at every classification node; it is flow-tangent (`in_eh0`)
    when min |beta.n| over the nodes is at most the element diameter.
    """

    degree: int
    side_class: dict[tuple[int, int], FlowClass]
    side_eh0: dict[tuple[int, int], bool]

    def flow_class(self, elem_id: int, iface_id: int) -> FlowClass:
        return self.side_class[(elem_id, iface_id)]

    def in_eh0(self, elem_id: int, iface_id: int) -> bool:
        return self.side_eh0[(elem_id, iface_id)]


def classify_faces(mesh: PolygonalMesh, beta, degree: int = DEFAULT_CLASSIFY_DEGREE) -> FaceClassification:
    """Label every (element, interface) pair inflow/outflow/characteristic/
    mixed from the sign of beta.n at Gauss nodes of the given degree."""
    side_class: dict[tuple[int, int], FlowClass] = {}
    side_eh0: dict[tuple[int, int], bool] = {}
    for i, iface in enumerate(mesh.interfaces):
        p0, p1 = mesh.interface_endpoints(i)
        rule = gauss_segment(p0, p1, degree)
        bvals = np.asarray(beta(rule.points), dtype=float)
        bn = bvals @ iface.normal
        eps = 1e-12 * float(np.hypot(bvals[:, 0], bvals[:, 1]).max())
        for elem_id in mesh.interface_sides(i):
            s = bn if elem_id == iface.left else -bn
            if (np.abs(s) <= eps).all():
                label = FlowClass.CHARACTERISTIC
            elif (s >= -eps).all():
                label = FlowClass.OUTFLOW
            elif (s <= eps).all():
                label = FlowClass.INFLOW
            else:
                label = FlowClass.MIXED
            side_class[(elem_id, i)] = label
            side_eh0[(elem_id, i)] = bool(np.abs(s).min() <= mesh.elements[elem_id].diameter)
    return FaceClassification(degree, side_class, side_eh0)


@dataclass(frozen=True)
class MeshConditionReport:
    ok: bool
    violations: tuple[tuple[int, tuple[int, ...]], ...]  # (element, offending faces)


def check_mesh_condition(mesh: PolygonalMesh, cls: FaceClassification) -> MeshConditionReport:
    """Whether every element has at most one outflow (or mixed) face that is
    not flow-tangent; violating elements are listed with those faces."""
    violations = []
    for e, el in enumerate(mesh.elements):
        faces = [
            i
            for i in el.interface_ids
            if cls.flow_class(e, i) in (FlowClass.OUTFLOW, FlowClass.MIXED) and not cls.in_eh0(e, i)
        ]
        if len(faces) > 1:
            violations.append((e, tuple(faces)))
    return MeshConditionReport(not violations, tuple(violations))


# -- point location ---------------------------------------------------------


class PointLocator:
    """Bucketed point-to-element lookup with a deterministic tie rule.

    Points on shared boundaries are nudged by +1e-12 in y, so a point on a
    slit is assigned to the element above it; any remaining tie goes to the
    lowest element id.
    """

    def __init__(self, mesh: PolygonalMesh, buckets_per_axis: int | None = None):
        self.mesh = mesh
        x0, y0, x1, y1 = mesh.bounding_box()
        self._origin = np.array([x0, y0])
        nb = buckets_per_axis or max(1, int(np.sqrt(mesh.n_elements)))
        self._nb = nb
        self._size = np.array([max(x1 - x0, 1e-300) / nb, max(y1 - y0, 1e-300) / nb])
        self._buckets: dict[tuple[int, int], list[int]] = {}
        for e in range(mesh.n_elements):
            verts = mesh.element_vertices(e)
            lo = self._index(verts.min(axis=0))
            hi = self._index(verts.max(axis=0))
            for bx in range(lo[0], hi[0] + 1):
                for by in range(lo[1], hi[1] + 1):
                    self._buckets.setdefault((bx, by), []).append(e)

    def _index(self, p):
        idx = np.floor((np.asarray(p) - self._origin) / self._size).astype(int)
        return np.clip(idx, 0, self._nb - 1)

    def locate(self, p) -> int:
        """Containing element id, or -1 when the point is outside."""
        p = np.asarray(p, dtype=float)
        candidates = self._buckets.get(tuple(self._index(p)), ())
        hits = [e for e in candidates if point_in_polygon(p, self.mesh.element_vertices(e))]
        if not hits:
            return -1
        if len(hits) == 1:
            return hits[0]
        # strict containment of the nudged point, so the nudge is not
        # swallowed by the boundary tolerance
        shifted = p + np.array([0.0, 1e-12])
        refined = [e for e in hits if point_in_polygon(shifted, self.mesh.element_vertices(e), tol=0.0)]
        return min(refined or hits)


# -- file I/O ----------------------------------------------------------------


def write_mesh(mesh: PolygonalMesh, path) -> None:
    """Write the mesh in the `wgmesh 1` text format (lossless round trip)."""
    lines = ["wgmesh 1", f"vertices {len(mesh.vertices)}"]
    lines.extend(f"{x:.17g} {y:.17g}" for x, y in mesh.vertices)
    lines.append(f"elements {mesh.n_elements}")
    lines.extend(" ".join(str(v) for v in el.vertex_ids) for el in mesh.elements)
    lines.append(f"interfaces {mesh.n_interfaces}")
    lines.extend(
        f"{iface.v0} {iface.v1} {iface.left} {iface.right} {iface.tag}"
        for iface in mesh.interfaces
    )
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


class _LineReader:
    def __init__(self, fh):
        self._lines = fh.read().splitlines()
        self.lineno = 0

    def next(self) -> str:
        while True:
            if self.lineno >= len(self._lines):
                raise MeshFormatError("unexpected end of file", self.lineno + 1)
            self.lineno += 1
            line = self._lines[self.lineno - 1].strip()
            if line:
                return line


def _parse_count(reader: _LineReader, keyword: str) -> int:
    line = reader.next()
    parts = line.split()
    if len(parts) != 2 or parts[0] != keyword:
        raise MeshFormatError(f"expected '{keyword} <count>', got {line!r}", reader.lineno)
    try:
        count = int(parts[1])
    except ValueError:
        raise MeshFormatError(f"bad {keyword} count {parts[1]!r}", reader.lineno) from None
    if count < 0:
        raise MeshFormatError(f"negative {keyword} count", reader.lineno)
    return count


def read_mesh(path, strict: bool = True) -> PolygonalMesh:
    """Read a `wgmesh 1` file.

    Malformed input raises MeshFormatError with the offending line number;
    structural problems raise MeshValidationError. Clockwise polygons are
    rejected when `strict`, silently reordered otherwise.
    """
    with open(path, "r", encoding="utf-8") as fh:
        reader = _LineReader(fh)

    header = reader.next()
    if header != "wgmesh 1":
        raise MeshFormatError(f"unsupported header {header!r}", reader.lineno)

    n_vertices = _parse_count(reader, "vertices")
    vertices = np.empty((n_vertices, 2))
    for v in range(n_vertices):
        line = reader.next()
        parts = line.split()
        if len(parts) != 2:
            raise MeshFormatError(f"expected 'x y', got {line!r}", reader.lineno)
        try:
            vertices[v] = (float(parts[0]), float(parts[1]))
        except ValueError:
            raise MeshFormatError(f"bad coordinate in {line!r}", reader.lineno) from None

    n_elements = _parse_count(reader, "elements")
    cells = []
    for _ in range(n_elements):
        line = reader.next()
        try:
            ids = [int(tok) for tok in line.split()]
        except ValueError:
            raise MeshFormatError(f"bad vertex id in {line!r}", reader.lineno) from None
        if len(ids) < 3:
            raise MeshFormatError("element needs at least 3 vertices", reader.lineno)
        if any(not 0 <= v < n_vertices for v in ids):
            raise MeshFormatError("vertex id out of range", reader.lineno)
        verts = vertices[ids]
        if polygon_area(verts) < 0.0:
            if strict:
                raise MeshValidationError(
                    f"element on line {reader.lineno} has clockwise vertex order"
                )
            ids.reverse()
        cells.append(tuple(ids))

    n_interfaces = _parse_count(reader, "interfaces")
    raw_ifaces = []
    for _ in range(n_interfaces):
        line = reader.next()
        parts = line.split()
        if len(parts) != 5:
            raise MeshFormatError(f"expected 'v0 v1 left right tag', got {line!r}", reader.lineno)
        try:
            v0, v1, left, right = (int(tok) for tok in parts[:4])
        except ValueError:
            raise MeshFormatError(f"bad id in {line!r}", reader.lineno) from None
        tag = parts[4]
        if tag not in INTERFACE_TAGS:
            raise MeshFormatError(f"unknown interface tag {tag!r}", reader.lineno)
        if not (0 <= v0 < n_vertices and 0 <= v1 < n_vertices):
            raise MeshFormatError("interface vertex id out of range", reader.lineno)
        raw_ifaces.append((v0, v1, left, right, tag))

    by_element: dict[int, list[int]] = {e: [] for e in range(n_elements)}
    interfaces = []
    for i, (v0, v1, left, right, tag) in enumerate(raw_ifaces):
        if left == BOUNDARY and right == BOUNDARY:
            raise MeshValidationError(f"interface {i} borders zero elements")
        interfaces.append(_make_interface(vertices, v0, v1, left, right, tag))
        for side in (left, right):
            if side != BOUNDARY:
                if not 0 <= side < n_elements:
                    raise MeshValidationError(f"interface {i} references missing element {side}")
                by_element[side].append(i)

    elements = [
        _make_element(vertices, cells[e], by_element[e]) for e in range(n_elements)
    ]
    return PolygonalMesh(vertices, elements, interfaces)


def meshes_equal(a: PolygonalMesh, b: PolygonalMesh) -> bool:
    """Field-for-field equality (used to verify write/read round trips)."""
    if a.vertices.shape != b.vertices.shape or not (a.vertices == b.vertices).all():
        return False
    if len(a.elements) != len(b.elements) or len(a.interfaces) != len(b.interfaces):
        return False
    for ea, eb in zip(a.elements, b.elements):
        if ea.vertex_ids != eb.vertex_ids or set(ea.interface_ids) != set(eb.interface_ids):
            return False
    for ia, ib in zip(a.interfaces, b.interfaces):
        if (ia.v0, ia.v1, ia.left, ia.right, ia.tag) != (ib.v0, ib.v1, ib.left, ib.right, ib.tag):
            return False
    return True
