"""Bounded, 3-colourable rectified cubic lattice.

Coordinates live on a doubled cubic grid.  A triple is a vertex (qubit) iff
exactly one coordinate is odd.  Octahedra (colour g) sit at all-even centres
and cuboctahedra (colours r and b) at all-odd centres.  The box is

    x in [0, 2(dx-1)],  y in [0, 2(dy-1)],  z in [1, 2dz-1]

with z-planes coloured g, x-planes r and y-planes b.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

COLORS = ("r", "g", "b")
AXIS_COLOR = {0: "r", 1: "b", 2: "g"}
COLOR_AXIS = {c: a for a, c in AXIS_COLOR.items()}
PAIR_NAMES = {frozenset("rg"): "rg", frozenset("gb"): "gb", frozenset("rb"): "rb"}

Coord3 = tuple[int, int, int]

OCTA_OFFSETS: tuple[Coord3, ...] = (
    (1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1))
CUBOCT_OFFSETS: tuple[Coord3, ...] = tuple(
    off for a, b in ((0, 1), (0, 2), (1, 2)) for sa, sb in product((1, -1), repeat=2)
    for off in [tuple(sa if i == a else sb if i == b else 0 for i in range(3))])


class InvalidDimensionError(ValueError):
    """Raised for lattice dimensions below the minimum extent of 2."""


def pair_name(c1: str, c2: str) -> str:
    return PAIR_NAMES[frozenset((c1, c2))]


def complement(pair: str) -> str:
    """The colour missing from a two-colour label, e.g. 'rg' -> 'b'."""
    (c,) = set(COLORS) - set(pair)
    return c


def is_vertex(p: Coord3) -> bool:
    return sum(v & 1 for v in p) == 1


def cell_color(center: Coord3) -> str:
    if all(v % 2 == 0 for v in center):
        return "g"
    if all(v % 2 == 1 for v in center):
        return "r" if sum(center) % 4 == 3 else "b"
    raise ValueError(f"{center} is not a cell centre")


@dataclass(frozen=True)
class LatticeDims:
    dx: int
    dy: int
    dz: int

    def __post_init__(self):
        for name in ("dx", "dy", "dz"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 2:
                raise InvalidDimensionError(f"{name}={v!r}: every extent must be an integer >= 2")

    @classmethod
    def cube(cls, d: int) -> "LatticeDims":
        return cls(d, d, d)

    @property
    def isotropic(self) -> bool:
        return self.dx == self.dy == self.dz

    def bounds(self) -> tuple[tuple[int, int], tuple[int, int], tuple[int, int]]:
        return ((0, 2 * (self.dx - 1)), (0, 2 * (self.dy - 1)), (1, 2 * self.dz - 1))


@dataclass(frozen=True)
class CellRecord:
    center: Coord3
    color: str
    kind: str  # octahedron | cuboctahedron | clipped
    support: tuple[int, ...]


@dataclass(frozen=True)
class FaceRecord:
    """A face Z check.  ``kind`` is triangle, square, clippedSquare or clippedEdge."""

    color_pair: str
    kind: str
    support: tuple[int, ...]
    cells: tuple[Coord3, Coord3]  # centres of the two cells sharing the face


@dataclass(frozen=True)
class Lattice:
    dims: LatticeDims
    vertices: tuple[Coord3, ...]
    index: dict
    cells: tuple[CellRecord, ...]
    faces: tuple[FaceRecord, ...]
    boundary_label: dict

    @property
    def n(self) -> int:
        return len(self.vertices)

    def cells_of(self, color: str) -> list[CellRecord]:
        return [c for c in self.cells if c.color == color]

    def faces_of(self, pair: str) -> list[FaceRecord]:
        return [f for f in self.faces if f.color_pair == pair]

    def outside_planes(self, p: Coord3) -> list[str]:
        """Boundary planes (e.g. 'x-') that point p lies strictly beyond."""
        out = []
        for axis, (lo, hi) in enumerate(self.dims.bounds()):
            if p[axis] < lo:
                out.append("xyz"[axis] + "-")
            elif p[axis] > hi:
                out.append("xyz"[axis] + "+")
        return out

    def boundary_vertices(self, plane: str) -> list[int]:
        """Vertex indices lying on a bounding plane such as 'z-' or 'x+'."""
        axis = "xyz".index(plane[0])
        lo, hi = self.dims.bounds()[axis]
        target = lo if plane[1] == "-" else hi
        return [i for i, v in enumerate(self.vertices) if v[axis] == target]


def _boundary_labels() -> dict:
    return {f"{ax}{s}": AXIS_COLOR[i] for i, ax in enumerate("xyz") for s in "-+"}


def _vertices(dims: LatticeDims) -> list[Coord3]:
    (x0, x1), (y0, y1), (z0, z1) = dims.bounds()
    return [(x, y, z) for z in range(z0, z1 + 1) for y in range(y0, y1 + 1)
            for x in range(x0, x1 + 1) if is_vertex((x, y, z))]


def build_lattice(dims: LatticeDims) -> Lattice:
    """Enumerate vertices, cells (with boundary flattenings) and faces for a box."""
    if not isinstance(dims, LatticeDims):
        dims = LatticeDims(*dims)
    verts = _vertices(dims)
    index = {v: i for i, v in enumerate(verts)}
    labels = _boundary_labels()
    bounds = dims.bounds()

    def outside(p):
        out = []
        for axis, (lo, hi) in enumerate(bounds):
            if p[axis] < lo:
                out.append(("xyz"[axis] + "-", lo - p[axis]))
            elif p[axis] > hi:
                out.append(("xyz"[axis] + "+", p[axis] - hi))
        return out

    cells = []
    ranges = [range(lo - 1, hi + 2) for lo, hi in bounds]
    for z in ranges[2]:
        for y in ranges[1]:
            for x in ranges[0]:
                c = (x, y, z)
                parities = {v & 1 for v in c}
                if len(parities) != 1:
                    continue
                color = cell_color(c)
                planes = outside(c)
                # Cells may sit at most one unit beyond planes of a different colour.
                if any(dist > 1 or labels[pl] == color for pl, dist in planes):
                    continue
                offsets = OCTA_OFFSETS if color == "g" else CUBOCT_OFFSETS
                pts = [tuple(a + b for a, b in zip(c, o)) for o in offsets]
                sup = tuple(sorted(index[p] for p in pts if p in index))
                if not sup:
                    continue
                if len(sup) == len(offsets):
                    kind = "octahedron" if color == "g" else "cuboctahedron"
                else:
                    kind = "clipped"
                cells.append(CellRecord(c, color, kind, sup))

    faces = []
    seen = set()

    def add_face(pts, cell_a, cell_b, full_kind):
        pair = pair_name(cell_color(cell_a), cell_color(cell_b))
        code_color = complement(pair)
        present = [p for p in pts if p in index]
        if len(present) < 2:
            return
        for p in pts:
            if p in index:
                continue
            # Lost vertices may only lie beyond boundaries of the code's own colour.
            if any(labels[pl] != code_color for pl, _ in outside(p)):
                return
        sup = tuple(sorted(index[p] for p in present))
        key = (pair, sup)
        if key in seen:
            return
        seen.add(key)
        if len(sup) == len(pts):
            kind = full_kind
        elif len(sup) == 2:
            kind = "clippedEdge"
        else:
            kind = "clippedSquare"
        faces.append(FaceRecord(pair, kind, sup, (cell_a, cell_b)))

    frange = [range(lo - 2, hi + 3) for lo, hi in bounds]
    for z in frange[2]:
        for y in frange[1]:
            for x in frange[0]:
                c = (x, y, z)
                odd = [v & 1 for v in c]
                if sum(odd) == 0:
                    # Octahedron corner triangles, one per octant.
                    for s in product((1, -1), repeat=3):
                        pts = [tuple(c[i] + (s[i] if i == a else 0) for i in range(3)) for a in range(3)]
                        partner = tuple(c[i] + s[i] for i in range(3))
                        add_face(pts, c, partner, "triangle")
                elif sum(odd) == 2:
                    # Square between two cuboctahedra across the even axis.
                    a, b = [i for i in range(3) if odd[i]]
                    e = 3 - a - b
                    pts = []
                    for i, s in ((a, 1), (a, -1), (b, 1), (b, -1)):
                        p = list(c)
                        p[i] += s
                        pts.append(tuple(p))
                    lo_cell = tuple(c[i] - (1 if i == e else 0) for i in range(3))
                    hi_cell = tuple(c[i] + (1 if i == e else 0) for i in range(3))
                    add_face(pts, lo_cell, hi_cell, "square")

    return Lattice(dims, tuple(verts), index, tuple(cells), tuple(faces), labels)


def layer_census(lat: Lattice) -> list[tuple[str, int]]:
    """(layer kind, vertex count) for each z layer, bottom to top."""
    z0, z1 = lat.dims.bounds()[2]
    counts = {z: 0 for z in range(z0, z1 + 1)}
    for v in lat.vertices:
        counts[v[2]] += 1
    return [("chequerboard" if z % 2 else "diamond", counts[z]) for z in sorted(counts)]


def cell_census(lat: Lattice) -> dict[str, int]:
    """Cells per colour whose centre lies inside the closed box (flattenings excluded)."""
    bounds = lat.dims.bounds()
    out = {c: 0 for c in COLORS}
    for cell in lat.cells:
        if all(lo <= cell.center[i] <= hi for i, (lo, hi) in enumerate(bounds)):
            out[cell.color] += 1
    return out


def vertex_count_formula(d: int) -> int:
    return 3 * d**3 - 4 * d**2 + 2 * d
