from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from surfstack.lattice import (COLORS, InvalidDimensionError, LatticeDims, build_lattice, cell_census,
                               cell_color, complement, is_vertex, layer_census, pair_name,
                               vertex_count_formula)


def test_vertex_rule():
    assert is_vertex((1, 0, 0)) and is_vertex((0, 0, 1))
    assert not is_vertex((0, 0, 0)) and not is_vertex((1, 1, 0)) and not is_vertex((1, 1, 1))


def test_cell_colours():
    assert cell_color((0, 0, 0)) == "g"
    assert cell_color((1, 1, 1)) == "r"  # 3 mod 4
    assert cell_color((1, 1, 3)) == "b"  # 5 mod 4 = 1


def test_pair_helpers():
    assert pair_name("b", "r") == "rb"
    assert complement("rb") == "g" and complement("gb") == "r" and complement("rg") == "b"


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_vertex_count_formula(d):
    assert build_lattice(LatticeDims.cube(d)).n == vertex_count_formula(d) == 3 * d**3 - 4 * d**2 + 2 * d


def test_d2_layers_and_cells():
    lat = build_lattice(LatticeDims.cube(2))
    assert layer_census(lat) == [("chequerboard", 4), ("diamond", 4), ("chequerboard", 4)]
    census = cell_census(lat)
    assert census["g"] == 4  # octahedron centres (even, even, 2)


def test_vertices_are_lexicographic_in_zyx():
    lat = build_lattice(LatticeDims.cube(3))
    keys = [(v[2], v[1], v[0]) for v in lat.vertices]
    assert keys == sorted(keys)
    assert all(lat.index[v] == i for i, v in enumerate(lat.vertices))


def test_boundary_colours():
    lat = build_lattice(LatticeDims.cube(2))
    assert lat.boundary_label == {"x-": "r", "x+": "r", "y-": "b", "y+": "b", "z-": "g", "z+": "g"}
    assert len(lat.boundary_vertices("z-")) == 4


@pytest.mark.parametrize("bad", [(1, 2, 2), (2, 0, 2), (2, 2, -3)])
def test_invalid_dims(bad):
    with pytest.raises(InvalidDimensionError):
        LatticeDims(*bad)


def test_face_kinds_are_known():
    lat = build_lattice(LatticeDims.cube(3))
    kinds = {f.kind for f in lat.faces}
    assert kinds <= {"triangle", "square", "clippedSquare", "clippedEdge"}
    assert {"triangle", "square"} <= kinds


@settings(max_examples=15, deadline=None)
@given(st.integers(2, 4), st.integers(2, 4), st.integers(2, 4))
def test_lattice_invariants_for_random_boxes(dx, dy, dz):
    lat = build_lattice(LatticeDims(dx, dy, dz))
    assert all(is_vertex(v) for v in lat.vertices)
    for cell in lat.cells:
        assert cell.color in COLORS and cell.support
    seen = set()
    for f in lat.faces:
        assert len(f.support) >= 2
        key = (f.color_pair, f.support)
        assert key not in seen
        seen.add(key)
