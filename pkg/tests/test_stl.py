"""STL parsing, error reporting, and the binary writer round trip."""

import struct

import numpy as np
import pytest

from printopt.errors import STLParseError
from printopt.mesh import parse_mesh, write_binary

ASCII_TRIANGLE = """solid one
  facet normal 0 0 1
    outer loop
      vertex 0 0 0
      vertex 1 0 0
      vertex 0 1 0
    endloop
  endfacet
endsolid one
"""


def test_binary_round_trip_preserves_geometry(unit_cube, tmp_path):
    path = tmp_path / "cube.stl"
    write_binary(unit_cube, path)
    back = parse_mesh(path)
    assert back.n_faces == 12
    assert len(back.vertices) == 8  # shared corners deduplicated
    lo, hi = back.bounds()
    np.testing.assert_allclose(lo, [0, 0, 0], atol=1e-7)
    np.testing.assert_allclose(hi, [1, 1, 1], atol=1e-7)
    # same vertex set regardless of index order
    orig = sorted(map(tuple, np.round(unit_cube.vertices, 6)))
    got = sorted(map(tuple, np.round(back.vertices, 6)))
    assert orig == got


def test_parse_path_names_mesh_after_file(unit_cube, tmp_path):
    path = tmp_path / "widget.stl"
    write_binary(unit_cube, path)
    assert parse_mesh(path).name == "widget.stl"


def test_parse_bytes_and_stream_sources(unit_cube, tmp_path):
    path = tmp_path / "cube.stl"
    write_binary(unit_cube, path)
    data = path.read_bytes()
    from_bytes = parse_mesh(data)
    assert from_bytes.n_faces == 12
    with open(path, "rb") as fh:
        from_stream = parse_mesh(fh)
    assert from_stream.n_faces == 12
    np.testing.assert_array_equal(from_bytes.triangles, from_stream.triangles)


def test_ascii_single_triangle():
    mesh = parse_mesh(ASCII_TRIANGLE.encode())
    assert mesh.n_faces == 1
    np.testing.assert_allclose(mesh.normals[0], [0, 0, 1], atol=1e-12)


def test_ascii_normals_recomputed_from_winding():
    # stated normal is wrong on purpose; geometry wins
    text = ASCII_TRIANGLE.replace("normal 0 0 1", "normal 1 0 0")
    mesh = parse_mesh(text.encode())
    np.testing.assert_allclose(mesh.normals[0], [0, 0, 1], atol=1e-12)


def test_truncated_binary_reports_cut_offset(unit_cube, tmp_path):
    path = tmp_path / "cube.stl"
    write_binary(unit_cube, path)
    data = path.read_bytes()
    clipped = data[:-10]
    with pytest.raises(STLParseError) as exc:
        parse_mesh(clipped)
    assert exc.value.offset == len(clipped)


def test_zero_facet_binary_rejected():
    with pytest.raises(STLParseError) as exc:
        parse_mesh(b"\0" * 80 + struct.pack("<I", 0))
    assert exc.value.offset == 80


def test_ascii_without_facets_rejected():
    with pytest.raises(STLParseError):
        parse_mesh(b"solid empty\nendsolid empty\n")


def test_non_finite_vertex_rejected():
    text = ASCII_TRIANGLE.replace("vertex 0 0 0", "vertex nan 0 0")
    with pytest.raises(STLParseError):
        parse_mesh(text.encode())


def test_degenerate_faces_dropped_and_counted():
    text = ASCII_TRIANGLE.replace(
        "endsolid one",
        """  facet normal 0 0 1
    outer loop
      vertex 0 0 0
      vertex 1 0 0
      vertex 2 0 0
    endloop
  endfacet
endsolid one""",
    )
    mesh = parse_mesh(text.encode())
    assert mesh.n_faces == 1
    assert mesh.dropped_faces == 1


def test_garbage_input_rejected():
    with pytest.raises(STLParseError):
        parse_mesh(b"not an stl at all")
