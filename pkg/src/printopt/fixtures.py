"""Procedural test parts.

Small solids that each provoke a specific failure mode: overhangs,
bridges, islands, slender towers, poor bed adhesion, stringing travel,
thin walls. Used by the test-suite and by ``printopt fixtures`` to emit
STL files for external runs.

Compound shapes are unions of boxes and cylinders that share only
horizontal or vertical planes; coincident horizontal faces cancel in the
parity voxelizer, and vertical ones are invisible to it, so every part
voxelizes as a closed solid.
"""

from __future__ import annotations

import math
import os
from typing import Callable

import numpy as np

from .mesh.core import TriangleMesh, build_mesh
from .mesh.stl import write_binary

_SEGMENTS = 32


def _mesh(corner_list: list[np.ndarray], name: str) -> TriangleMesh:
    corners = np.concatenate([np.asarray(c, dtype=np.float64) for c in corner_list])
    flat = corners.reshape(-1, 3)
    vertices, inverse = np.unique(flat, axis=0, return_inverse=True)
    triangles = inverse.reshape(-1, 3).astype(np.int32)
    return build_mesh(vertices, triangles, name=name)


def _quad(q0, q1, q2, q3) -> np.ndarray:
    return np.array([[q0, q1, q2], [q0, q2, q3]], dtype=np.float64)


def _box(lo, hi) -> np.ndarray:
    """12 outward-wound triangles of an axis-aligned box."""
    x0, y0, z0 = lo
    x1, y1, z1 = hi
    faces = [
        _quad((x0, y0, z0), (x0, y1, z0), (x1, y1, z0), (x1, y0, z0)),  # bottom
        _quad((x0, y0, z1), (x1, y0, z1), (x1, y1, z1), (x0, y1, z1)),  # top
        _quad((x0, y0, z0), (x1, y0, z0), (x1, y0, z1), (x0, y0, z1)),  # -y
        _quad((x0, y1, z0), (x0, y1, z1), (x1, y1, z1), (x1, y1, z0)),  # +y
        _quad((x0, y0, z0), (x0, y0, z1), (x0, y1, z1), (x0, y1, z0)),  # -x
        _quad((x1, y0, z0), (x1, y1, z0), (x1, y1, z1), (x1, y0, z1)),  # +x
    ]
    return np.concatenate(faces)


def _ring_points(cx: float, cy: float, r: float, n: int = _SEGMENTS) -> np.ndarray:
    ang = 2.0 * math.pi * np.arange(n) / n
    return np.stack([cx + r * np.cos(ang), cy + r * np.sin(ang)], axis=1)


def _cylinder_wall(cx, cy, r, z0, z1, n=_SEGMENTS) -> np.ndarray:
    pts = _ring_points(cx, cy, r, n)
    tris = []
    for k in range(n):
        a, b = pts[k], pts[(k + 1) % n]
        tris.append(
            _quad((a[0], a[1], z0), (b[0], b[1], z0), (b[0], b[1], z1), (a[0], a[1], z1))
        )
    return np.concatenate(tris)


def _disk(cx, cy, r, z, up: bool, n=_SEGMENTS) -> np.ndarray:
    pts = _ring_points(cx, cy, r, n)
    tris = []
    for k in range(n):
        a, b = pts[k], pts[(k + 1) % n]
        if up:
            tris.append([[(cx, cy, z), (a[0], a[1], z), (b[0], b[1], z)]])
        else:
            tris.append([[(cx, cy, z), (b[0], b[1], z), (a[0], a[1], z)]])
    return np.concatenate([np.array(t, dtype=np.float64) for t in tris])


def _annulus(cx, cy, r_in, r_out, z, up: bool, n=_SEGMENTS) -> np.ndarray:
    inner = _ring_points(cx, cy, r_in, n)
    outer = _ring_points(cx, cy, r_out, n)
    tris = []
    for k in range(n):
        a, a2 = inner[k], inner[(k + 1) % n]
        b, b2 = outer[k], outer[(k + 1) % n]
        if up:
            tris.append(
                np.array(
                    [
                        [(a[0], a[1], z), (b[0], b[1], z), (b2[0], b2[1], z)],
                        [(a[0], a[1], z), (b2[0], b2[1], z), (a2[0], a2[1], z)],
                    ]
                )
            )
        else:
            tris.append(
                np.array(
                    [
                        [(a[0], a[1], z), (b2[0], b2[1], z), (b[0], b[1], z)],
                        [(a[0], a[1], z), (a2[0], a2[1], z), (b2[0], b2[1], z)],
                    ]
                )
            )
    return np.concatenate(tris)


def cube(side: float = 10.0) -> TriangleMesh:
    """Plain solid cube; the boring baseline everything should handle."""
    return _mesh([_box((0, 0, 0), (side, side, side))], f"cube{side:g}")


def ramp() -> TriangleMesh:
    """Wedge with a 45-degree upward slope (staircase artifact source)."""
    profile = np.array(
        [
            [(0, 0, 0), (20, 0, 0), (0, 0, 20)],
            [(20, 10, 0), (0, 10, 0), (0, 10, 20)],
        ],
        dtype=np.float64,
    )
    sides = [
        _quad((0, 0, 0), (0, 0, 20), (0, 10, 20), (0, 10, 0)),  # -x
        _quad((0, 0, 0), (0, 10, 0), (20, 10, 0), (20, 0, 0)),  # bottom
        _quad((20, 0, 0), (20, 10, 0), (0, 10, 20), (0, 0, 20)),  # slope
    ]
    return _mesh([profile] + sides, "ramp")


def l_bracket() -> TriangleMesh:
    """Upright L: tall column with a horizontal arm near the top.

    Printed as modeled the arm underside is a long unsupported overhang;
    lying the part down removes it entirely.
    """
    column = _box((0, 0, 0), (8, 8, 30))
    arm = _box((8, 0, 22), (30, 8, 30))
    return _mesh([column, arm], "l_bracket")


def mushroom() -> TriangleMesh:
    """Narrow stem under a wide cap; the cap underside wants support."""
    stem_wall = _cylinder_wall(0, 0, 4, 0, 10)
    stem_bottom = _disk(0, 0, 4, 0, up=False)
    cap_wall = _cylinder_wall(0, 0, 9, 10, 15)
    cap_under = _annulus(0, 0, 4, 9, 10, up=False)
    cap_top = _disk(0, 0, 9, 15, up=True)
    return _mesh([stem_wall, stem_bottom, cap_wall, cap_under, cap_top], "mushroom")


def table() -> TriangleMesh:
    """Slab on four corner legs; the slab underside spans unsupported."""
    legs = [
        _box((0, 0, 0), (4, 4, 12)),
        _box((20, 0, 0), (24, 4, 12)),
        _box((0, 20, 0), (4, 24, 12)),
        _box((20, 20, 0), (24, 24, 12)),
    ]
    top = _box((0, 0, 12), (24, 24, 16))
    return _mesh(legs + [top], "table")


def ring() -> TriangleMesh:
    """Thin-walled open ring; sensitive to XY dimensional drift."""
    outer = _cylinder_wall(0, 0, 10, 0, 8)
    inner = _cylinder_wall(0, 0, 7, 0, 8)[:, ::-1, :]  # flip winding inward
    bottom = _annulus(0, 0, 7, 10, 0, up=False)
    top = _annulus(0, 0, 7, 10, 8, up=True)
    return _mesh([outer, np.ascontiguousarray(inner), bottom, top], "ring")


def bridge() -> TriangleMesh:
    """Two piers carrying a 24 mm clear span."""
    piers = [_box((0, 0, 0), (6, 8, 14)), _box((30, 0, 0), (36, 8, 14))]
    deck = _box((0, 0, 14), (36, 8, 18))
    return _mesh(piers + [deck], "bridge")


def towers() -> TriangleMesh:
    """Two towers on a shared thin base; layers alternate between them.

    The base keeps the part one connected solid while forcing long travel
    moves between the tower cross-sections (stringing bait).
    """
    base = _box((5, 0, 0), (14, 5, 1.6))
    t1 = _box((0, 0, 0), (5, 5, 20))
    t2 = _box((14, 0, 0), (19, 5, 20))
    return _mesh([base, t1, t2], "towers")


def floating_cube() -> TriangleMesh:
    """Base cube plus a detached cube in mid-air (island veto bait)."""
    base = _box((0, 0, 0), (10, 10, 10))
    orphan = _box((2, 2, 20), (8, 8, 26))
    return _mesh([base, orphan], "floating_cube")


def pillar() -> TriangleMesh:
    """2 x 2 x 80 mm rod; extreme aspect ratio, tiny bed contact."""
    return _mesh([_box((0, 0, 0), (2, 2, 80))], "pillar")


def sphere() -> TriangleMesh:
    """Icosphere (2 subdivisions) resting on the plate at a point."""
    phi = (1.0 + math.sqrt(5.0)) / 2.0
    verts = np.array(
        [
            (-1, phi, 0), (1, phi, 0), (-1, -phi, 0), (1, -phi, 0),
            (0, -1, phi), (0, 1, phi), (0, -1, -phi), (0, 1, -phi),
            (phi, 0, -1), (phi, 0, 1), (-phi, 0, -1), (-phi, 0, 1),
        ],
        dtype=np.float64,
    )
    faces = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]
    radius = 8.0
    tris = verts[np.array(faces)]
    for _ in range(2):
        a, b, c = tris[:, 0], tris[:, 1], tris[:, 2]
        ab, bc, ca = (a + b) / 2, (b + c) / 2, (c + a) / 2
        tris = np.concatenate(
            [
                np.stack([a, ab, ca], axis=1),
                np.stack([ab, b, bc], axis=1),
                np.stack([ca, bc, c], axis=1),
                np.stack([ab, bc, ca], axis=1),
            ]
        )
    tris *= radius / np.linalg.norm(tris, axis=2, keepdims=True)
    tris[:, :, 2] += radius
    return _mesh([tris], "sphere")


def disjoint_towers() -> TriangleMesh:
    """Two separate towers with no connecting geometry (two components)."""
    t1 = _box((0, 0, 0), (5, 5, 20))
    t2 = _box((14, 0, 0), (19, 5, 20))
    return _mesh([t1, t2], "disjoint_towers")


FIXTURES: dict[str, Callable[[], TriangleMesh]] = {
    "cube": cube,
    "ramp": ramp,
    "l_bracket": l_bracket,
    "mushroom": mushroom,
    "table": table,
    "ring": ring,
    "bridge": bridge,
    "towers": towers,
    "floating_cube": floating_cube,
    "pillar": pillar,
    "sphere": sphere,
    "disjoint_towers": disjoint_towers,
}

# The benchmark set: closed printable parts spanning the failure modes.
ACCEPTANCE_NAMES = (
    "cube",
    "ramp",
    "l_bracket",
    "mushroom",
    "table",
    "ring",
    "bridge",
    "towers",
)


def make(name: str) -> TriangleMesh:
    try:
        return FIXTURES[name]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; have {sorted(FIXTURES)}") from None


def write_fixture_dir(path: str | os.PathLike, names: tuple[str, ...] = ACCEPTANCE_NAMES) -> list[str]:
    """Write the named fixtures as binary STL files; returns the paths."""
    os.makedirs(path, exist_ok=True)
    written = []
    for name in names:
        out = os.path.join(os.fspath(path), f"{name}.stl")
        write_binary(make(name), out, header=f"printopt fixture {name}")
        written.append(out)
    return written
