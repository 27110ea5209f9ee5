"""Triangle meshes, discrete build orientations, and per-face statistics."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from ..errors import EmptyMeshError

ORIENTATION_ANGLES = (0, 90, 180, 270)

# cos/sin pairs for the quarter-turn angles, kept exact so rotations are
# integer matrices and repeated reorientation stays bit-stable.
_EXACT_TRIG = {0: (1.0, 0.0), 90: (0.0, 1.0), 180: (-1.0, 0.0), 270: (0.0, -1.0)}


@dataclass(frozen=True)
class Orientation:
    """Build orientation: rotations about global X, Y, Z in degrees.

    Each angle is restricted to the quarter-turn set {0, 90, 180, 270}.
    """

    x: int = 0
    y: int = 0
    z: int = 0

    def __post_init__(self):
        for name in ("x", "y", "z"):
            angle = getattr(self, name)
            if angle not in ORIENTATION_ANGLES:
                raise ValueError(
                    f"orientation.{name} must be one of {ORIENTATION_ANGLES}, got {angle!r}"
                )

    def matrix(self) -> np.ndarray:
        """Composite rotation Rz @ Ry @ Rx as an exact integer-valued matrix."""
        cx, sx = _EXACT_TRIG[self.x]
        cy, sy = _EXACT_TRIG[self.y]
        cz, sz = _EXACT_TRIG[self.z]
        rx = np.array([[1, 0, 0], [0, cx, -sx], [0, sx, cx]])
        ry = np.array([[cy, 0, sy], [0, 1, 0], [-sy, 0, cy]])
        rz = np.array([[cz, -sz, 0], [sz, cz, 0], [0, 0, 1]])
        return rz @ ry @ rx

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.x, self.y, self.z)


@dataclass(frozen=True)
class TriangleMesh:
    """Indexed triangle mesh in millimeters.

    ``normals`` are unit outward face normals recomputed from the geometry;
    ``dropped_faces`` counts zero-area triangles removed during parsing.
    """

    vertices: np.ndarray  # (n, 3) float64
    triangles: np.ndarray  # (m, 3) int32
    normals: np.ndarray  # (m, 3) float64
    dropped_faces: int = 0
    name: str = field(default="", compare=False)

    def __post_init__(self):
        v = np.ascontiguousarray(np.asarray(self.vertices, dtype=np.float64))
        t = np.ascontiguousarray(np.asarray(self.triangles, dtype=np.int32))
        n = np.ascontiguousarray(np.asarray(self.normals, dtype=np.float64))
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "triangles", t)
        object.__setattr__(self, "normals", n)
        if t.ndim != 2 or t.shape[1] != 3 or len(t) < 1:
            raise EmptyMeshError("mesh must have at least one triangle")
        if not np.isfinite(v).all():
            raise ValueError("mesh vertices must be finite")
        if t.min() < 0 or t.max() >= len(v):
            raise ValueError("triangle indices out of range")
        norms = np.linalg.norm(n, axis=1)
        if not np.allclose(norms, 1.0, atol=1e-6):
            raise ValueError("face normals must be unit length")

    @property
    def n_faces(self) -> int:
        return len(self.triangles)

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        used = self.vertices[np.unique(self.triangles)]
        return used.min(axis=0), used.max(axis=0)

    def face_corners(self) -> np.ndarray:
        """(m, 3, 3) corner coordinates."""
        return self.vertices[self.triangles]


def compute_face_normals(vertices: np.ndarray, triangles: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Unit normals and areas from geometry; zero-area faces get area 0."""
    corners = vertices[triangles]
    u = corners[:, 1] - corners[:, 0]
    w = corners[:, 2] - corners[:, 0]
    cross = np.cross(u, w)
    double_area = np.linalg.norm(cross, axis=1)
    area = 0.5 * double_area
    safe = np.where(double_area > 0, double_area, 1.0)
    normals = cross / safe[:, None]
    return normals, area


def build_mesh(
    vertices: np.ndarray,
    triangles: np.ndarray,
    dropped_faces: int = 0,
    name: str = "",
) -> TriangleMesh:
    """Construct a mesh, dropping zero-area triangles.

    Raises EmptyMeshError when nothing usable remains.
    """
    vertices = np.asarray(vertices, dtype=np.float64)
    triangles = np.asarray(triangles, dtype=np.int32)
    if len(triangles) == 0:
        raise EmptyMeshError("mesh must have at least one triangle")
    normals, areas = compute_face_normals(vertices, triangles)
    keep = areas > 1e-12
    dropped = int((~keep).sum()) + dropped_faces
    if not keep.any():
        raise EmptyMeshError("all triangles are degenerate")
    return TriangleMesh(
        vertices=vertices,
        triangles=triangles[keep],
        normals=normals[keep],
        dropped_faces=dropped,
        name=name,
    )


def orient(mesh: TriangleMesh, orientation: Orientation) -> TriangleMesh:
    """Rotate about the bounding-box center, then rest the part on the bed.

    Applies Rz @ Ry @ Rx and translates so min-z = 0.
    """
    rot = orientation.matrix()
    lo, hi = mesh.bounds()
    center = 0.5 * (lo + hi)
    vertices = (mesh.vertices - center) @ rot.T + center
    vertices[:, 2] -= vertices[np.unique(mesh.triangles), 2].min()
    normals = mesh.normals @ rot.T
    return TriangleMesh(
        vertices=vertices,
        triangles=mesh.triangles,
        normals=normals,
        dropped_faces=mesh.dropped_faces,
        name=mesh.name,
    )


class FaceSlopes(NamedTuple):
    """Per-face slope statistics of an oriented mesh.

    theta_deg is the angle between the face normal and the build (+Z) axis
    in [0, 180]; centroid_z supports near-plate exclusion bands.
    """

    theta_deg: np.ndarray
    area_mm2: np.ndarray
    centroid_z: np.ndarray


def face_slopes(mesh: TriangleMesh) -> FaceSlopes:
    corners = mesh.face_corners()
    _, areas = compute_face_normals(mesh.vertices, mesh.triangles)
    cos_theta = np.clip(mesh.normals[:, 2], -1.0, 1.0)
    theta = np.degrees(np.arccos(cos_theta))
    centroid_z = corners[:, :, 2].mean(axis=1)
    return FaceSlopes(theta_deg=theta, area_mm2=areas, centroid_z=centroid_z)
