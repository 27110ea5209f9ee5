from .core import (
    ORIENTATION_ANGLES,
    FaceSlopes,
    Orientation,
    TriangleMesh,
    build_mesh,
    face_slopes,
    orient,
)
from .layers import LayerStack, build_layers, layer_count, part_height_of
from .stl import parse_mesh, write_binary
from .voxel import (
    DEFAULT_PITCH,
    MAX_CELLS,
    SupportMetrics,
    VoxelGrid,
    support_metrics,
    voxelize,
)

__all__ = [
    "ORIENTATION_ANGLES",
    "DEFAULT_PITCH",
    "MAX_CELLS",
    "FaceSlopes",
    "LayerStack",
    "Orientation",
    "SupportMetrics",
    "TriangleMesh",
    "VoxelGrid",
    "build_layers",
    "build_mesh",
    "face_slopes",
    "layer_count",
    "orient",
    "parse_mesh",
    "part_height_of",
    "support_metrics",
    "voxelize",
    "write_binary",
]
