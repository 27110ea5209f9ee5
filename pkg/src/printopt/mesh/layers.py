"""Print-layer bookkeeping on top of the voxel grid.

Layers are much thinner than voxel slabs, so each layer maps onto a slab
range and per-range geometry can be shared across the layers inside it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_EPS = 1e-9


@dataclass(frozen=True)
class LayerStack:
    """Layer boundaries plus the slab range [k_lo, k_hi) each layer spans."""

    z_lo: np.ndarray
    z_hi: np.ndarray
    k_lo: np.ndarray
    k_hi: np.ndarray
    first_layer_height: float
    layer_height: float

    @property
    def n_layers(self) -> int:
        return len(self.z_lo)

    def thickness(self, i: int) -> float:
        return float(self.z_hi[i] - self.z_lo[i])

    def range_of(self, i: int) -> tuple[int, int]:
        return int(self.k_lo[i]), int(self.k_hi[i])

    def distinct_ranges(self) -> list[tuple[int, int]]:
        seen = dict.fromkeys(zip(self.k_lo.tolist(), self.k_hi.tolist()))
        return list(seen)


def build_layers(
    part_height: float,
    first_layer_height: float,
    layer_height: float,
    pitch: float,
    n_slabs: int,
) -> LayerStack:
    """Split [0, part_height] into a first layer plus uniform layers.

    The final layer is allowed to run thin. Every layer claims at least one
    slab so downstream per-layer stats never see an empty range.
    """
    if part_height <= 0:
        raise ValueError(f"part height must be positive, got {part_height}")
    bounds = [0.0, min(first_layer_height, part_height)]
    while bounds[-1] < part_height - _EPS:
        bounds.append(min(bounds[-1] + layer_height, part_height))
    z = np.array(bounds)
    z_lo = z[:-1]
    z_hi = z[1:]
    k_lo = np.floor(z_lo / pitch + _EPS).astype(np.int64)
    np.clip(k_lo, 0, n_slabs - 1, out=k_lo)
    k_hi = np.ceil(z_hi / pitch - _EPS).astype(np.int64)
    np.clip(k_hi, 1, n_slabs, out=k_hi)
    k_hi = np.maximum(k_hi, k_lo + 1)
    return LayerStack(
        z_lo=z_lo,
        z_hi=z_hi,
        k_lo=k_lo,
        k_hi=k_hi,
        first_layer_height=first_layer_height,
        layer_height=layer_height,
    )


def part_height_of(grid_top_slab: int, pitch: float) -> float:
    """Part height implied by the highest occupied slab."""
    if grid_top_slab < 0:
        return 0.0
    return (grid_top_slab + 1) * pitch


def layer_count(part_height: float, first_layer_height: float, layer_height: float) -> int:
    """Number of layers without materializing the stack."""
    if part_height <= first_layer_height + _EPS:
        return 1
    return 1 + int(math.ceil((part_height - first_layer_height - _EPS) / layer_height))
