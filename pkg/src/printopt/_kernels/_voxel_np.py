"""Reference voxel kernels in numpy.

The compiled twin in ``_voxel_cy.pyx`` mirrors these loops expression for
expression (explicit temporaries, same operation order), so both backends
return identical arrays on identical input. Keep them in sync.
"""

from __future__ import annotations

import math

import numpy as np


def fill_columns(
    corners: np.ndarray,
    origin: np.ndarray,
    pitch: float,
    nx: int,
    ny: int,
    nz: int,
    jx: float,
    jy: float,
) -> np.ndarray:
    """Accumulate surface-crossing counts on the jittered column lattice.

    Casts one vertical ray per cell column at
    ``(ox + (ix + 0.5) * pitch + jx, oy + (iy + 0.5) * pitch + jy)`` and
    bins each triangle crossing by the first cell whose center lies above
    it. Entry ``[k, iy, ix]`` of the result therefore counts crossings
    below the center of cell ``k``; the extra top row collects crossings
    at or above the last center. Column parity comes out of a cumulative
    sum over ``k``.
    """
    counts = np.zeros((nz + 1, ny, nx), dtype=np.int32)
    ox = float(origin[0])
    oy = float(origin[1])
    oz = float(origin[2])
    for tri in corners:
        x0 = float(tri[0, 0]); y0 = float(tri[0, 1]); z0 = float(tri[0, 2])
        x1 = float(tri[1, 0]); y1 = float(tri[1, 1]); z1 = float(tri[1, 2])
        x2 = float(tri[2, 0]); y2 = float(tri[2, 1]); z2 = float(tri[2, 2])
        d = (x1 - x0) * (y2 - y0) - (y1 - y0) * (x2 - x0)
        if d == 0.0:
            continue  # vertical face: projects to a segment, never crossed
        if d < 0.0:
            x1, y1, z1, x2, y2, z2 = x2, y2, z2, x1, y1, z1
        xmin = min(x0, x1, x2)
        xmax = max(x0, x1, x2)
        ymin = min(y0, y1, y2)
        ymax = max(y0, y1, y2)
        ix_lo = max(0, int(math.ceil((xmin - ox - jx) / pitch - 0.5)))
        ix_hi = min(nx - 1, int(math.floor((xmax - ox - jx) / pitch - 0.5)))
        iy_lo = max(0, int(math.ceil((ymin - oy - jy) / pitch - 0.5)))
        iy_hi = min(ny - 1, int(math.floor((ymax - oy - jy) / pitch - 0.5)))
        if ix_lo > ix_hi or iy_lo > iy_hi:
            continue
        xi = np.arange(ix_lo, ix_hi + 1)
        yi = np.arange(iy_lo, iy_hi + 1)
        px = ox + (xi + 0.5) * pitch + jx
        py = oy + (yi + 0.5) * pitch + jy
        pxg, pyg = np.meshgrid(px, py)
        a0 = (x1 - x0) * (pyg - y0)
        b0 = (y1 - y0) * (pxg - x0)
        e0 = a0 - b0
        a1 = (x2 - x1) * (pyg - y1)
        b1 = (y2 - y1) * (pxg - x1)
        e1 = a1 - b1
        a2 = (x0 - x2) * (pyg - y2)
        b2 = (y0 - y2) * (pxg - x2)
        e2 = a2 - b2
        inside = (e0 > 0.0) & (e1 > 0.0) & (e2 > 0.0)
        if not inside.any():
            continue
        nrx = (y1 - y0) * (z2 - z0) - (z1 - z0) * (y2 - y0)
        nry = (z1 - z0) * (x2 - x0) - (x1 - x0) * (z2 - z0)
        nrz = (x1 - x0) * (y2 - y0) - (y1 - y0) * (x2 - x0)
        t1 = nrx * (x0 - pxg)
        t2 = nry * (y0 - pyg)
        zc = z0 + (t1 + t2) / nrz
        q = (zc - oz) / pitch - 0.5
        idx = np.ceil(q).astype(np.int64)
        np.clip(idx, 0, nz, out=idx)
        iyg, ixg = np.meshgrid(yi, xi, indexing="ij")
        np.add.at(counts, (idx[inside], iyg[inside], ixg[inside]), 1)
    return counts


def sample_shell(
    corners: np.ndarray,
    origin: np.ndarray,
    pitch: float,
    nx: int,
    ny: int,
    nz: int,
    step: float,
) -> np.ndarray:
    """Mark cells touched by triangle surfaces (open-mesh fallback).

    Each face is sampled on a barycentric lattice whose spacing along the
    longest edge does not exceed ``step``. The result is a hollow shell,
    not a solid; callers must flag the degraded mode.
    """
    occ = np.zeros((nz, ny, nx), dtype=bool)
    ox = float(origin[0])
    oy = float(origin[1])
    oz = float(origin[2])
    for tri in corners:
        x0 = float(tri[0, 0]); y0 = float(tri[0, 1]); z0 = float(tri[0, 2])
        x1 = float(tri[1, 0]); y1 = float(tri[1, 1]); z1 = float(tri[1, 2])
        x2 = float(tri[2, 0]); y2 = float(tri[2, 1]); z2 = float(tri[2, 2])
        dx = x1 - x0; dy = y1 - y0; dz = z1 - z0
        e01 = math.sqrt(dx * dx + dy * dy + dz * dz)
        dx = x2 - x0; dy = y2 - y0; dz = z2 - z0
        e02 = math.sqrt(dx * dx + dy * dy + dz * dz)
        dx = x2 - x1; dy = y2 - y1; dz = z2 - z1
        e12 = math.sqrt(dx * dx + dy * dy + dz * dz)
        longest = max(e01, e02, e12)
        n = int(longest / step) + 1
        i, j = np.meshgrid(np.arange(n + 1), np.arange(n + 1), indexing="ij")
        keep = (i + j) <= n
        fi = i[keep] / float(n)
        fj = j[keep] / float(n)
        t1 = (x1 - x0) * fi
        t2 = (x2 - x0) * fj
        sx = x0 + t1 + t2
        t1 = (y1 - y0) * fi
        t2 = (y2 - y0) * fj
        sy = y0 + t1 + t2
        t1 = (z1 - z0) * fi
        t2 = (z2 - z0) * fj
        sz = z0 + t1 + t2
        cx = np.floor((sx - ox) / pitch).astype(np.int64)
        cy = np.floor((sy - oy) / pitch).astype(np.int64)
        cz = np.floor((sz - oz) / pitch).astype(np.int64)
        np.clip(cx, 0, nx - 1, out=cx)
        np.clip(cy, 0, ny - 1, out=cy)
        np.clip(cz, 0, nz - 1, out=cz)
        occ[cz, cy, cx] = True
    return occ
