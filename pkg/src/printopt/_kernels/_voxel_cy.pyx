# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled twins of the numpy voxel kernels.

Every float expression stores its intermediate products in double
temporaries before combining them, matching the operation order of
``_voxel_np`` exactly. That keeps the two backends bit-identical; do not
"simplify" the arithmetic here without changing the reference too.
"""

from libc.math cimport ceil, floor, sqrt

import numpy as np


def fill_columns(corners, origin, double pitch,
                 Py_ssize_t nx, Py_ssize_t ny, Py_ssize_t nz,
                 double jx, double jy):
    cdef double[:, :, ::1] tri = np.ascontiguousarray(corners, dtype=np.float64)
    counts_arr = np.zeros((nz + 1, ny, nx), dtype=np.int32)
    cdef int[:, :, ::1] counts = counts_arr
    cdef double ox = float(origin[0])
    cdef double oy = float(origin[1])
    cdef double oz = float(origin[2])
    cdef Py_ssize_t m = tri.shape[0]
    cdef Py_ssize_t t, ix, iy, idx
    cdef Py_ssize_t ix_lo, ix_hi, iy_lo, iy_hi
    cdef double x0, y0, z0, x1, y1, z1, x2, y2, z2
    cdef double d, tmp, xmin, xmax, ymin, ymax
    cdef double px, py, a0, b0, e0, a1, b1, e1, a2, b2, e2
    cdef double nrx, nry, nrz, t1, t2, zc, q

    for t in range(m):
        x0 = tri[t, 0, 0]; y0 = tri[t, 0, 1]; z0 = tri[t, 0, 2]
        x1 = tri[t, 1, 0]; y1 = tri[t, 1, 1]; z1 = tri[t, 1, 2]
        x2 = tri[t, 2, 0]; y2 = tri[t, 2, 1]; z2 = tri[t, 2, 2]
        a0 = (x1 - x0) * (y2 - y0)
        b0 = (y1 - y0) * (x2 - x0)
        d = a0 - b0
        if d == 0.0:
            continue
        if d < 0.0:
            tmp = x1; x1 = x2; x2 = tmp
            tmp = y1; y1 = y2; y2 = tmp
            tmp = z1; z1 = z2; z2 = tmp
        xmin = x0
        if x1 < xmin: xmin = x1
        if x2 < xmin: xmin = x2
        xmax = x0
        if x1 > xmax: xmax = x1
        if x2 > xmax: xmax = x2
        ymin = y0
        if y1 < ymin: ymin = y1
        if y2 < ymin: ymin = y2
        ymax = y0
        if y1 > ymax: ymax = y1
        if y2 > ymax: ymax = y2
        ix_lo = <Py_ssize_t>ceil((xmin - ox - jx) / pitch - 0.5)
        if ix_lo < 0: ix_lo = 0
        ix_hi = <Py_ssize_t>floor((xmax - ox - jx) / pitch - 0.5)
        if ix_hi > nx - 1: ix_hi = nx - 1
        iy_lo = <Py_ssize_t>ceil((ymin - oy - jy) / pitch - 0.5)
        if iy_lo < 0: iy_lo = 0
        iy_hi = <Py_ssize_t>floor((ymax - oy - jy) / pitch - 0.5)
        if iy_hi > ny - 1: iy_hi = ny - 1
        if ix_lo > ix_hi or iy_lo > iy_hi:
            continue
        nrx = (y1 - y0) * (z2 - z0)
        t1 = (z1 - z0) * (y2 - y0)
        nrx = nrx - t1
        nry = (z1 - z0) * (x2 - x0)
        t1 = (x1 - x0) * (z2 - z0)
        nry = nry - t1
        nrz = (x1 - x0) * (y2 - y0)
        t1 = (y1 - y0) * (x2 - x0)
        nrz = nrz - t1
        for iy in range(iy_lo, iy_hi + 1):
            py = oy + (iy + 0.5) * pitch + jy
            for ix in range(ix_lo, ix_hi + 1):
                px = ox + (ix + 0.5) * pitch + jx
                a0 = (x1 - x0) * (py - y0)
                b0 = (y1 - y0) * (px - x0)
                e0 = a0 - b0
                if e0 <= 0.0:
                    continue
                a1 = (x2 - x1) * (py - y1)
                b1 = (y2 - y1) * (px - x1)
                e1 = a1 - b1
                if e1 <= 0.0:
                    continue
                a2 = (x0 - x2) * (py - y2)
                b2 = (y0 - y2) * (px - x2)
                e2 = a2 - b2
                if e2 <= 0.0:
                    continue
                t1 = nrx * (x0 - px)
                t2 = nry * (y0 - py)
                zc = z0 + (t1 + t2) / nrz
                q = (zc - oz) / pitch - 0.5
                idx = <Py_ssize_t>ceil(q)
                if idx < 0: idx = 0
                if idx > nz: idx = nz
                counts[idx, iy, ix] += 1
    return counts_arr


def sample_shell(corners, origin, double pitch,
                 Py_ssize_t nx, Py_ssize_t ny, Py_ssize_t nz,
                 double step):
    cdef double[:, :, ::1] tri = np.ascontiguousarray(corners, dtype=np.float64)
    occ_arr = np.zeros((nz, ny, nx), dtype=bool)
    cdef unsigned char[:, :, ::1] occ = occ_arr.view(np.uint8)
    cdef double ox = float(origin[0])
    cdef double oy = float(origin[1])
    cdef double oz = float(origin[2])
    cdef Py_ssize_t m = tri.shape[0]
    cdef Py_ssize_t t, i, j, n, cx, cy, cz
    cdef double x0, y0, z0, x1, y1, z1, x2, y2, z2
    cdef double e01, e02, e12, longest, fi, fj, t1, t2, sx, sy, sz
    cdef double dx, dy, dz

    for t in range(m):
        x0 = tri[t, 0, 0]; y0 = tri[t, 0, 1]; z0 = tri[t, 0, 2]
        x1 = tri[t, 1, 0]; y1 = tri[t, 1, 1]; z1 = tri[t, 1, 2]
        x2 = tri[t, 2, 0]; y2 = tri[t, 2, 1]; z2 = tri[t, 2, 2]
        dx = x1 - x0; dy = y1 - y0; dz = z1 - z0
        t1 = dx * dx
        t2 = dy * dy
        e01 = sqrt(t1 + t2 + dz * dz)
        dx = x2 - x0; dy = y2 - y0; dz = z2 - z0
        t1 = dx * dx
        t2 = dy * dy
        e02 = sqrt(t1 + t2 + dz * dz)
        dx = x2 - x1; dy = y2 - y1; dz = z2 - z1
        t1 = dx * dx
        t2 = dy * dy
        e12 = sqrt(t1 + t2 + dz * dz)
        longest = e01
        if e02 > longest: longest = e02
        if e12 > longest: longest = e12
        n = <Py_ssize_t>(longest / step) + 1
        for i in range(n + 1):
            fi = <double>i / <double>n
            for j in range(n + 1 - i):
                fj = <double>j / <double>n
                t1 = (x1 - x0) * fi
                t2 = (x2 - x0) * fj
                sx = x0 + t1 + t2
                t1 = (y1 - y0) * fi
                t2 = (y2 - y0) * fj
                sy = y0 + t1 + t2
                t1 = (z1 - z0) * fi
                t2 = (z2 - z0) * fj
                sz = z0 + t1 + t2
                cx = <Py_ssize_t>floor((sx - ox) / pitch)
                cy = <Py_ssize_t>floor((sy - oy) / pitch)
                cz = <Py_ssize_t>floor((sz - oz) / pitch)
                if cx < 0: cx = 0
                if cx > nx - 1: cx = nx - 1
                if cy < 0: cy = 0
                if cy > ny - 1: cy = ny - 1
                if cz < 0: cz = 0
                if cz > nz - 1: cz = nz - 1
                occ[cz, cy, cx] = 1
    return occ_arr
