"""The compiled voxel kernels and the numpy fallback must agree bitwise."""

import os
import subprocess
import sys

import numpy as np
import pytest

from printopt import fixtures
from printopt._kernels import BACKEND, _voxel_np
from printopt.mesh import Orientation, orient, voxelize

try:
    from printopt._kernels import _voxel_cy
except ImportError:
    _voxel_cy = None

needs_compiled = pytest.mark.skipif(
    _voxel_cy is None, reason="compiled extension not built"
)


def _column_inputs(name, pitch=0.8):
    mesh = orient(fixtures.make(name), Orientation())
    lo, hi = mesh.bounds()
    extent = hi - lo
    nx, ny, nz = (int(np.ceil(e / pitch)) + 1 for e in extent)
    corners = np.ascontiguousarray(mesh.face_corners() - lo)
    origin = np.zeros(3)
    return corners, origin, pitch, nx, ny, nz


@needs_compiled
@pytest.mark.parametrize("name", ["cube", "ramp", "mushroom", "table", "towers"])
def test_fill_columns_backends_agree(name):
    corners, origin, pitch, nx, ny, nz = _column_inputs(name)
    jx, jy = pitch * 2.0**-14, pitch * 2.0**-13
    a = _voxel_np.fill_columns(corners, origin, pitch, nx, ny, nz, jx, jy)
    b = _voxel_cy.fill_columns(corners, origin, pitch, nx, ny, nz, jx, jy)
    np.testing.assert_array_equal(a, b)


@needs_compiled
@pytest.mark.parametrize("name", ["cube", "l_bracket", "ring"])
def test_sample_shell_backends_agree(name):
    corners, origin, pitch, nx, ny, nz = _column_inputs(name)
    a = _voxel_np.sample_shell(corners, origin, pitch, nx, ny, nz, pitch * 0.5)
    b = _voxel_cy.sample_shell(corners, origin, pitch, nx, ny, nz, pitch * 0.5)
    np.testing.assert_array_equal(a, b)


@needs_compiled
@pytest.mark.parametrize("name", ["cube", "bridge", "disjoint_towers"])
def test_voxelize_identical_across_backends(name, monkeypatch):
    placed = orient(fixtures.make(name), Orientation())
    compiled = voxelize(placed, pitch=0.8)
    monkeypatch.setattr("printopt._kernels.fill_columns", _voxel_np.fill_columns)
    monkeypatch.setattr("printopt._kernels.sample_shell", _voxel_np.sample_shell)
    fallback = voxelize(placed, pitch=0.8)
    np.testing.assert_array_equal(compiled.cells, fallback.cells)
    assert compiled.shell_fallback == fallback.shell_fallback


def test_backend_name_is_reported():
    assert BACKEND in ("cython", "numpy")


def test_env_var_forces_numpy_backend():
    env = dict(os.environ, PRINTOPT_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from printopt._kernels import BACKEND; print(BACKEND)"],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout.strip() == "numpy"


def test_env_var_zero_keeps_default_backend():
    env = dict(os.environ, PRINTOPT_PURE_PYTHON="0")
    out = subprocess.run(
        [sys.executable, "-c", "from printopt._kernels import BACKEND; print(BACKEND)"],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout.strip() == BACKEND
