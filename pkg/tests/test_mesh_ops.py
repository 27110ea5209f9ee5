"""Orientation, slope statistics, voxelization, and layer bookkeeping."""

import math

import numpy as np
import pytest
from scipy import ndimage

from printopt import fixtures
from printopt.errors import ResolutionError
from printopt.mesh import (
    Orientation,
    VoxelGrid,
    build_layers,
    build_mesh,
    face_slopes,
    layer_count,
    orient,
    part_height_of,
    support_metrics,
    voxelize,
)


# ---------------------------------------------------------------- orientation

def test_orientation_rejects_off_grid_angles():
    with pytest.raises(ValueError):
        Orientation(x=45)
    with pytest.raises(ValueError):
        Orientation(z=-90)


def test_rotation_matrices_are_exact_integers():
    rx90 = Orientation(x=90).matrix()
    np.testing.assert_array_equal(rx90, [[1, 0, 0], [0, 0, -1], [0, 1, 0]])
    # composite equals the product of the single-axis matrices
    combo = Orientation(x=90, y=180, z=270).matrix()
    manual = (
        Orientation(z=270).matrix()
        @ Orientation(y=180).matrix()
        @ Orientation(x=90).matrix()
    )
    np.testing.assert_array_equal(combo, manual)
    assert combo.dtype == np.float64
    assert set(np.unique(combo)) <= {-1.0, 0.0, 1.0}


def test_orient_rests_part_on_plate(unit_cube):
    for o in (Orientation(), Orientation(x=90), Orientation(y=270, z=90)):
        placed = orient(unit_cube, o)
        lo, hi = placed.bounds()
        assert lo[2] == pytest.approx(0.0, abs=1e-12)
        assert hi[2] - lo[2] == pytest.approx(1.0, abs=1e-9)


def test_orient_matches_manual_rotation_oracle():
    mesh = fixtures.make("l_bracket")
    o = Orientation(y=90)
    placed = orient(mesh, o)
    # independent oracle: rotate about the bbox center, then rest on z=0
    lo, hi = mesh.bounds()
    center = (lo + hi) / 2.0
    rotated = (mesh.vertices - center) @ o.matrix().T + center
    rotated[:, 2] -= rotated[np.unique(mesh.triangles), 2].min()
    used = np.unique(placed.triangles)
    np.testing.assert_allclose(
        np.sort(placed.vertices[used], axis=0),
        np.sort(rotated[used], axis=0),
        atol=1e-9,
    )
    # a quarter turn about y swaps the x and z extents
    plo, phi = placed.bounds()
    olo, ohi = mesh.bounds()
    assert phi[0] - plo[0] == pytest.approx(ohi[2] - olo[2])
    assert phi[2] - plo[2] == pytest.approx(ohi[0] - olo[0])


def test_orient_is_deterministic(unit_cube):
    a = orient(unit_cube, Orientation(x=90, z=180))
    b = orient(unit_cube, Orientation(x=90, z=180))
    np.testing.assert_array_equal(a.vertices, b.vertices)
    np.testing.assert_array_equal(a.triangles, b.triangles)


# ---------------------------------------------------------------- face slopes

def test_cube_face_slopes(unit_cube):
    slopes = face_slopes(orient(unit_cube, Orientation()))
    top = slopes.area_mm2[slopes.theta_deg < 1e-9].sum()
    bottom = slopes.area_mm2[slopes.theta_deg > 180 - 1e-9].sum()
    sides = slopes.area_mm2[np.abs(slopes.theta_deg - 90) < 1e-9].sum()
    assert top == pytest.approx(1.0)
    assert bottom == pytest.approx(1.0)
    assert sides == pytest.approx(4.0)
    # top-face centroids sit at the top of the part
    assert np.all(slopes.centroid_z[slopes.theta_deg < 1e-9] == pytest.approx(1.0))


def test_ramp_has_dominant_45_degree_face():
    slopes = face_slopes(orient(fixtures.make("ramp"), Orientation()))
    at45 = np.abs(slopes.theta_deg - 45.0) < 1e-6
    assert at45.any()
    # 20 x 10 footprint rising 20 mm: slope area = 10 * sqrt(800)
    assert slopes.area_mm2[at45].sum() == pytest.approx(10 * math.sqrt(800), rel=1e-9)


# --------------------------------------------------------------- voxelization

def test_unit_cube_fills_expected_cells(unit_cube):
    placed = orient(unit_cube, Orientation())
    g = voxelize(placed, pitch=0.5)
    assert g.cells.shape == (2, 2, 2)
    assert g.occupied_count() == 8
    assert not g.shell_fallback
    assert g.volume_mm3() == pytest.approx(1.0)
    g1 = voxelize(placed, pitch=1.0)
    assert g1.occupied_count() == 1


def test_sphere_volume_close_to_analytic():
    base = fixtures.make("sphere")  # radius 8 icosphere
    r5 = build_mesh(base.vertices * (5.0 / 8.0), base.triangles, name="r5")
    g = voxelize(orient(r5, Orientation()), pitch=1.0)
    analytic = 4.0 / 3.0 * math.pi * 5.0**3
    assert abs(g.volume_mm3() - analytic) / analytic < 0.10


def test_voxelize_is_deterministic():
    placed = orient(fixtures.make("mushroom"), Orientation())
    a = voxelize(placed, pitch=0.8)
    b = voxelize(placed, pitch=0.8)
    np.testing.assert_array_equal(a.cells, b.cells)
    np.testing.assert_array_equal(a.origin, b.origin)


def test_excessive_resolution_rejected(unit_cube):
    with pytest.raises(ResolutionError):
        voxelize(orient(unit_cube, Orientation()), pitch=0.001)


def test_open_surface_falls_back_to_shell_sampling():
    # a lone triangle can never produce even crossing counts
    v = np.array([[0, 0, 0], [4, 0, 0], [0, 4, 2]], dtype=float)
    tri = build_mesh(v, np.array([[0, 1, 2]]), name="open")
    g = voxelize(orient(tri, Orientation()), pitch=0.8)
    assert g.shell_fallback
    assert g.occupied_count() > 0


# ------------------------------------------------------------ support metrics

def test_flat_cube_needs_no_support(unit_cube):
    g = voxelize(orient(unit_cube, Orientation()), pitch=0.5)
    sm = support_metrics(g)
    assert sm.unsupported_mm2 == 0.0
    assert sm.bed_contact_mm2 == pytest.approx(sm.footprint_mm2)


def test_table_unsupported_area_matches_array_oracle():
    g = voxelize(orient(fixtures.make("table"), Orientation()), pitch=0.8)
    sm = support_metrics(g)
    occ = g.cells
    overhang = occ[1:] & ~occ[:-1]
    assert sm.unsupported_mm2 == pytest.approx(overhang.sum() * g.pitch**2)
    assert sm.bed_contact_mm2 == pytest.approx(occ[0].sum() * g.pitch**2)
    assert sm.footprint_mm2 == pytest.approx(occ.any(axis=0).sum() * g.pitch**2)
    # tabletop underside minus the four leg cross sections
    assert sm.unsupported_mm2 == pytest.approx(24 * 24 - 4 * 16)


def test_empty_grid_has_no_top_slab():
    g = VoxelGrid(
        cells=np.zeros((3, 3, 3), dtype=bool),
        pitch=1.0,
        origin=np.zeros(3),
    )
    assert g.top_slab() == -1
    assert part_height_of(g.top_slab(), g.pitch) == 0.0


def test_detached_upper_body_starts_a_new_component():
    g = voxelize(orient(fixtures.make("floating_cube"), Orientation()), pitch=0.8)
    occ = g.cells
    found = False
    for k in range(1, occ.shape[0]):
        labels, n = ndimage.label(occ[k])
        for idx in range(1, n + 1):
            region = labels == idx
            if not (region & occ[k - 1]).any():
                found = True
    assert found, "fixture should contain a slab component with nothing below it"


# --------------------------------------------------------------------- layers

def test_layer_stack_partitions_part_height():
    stack = build_layers(10.0, first_layer_height=0.2, layer_height=0.2, pitch=0.8, n_slabs=13)
    assert stack.n_layers == 50
    assert stack.z_lo[0] == 0.0
    assert stack.thickness(0) == pytest.approx(0.2)
    assert stack.z_hi[-1] == pytest.approx(10.0)
    np.testing.assert_allclose(stack.z_lo[1:], stack.z_hi[:-1])


def test_last_layer_may_run_thin():
    stack = build_layers(1.05, first_layer_height=0.3, layer_height=0.2, pitch=0.8, n_slabs=2)
    assert stack.n_layers == 5
    assert stack.thickness(0) == pytest.approx(0.3)
    assert stack.thickness(stack.n_layers - 1) == pytest.approx(0.15)


def test_every_layer_claims_at_least_one_slab():
    stack = build_layers(8.0, first_layer_height=0.1, layer_height=0.05, pitch=0.8, n_slabs=10)
    assert np.all(stack.k_hi > stack.k_lo)
    assert stack.k_lo.min() >= 0
    assert stack.k_hi.max() <= 10
    # slab ranges move monotonically with height
    assert np.all(np.diff(stack.k_lo) >= 0)


def test_layer_count_matches_built_stack():
    for h, flh, lh in [(10.0, 0.2, 0.2), (7.3, 0.35, 0.07), (0.1, 0.3, 0.2)]:
        stack = build_layers(h, flh, lh, pitch=0.8, n_slabs=40)
        assert layer_count(h, flh, lh) == stack.n_layers


def test_zero_height_part_rejected():
    with pytest.raises(ValueError):
        build_layers(0.0, 0.2, 0.2, pitch=0.8, n_slabs=1)
