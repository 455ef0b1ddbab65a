import math

import numpy as np
import pytest

import debrisplan.mesh as meshmod
from debrisplan.mesh import (KIT_DEORBIT, SENTINEL, VEHICLE_DEORBIT,
                             CostMesh, MeshFormatError, MeshGrid, build_grid,
                             edge_cost, fill_mesh, interpolate, load, save)
from tests.conftest import make_problem

DAY = 86400.0


@pytest.fixture(scope="module")
def small_mesh(debris21):
    debris = debris21[:5]
    grid = build_grid(0.0, 400.0 * DAY, 3, 1,
                      dates=np.array([0.0, 100.0, 200.0]) * DAY,
                      durations=np.array([60.0, 120.0, 180.0]) * DAY)
    template = make_problem(debris[0], debris[1], 0.0, 100.0 * DAY)
    return fill_mesh(debris, grid, template, workers=1), debris


def test_default_grid_spans_program_window():
    grid = build_grid(0.0, 1370.0 * DAY, 7, 3)
    assert grid.dates[0] == 0.0
    assert grid.dates[-1] == pytest.approx(1370.0 * DAY)
    assert np.all(np.diff(grid.dates) > 0)
    assert np.all(np.diff(grid.durations) > 0)
    assert grid.durations[0] > 0


def test_explicit_grid_passthrough():
    dates = np.array([0.0, 50.0, 100.0]) * DAY
    durations = np.array([20.0, 40.0]) * DAY
    grid = build_grid(0.0, 100.0 * DAY, 3, 1, dates=dates,
                      durations=durations)
    assert np.array_equal(grid.dates, dates)
    assert np.array_equal(grid.durations, durations)


def test_mesh_shape_and_diagonal(small_mesh):
    mesh, debris = small_mesh
    n = len(debris)
    assert mesh.costs.shape == (3, 3, n, n)
    # staying put costs exactly the operation delta-V
    for i in range(n):
        diag = mesh.costs[:, :, i, i]
        assert np.all(diag == debris[i].op_cost)


def test_mesh_has_finite_and_sentinel_cells(small_mesh):
    mesh, _ = small_mesh
    off_diag = ~np.eye(mesh.costs.shape[2], dtype=bool)
    vals = mesh.costs[:, :, off_diag]
    assert np.any(vals < SENTINEL)
    assert np.any(vals == SENTINEL)
    finite = vals[vals < SENTINEL]
    assert np.all(finite >= 0.0)
    assert np.all(finite < 5000.0)


def test_fill_deterministic_across_workers(small_mesh, debris21):
    mesh1, debris = small_mesh
    grid = mesh1.grid
    template = make_problem(debris[0], debris[1], 0.0, 100.0 * DAY)
    mesh2 = fill_mesh(debris, grid, template, workers=3)
    assert np.array_equal(mesh1.costs, mesh2.costs)


def test_save_load_roundtrip(small_mesh, tmp_path):
    mesh, _ = small_mesh
    path = tmp_path / "mesh.bin"
    save(mesh, path)
    back = load(path)
    assert np.array_equal(back.costs, mesh.costs)
    assert np.array_equal(back.grid.dates, mesh.grid.dates)
    assert np.array_equal(back.grid.durations, mesh.grid.durations)
    assert back.debris_ids == mesh.debris_ids
    assert back.mode == mesh.mode
    assert back.sentinel == mesh.sentinel


def test_save_byte_deterministic(small_mesh, tmp_path):
    mesh, _ = small_mesh
    p1, p2 = tmp_path / "a.bin", tmp_path / "b.bin"
    save(mesh, p1)
    save(mesh, p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_load_rejects_bad_magic(small_mesh, tmp_path):
    mesh, _ = small_mesh
    path = tmp_path / "mesh.bin"
    save(mesh, path)
    raw = bytearray(path.read_bytes())
    raw[:8] = b"NOTAMESH"
    path.write_bytes(bytes(raw))
    with pytest.raises(MeshFormatError, match="magic"):
        load(path)


def test_load_rejects_truncation(small_mesh, tmp_path):
    mesh, _ = small_mesh
    path = tmp_path / "mesh.bin"
    save(mesh, path)
    raw = path.read_bytes()
    path.write_bytes(raw[:-16])
    with pytest.raises(MeshFormatError):
        load(path)


def test_load_rejects_corrupted_payload(small_mesh, tmp_path):
    mesh, _ = small_mesh
    path = tmp_path / "mesh.bin"
    save(mesh, path)
    raw = bytearray(path.read_bytes())
    raw[-5] ^= 0xFF
    path.write_bytes(bytes(raw))
    with pytest.raises(MeshFormatError, match="checksum"):
        load(path)


def test_interpolate_exact_at_nodes(small_mesh):
    mesh, _ = small_mesh
    for it, t in enumerate(mesh.grid.dates):
        for idt, dt in enumerate(mesh.grid.durations):
            v = interpolate(mesh, float(t), float(dt), 0, 1)
            assert v == mesh.costs[it, idt, 0, 1]


def test_interpolate_matches_bilinear_formula(small_mesh):
    mesh, _ = small_mesh
    taxis, daxis = mesh.grid.dates, mesh.grid.durations
    t = 0.3 * taxis[0] + 0.7 * taxis[1]
    dt = 0.6 * daxis[1] + 0.4 * daxis[2]
    c = mesh.costs
    j, k = 0, 2
    if np.all(c[0:2, 1:3, j, k] < SENTINEL):
        u = (t - taxis[0]) / (taxis[1] - taxis[0])
        v = (dt - daxis[1]) / (daxis[2] - daxis[1])
        expected = ((1 - u) * (1 - v) * c[0, 1, j, k]
                    + u * (1 - v) * c[1, 1, j, k]
                    + (1 - u) * v * c[0, 2, j, k]
                    + u * v * c[1, 2, j, k])
        assert interpolate(mesh, t, dt, j, k) == pytest.approx(
            expected, rel=1e-12)


def test_interpolate_propagates_sentinel(small_mesh):
    mesh, _ = small_mesh
    c = mesh.costs
    sent = np.argwhere(c == SENTINEL)
    # pick a cell whose corner is a sentinel entry
    for it, idt, j, k in sent:
        if j != k and it + 1 < c.shape[0] and idt + 1 < c.shape[1]:
            t = 0.5 * (mesh.grid.dates[it] + mesh.grid.dates[it + 1])
            dt = 0.5 * (mesh.grid.durations[idt]
                        + mesh.grid.durations[idt + 1])
            assert interpolate(mesh, t, dt, int(j), int(k)) >= SENTINEL
            return
    pytest.skip("no interior sentinel corner in this mesh")


def test_interpolate_rejects_self_transfer(small_mesh):
    mesh, _ = small_mesh
    with pytest.raises(ValueError):
        interpolate(mesh, 0.0, mesh.grid.durations[0], 1, 1)


def test_edge_cost_deorbit_options(small_mesh):
    mesh, debris = small_mesh
    t, dt = float(mesh.grid.dates[0]), float(mesh.grid.durations[1])
    base = interpolate(mesh, t, dt, 0, 1)
    if base >= SENTINEL:
        pytest.skip("transfer infeasible at this node")
    vehicle = edge_cost(mesh, t, dt, 0, 1, weight=1.0,
                        deorbit_option=VEHICLE_DEORBIT)
    kit = edge_cost(mesh, t, dt, 0, 1, weight=1.0,
                    deorbit_option=KIT_DEORBIT)
    assert vehicle == pytest.approx(base + debris[1].op_cost)
    assert kit == pytest.approx(base)
    double = edge_cost(mesh, t, dt, 0, 1, weight=2.0,
                       deorbit_option=VEHICLE_DEORBIT)
    assert double == pytest.approx(2.0 * vehicle)
