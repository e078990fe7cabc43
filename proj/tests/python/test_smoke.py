import json
import math

import numpy as np
import pytest

import sodalite


def test_ideal_placement():
    p = sodalite.ideal()
    assert p.validate(1e-9)["ok"]
    g = p.generators
    s2 = math.sqrt(2.0)
    assert np.allclose(g, s2 * np.array([[1, -1, -1], [-1, 1, -1], [-1, -1, 1]]), atol=1e-12)
    assert p.vertices.shape == (24, 3)
    assert p.central_residual() < 1e-12
    assert p.d3_residual() < 1e-12


def test_json_round_trip():
    p = sodalite.sample_central(3, 42)[2]
    text = p.to_json()
    q = sodalite.from_json(text)
    assert q.to_json() == text
    assert json.loads(text)["schema_version"] == 1
    with pytest.raises(sodalite.DocumentError):
        sodalite.from_json("{}")


def test_central_component():
    p = sodalite.central_deform()
    assert np.abs(p.vertices - sodalite.ideal().vertices).max() < 1e-12
    for q in sodalite.sample_central(20, 42):
        assert q.validate(1e-9)["ok"]
        assert q.central_residual() < 1e-10
    t = sodalite.central_tangent_basis()
    assert np.linalg.matrix_rank(t / np.linalg.norm(t, axis=0), tol=1e-6) == 6
    assert np.abs(sodalite.jacobian(sodalite.ideal()) @ t).max() < 1e-6


def test_tilt_curve():
    tr = sodalite.trace_tilt_curve(0.01, 30, -1)
    pts = tr["points"]
    assert len(pts) == 31
    vol = [pt["lattice_volume"] for pt in pts]
    assert all(b < a for a, b in zip(vol, vol[1:]))
    assert all(pt["d3_residual"] < 1e-8 for pt in pts)
    assert all(p.validate(1e-8)["ok"] for p in tr["placements"])
    assert tr["csv"].startswith("rho,phi")


def test_rigidity_and_linkage():
    r = sodalite.flex_dimension(sodalite.ideal())
    assert r["nontrivial"] >= 3
    assert r["kernel_dimension"] == r["nontrivial"] + 6
    link = sodalite.finite_linkage_dof(sodalite.ideal())
    assert link["dof"] == 12
    assert link["gap_ratio"] > 1e4


def test_centro_and_kelvin():
    fold = sodalite.centro_d3_fold()
    p = sodalite.build_centro_d3_ring(fold)
    assert p.bisector_residual() < 1e-8
    with pytest.raises(sodalite.GeometryError):
        sodalite.build_centro_d3_ring(fold + 0.01)
    cell = sodalite.kelvin_cell()
    assert cell["vertices"].shape == (24, 3)
    assert sorted(len(f) for f in cell["faces"]) == [4] * 6 + [6] * 8
    assert len(cell["edges"]) == 36
    assert sodalite.cube_group_order() == 48
