import math

import numpy as np
import pytest

import tbgeom


def test_sasaki_metric_is_block_identity_on_euclidean_base():
    g = tbgeom.metric_matrix(tbgeom.euclidean(2), tbgeom.weights("sasaki"), np.zeros(2), np.array([0.3, 0.4]))
    assert np.allclose(g, np.eye(4))


def test_complex_structure_squares_to_minus_identity():
    base = tbgeom.space_form(2, 1.0)
    w = tbgeom.weights("cheeger_gromoll")
    J = tbgeom.complex_structure(base, w, np.array([0.1, -0.2]), np.array([0.5, 0.7]))
    assert np.allclose(J @ J, -np.eye(4), atol=1e-12)


def test_scalar_curvature_agrees_with_oracle():
    base = tbgeom.space_form(2, 1.0)
    w = tbgeom.weights("cheeger_gromoll")
    x, u = np.array([0.2, 0.1]), np.array([0.6, -0.4])
    closed = tbgeom.scalar_curvature(base, w, x, u)
    assert closed == pytest.approx(tbgeom.oracle_scalar_curvature(base, w, x, u), abs=1e-5)


def test_weights_and_errors():
    w = tbgeom.weights("cheeger_gromoll")
    assert w.a(1.5) == pytest.approx(0.25)
    assert w.lee_coef(1.5) == pytest.approx(-7.0 / 12.0)
    with pytest.raises(ValueError):
        tbgeom.weights("no_such_family")
    with pytest.raises(ValueError):
        tbgeom.metric({"kind": "space_form", "dim": 2})


def test_isometry_only_at_sqrt_a():
    base = tbgeom.euclidean(2)
    w = tbgeom.weights({"name": "custom", "a": {"coeffs": [4.0]}, "b": {"coeffs": [0.0]}})
    x, u = np.array([0.1, 0.2]), np.array([0.3, -0.5])
    good = tbgeom.isometry_residual(base, w, x, u, 2.0)
    bad = tbgeom.isometry_residual(base, w, x, u, 1.0)
    assert max(good.values()) < 1e-10
    assert bad["metric"] > 0.1


def test_run_reports_and_is_deterministic():
    cfg = {
        "base": {"kind": "euclidean", "dim": 2},
        "weights": {"name": "g1"},
        "suites": ["flat_g1", "curvature"],
        "samples": 5,
        "seed": 3,
    }
    rep, csv = tbgeom.run(cfg, timing=False)
    assert rep["schema"] == 1
    assert rep["all_pass"]
    assert [s["name"] for s in rep["suites"]] == ["flat_g1", "curvature"]
    assert csv.splitlines()[0] == "suite,sample_index,residual,tolerance,pass"
    assert tbgeom.run(cfg, timing=False)[0] == rep
    with pytest.raises(tbgeom.ConfigError):
        tbgeom.run({**cfg, "suites": ["nope"]})


def test_list_suites():
    suites = tbgeom.list_suites()
    assert len(suites) == 13
    assert all(not math.isnan(s["tolerance"]) for s in suites)
