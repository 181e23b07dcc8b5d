import math

import numpy as np
import pytest

import wfkdv


def test_gaussian_transform_and_roundtrip():
    grid = wfkdv.Grid(40.0, 1024)
    x = np.array(grid.nodes())
    eta = np.array(grid.frequencies())
    f = np.exp(-0.5 * x**2).astype(complex)
    F = wfkdv.to_spectral(grid, f)
    assert np.max(np.abs(F - math.sqrt(2 * math.pi) * np.exp(-0.5 * eta**2))) < 1e-10
    assert np.max(np.abs(wfkdv.to_physical(grid, F) - f)) < 1e-12


def test_free_flow_is_unitary():
    grid = wfkdv.Grid(40.0, 512)
    x = np.array(grid.nodes())
    u = np.exp(-0.5 * (x - 1) ** 2) * np.exp(0.7j * x)
    v = wfkdv.airy_propagate(grid, u, 0.8)
    assert wfkdv.l2_norm(grid, v) == pytest.approx(wfkdv.l2_norm(grid, u), rel=1e-12)


def test_soliton_parameters():
    sol = wfkdv.soliton_from_ratio(1.0, 1.0, 1.0)
    assert sol.amplitude == pytest.approx(12.0)
    assert sol.speed == pytest.approx(4.0)
    assert sol.eval(0.0, 0.0) == pytest.approx(12.0)


def test_solve_free_flow_matches_multiplier():
    grid = wfkdv.Grid(50.0, 1024)
    x = np.array(grid.nodes())
    u0 = np.exp(-0.5 * x**2).astype(complex)
    out = wfkdv.solve(grid, u0, wfkdv.Coefficient.zero(), dt=1e-3, t_final=0.1, stride=50)
    assert out["snapshots"].shape == (len(out["times"]), 1024)
    expect = wfkdv.airy_propagate(grid, u0, out["times"][-1])
    assert np.max(np.abs(out["snapshots"][-1] - expect)) < 1e-10


def test_free_characteristic():
    path = wfkdv.trace(0.0, 1.0, 1.0, 10.0, wfkdv.Coefficient.zero())
    assert path["x_at_zero"] == pytest.approx(300.0)


def test_gaussian_wpt_closed_form():
    x, xi = 0.7, 1.3
    expect = math.exp(-(x * x + xi * xi) / 4) * complex(math.cos(-x * xi / 2), math.sin(-x * xi / 2))
    for spectral in (False, True):
        value, err = wfkdv.wpt(wfkdv.gaussian_datum(), wfkdv.WindowSpec(), x, xi, spectral=spectral)
        assert abs(value - expect) < 1e-9


def test_detect_jump_is_singular():
    thr = wfkdv.Thresholds(4.0, 1.0)
    fit = wfkdv.detect(wfkdv.jump_gaussian_datum(), wfkdv.Coefficient.zero(), 0.0, 0.0, 1.0, "evolved", thr)
    assert fit["verdict"] == "Singular"
    assert len(fit["magnitudes"]) == 13


def test_errors_carry_codes():
    with pytest.raises(wfkdv.WfkdvError) as info:
        wfkdv.Grid(10.0, 100)
    assert info.value.code == "InvalidArgument"
    code, _, err = wfkdv.run_command("detect", "solver.bogus = 1")
    assert code == 2
    assert "solver.bogus" in err


def test_config_digest_ignores_run_keys():
    assert wfkdv.config_digest("solver.dt = 1e-4") == wfkdv.config_digest("solver.dt = 1e-4\nrun.threads = 3")


def test_first_acceptance_criterion():
    (result,) = wfkdv.run_acceptance([1])
    assert result["passed"], result["detail"]
