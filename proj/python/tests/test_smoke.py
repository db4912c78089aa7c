import math
import os
import subprocess

import numpy as np
import pytest

import mzcg


def test_defaults_and_closed_forms():
    p = mzcg.BenchmarkParams()
    assert (p.mu, p.lambda_, p.tau, p.omega, p.beta) == (2.0, 20.0, 2.0, 10.0, 1.0)
    assert mzcg.approx_kernel(p, 0.0, 0.0) == pytest.approx(8000.0)
    assert mzcg.kernel_decay_rate(p, 0.0) == pytest.approx(8020.0)
    h = 0.3
    drift_term, _ = mzcg.memory_integral_closed_form(p, h)
    assert mzcg.drift(mzcg.ModelKind.MemoryCorrected, p, h) == pytest.approx(-(p.mu * h - drift_term), rel=1e-12)
    assert mzcg.drift(mzcg.ModelKind.NaiveMemory, p, math.pi / 10) == pytest.approx(7999 * 2 * math.pi / 10)


def test_invalid_params_raise():
    with pytest.raises(mzcg.ConfigError):
        mzcg.BenchmarkParams(mu=-1.0)
    with pytest.raises(mzcg.UnsupportedModel):
        mzcg.diffusion(mzcg.ModelKind.NaiveMemory, mzcg.BenchmarkParams(), 0.1)


def test_cg_map_round_trip():
    rng = np.random.default_rng(3)
    phi = rng.uniform(-1, 1, size=(2, 5))
    cg = mzcg.build_cg_map(phi)
    x = rng.uniform(-1, 1, size=5)
    h, xt = mzcg.decompose(cg, x)
    assert np.allclose(mzcg.reconstruct(cg, h, xt), x, atol=1e-12)
    with pytest.raises(mzcg.RankDeficient):
        mzcg.build_cg_map(np.ones((2, 3)))


def test_trajectories_are_reproducible():
    p = mzcg.BenchmarkParams()
    cfg = mzcg.IntegratorConfig(1e-4, 0.1, 10)
    a = mzcg.simulate_full(p, [0.1, 0.2], cfg, mzcg.NoiseStream(5, 1))
    b = mzcg.simulate_full(p, [0.1, 0.2], cfg, mzcg.NoiseStream(5, 1))
    assert len(a) == 101
    assert a.states.shape == (101, 2)
    assert np.array_equal(a.states, b.states)
    mean, se = mzcg.ensemble_mean([a, b])
    assert np.array_equal(mean.states, a.states)
    assert se.shape == (101, 2)


def test_kernel_estimate():
    p = mzcg.BenchmarkParams()
    dt = mzcg.default_orthogonal_dt(p)
    lags = mzcg.default_lag_grid(p, 0.0, dt)
    est = mzcg.empirical_kernel(p, 0.0, lags, 200, mzcg.NoiseStream(1), mzcg.IntegratorConfig(dt, lags[-1]))
    assert est.values.shape == (60,)
    assert abs(est.values[0] - 8000.0) < 4 * est.std_error[0]
    assert mzcg.fit_kernel_decay_rate(est) == pytest.approx(8020.0, rel=0.2)


def test_run_experiment(tmp_path):
    out = tmp_path / "land.csv"
    files, summary, blowup = mzcg.run_experiment("landscape", {"grid_points": "4", "out": str(out)})
    assert files == [str(out)]
    assert not blowup
    text = out.read_text()
    assert "# status=ok" in text
    assert "x,y,V" in text
    with pytest.raises(mzcg.ConfigError):
        mzcg.run_experiment("landscape", {"bogus": "1"})


@pytest.mark.skipif("MZCG_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_exit_codes(tmp_path):
    cli = os.environ["MZCG_CLI"]
    ok = subprocess.run([cli, "landscape", "--set", "grid_points=3", "--out", str(tmp_path / "a.csv")],
                        capture_output=True, text=True)
    assert ok.returncode == 0, ok.stderr
    bad = subprocess.run([cli, "landscape", "--set", "nope=1"], capture_output=True, text=True)
    assert bad.returncode == 2
    missing = subprocess.run([cli, "landscape", "--config", str(tmp_path / "none.cfg")],
                             capture_output=True, text=True)
    assert missing.returncode == 2
    blow = subprocess.run([cli, "mean-trajectory", "--set", "n_samples=2", "--set", "dt=1.5",
                           "--set", "t_final=150", "--set", "models=memory-free",
                           "--out", str(tmp_path / "b.csv")], capture_output=True, text=True)
    assert blow.returncode == 3
    assert "# status=blowup" in (tmp_path / "b.csv").read_text()
