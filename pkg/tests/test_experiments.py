import json

import numpy as np
import pytest

from kicked_tops import experiments as ex
from kicked_tops.errors import ParameterError


def tiny(tmp_path, **kw):
    base = dict(j1=2.0, j2=2.5, k_list=[0.5, 3.0], count=4, kicks=30,
                asymptotic_window=(100, 200), window_stride=10, output_dir=str(tmp_path / "out"),
                j_list=[1.0, 1.5], scaling_k=[3.0], moment_j=[0.5], moment_samples=2000,
                lyapunov_points=8, lyapunov_steps=200)
    base.update(kw)
    return ex.ExperimentConfig(**base)


def test_config_validation():
    with pytest.raises(ParameterError):
        ex.ExperimentConfig(asymptotic_window=(10, 5))
    with pytest.raises(ParameterError):
        ex.ExperimentConfig(fit_window=2)
    with pytest.raises(ParameterError):
        ex.ExperimentConfig(k_list=[-1.0])
    with pytest.raises(ValueError):
        ex.ExperimentConfig(j_scale="harmonic")
    with pytest.raises(ParameterError):
        ex.ExperimentConfig(ensemble=["goe"])


def test_config_hash_ignores_output_location(tmp_path):
    a = tiny(tmp_path)
    assert a.config_hash() == a.replace(output_dir="elsewhere", threads=3).config_hash()
    assert a.config_hash() != a.replace(seed=1).config_hash()
    assert a.config_hash() != a.replace(j_scale="j1").config_hash()
    assert len(a.config_hash()) == 16


def test_config_text_round_trip(tmp_path):
    cfg = tiny(tmp_path, seed=17, ensemble=["sud"])
    path = tmp_path / "run.cfg"
    path.write_text("# comment line\n" + ex.format_config_text(cfg))
    again = ex.ExperimentConfig.from_file(path)
    assert again == cfg and again.config_hash() == cfg.config_hash()


def test_config_text_errors():
    with pytest.raises(ParameterError):
        ex.parse_config_text("j1 19.5")
    with pytest.raises(ParameterError):
        ex.parse_config_text("spin = 3")
    assert ex.parse_config_text("j_scale = mean  # bare word")["j_scale"] == "mean"


def test_fit_examples():
    fit = ex.fit_initial_rate(0.002 * np.arange(20), 15)
    assert fit.slope == pytest.approx(0.002) and fit.r2 == pytest.approx(1.0)
    flat = ex.fit_initial_rate(np.zeros(16), 15)
    assert flat.slope == 0.0 and flat.degenerate
    with pytest.raises(ParameterError):
        ex.fit_initial_rate(np.zeros(10), 15)
    # the n = 0 point is left out of the fit
    y = 0.01 * np.arange(16)
    y[0] = 0.5
    assert ex.fit_initial_rate(y, 15).slope == pytest.approx(0.01)


def test_evolution_outputs_and_determinism(tmp_path):
    cfg = tiny(tmp_path)
    traces = ex.run_evolution_experiment(cfg)
    out = tmp_path / "out"
    files = sorted(p.name for p in out.glob("evolve_*.csv"))
    assert files == ["evolve_su2_k0p5.csv", "evolve_su2_k3.csv", "evolve_sud_k0p5.csv",
                     "evolve_sud_k3.csv"]
    rows = ex.read_csv(out / "evolve_sud_k3.csv")
    assert list(rows[0]) == ["n", "mean", "min", "max", "stderr", "config_hash"]
    assert len(rows) == 31 and all(r["config_hash"] == cfg.config_hash() for r in rows)
    for tr in traces.values():
        assert tr.mean[0] < 1e-10
        assert np.all(tr.minimum >= 0) and np.all(tr.maximum <= 1 - 1 / 5 + 1e-12)
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["config_hash"] == cfg.config_hash()
    assert set(files) <= set(manifest["files"])
    # a fresh run in another directory is byte-identical
    cfg2 = cfg.replace(output_dir=str(tmp_path / "again"))
    ex.run_evolution_experiment(cfg2)
    for name in files:
        assert (out / name).read_bytes() == (tmp_path / "again" / name).read_bytes()


def test_threads_do_not_change_results(tmp_path):
    a = tiny(tmp_path)
    b = a.replace(output_dir=str(tmp_path / "threaded"), threads=3)
    ex.run_evolution_experiment(a)
    ex.run_evolution_experiment(b)
    for p in (tmp_path / "out").glob("evolve_*.csv"):
        assert p.read_bytes() == (tmp_path / "threaded" / p.name).read_bytes()


def test_uncoupled_trace_stays_zero(tmp_path):
    traces = ex.run_evolution_experiment(tiny(tmp_path, epsilon=0.0, k_list=[6.0]))
    assert all(tr.maximum.max() < 1e-10 for tr in traces.values())


def test_checkpoints_resume(tmp_path):
    cfg = tiny(tmp_path, k_list=[3.0], ensemble=["sud"])
    ex.run_evolution_experiment(cfg)
    store = ex.CellStore(tmp_path / "out", cfg)
    saved = store.load("evolve_sud_k3")
    assert saved is not None
    # a tampered checkpoint is reused as-is, proving the rerun did not recompute
    saved["mean"][5] = 0.123
    store.save("evolve_sud_k3", saved)
    traces = ex.run_evolution_experiment(cfg)
    assert traces[(3.0, "sud")].mean[5] == 0.123
    # a different config hash ignores the stale checkpoint
    assert ex.CellStore(tmp_path / "out", cfg.replace(seed=5)).load("evolve_sud_k3") is None


def test_rates_outputs(tmp_path):
    cfg = tiny(tmp_path, kicks=15)
    fits = ex.run_rates(cfg)
    out = tmp_path / "out"
    rows = ex.read_csv(out / "rates.csv")
    assert list(rows[0]) == ex.RATE_HEADER and len(rows) == 2
    assert float(rows[1]["slope_sud"]) == pytest.approx(fits[(3.0, "sud")].slope)
    corr = ex.read_csv(out / "correlations_sud_k3.csv")
    assert list(corr[0]) == ["n", "m", "C1", "C2", "D"] and len(corr) == 15 * 15


def test_asymptotic_sweep_and_cache(tmp_path):
    cache = tmp_path / "spectra"
    cold = tiny(tmp_path, cache_dir=str(cache))
    cells = ex.run_asymptotic_sweep(cold)
    files = sorted(cache.glob("*.npz"))
    assert len(files) == 2 and len(list(cache.glob("*.csv"))) == 2
    warm = cold.replace(output_dir=str(tmp_path / "warm"))
    ex.run_asymptotic_sweep(warm)
    a = (tmp_path / "out" / "asymptotic.csv").read_bytes()
    assert a == (tmp_path / "warm" / "asymptotic.csv").read_bytes()
    rows = ex.read_csv(tmp_path / "out" / "asymptotic.csv")
    assert list(rows[0])[:7] == ["k", "epsilon", "mean_eigen_entropy", "lower_bound",
                                 "measured_asymptotic_su2", "measured_asymptotic_sud", "min_gap"]
    for c in cells:
        assert not c["degenerate"]
        for kind in ("su2", "sud"):
            assert c[f"measured_{kind}"] >= c["lower_bound"] - 1e-9
    # cached spectra reproduce a fresh decomposition
    params = cold.params(3.0)
    loaded = ex.SpectrumCache(cache).load(params)
    fresh = ex.build_coupled_step(params).diagonalize()
    np.testing.assert_array_equal(loaded.phases, fresh.phases)
    np.testing.assert_array_equal(loaded.vectors, fresh.vectors)


def test_spectrum_cache_key_tracks_parameters(tmp_path):
    cfg = tiny(tmp_path)
    key = ex.SpectrumCache.key
    assert key(cfg.params(3.0)) != key(cfg.params(3.0, 2.5, 3.0))
    assert key(cfg.params(3.0)) != key(cfg.replace(j_scale="j1").params(3.0))
    assert key(cfg.params(3.0)) == key(cfg.replace(seed=9).params(3.0))


def test_scaling_eigen_classical_moments(tmp_path):
    cfg = tiny(tmp_path)
    cells = ex.run_scaling_experiment(cfg)
    assert [(c["j1"], c["j2"]) for c in cells] == [(1.0, 1.5), (1.5, 2.0)]
    rows = ex.run_eigen_sweep(cfg)
    assert len(rows) == 2 and rows[0][-1] == cfg.config_hash()
    est = ex.run_classical(cfg)
    assert [e.k for e in est] == [0.5, 3.0]
    lyap = ex.read_csv(tmp_path / "out" / "lyapunov.csv")
    assert list(lyap[0]) == ["k", "lyapunov", "stderr", "n_points", "n_steps"]
    results, marginals = ex.run_moments(cfg)
    assert len(results) == 4 and marginals[0].max_relative_error() < 1e-8
    manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
    for name in ("scaling.csv", "eigen.csv", "lyapunov.csv", "moments.csv", "marginals.csv"):
        assert name in manifest["files"]
