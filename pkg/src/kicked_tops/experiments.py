"""Batch experiments over kick strengths, ensembles and spins, written out as CSV.

Every experiment writes one CSV per table into ``output_dir`` and refreshes
``manifest.json`` there (config hash, code version, sha256 per file).  Finished
cells are checkpointed under ``output_dir/cells`` and reused on reruns with the
same config hash, so an interrupted sweep resumes where it stopped.
"""
import csv
import dataclasses
import hashlib
import json
import logging
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .classical import lyapunov_exponent
from .entanglement import statistical_limit
from .errors import ParameterError
from .floquet import DEGENERACY_TOL, CoupledParams, CouplingScale, Spectrum, build_coupled_step
from .moments import MOMENT_KINDS, marginal_integrals, monte_carlo_moment
from .perturbative import correlation_table, strong_chaos_rate
from .spectral import (asymptotic_entropy, asymptotic_lower_bound, eigenvector_entanglement,
                       reduced_stacks, window_average)
from .states import EnsembleKind, EnsembleSpec, ensemble_matrices, member_rng, sample_product

log = logging.getLogger(__name__)


@dataclass
class ExperimentConfig:
    j1: float = 19.5
    j2: float = 20.0
    epsilon: float = 0.01
    k_list: list = field(default_factory=lambda: [0.01, 1.0, 2.0, 3.0, 4.0, 6.0])
    ensemble: list = field(default_factory=lambda: ["su2", "sud"])
    count: int = 100
    kicks: int = 1000
    asymptotic_window: tuple = (20_000, 40_000)
    window_stride: int = 100
    fit_window: int = 15
    correlation_horizon: int = 15
    seed: int = 0
    output_dir: str = "results"
    cache_dir: str = ""
    j_scale: str = "geometric"
    p: float = float(np.pi / 2)
    j_list: list = field(default_factory=lambda: [2.0, 4.0, 6.0, 8.0])
    scaling_k: list = field(default_factory=lambda: [0.01, 6.0])
    moment_j: list = field(default_factory=lambda: [0.5, 1.0, 5.0])
    moment_samples: int = 100_000
    lyapunov_points: int = 200
    lyapunov_steps: int = 10_000
    threads: int = 1

    # fields that do not change any computed number
    _NON_SEMANTIC = ("output_dir", "cache_dir", "threads")

    def __post_init__(self):
        self.k_list = [float(k) for k in np.atleast_1d(self.k_list)]
        ens = self.ensemble if isinstance(self.ensemble, (list, tuple)) else [self.ensemble]
        self.ensemble = [EnsembleKind.parse(e).value for e in ens]
        self.asymptotic_window = tuple(int(x) for x in self.asymptotic_window)
        CouplingScale(self.j_scale)
        self.validate()

    def validate(self):
        start, end = self.asymptotic_window
        if not 0 <= start < end:
            raise ParameterError("asymptotic_window needs 0 <= start < end")
        if self.fit_window < 3:
            raise ParameterError("fit_window must be >= 3")
        if self.count < 1 or self.kicks < 0 or self.window_stride < 1:
            raise ParameterError("count, kicks and window_stride must be positive")
        if any(k < 0 for k in self.k_list):
            raise ParameterError("kick strengths must be >= 0")

    def semantic_dict(self):
        d = dataclasses.asdict(self)
        for key in self._NON_SEMANTIC:
            d.pop(key, None)
        d["asymptotic_window"] = list(d["asymptotic_window"])
        return d

    def config_hash(self):
        blob = json.dumps({"config": self.semantic_dict(), "version": __version__},
                          sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def params(self, k, j1=None, j2=None):
        return CoupledParams.make(self.j1 if j1 is None else j1, self.j2 if j2 is None else j2,
                                  k, self.epsilon, self.p, CouplingScale(self.j_scale))

    def ensemble_spec(self, kind):
        return EnsembleSpec(kind, self.count, self.seed)

    @classmethod
    def from_file(cls, path):
        return cls(**parse_config_text(Path(path).read_text()))

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)


def parse_config_text(text):
    """Parse ``key = value`` lines; values are JSON literals, bare words are strings."""
    names = {f.name for f in dataclasses.fields(ExperimentConfig)}
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterError(f"config line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in names:
            raise ParameterError(f"config line {lineno}: unknown field {key!r}")
        try:
            out[key] = json.loads(value)
        except json.JSONDecodeError:
            out[key] = value
    return out


def format_config_text(cfg):
    return "".join(f"{k} = {json.dumps(v)}\n" for k, v in dataclasses.asdict(cfg).items()
                   if not k.startswith("_"))


# --------------------------------------------------------------------------- output

def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def write_csv(path, header, rows):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(x) for x in row])
    os.replace(tmp, path)
    return path


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def _sha256(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_manifest(out_dir, cfg, files):
    """Merge ``files`` into ``out_dir/manifest.json`` with their checksums."""
    out_dir = Path(out_dir)
    path = out_dir / "manifest.json"
    manifest = json.loads(path.read_text()) if path.exists() else {}
    if manifest.get("config_hash") != cfg.config_hash():
        manifest = {"files": {}}
    manifest.update(config_hash=cfg.config_hash(), code_version=__version__,
                    config=cfg.semantic_dict())
    for f in files:
        manifest["files"][Path(f).name] = _sha256(f)
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def _k_tag(k):
    return f"{k:g}".replace(".", "p")


class CellStore:
    """JSON checkpoints of finished cells, valid only for a matching config hash."""

    def __init__(self, out_dir, cfg):
        self.root = Path(out_dir) / "cells"
        self.hash = cfg.config_hash()

    def _path(self, name):
        return self.root / f"{name}.json"

    def load(self, name):
        path = self._path(name)
        if not path.exists():
            return None
        data = json.loads(path.read_text())
        return data["value"] if data.get("config_hash") == self.hash else None

    def save(self, name, value):
        self.root.mkdir(parents=True, exist_ok=True)
        tmp = self._path(name).with_suffix(".tmp")
        tmp.write_text(json.dumps({"config_hash": self.hash, "value": value}))
        os.replace(tmp, self._path(name))

    def get(self, name, compute):
        value = self.load(name)
        if value is None:
            value = compute()
            self.save(name, value)
        return value


def _run_cells(cfg, cells, fn):
    """Evaluate ``fn`` over cells, merged back in cell order whatever the completion order."""
    if cfg.threads > 1 and len(cells) > 1:
        with ThreadPoolExecutor(cfg.threads) as pool:
            return list(pool.map(fn, cells))
    return [fn(c) for c in cells]


# --------------------------------------------------------------------------- spectra

class SpectrumCache:
    """On-disk eigen-decompositions keyed by every parameter that shapes the operator.

    Each entry is ``<key>.csv`` (``index,phase,linear_entropy``) plus ``<key>.npz``
    holding the exact eigenvectors.
    """

    def __init__(self, root):
        self.root = Path(root) if root else None

    @staticmethod
    def key(params, degeneracy_tol=DEGENERACY_TOL):
        meta = dict(params.metadata(), degeneracy_tol=degeneracy_tol, version=__version__)
        return hashlib.sha256(json.dumps(meta, sort_keys=True).encode()).hexdigest()[:20]

    def paths(self, params):
        key = self.key(params)
        return self.root / f"{key}.csv", self.root / f"{key}.npz"

    def load(self, params):
        if self.root is None:
            return None
        _, npz = self.paths(params)
        if not npz.exists():
            return None
        with np.load(npz) as f:
            return Spectrum(f["phases"], f["vectors"], tuple(int(x) for x in f["dims"]),
                            float(f["min_gap"]), float(f["degeneracy_tol"]), float(f["residual"]))

    def store(self, params, spectrum, report):
        if self.root is None:
            return
        self.root.mkdir(parents=True, exist_ok=True)
        csv_path, npz = self.paths(params)
        write_csv(csv_path, ["index", "phase", "linear_entropy"], report.rows())
        tmp = npz.with_suffix(".tmp.npz")
        np.savez(tmp, phases=spectrum.phases, vectors=spectrum.vectors,
                 dims=np.array(spectrum.dims), min_gap=spectrum.min_gap,
                 degeneracy_tol=spectrum.degeneracy_tol, residual=spectrum.residual)
        os.replace(tmp, npz)

    def get(self, params, op=None):
        spectrum = self.load(params)
        if spectrum is None:
            op = op or build_coupled_step(params)
            spectrum = op.diagonalize()
            self.store(params, spectrum, _eigen_report(spectrum))
        return spectrum


def _eigen_report(spectrum):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return eigenvector_entanglement(spectrum)


# --------------------------------------------------------------------------- evolution

@dataclass
class EntanglementTrace:
    """Ensemble statistics of the linear entropy at kicks 0..N."""

    k: float
    ensemble: str
    mean: np.ndarray
    minimum: np.ndarray
    maximum: np.ndarray
    stderr: np.ndarray
    count: int
    metadata: dict = field(default_factory=dict)

    @classmethod
    def from_samples(cls, k, ensemble, samples, metadata=None):
        samples = np.atleast_2d(samples)
        n = samples.shape[1]
        se = samples.std(axis=1, ddof=1) / np.sqrt(n) if n > 1 else np.zeros(samples.shape[0])
        return cls(float(k), ensemble, samples.mean(axis=1), samples.min(axis=1),
                   samples.max(axis=1), se, n, dict(metadata or {}))

    @property
    def kicks(self):
        return np.arange(self.mean.size)

    def to_dict(self):
        return {"k": self.k, "ensemble": self.ensemble, "mean": self.mean.tolist(),
                "minimum": self.minimum.tolist(), "maximum": self.maximum.tolist(),
                "stderr": self.stderr.tolist(), "count": self.count, "metadata": self.metadata}

    @classmethod
    def from_dict(cls, d):
        return cls(d["k"], d["ensemble"], np.array(d["mean"]), np.array(d["minimum"]),
                   np.array(d["maximum"]), np.array(d["stderr"]), d["count"], d["metadata"])


def evolve_ensemble(cfg, k, kind, kicks, j1=None, j2=None):
    """Per-state linear entropy at kicks 0..``kicks``, shape ``(kicks + 1, count)``."""
    params = cfg.params(k, j1, j2)
    op = build_coupled_step(params)
    c0 = ensemble_matrices(cfg.ensemble_spec(kind), params.top1.j, params.top2.j)
    samples, _ = op.entropy_trace(c0, kicks)
    return samples


def compute_trace(cfg, k, kind, kicks=None):
    kicks = cfg.kicks if kicks is None else kicks
    meta = dict(cfg.params(k).metadata(), config_hash=cfg.config_hash(), seed=cfg.seed)
    return EntanglementTrace.from_samples(k, kind, evolve_ensemble(cfg, k, kind, kicks), meta)


def run_evolution_experiment(cfg, out_dir=None):
    """Ensemble-mean entropy traces for every (k, ensemble); one CSV per trace."""
    out_dir = Path(out_dir or cfg.output_dir)
    store = CellStore(out_dir, cfg)
    cells = [(k, kind) for k in cfg.k_list for kind in cfg.ensemble]

    def cell(c):
        k, kind = c
        name = f"evolve_{kind}_k{_k_tag(k)}"
        return EntanglementTrace.from_dict(
            store.get(name, lambda: compute_trace(cfg, k, kind).to_dict()))

    traces = _run_cells(cfg, cells, cell)
    files, h = [], cfg.config_hash()
    for tr in traces:
        rows = [(n, tr.mean[n], tr.minimum[n], tr.maximum[n], tr.stderr[n], h)
                for n in range(tr.mean.size)]
        files.append(write_csv(out_dir / f"evolve_{tr.ensemble}_k{_k_tag(tr.k)}.csv",
                               ["n", "mean", "min", "max", "stderr", "config_hash"], rows))
    write_manifest(out_dir, cfg, files)
    return {(tr.k, tr.ensemble): tr for tr in traces}


# --------------------------------------------------------------------------- rates

@dataclass(frozen=True)
class RateFit:
    slope: float
    intercept: float
    r2: float
    degenerate: bool = False


def fit_initial_rate(trace, fit_window=15):
    """Least-squares line through the points n = 1..fit_window (n = 0 left out)."""
    values = trace.mean if isinstance(trace, EntanglementTrace) else np.asarray(trace, float)
    if values.size < fit_window + 1:
        raise ParameterError(f"trace has {values.size} points, fit needs {fit_window + 1}")
    n = np.arange(1, fit_window + 1, dtype=float)
    y = values[1:fit_window + 1]
    if np.ptp(y) == 0.0:
        return RateFit(0.0, float(y[0]), 1.0, True)
    a = np.vstack([n, np.ones_like(n)]).T
    (slope, intercept), *_ = np.linalg.lstsq(a, y, rcond=None)
    resid = y - (slope * n + intercept)
    r2 = 1.0 - np.sum(resid ** 2) / np.sum((y - y.mean()) ** 2)
    return RateFit(float(slope), float(intercept), float(r2))


RATE_HEADER = ["k", "epsilon", "slope_su2", "intercept_su2", "r2_su2", "slope_sud",
               "intercept_sud", "r2_sud", "strong_chaos_rate", "config_hash"]


def run_rates(cfg, out_dir=None, dump_correlations=True):
    """Initial growth rates per k for both ensembles, plus correlation dumps."""
    out_dir = Path(out_dir or cfg.output_dir)
    store = CellStore(out_dir, cfg)
    kicks = max(cfg.fit_window, 1)
    cells = [(k, kind) for k in cfg.k_list for kind in cfg.ensemble]

    def cell(c):
        k, kind = c
        mean = store.get(f"rate_{kind}_k{_k_tag(k)}",
                         lambda: compute_trace(cfg, k, kind, kicks).mean.tolist())
        return dataclasses.asdict(fit_initial_rate(np.array(mean), cfg.fit_window))

    fits = dict(zip(cells, _run_cells(cfg, cells, cell)))
    h = cfg.config_hash()
    rows, files = [], []
    nan = {"slope": np.nan, "intercept": np.nan, "r2": np.nan}
    for k in cfg.k_list:
        su2, sud = fits.get((k, "su2"), nan), fits.get((k, "sud"), nan)
        rows.append((k, cfg.epsilon, su2["slope"], su2["intercept"], su2["r2"], sud["slope"],
                     sud["intercept"], sud["r2"], strong_chaos_rate(cfg.params(k)), h))
    files.append(write_csv(out_dir / "rates.csv", RATE_HEADER, rows))
    if dump_correlations:
        for k in cfg.k_list:
            for kind in cfg.ensemble:
                table = correlation_dump(cfg, k, kind)
                files.append(write_csv(out_dir / f"correlations_{kind}_k{_k_tag(k)}.csv",
                                       ["n", "m", "C1", "C2", "D"], table.rows()))
    write_manifest(out_dir, cfg, files)
    return {(k, kind): RateFit(**fits[(k, kind)]) for (k, kind) in cells}


def correlation_dump(cfg, k, kind, order="average_of_products"):
    params = cfg.params(k)
    states = [sample_product(kind, cfg.j1, cfg.j2, member_rng(cfg.seed, i))
              for i in range(cfg.count)]
    return correlation_table(params, states, cfg.correlation_horizon, kind, order)


# --------------------------------------------------------------------------- asymptotics

ASYMPTOTIC_HEADER = ["k", "epsilon", "mean_eigen_entropy", "lower_bound",
                     "measured_asymptotic_su2", "measured_asymptotic_sud", "min_gap",
                     "statistical_limit", "formula_asymptotic_su2", "formula_asymptotic_sud",
                     "stderr_su2", "stderr_sud", "degenerate", "config_hash"]


def asymptotic_cell(cfg, k, j1=None, j2=None, cache=None):
    """Eigenvector entanglement, bound and long-time entanglement for one operator.

    The measured value averages the linear entropy over the configured kick window
    (sampled every ``window_stride`` kicks through the eigenbasis); the formula value
    is the infinite-time average from the eigen-decomposition.
    """
    params = cfg.params(k, j1, j2)
    op = build_coupled_step(params)
    spectrum = (cache or SpectrumCache(None)).get(params, op)
    report = _eigen_report(spectrum)
    stacks = reduced_stacks(spectrum)
    start, end = cfg.asymptotic_window
    out = {"k": float(k), "j1": params.top1.j, "j2": params.top2.j,
           "mean_eigen_entropy": report.mean, "min_gap": spectrum.min_gap,
           "degenerate": bool(report.degenerate),
           "lower_bound": float("nan") if report.degenerate else asymptotic_lower_bound(report),
           "statistical_limit": statistical_limit(*op.dims)}
    for kind in ("su2", "sud"):
        if kind not in cfg.ensemble:
            out[f"measured_{kind}"] = out[f"formula_{kind}"] = out[f"stderr_{kind}"] = float("nan")
            continue
        c0 = ensemble_matrices(cfg.ensemble_spec(kind), params.top1.j, params.top2.j)
        measured = window_average(op, c0, start, end, cfg.window_stride, spectrum)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            formula = asymptotic_entropy(spectrum, c0, stacks=stacks)
        out[f"measured_{kind}"] = float(measured.mean())
        out[f"stderr_{kind}"] = float(measured.std(ddof=1) / np.sqrt(measured.size)) \
            if measured.size > 1 else 0.0
        out[f"formula_{kind}"] = float(formula.mean())
    return out


def _asymptotic_row(cfg, c, h):
    return (c["k"], cfg.epsilon, c["mean_eigen_entropy"], c["lower_bound"], c["measured_su2"],
            c["measured_sud"], c["min_gap"], c["statistical_limit"], c["formula_su2"],
            c["formula_sud"], c["stderr_su2"], c["stderr_sud"], c["degenerate"], h)


def run_asymptotic_sweep(cfg, out_dir=None):
    out_dir = Path(out_dir or cfg.output_dir)
    store = CellStore(out_dir, cfg)
    cache = SpectrumCache(cfg.cache_dir or out_dir / "spectra")
    cells = _run_cells(cfg, cfg.k_list, lambda k: store.get(
        f"asymptotic_k{_k_tag(k)}", lambda: asymptotic_cell(cfg, k, cache=cache)))
    h = cfg.config_hash()
    path = write_csv(out_dir / "asymptotic.csv", ASYMPTOTIC_HEADER,
                     [_asymptotic_row(cfg, c, h) for c in cells])
    write_manifest(out_dir, cfg, [path])
    return cells


def run_scaling_experiment(cfg, out_dir=None):
    """Asymptotic quantities versus spin, with j1 = j and j2 = j + 1/2."""
    out_dir = Path(out_dir or cfg.output_dir)
    store = CellStore(out_dir, cfg)
    cache = SpectrumCache(cfg.cache_dir or out_dir / "spectra")
    grid = [(j, k) for j in cfg.j_list for k in cfg.scaling_k]
    cells = _run_cells(cfg, grid, lambda c: store.get(
        f"scaling_j{_k_tag(c[0])}_k{_k_tag(c[1])}",
        lambda: asymptotic_cell(cfg, c[1], c[0], c[0] + 0.5, cache)))
    h = cfg.config_hash()
    header = ["j1", "j2"] + ASYMPTOTIC_HEADER
    path = write_csv(out_dir / "scaling.csv", header,
                     [(c["j1"], c["j2"]) + _asymptotic_row(cfg, c, h) for c in cells])
    write_manifest(out_dir, cfg, [path])
    return cells


EIGEN_HEADER = ["k", "epsilon", "mean_eigen_entropy", "lower_bound", "min_gap", "degenerate",
                "config_hash"]


def run_eigen_sweep(cfg, out_dir=None):
    """Mean eigenvector entanglement per k; per-eigenvector tables land in the cache."""
    out_dir = Path(out_dir or cfg.output_dir)
    cache = SpectrumCache(cfg.cache_dir or out_dir / "spectra")

    def cell(k):
        report = _eigen_report(cache.get(cfg.params(k)))
        bound = float("nan") if report.degenerate else asymptotic_lower_bound(report)
        return (k, cfg.epsilon, report.mean, bound, report.min_gap, report.degenerate)

    h = cfg.config_hash()
    rows = [r + (h,) for r in _run_cells(cfg, cfg.k_list, cell)]
    files = [write_csv(out_dir / "eigen.csv", EIGEN_HEADER, rows)]
    files += [cache.paths(cfg.params(k))[0] for k in cfg.k_list]
    write_manifest(out_dir, cfg, files)
    return rows


# --------------------------------------------------------------------------- classical, moments

def run_classical(cfg, out_dir=None):
    out_dir = Path(out_dir or cfg.output_dir)

    def cell(k):
        rng = member_rng(cfg.seed, int(round(k * 1000)))
        return lyapunov_exponent(k, cfg.lyapunov_points, cfg.lyapunov_steps, rng)

    estimates = _run_cells(cfg, cfg.k_list, cell)
    path = write_csv(out_dir / "lyapunov.csv", ["k", "lyapunov", "stderr", "n_points", "n_steps"],
                     [e.row() for e in estimates])
    write_manifest(out_dir, cfg, [path])
    return estimates


def run_moments(cfg, out_dir=None):
    out_dir = Path(out_dir or cfg.output_dir)
    results, marginals = [], []
    for i, j in enumerate(cfg.moment_j):
        for n, kind in enumerate(MOMENT_KINDS):
            rng = member_rng(cfg.seed, 10 * i + n)
            results.append(monte_carlo_moment(kind, j, cfg.moment_samples, rng))
        marginals.append(marginal_integrals(j))
    files = [
        write_csv(out_dir / "moments.csv",
                  ["kind", "j", "analytic", "mc_mean", "mc_stderr", "samples", "pass"],
                  [r.row() for r in results]),
        write_csv(out_dir / "marginals.csv",
                  ["j", "x4_analytic", "x4_quadrature", "x2y2_analytic", "x2y2_quadrature",
                   "max_relative_error"],
                  [(m.j, m.x4_analytic, m.x4_quadrature, m.x2y2_analytic, m.x2y2_quadrature,
                    m.max_relative_error()) for m in marginals]),
    ]
    write_manifest(out_dir, cfg, files)
    return results, marginals
