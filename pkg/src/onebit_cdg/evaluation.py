"""Reconstruction metrics and the multi-trial experiment runner."""
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .encoder import encode
from .errors import ConfigError, InvalidArgumentError
from .solvers import SOLVERS, decode, make_config
from .transform import build_ensemble, check_seed

__all__ = [
    "SNR_CAP_DB",
    "snr_db",
    "compression_ratio_cs",
    "compression_ratio_1bit",
    "trial_seed",
    "TrialResult",
    "ReportRow",
    "ExperimentConfig",
    "ExperimentReport",
    "run_trial",
    "run_experiment",
    "aggregate",
    "DEFAULT_M_GRID",
]

SNR_CAP_DB = 300.0
# bits per raw reading / CS projection / norm side channel in the ratio accounting
VALUE_BITS = 24
DEFAULT_M_GRID = tuple(range(25, 501, 25))
CSV_COLUMNS = ("solver", "m", "trials", "mean_snr_db", "std_snr_db", "mean_seconds", "ratio_cs", "ratio_1bit")


def snr_db(x, xhat):
    """``20 log10(||x|| / ||x - xhat||)``, capped at +300 dB."""
    x = np.asarray(x, dtype=float)
    xhat = np.asarray(xhat, dtype=float)
    if x.shape != xhat.shape:
        raise InvalidArgumentError(f"shape mismatch {x.shape} vs {xhat.shape}")
    signal = np.linalg.norm(x)
    if signal == 0:
        raise InvalidArgumentError("SNR undefined for an all-zero reference")
    err = np.linalg.norm(x - xhat)
    if err == 0:
        return SNR_CAP_DB
    return min(20.0 * math.log10(signal / err), SNR_CAP_DB)


def _check_dims(m, n):
    for name, v in (("m", m), ("n", n)):
        if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < 1:
            raise InvalidArgumentError(f"{name} must be a positive integer, got {v!r}")


def compression_ratio_cs(m, n):
    """Classical CS: ``m`` 24-bit projections against ``n`` 24-bit readings."""
    _check_dims(m, n)
    return (m * VALUE_BITS) / (n * VALUE_BITS)


def compression_ratio_1bit(m, n):
    """1-bit scheme: ``m`` sign bits plus a 24-bit norm against ``n`` 24-bit readings."""
    _check_dims(m, n)
    return (m + VALUE_BITS) / (VALUE_BITS * n)


def trial_seed(master_seed, m, trial_index):
    """Ensemble seed for one trial, independent of execution order.

    Derived with numpy's ``SeedSequence`` hashing of
    ``(master_seed, m, trial_index)``.
    """
    ss = np.random.SeedSequence(entropy=check_seed(master_seed), spawn_key=(int(m), int(trial_index)))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True)
class TrialResult:
    solver_name: str
    m: int
    trial_index: int
    snr_db: float
    elapsed_seconds: float
    k_used: int
    hamming_fraction: float


@dataclass(frozen=True)
class ReportRow:
    solver: str
    m: int
    trials: int
    mean_snr_db: float
    std_snr_db: float
    mean_seconds: float
    std_seconds: float
    ratio_cs: float
    ratio_1bit: float


@dataclass
class ExperimentConfig:
    """What to run.

    ``signal`` is the fixed reading window every trial encodes; each trial
    draws a fresh measurement matrix from :func:`trial_seed`.
    ``solver_params`` maps a solver name to keyword parameters for its
    config class.  With ``timing=False`` elapsed times are recorded as 0 so
    reports are byte-reproducible.
    """

    signal: np.ndarray
    m_grid: tuple = DEFAULT_M_GRID
    trials: int = 20
    master_seed: int = 0
    solvers: tuple = ("bbiht",)
    solver_params: dict = field(default_factory=dict)
    dataset_id: str = "signal"
    workers: int = 1
    timing: bool = True

    def __post_init__(self):
        self.signal = np.asarray(self.signal, dtype=float)
        if self.signal.ndim != 1 or self.signal.size == 0:
            raise ConfigError("signal must be a non-empty vector")
        if not np.any(self.signal):
            raise ConfigError("signal must not be all zeros")
        self.m_grid = tuple(int(m) for m in self.m_grid)
        if not self.m_grid:
            raise ConfigError("m grid is empty")
        if any(m < 1 for m in self.m_grid):
            raise ConfigError("m grid entries must be >= 1")
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        self.solvers = tuple(self.solvers)
        if not self.solvers:
            raise ConfigError("no solvers selected")
        try:
            check_seed(self.master_seed)
        except InvalidArgumentError as exc:
            raise ConfigError(str(exc)) from None
        # build every solver config up front so bad names fail before any work
        self._configs = {name: make_config(name, **self.solver_params.get(name, {})) for name in self.solvers}

    @property
    def n(self):
        return self.signal.shape[0]

    def solver_config(self, name):
        return self._configs[name]

    def echo(self):
        return {
            "n": self.n,
            "m_grid": list(self.m_grid),
            "trials": self.trials,
            "master_seed": self.master_seed,
            "solvers": list(self.solvers),
            "solver_params": {name: asdict(self._configs[name]) for name in self.solvers},
            "dataset_id": self.dataset_id,
            "timing": self.timing,
        }


@dataclass
class ExperimentReport:
    config: dict
    rows: list
    trials: list

    def to_csv(self):
        lines = [f"# {key}={json.dumps(value, sort_keys=True)}" for key, value in self.config.items()]
        lines.append(",".join(CSV_COLUMNS))
        for r in self.rows:
            lines.append(
                f"{r.solver},{r.m},{r.trials},{r.mean_snr_db:.6f},{r.std_snr_db:.6f},"
                f"{r.mean_seconds:.6f},{r.ratio_cs:.6f},{r.ratio_1bit:.6f}"
            )
        return "\n".join(lines) + "\n"

    def to_json(self):
        payload = {
            "config": self.config,
            "rows": [{c: getattr(r, c) for c in CSV_COLUMNS} for r in self.rows],
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    def row(self, solver, m):
        for r in self.rows:
            if r.solver == solver and r.m == m:
                return r
        raise KeyError((solver, m))


def run_trial(cfg, solver, m, trial_index):
    x = cfg.signal
    ensemble = build_ensemble(cfg.n, m, trial_seed(cfg.master_seed, m, trial_index))
    sm = encode(x, ensemble)
    start = time.perf_counter()
    xhat, est = decode(sm, ensemble, solver, cfg.solver_config(solver))
    elapsed = time.perf_counter() - start if cfg.timing else 0.0
    return TrialResult(
        solver_name=solver,
        m=m,
        trial_index=trial_index,
        snr_db=snr_db(x, xhat),
        elapsed_seconds=elapsed,
        k_used=est.k_used,
        hamming_fraction=est.hamming_error / m,
    )


def aggregate(cfg, trials):
    """One row per (solver, m), in config order; dB values are averaged directly."""
    rows = []
    for solver in cfg.solvers:
        for m in cfg.m_grid:
            sel = [t for t in trials if t.solver_name == solver and t.m == m]
            snr = np.array([t.snr_db for t in sel])
            secs = np.array([t.elapsed_seconds for t in sel])
            rows.append(
                ReportRow(
                    solver=solver,
                    m=m,
                    trials=len(sel),
                    mean_snr_db=float(snr.mean()),
                    std_snr_db=float(snr.std()),
                    mean_seconds=float(secs.mean()),
                    std_seconds=float(secs.std()),
                    ratio_cs=compression_ratio_cs(m, cfg.n),
                    ratio_1bit=compression_ratio_1bit(m, cfg.n),
                )
            )
    return rows


def run_experiment(cfg):
    jobs = [(solver, m, t) for solver in cfg.solvers for m in cfg.m_grid for t in range(cfg.trials)]
    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            trials = list(pool.map(lambda job: run_trial(cfg, *job), jobs))
    else:
        trials = [run_trial(cfg, *job) for job in jobs]
    return ExperimentReport(config=cfg.echo(), rows=aggregate(cfg, trials), trials=trials)
