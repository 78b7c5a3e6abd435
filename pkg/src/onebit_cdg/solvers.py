"""1-bit reconstruction: BIHT, blind BIHT (BBIHT), 1-bit FPC, and the
base-station framework that turns a unit-norm coefficient estimate back into
sensor readings.
"""
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConfigError, EnsembleMismatchError, InvalidArgumentError
from .transform import synthesize

__all__ = [
    "SparseEstimate",
    "BihtConfig",
    "BbihtConfig",
    "FpcConfig",
    "SOLVERS",
    "hard_threshold",
    "sample_variance",
    "biht",
    "bbiht",
    "bbiht_columns",
    "select_sparsity",
    "variance_crossings",
    "max_sparsity",
    "fpc_1bit",
    "decode",
    "reconstruct",
    "make_config",
]


@dataclass(frozen=True, eq=False)
class SparseEstimate:
    """A unit-norm coefficient estimate.

    ``k_used == 0`` marks the all-zero fallback, returned when no nonzero
    iterate was found; it is the only estimate that is not unit norm.
    """

    shat: np.ndarray
    k_used: int
    iterations: int
    hamming_error: int
    solver_name: str

    @property
    def is_fallback(self):
        return self.k_used == 0


@dataclass(frozen=True)
class BihtConfig:
    k: int
    max_iters: int = 100
    step_tau: float = 1.0

    def __post_init__(self):
        if self.k < 1:
            raise InvalidArgumentError(f"k must be >= 1, got {self.k}")
        if self.max_iters < 1:
            raise InvalidArgumentError(f"max_iters must be >= 1, got {self.max_iters}")
        if not self.step_tau > 0:
            raise InvalidArgumentError(f"step_tau must be > 0, got {self.step_tau}")


@dataclass(frozen=True)
class BbihtConfig:
    d: float = 0.1
    stop_var: float = 0.01
    scan_mode: str = "literal"
    max_iters: int = 100
    step_tau: float = 1.0

    def __post_init__(self):
        if not 0 < self.d < 1:
            raise InvalidArgumentError(f"d must lie in (0, 1), got {self.d}")
        if not self.stop_var > 0:
            raise InvalidArgumentError(f"stop_var must be > 0, got {self.stop_var}")
        if self.scan_mode not in ("literal", "first_exceed"):
            raise InvalidArgumentError(f"scan_mode must be 'literal' or 'first_exceed', got {self.scan_mode!r}")
        # reuse BihtConfig's checks on the shared fields
        BihtConfig(k=1, max_iters=self.max_iters, step_tau=self.step_tau)

    def base(self, k):
        return BihtConfig(k=k, max_iters=self.max_iters, step_tau=self.step_tau)


@dataclass(frozen=True)
class FpcConfig:
    lambda0: float = 1.0
    lambda_growth: float = 2.0
    stages: int = 10
    inner_iters: int = 200
    grad_step: float = 1.0
    tol: float = 1e-6

    def __post_init__(self):
        for name in ("lambda0", "stages", "inner_iters", "grad_step", "tol"):
            if not getattr(self, name) > 0:
                raise InvalidArgumentError(f"{name} must be > 0, got {getattr(self, name)}")
        if not self.lambda_growth > 1:
            raise InvalidArgumentError(f"lambda_growth must be > 1, got {self.lambda_growth}")


def _check_problem(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b)
    if a.ndim != 2:
        raise InvalidArgumentError(f"operator must be a matrix, got shape {a.shape}")
    if b.ndim != 1 or b.shape[0] != a.shape[0]:
        raise InvalidArgumentError(f"sign vector has shape {b.shape}, operator is {a.shape[0]} x {a.shape[1]}")
    if not np.all((b == 1) | (b == -1)):
        raise InvalidArgumentError("sign vector entries must be +1 or -1")
    return np.ascontiguousarray(a), b.astype(np.int8)


def hard_threshold(v, k):
    """Keep the ``k`` largest-magnitude entries of ``v``; ties go to the lower index."""
    v = np.asarray(v, dtype=float)
    if v.ndim != 1:
        raise InvalidArgumentError("hard_threshold expects a vector")
    if isinstance(k, bool) or not 1 <= k <= v.shape[0]:
        raise InvalidArgumentError(f"k must lie in [1, {v.shape[0]}], got {k}")
    return kernels.hard_threshold(v, int(k))


def sample_variance(v):
    """Unbiased sample variance (divisor ``L - 1``)."""
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or v.shape[0] < 2:
        raise InvalidArgumentError("sample variance needs at least two values")
    return float(np.var(v, ddof=1))


def _finish(a, b, s, k_used, iterations, name):
    norm = np.linalg.norm(s)
    if norm == 0:
        return SparseEstimate(
            shat=np.zeros(a.shape[1]),
            k_used=0,
            iterations=iterations,
            hamming_error=int(np.count_nonzero(b < 0)),
            solver_name=name,
        )
    shat = s / norm
    return SparseEstimate(
        shat=shat,
        k_used=k_used,
        iterations=iterations,
        hamming_error=kernels.hamming(a, shat, b),
        solver_name=name,
    )


def biht(a, b, cfg):
    """Binary iterative hard thresholding with known sparsity ``cfg.k``.

    Iterates ``s <- H_k(s + tau/2 * A^T (b - sign(A s)))`` from ``s = 0`` and
    returns the most sign-consistent iterate, scaled to unit norm.
    """
    a, b = _check_problem(a, b)
    if cfg.k > a.shape[1]:
        raise InvalidArgumentError(f"k={cfg.k} exceeds signal length {a.shape[1]}")
    best, _, iterations = kernels.biht_loop(a, b, cfg.k, cfg.max_iters, cfg.step_tau)
    return _finish(a, b, best, cfg.k, iterations, "biht")


def max_sparsity(d, n):
    # round half up; Python's round() would send 12.5 to 12
    return int(math.floor(d * n + 0.5))


def bbiht_columns(a, b, max_k, cfg=BbihtConfig()):
    """Run BIHT for every k in ``1..max_k``.

    Returns the ``n x max_k`` matrix whose column ``k-1`` is the unit-norm
    k-sparse estimate, and the list of estimates.
    """
    a, b = _check_problem(a, b)
    n = a.shape[1]
    columns = np.zeros((n, max_k))
    estimates = []
    for k in range(1, max_k + 1):
        est = biht(a, b, cfg.base(k))
        columns[:, k - 1] = est.shat
        estimates.append(est)
    return columns, estimates


def variance_crossings(columns, stop_var):
    """1-based row indices ``i <= max_k`` whose sample variance exceeds ``stop_var``."""
    max_k = columns.shape[1]
    return [i for i in range(1, max_k + 1) if sample_variance(columns[i - 1, :max_k]) > stop_var]


def select_sparsity(columns, stop_var, scan_mode="literal"):
    """Pick the sparsity level from the row-variance scan.

    Every row ``i`` whose variance exceeds ``stop_var`` votes for ``i - 1``.
    In ``literal`` mode the last vote wins; in ``first_exceed`` mode the
    first one does.  The result is clamped to at least 1.
    """
    if columns.shape[1] < 2:
        return 1
    best_k = 1
    for i in range(1, columns.shape[1] + 1):
        if sample_variance(columns[i - 1, :]) > stop_var:
            best_k = i - 1
            if scan_mode == "first_exceed":
                break
    return max(best_k, 1)


def bbiht(a, b, cfg=BbihtConfig()):
    """Blind BIHT: sweep ``k = 1..round(d*n)`` and select one level by row variance."""
    a, b = _check_problem(a, b)
    max_k = max_sparsity(cfg.d, a.shape[1])
    if max_k < 1:
        raise InvalidArgumentError(f"d*n rounds to {max_k}; need at least one sparsity level")
    columns, estimates = bbiht_columns(a, b, max_k, cfg)
    best_k = select_sparsity(columns, cfg.stop_var, cfg.scan_mode)
    chosen = estimates[best_k - 1]
    return SparseEstimate(
        shat=columns[:, best_k - 1].copy(),
        k_used=best_k if not chosen.is_fallback else 0,
        iterations=sum(e.iterations for e in estimates),
        hamming_error=chosen.hamming_error,
        solver_name="bbiht",
    )


def _soft(u, thr):
    return np.sign(u) * np.maximum(np.abs(u) - thr, 0.0)


def fpc_1bit(a, b, cfg=FpcConfig()):
    """1-bit fixed-point continuation.

    Minimizes ``||s||_1 + lam * sum f((b * A s)_i)`` on the unit sphere, where
    ``f(x) = x**2 / 2`` for ``x < 0`` and 0 otherwise.  Each inner step takes
    a gradient step of size ``grad_step`` on the one-sided penalty,
    soft-thresholds by ``grad_step / lam`` and renormalizes; ``lam`` grows
    geometrically between stages.  Starts from the normalized back-projection
    ``A^T b``.  Sign consistency alone does not stop the run; among equally
    consistent iterates the latest, most shrunk one is returned.
    """
    a, b = _check_problem(a, b)
    n = a.shape[1]
    bf = b.astype(float)
    s = a.T @ bf
    norm = np.linalg.norm(s)
    s = s / norm if norm > 0 else np.full(n, 1.0 / np.sqrt(n))
    best, best_h = s, kernels.hamming(a, s, b)
    lam = cfg.lambda0
    iterations = 0
    for _ in range(cfg.stages):
        thr = cfg.grad_step / lam
        for _ in range(cfg.inner_iters):
            margins = bf * (a @ s)
            g = a.T @ (bf * np.minimum(margins, 0.0))
            v = _soft(s - cfg.grad_step * g, thr)
            vn = np.linalg.norm(v)
            if vn == 0:
                # threshold wipes out the iterate at this penalty weight
                break
            v /= vn
            iterations += 1
            h = kernels.hamming(a, v, b)
            if h <= best_h:
                best, best_h = v, h
            change = np.linalg.norm(v - s)
            s = v
            if change < cfg.tol:
                break
        lam *= cfg.lambda_growth
    return _finish(a, b, best, int(np.count_nonzero(best)), iterations, "fpc_1bit")


SOLVERS = {
    "biht": (biht, BihtConfig),
    "bbiht": (bbiht, BbihtConfig),
    "fpc_1bit": (fpc_1bit, FpcConfig),
}


def make_config(name, **params):
    """Build the config object for solver ``name`` from keyword parameters."""
    try:
        _, cls = SOLVERS[name]
    except KeyError:
        raise ConfigError(f"unknown solver {name!r}; valid solvers: {', '.join(sorted(SOLVERS))}") from None
    if name == "biht" and params.get("k") is None:
        raise ConfigError("solver 'biht' requires a sparsity level k")
    try:
        return cls(**{k: v for k, v in params.items() if v is not None})
    except TypeError as exc:
        raise ConfigError(f"bad parameters for {name}: {exc}") from None


def _run_solver(a, b, solver, config):
    try:
        fn, cls = SOLVERS[solver]
    except KeyError:
        raise ConfigError(f"unknown solver {solver!r}; valid solvers: {', '.join(sorted(SOLVERS))}") from None
    if config is None:
        config = make_config(solver)
    if not isinstance(config, cls):
        raise ConfigError(f"solver {solver!r} needs a {cls.__name__}, got {type(config).__name__}")
    return fn(a, b, config)


def decode(sm, ensemble, solver="bbiht", config=None):
    """Base-station reconstruction returning ``(xhat, estimate)``.

    ``xhat = Psi @ shat * norm_x``: the unit-norm coefficient estimate is
    synthesized into readings and rescaled by the transmitted norm.
    """
    if (sm.n, sm.m, sm.seed) != (ensemble.n, ensemble.m, ensemble.seed):
        raise EnsembleMismatchError(
            f"measurements are for (n={sm.n}, m={sm.m}, seed={sm.seed}), "
            f"ensemble is (n={ensemble.n}, m={ensemble.m}, seed={ensemble.seed})"
        )
    est = _run_solver(ensemble.a, sm.b, solver, config)
    if sm.norm_x == 0:
        return np.zeros(ensemble.n), est
    return synthesize(est.shat, ensemble.psi) * sm.norm_x, est


def reconstruct(sm, ensemble, solver="bbiht", config=None):
    """Estimated readings from sign measurements; see :func:`decode`."""
    return decode(sm, ensemble, solver, config)[0]
