"""Gaussian measurement ensembles and the orthonormal DCT-II basis.

Random matrices come from numpy's ``Generator(PCG64)`` seeded with the
64-bit seed; normals are drawn with ``Generator.standard_normal`` (the
ziggurat method), so a given ``(m, n, seed)`` reproduces the same matrix
for a fixed numpy release line.
"""
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError

__all__ = [
    "SensingEnsemble",
    "gaussian_matrix",
    "dct_synthesis_matrix",
    "analyze",
    "synthesize",
    "build_ensemble",
    "check_seed",
]

MAX_SEED = 2**64 - 1
# 2**31 doubles is 16 GiB; anything above is treated as an overflowing request
MAX_ENTRIES = 2**31


def _check_count(name, value):
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise InvalidArgumentError(f"{name} must be an integer, got {value!r}")
    if value < 1:
        raise InvalidArgumentError(f"{name} must be >= 1, got {value}")
    return int(value)


def check_seed(seed):
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise InvalidArgumentError(f"seed must be an integer, got {seed!r}")
    if not 0 <= seed <= MAX_SEED:
        raise InvalidArgumentError(f"seed must lie in [0, 2**64), got {seed}")
    return int(seed)


def gaussian_matrix(m, n, seed):
    """Draw an m x n matrix with i.i.d. N(0, 1/m) entries.

    The result is a pure function of ``(m, n, seed)``.
    """
    m = _check_count("m", m)
    n = _check_count("n", n)
    seed = check_seed(seed)
    if m * n > MAX_ENTRIES:
        raise InvalidArgumentError(f"{m} x {n} matrix exceeds {MAX_ENTRIES} entries")
    rng = np.random.Generator(np.random.PCG64(seed))
    return rng.standard_normal((m, n)) / np.sqrt(m)


def dct_synthesis_matrix(n):
    """Return Psi, the transpose of the orthonormal DCT-II analysis matrix.

    Column ``j`` of Psi is the ``j``-th DCT-II basis vector, so ``x = Psi @ s``
    synthesizes readings from coefficients and ``Psi.T @ x`` analyzes them.
    """
    n = _check_count("n", n)
    i = np.arange(n)[:, None]
    j = np.arange(n)[None, :]
    d = np.sqrt(2.0 / n) * np.cos(np.pi * (2 * j + 1) * i / (2 * n))
    d[0, :] = np.sqrt(1.0 / n)
    return np.ascontiguousarray(d.T)


def _check_vector(v, psi, name):
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or v.shape[0] != psi.shape[0]:
        raise InvalidArgumentError(
            f"{name} has shape {v.shape}, basis is {psi.shape[0]} x {psi.shape[1]}"
        )
    return v


def analyze(x, psi):
    """Coefficients ``Psi.T @ x`` of readings ``x``."""
    return psi.T @ _check_vector(x, psi, "x")


def synthesize(s, psi):
    """Readings ``Psi @ s`` from coefficients ``s``."""
    return psi @ _check_vector(s, psi, "s")


@dataclass(frozen=True, eq=False)
class SensingEnsemble:
    """The matrices shared by sensor and base station.

    ``phi`` is the Gaussian measurement matrix, ``psi`` the synthesis basis
    and ``a = phi @ psi`` the composite operator the solvers work on.
    """

    n: int
    m: int
    seed: int
    phi: np.ndarray
    psi: np.ndarray
    a: np.ndarray

    def __post_init__(self):
        for arr in (self.phi, self.psi, self.a):
            arr.setflags(write=False)


def build_ensemble(n, m, seed, psi=None):
    """Build the ensemble for ``(n, m, seed)``.

    ``psi`` overrides the DCT basis (tests use the identity); it must be an
    orthonormal n x n matrix.
    """
    phi = gaussian_matrix(m, n, seed)
    if psi is None:
        psi = dct_synthesis_matrix(n)
    else:
        psi = np.array(psi, dtype=float)
        if psi.shape != (n, n):
            raise InvalidArgumentError(f"psi must be {n} x {n}, got {psi.shape}")
    a = np.ascontiguousarray(phi @ psi)
    return SensingEnsemble(n=int(n), m=int(m), seed=int(seed), phi=phi, psi=psi, a=a)
