import numpy as np
import pytest
import scipy.fft
from hypothesis import given, settings
from hypothesis import strategies as st

from onebit_cdg.errors import InvalidArgumentError
from onebit_cdg.transform import analyze, build_ensemble, dct_synthesis_matrix, gaussian_matrix, synthesize
from oracles import dct2_ortho_loops


def test_gaussian_matrix_deterministic():
    a = gaussian_matrix(2, 3, 42)
    assert a.shape == (2, 3)
    assert np.array_equal(a, gaussian_matrix(2, 3, 42))
    assert not np.array_equal(a, gaussian_matrix(2, 3, 43))


def test_gaussian_matrix_moments():
    a = gaussian_matrix(100, 100, 7)
    assert abs(a.mean()) <= 4 * (1 / np.sqrt(100)) / 100
    assert abs(a.var(ddof=1) - 0.01) <= 0.15 * 0.01


def test_gaussian_variance_square_200():
    a = gaussian_matrix(200, 200, 3)
    assert abs(a.var(ddof=1) - 1 / 200) <= 0.15 / 200


@pytest.mark.parametrize("m, n", [(0, 5), (5, 0), (-1, 3), (2**20, 2**20)])
def test_gaussian_matrix_bad_dims(m, n):
    with pytest.raises(InvalidArgumentError):
        gaussian_matrix(m, n, 1)


@pytest.mark.parametrize("seed", [-1, 2**64, 1.5])
def test_gaussian_matrix_bad_seed(seed):
    with pytest.raises(InvalidArgumentError):
        gaussian_matrix(2, 2, seed)


@given(st.integers(1, 12), st.integers(1, 12), st.integers(0, 2**64 - 1))
@settings(max_examples=30, deadline=None)
def test_gaussian_matrix_pure(m, n, seed):
    assert np.array_equal(gaussian_matrix(m, n, seed), gaussian_matrix(m, n, seed))


def test_dct_n1():
    assert np.array_equal(dct_synthesis_matrix(1), np.array([[1.0]]))


@pytest.mark.parametrize("n", [1, 2, 4, 8, 250])
def test_dct_orthonormal(n):
    psi = dct_synthesis_matrix(n)
    assert np.max(np.abs(psi.T @ psi - np.eye(n))) < 1e-12


def test_dct_dc_column():
    s = np.zeros(8)
    s[0] = 1.0
    assert np.allclose(synthesize(s, dct_synthesis_matrix(8)), np.sqrt(1 / 8), atol=1e-15)


@pytest.mark.parametrize("n", [3, 16, 31])
def test_analyze_matches_direct_dct_sum(n):
    x = np.random.default_rng(n).standard_normal(n)
    psi = dct_synthesis_matrix(n)
    assert np.allclose(analyze(x, psi), dct2_ortho_loops(x), atol=1e-12)
    assert np.allclose(analyze(x, psi), scipy.fft.dct(x, type=2, norm="ortho"), atol=1e-12)


def test_dct_zero_raises():
    with pytest.raises(InvalidArgumentError):
        dct_synthesis_matrix(0)


def test_analyze_zero_and_constant():
    psi = dct_synthesis_matrix(16)
    assert np.array_equal(analyze(np.zeros(16), psi), np.zeros(16))
    s = analyze(np.ones(16), psi)
    assert s[0] == pytest.approx(4.0)
    assert np.max(np.abs(s[1:])) < 1e-12


def test_round_trip_random_vectors():
    psi = dct_synthesis_matrix(32)
    rng = np.random.default_rng(0)
    for _ in range(100):
        x = rng.standard_normal(32)
        x_rt = synthesize(analyze(x, psi), psi)
        assert np.linalg.norm(x_rt - x) / np.linalg.norm(x) < 1e-10


def test_transform_dimension_mismatch():
    psi = dct_synthesis_matrix(4)
    with pytest.raises(InvalidArgumentError):
        analyze(np.ones(5), psi)
    with pytest.raises(InvalidArgumentError):
        synthesize(np.ones(3), psi)


def test_build_ensemble_full_window():
    ens = build_ensemble(250, 25, 1)
    assert ens.phi.shape == (25, 250)
    assert ens.a.shape == (25, 250)
    assert ens.psi.shape == (250, 250)
    assert np.max(np.abs(ens.a - ens.phi @ ens.psi)) < 1e-10
    assert np.max(np.abs(ens.psi.T @ ens.psi - np.eye(250))) < 1e-12


def test_build_ensemble_identity_basis():
    ens = build_ensemble(4, 4, 9, psi=np.eye(4))
    assert np.array_equal(ens.a, ens.phi)


def test_build_ensemble_deterministic():
    assert np.array_equal(build_ensemble(20, 10, 5).a, build_ensemble(20, 10, 5).a)


def test_ensemble_is_read_only():
    ens = build_ensemble(4, 2, 1)
    with pytest.raises(ValueError):
        ens.a[0, 0] = 1.0
