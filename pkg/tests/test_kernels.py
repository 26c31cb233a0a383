import os
import subprocess
import sys

import numpy as np
import pytest

from hdbsm import _kernels


def rand_vec(rng, n):
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return np.ascontiguousarray(v, dtype=np.complex128)


needs_numba = pytest.mark.skipif(
    not _kernels.NUMBA_AVAILABLE, reason="numba backend not active"
)


@needs_numba
def test_kron_paths_agree():
    rng = np.random.default_rng(11)
    for na, nb in [(2, 2), (4, 9), (25, 25), (36, 36)]:
        a, b = rand_vec(rng, na), rand_vec(rng, nb)
        np.testing.assert_allclose(
            _kernels.kron_vec_numba(a, b), _kernels.kron_vec_numpy(a, b), atol=1e-14
        )


@needs_numba
def test_apply_unitary_paths_agree():
    rng = np.random.default_rng(12)
    for left, dim, right in [(1, 2, 1), (3, 3, 9), (25, 5, 1), (36, 6, 6)]:
        amps = rand_vec(rng, left * dim * right)
        u = np.ascontiguousarray(
            rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        )
        np.testing.assert_allclose(
            _kernels.apply_factor_unitary_numba(amps, u, left, dim, right),
            _kernels.apply_factor_unitary_numpy(amps, u, left, dim, right),
            atol=1e-12,
        )


@needs_numba
def test_project_paths_agree():
    rng = np.random.default_rng(13)
    for rows, cols in [(4, 4), (81, 81), (100, 625)]:
        basis = np.ascontiguousarray(
            rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
        )
        amps = rand_vec(rng, cols)
        np.testing.assert_allclose(
            _kernels.project_rows_numba(basis, amps),
            _kernels.project_rows_numpy(basis, amps),
            atol=1e-10,
        )


def test_backend_name():
    assert _kernels.backend() in ("numba", "numpy")
    assert (_kernels.backend() == "numba") == _kernels.NUMBA_AVAILABLE


def test_env_flag_selects_numpy_fallback():
    env = dict(os.environ, HDBSM_PURE_NUMPY="1")
    out = subprocess.run(
        [sys.executable, "-c", "from hdbsm import _kernels; print(_kernels.backend())"],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout.strip() == "numpy"


def test_fallback_results_match_package_defaults():
    # The numpy fallback must compute the same decomposition tables.
    code = (
        "from hdbsm import decompose, REFERENCE_CONVENTION;"
        "t = decompose(3, 1, 2, REFERENCE_CONVENTION);"
        "print(sorted(t.support()))"
    )
    expected = subprocess.run(
        [sys.executable, "-c", code], capture_output=True, text=True, check=True
    ).stdout
    forced = subprocess.run(
        [sys.executable, "-c", code],
        env=dict(os.environ, HDBSM_PURE_NUMPY="1"),
        capture_output=True,
        text=True,
        check=True,
    ).stdout
    assert expected == forced
