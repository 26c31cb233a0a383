"""Hot numeric kernels, JIT-compiled with numba when available.

Every kernel has a pure-numpy implementation with identical semantics.
The numba path is the default; set ``HDBSM_PURE_NUMPY=1`` to force the
numpy path (or it is selected automatically when numba is not importable).
``benchmarks/bench_kernels.py`` compares the two.

All kernels operate on contiguous ``complex128`` arrays.
"""

from __future__ import annotations

import os

import numpy as np

_TRUTHY = ("1", "true", "yes", "on")


def _pure_numpy_requested() -> bool:
    return os.environ.get("HDBSM_PURE_NUMPY", "").strip().lower() in _TRUTHY


# ---------------------------------------------------------------------------
# numpy implementations
# ---------------------------------------------------------------------------


def kron_vec_numpy(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Tensor (Kronecker) product of two amplitude vectors."""
    return np.kron(a, b)


def apply_factor_unitary_numpy(
    amps: np.ndarray, u: np.ndarray, left: int, dim: int, right: int
) -> np.ndarray:
    """Apply a dim x dim matrix to the middle axis of amps seen as (left, dim, right)."""
    t = amps.reshape(left, dim, right)
    out = np.einsum("ij,ajb->aib", u, t)
    return np.ascontiguousarray(out).reshape(-1)


def project_rows_numpy(basis: np.ndarray, amps: np.ndarray) -> np.ndarray:
    """Inner products <row|amps> for every row of a basis matrix."""
    return basis.conj() @ amps


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

NUMBA_AVAILABLE = False
kron_vec_numba = None
apply_factor_unitary_numba = None
project_rows_numba = None

if not _pure_numpy_requested():
    try:
        from numba import njit

        @njit(cache=True)
        def _kron_vec(a, b):  # pragma: no cover - exercised via dispatch
            na = a.shape[0]
            nb = b.shape[0]
            out = np.empty(na * nb, np.complex128)
            for i in range(na):
                ai = a[i]
                base = i * nb
                for j in range(nb):
                    out[base + j] = ai * b[j]
            return out

        @njit(cache=True)
        def _apply_factor_unitary(amps, u, left, dim, right):  # pragma: no cover
            out = np.zeros(left * dim * right, np.complex128)
            for blk in range(left):
                for i in range(dim):
                    obase = (blk * dim + i) * right
                    for j in range(dim):
                        uij = u[i, j]
                        if uij != 0.0:
                            ibase = (blk * dim + j) * right
                            for r in range(right):
                                out[obase + r] += uij * amps[ibase + r]
            return out

        @njit(cache=True)
        def _project_rows(basis, amps):  # pragma: no cover
            nrows = basis.shape[0]
            ncols = basis.shape[1]
            out = np.empty(nrows, np.complex128)
            for r in range(nrows):
                acc = 0.0 + 0.0j
                for c in range(ncols):
                    acc += np.conj(basis[r, c]) * amps[c]
                out[r] = acc
            return out

        kron_vec_numba = _kron_vec
        apply_factor_unitary_numba = _apply_factor_unitary
        project_rows_numba = _project_rows
        NUMBA_AVAILABLE = True
    except ImportError:
        NUMBA_AVAILABLE = False


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

if NUMBA_AVAILABLE:
    _BACKEND = "numba"
    kron_vec = kron_vec_numba
    apply_factor_unitary = apply_factor_unitary_numba
    project_rows = project_rows_numba
else:
    _BACKEND = "numpy"
    kron_vec = kron_vec_numpy
    apply_factor_unitary = apply_factor_unitary_numpy
    project_rows = project_rows_numpy


def backend() -> str:
    """Name of the active kernel backend, 'numba' or 'numpy'."""
    return _BACKEND


def warmup() -> None:
    """Trigger JIT compilation of all kernels on tiny inputs (no-op on numpy)."""
    a = np.ones(2, np.complex128)
    u = np.eye(2, dtype=np.complex128)
    kron_vec(a, a)
    apply_factor_unitary(np.ones(4, np.complex128), u, 1, 2, 2)
    project_rows(np.ones((2, 2), np.complex128), a)
