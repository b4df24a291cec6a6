"""Cache-blocked kernels for the sparse Liouvillian engine.

The density matrices in the cascaded capture runs reach dimensions of a few
thousand, where generic scipy sparse-times-dense products run several times
above the memory-bandwidth floor. These kernels keep every product to a
read of the operand and a write of the result:

* ``csr_left``      -- ``out = A @ X`` for CSR ``A`` and C-ordered dense ``X``,
* ``csr_right_acc`` -- ``out += X @ B`` iterating rows of ``X`` against CSR ``B``,
* ``antiherm``      -- ``out = -i (Z - Z^dag)`` in one tiled pass,
* ``lincomb``       -- fused ``out = X + c * Y``.

All fall back to plain numpy/scipy when numba is unavailable.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]):
            return args[0]

        def wrap(f):
            return f

        return wrap


_COL_BLOCK = 288
_TILE = 96


@njit(cache=True)
def _csr_left_kernel(indptr, indices, data, X, out):
    D, N = X.shape
    for j0 in range(0, N, _COL_BLOCK):
        j1 = min(j0 + _COL_BLOCK, N)
        for i in range(indptr.shape[0] - 1):
            for jj in range(j0, j1):
                out[i, jj] = 0.0 + 0.0j
            for p in range(indptr[i], indptr[i + 1]):
                k = indices[p]
                v = data[p]
                for jj in range(j0, j1):
                    out[i, jj] += v * X[k, jj]


@njit(cache=True)
def _csr_right_acc_kernel(X, indptr, indices, data, out):
    # out[r, :] += sum_k X[r, k] * B[k, :], B in CSR
    R, D = X.shape
    for r in range(R):
        for k in range(D):
            x = X[r, k]
            if x != 0.0:
                for p in range(indptr[k], indptr[k + 1]):
                    out[r, indices[p]] += x * data[p]


@njit(cache=True)
def _antiherm_kernel(Z, out):
    D = Z.shape[0]
    for i0 in range(0, D, _TILE):
        i1 = min(i0 + _TILE, D)
        for j0 in range(0, D, _TILE):
            j1 = min(j0 + _TILE, D)
            for i in range(i0, i1):
                for j in range(j0, j1):
                    out[i, j] = -1j * (Z[i, j] - np.conj(Z[j, i]))


@njit(cache=True)
def _lincomb_kernel(X, c, Y, out):
    n = X.shape[0]
    for i in range(n):
        out[i] = X[i] + c * Y[i]


def csr_left(A, X, out):
    """out = A @ X (A csr, X dense C-ordered 2-D)."""
    if HAVE_NUMBA:
        _csr_left_kernel(A.indptr, A.indices, A.data, X, out)
    else:
        np.copyto(out, A @ X)
    return out


def csr_right_acc(X, B, out):
    """out += X @ B (B csr)."""
    if HAVE_NUMBA:
        _csr_right_acc_kernel(X, B.indptr, B.indices, B.data, out)
    else:
        out += X @ B
    return out


def antiherm(Z, out):
    """out = -i (Z - Z^dag)."""
    if HAVE_NUMBA:
        _antiherm_kernel(Z, out)
    else:
        np.copyto(out, -1j * (Z - Z.conj().T))
    return out


def lincomb(X, c, Y, out):
    """out = X + c * Y, flattened single pass."""
    if HAVE_NUMBA:
        _lincomb_kernel(X.reshape(-1), complex(c), Y.reshape(-1), out.reshape(-1))
    else:
        np.multiply(Y, c, out=out)
        out += X
    return out
