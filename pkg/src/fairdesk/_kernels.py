"""Numeric hot loops, JIT-compiled with numba when available.

Two kernels dominate runtime: the full-batch logistic-regression gradient
descent loop and the pairwise squared-distance matrix behind the k-NN
consistency score. Both exist in two lanes, a numba ``@njit`` build and a
pure-numpy fallback, selected once at import time. Set ``FAIRDESK_NO_NUMBA=1``
to force the numpy lane (e.g. for debugging or on platforms without a working
JIT). Each lane is deterministic; the lanes agree to ~1e-9 but are not
bitwise identical (BLAS reductions vs scalar loops).
"""

import os

import numpy as np

_FLAG = os.environ.get("FAIRDESK_NO_NUMBA", "").strip().lower()
NUMBA_DISABLED = _FLAG not in ("", "0", "false", "no")


def _numpy_logistic_gd(X, y, learning_rate, epochs, l2_penalty):
    n, d = X.shape
    w = np.zeros(d, dtype=np.float64)
    b = 0.0
    for _ in range(epochs):
        z = X @ w + b
        # numerically stable sigmoid; where() evaluates the unused branch too
        with np.errstate(over="ignore", invalid="ignore"):
            p = np.where(z >= 0.0, 1.0 / (1.0 + np.exp(-z)), np.exp(z) / (1.0 + np.exp(z)))
        err = p - y
        grad_w = X.T @ err / n + l2_penalty * w
        grad_b = err.sum() / n
        w -= learning_rate * grad_w
        b -= learning_rate * grad_b
    return w, b


def _numpy_pairwise_sq_dists(X):
    sq = np.einsum("ij,ij->i", X, X)
    d = sq[:, None] + sq[None, :] - 2.0 * (X @ X.T)
    np.maximum(d, 0.0, out=d)
    return d


HAS_NUMBA = False
if not NUMBA_DISABLED:
    try:
        from numba import njit

        @njit(cache=True)
        def _numba_logistic_gd(X, y, learning_rate, epochs, l2_penalty):
            n, d = X.shape
            w = np.zeros(d, dtype=np.float64)
            b = 0.0
            p = np.empty(n, dtype=np.float64)
            grad_w = np.empty(d, dtype=np.float64)
            for _ in range(epochs):
                for i in range(n):
                    z = b
                    for j in range(d):
                        z += X[i, j] * w[j]
                    if z >= 0.0:
                        p[i] = 1.0 / (1.0 + np.exp(-z))
                    else:
                        ez = np.exp(z)
                        p[i] = ez / (1.0 + ez)
                for j in range(d):
                    g = 0.0
                    for i in range(n):
                        g += (p[i] - y[i]) * X[i, j]
                    grad_w[j] = g / n + l2_penalty * w[j]
                grad_b = 0.0
                for i in range(n):
                    grad_b += p[i] - y[i]
                grad_b /= n
                for j in range(d):
                    w[j] -= learning_rate * grad_w[j]
                b -= learning_rate * grad_b
            return w, b

        @njit(cache=True)
        def _numba_pairwise_sq_dists(X):
            n, d = X.shape
            out = np.zeros((n, n), dtype=np.float64)
            for i in range(n):
                for j in range(i + 1, n):
                    s = 0.0
                    for k in range(d):
                        diff = X[i, k] - X[j, k]
                        s += diff * diff
                    out[i, j] = s
                    out[j, i] = s
            return out

        HAS_NUMBA = True
    except ImportError:
        HAS_NUMBA = False

if HAS_NUMBA:
    logistic_gd = _numba_logistic_gd
    pairwise_sq_dists = _numba_pairwise_sq_dists
    ACTIVE_LANE = "numba"
else:
    logistic_gd = _numpy_logistic_gd
    pairwise_sq_dists = _numpy_pairwise_sq_dists
    ACTIVE_LANE = "numpy"
