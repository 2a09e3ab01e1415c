"""Floating-point batch kernels for the heuristic searches.

Two interchangeable backends: numba ``@njit`` loops and plain vectorized
numpy.  Set ``SOSGAP_NUMBA=0`` to force numpy; numba is also skipped when it
is not importable.  Nothing here feeds an exact verdict.
"""

from __future__ import annotations

import os

import numpy as np

from .forms import Form


def _numba_requested() -> bool:
    return os.environ.get("SOSGAP_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")


try:
    if not _numba_requested():
        raise ImportError("disabled by SOSGAP_NUMBA")
    import warnings

    from numba import config as _numba_config
    from numba import njit, prange

    # the bundled TBB is too old; skip the probe and its warning
    _numba_config.THREADING_LAYER = "workqueue"
    warnings.filterwarnings("ignore", message=".*TBB.*")
    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


def form_arrays(p: Form) -> tuple[np.ndarray, np.ndarray]:
    """Exponent matrix (terms x n, int64) and float coefficients."""
    terms = p.terms()
    if not terms:
        return np.zeros((0, p.n), dtype=np.int64), np.zeros(0)
    exps = np.array([e for e, _ in terms], dtype=np.int64)
    coeffs = np.array([float(c) for _, c in terms])
    return exps, coeffs


# -- numpy backend -----------------------------------------------------------


def _eval_numpy(exps, coeffs, X):
    if exps.shape[0] == 0:
        return np.zeros(X.shape[0])
    mons = np.prod(X[:, None, :] ** exps[None, :, :], axis=2)
    return mons @ coeffs


def _eval_grad_numpy(exps, coeffs, X):
    k, n = X.shape
    vals = _eval_numpy(exps, coeffs, X)
    grad = np.zeros((k, n))
    if exps.shape[0] == 0:
        return vals, grad
    powers = X[:, None, :] ** exps[None, :, :]
    for i in range(n):
        e = exps[:, i]
        lowered = np.where(e > 0, X[:, None, i] ** np.maximum(e - 1, 0)[None, :], 0.0)
        rest = np.prod(np.delete(powers, i, axis=2), axis=2)
        grad[:, i] = (lowered * rest) @ (coeffs * e)
    return vals, grad


# -- numba backend -----------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True, parallel=True)
    def _eval_numba(exps, coeffs, X):
        k, n = X.shape
        m = exps.shape[0]
        out = np.zeros(k)
        for r in prange(k):
            acc = 0.0
            for t in range(m):
                term = coeffs[t]
                for i in range(n):
                    a = exps[t, i]
                    if a:
                        term *= X[r, i] ** a
                acc += term
            out[r] = acc
        return out

    @njit(cache=True, parallel=True)
    def _eval_grad_numba(exps, coeffs, X):
        k, n = X.shape
        m = exps.shape[0]
        vals = np.zeros(k)
        grad = np.zeros((k, n))
        for r in prange(k):
            acc = 0.0
            for t in range(m):
                term = coeffs[t]
                for i in range(n):
                    a = exps[t, i]
                    if a:
                        term *= X[r, i] ** a
                acc += term
                for j in range(n):
                    a = exps[t, j]
                    if a:
                        g = coeffs[t] * a
                        for i in range(n):
                            b = exps[t, i]
                            if i == j:
                                b -= 1
                            if b:
                                g *= X[r, i] ** b
                        grad[r, j] += g
            vals[r] = acc
        return vals, grad


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"


def eval_batch(exps: np.ndarray, coeffs: np.ndarray, X: np.ndarray, use_numba: bool | None = None) -> np.ndarray:
    """Values of one form at every row of ``X``."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    if use_numba is None:
        use_numba = HAVE_NUMBA
    if use_numba and HAVE_NUMBA:
        return _eval_numba(exps, coeffs, X)
    return _eval_numpy(exps, coeffs, X)


def eval_grad_batch(exps, coeffs, X, use_numba: bool | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Values and gradients of one form at every row of ``X``."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    if use_numba is None:
        use_numba = HAVE_NUMBA
    if use_numba and HAVE_NUMBA:
        return _eval_grad_numba(exps, coeffs, X)
    return _eval_grad_numpy(exps, coeffs, X)


def sphere_directions(n: int, count: int, seed: int) -> np.ndarray:
    """Deterministic low-discrepancy points on the unit sphere.

    Scrambled Halton points pushed through the normal quantile function and
    normalized.
    """
    from scipy.stats import norm, qmc

    u = qmc.Halton(d=n, scramble=True, seed=seed).random(count)
    u = np.clip(u, 1e-12, 1 - 1e-12)
    g = norm.ppf(u)
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return g
