"""Hot numeric kernels with numba and pure-numpy backends.

The only runtime-dominating loop in this package is the log-likelihood of a
large shot record evaluated across many candidate phases (the MLE scan).
Per shot the likelihood factor is cos^2 or sin^2 of (theta/2 + h) with
h = g*p + chi/2, so a scan needs, per (shot, theta) pair, two multiplies,
an add and a log. The numba kernel fuses those into one pass; the numpy
fallback does the same arithmetic with vectorized passes.

Backend selection, fixed at import time:

* ``WEAKMEAS_NO_NUMBA=1`` (or any nonempty value other than ``0``) in the
  environment forces the pure-numpy path;
* otherwise numba is used when importable, numpy else.

Both backends are deterministic run to run. They may differ from each other
in the last few floating-point digits because summation order differs.
Kernel signature::

    loglik_scan(ch_plus, sh_plus, ch_minus, sh_minus, thetas)
        -> (loglik[nt], zero_counts[nt])

where ch/sh are cos(h) and sin(h) per shot, split by detection port, and
``loglik`` excludes the factor-of-two and the zero-factor floor handling
applied by the caller (a zero factor is reported through ``zero_counts``).
"""

from __future__ import annotations

import os

import numpy as np

_ENV_FLAG = "WEAKMEAS_NO_NUMBA"


def _numba_disabled_by_env() -> bool:
    value = os.environ.get(_ENV_FLAG, "")
    return value not in ("", "0")


def _sum_log_abs(values: np.ndarray) -> tuple[float, int]:
    if values.size == 0:
        return 0.0, 0
    mags = np.abs(values)
    n_zero = int(np.count_nonzero(mags == 0.0))
    if n_zero:
        mags = mags[mags > 0.0]
    return float(np.log(mags).sum()), n_zero


def loglik_scan_numpy(ch_p, sh_p, ch_m, sh_m, thetas):
    nt = thetas.size
    out = np.empty(nt, dtype=np.float64)
    zeros = np.zeros(nt, dtype=np.int64)
    for j in range(nt):
        a = np.cos(0.5 * thetas[j])
        b = np.sin(0.5 * thetas[j])
        acc_p, nz_p = _sum_log_abs(a * ch_p - b * sh_p)
        acc_m, nz_m = _sum_log_abs(b * ch_m + a * sh_m)
        out[j] = acc_p + acc_m
        zeros[j] = nz_p + nz_m
    return out, zeros


loglik_scan_numba = None
if not _numba_disabled_by_env():
    try:
        from numba import njit, prange

        @njit(parallel=True, cache=True)
        def _scan_jit(ch_p, sh_p, ch_m, sh_m, thetas):  # pragma: no cover - jitted
            nt = thetas.size
            out = np.empty(nt, dtype=np.float64)
            zeros = np.zeros(nt, dtype=np.int64)
            for j in prange(nt):
                a = np.cos(0.5 * thetas[j])
                b = np.sin(0.5 * thetas[j])
                acc = 0.0
                nz = 0
                for i in range(ch_p.size):
                    v = abs(a * ch_p[i] - b * sh_p[i])
                    if v == 0.0:
                        nz += 1
                    else:
                        acc += np.log(v)
                for i in range(ch_m.size):
                    v = abs(b * ch_m[i] + a * sh_m[i])
                    if v == 0.0:
                        nz += 1
                    else:
                        acc += np.log(v)
                out[j] = acc
                zeros[j] = nz
            return out, zeros

        loglik_scan_numba = _scan_jit
    except ImportError:  # pragma: no cover - exercised only without numba
        loglik_scan_numba = None

loglik_scan = loglik_scan_numba if loglik_scan_numba is not None else loglik_scan_numpy


def backend_name() -> str:
    """Active kernel backend, "numba" or "numpy"."""
    return "numba" if loglik_scan is loglik_scan_numba and loglik_scan_numba is not None else "numpy"
