"""Epoch-by-epoch assembly of the truncated delay series, shared by both families.

Both series have the shape

    y(t) = sum_{j=0}^{floor(t/T)} (-a)^j [ y0 c0(j) D^{alpha j}
                                          + sum_k b_k c(j,k) D^{alpha (j+k+1)} ],   D = t - jT,

and only the log-coefficients ln c0(j), ln c(j,k) differ.  Every term is
formed as sign * exp(log magnitude) so Gamma(j + 2) ~ Gamma(170+) never
has to exist as a double.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import SeriesOverflowError

_LOG_MAX = math.log(np.finfo(float).max)


def epoch_series(t, alpha, a, T, y0, coeffs, log_c0, log_ck):
    tt = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(tt < 0):
        raise ValueError("series solution is only defined for t >= 0")
    out = np.zeros_like(tt)
    if tt.size == 0:
        return out
    J = math.floor(tt.max() / T) if a != 0.0 else 0
    log_abs_a = math.log(abs(a)) if a != 0.0 else 0.0
    nonzero_b = [(k, b) for k, b in enumerate(coeffs) if b != 0.0]
    log_alpha = math.log(alpha)

    for j in range(J + 1):
        D = tt - j * T
        live = D > 0
        if j == 0:
            # D = 0 only at t = 0, where every positive power vanishes
            out[D == 0] += y0
        if not np.any(live):
            continue
        lD = np.log(D[live])
        # sign of (-a)^j
        sign_j = -1.0 if (a > 0 and j % 2) else 1.0
        acc = np.zeros(lD.shape)
        base = j * log_abs_a
        if y0 != 0.0:
            lm = base + math.log(abs(y0)) + log_c0(j, log_alpha) + alpha * j * lD
            _check(lm, j)
            acc += math.copysign(1.0, y0) * np.exp(lm)
        for k, b in nonzero_b:
            p = j + k + 1
            lm = base + math.log(abs(b)) + log_ck(j, k, log_alpha) + alpha * p * lD
            _check(lm, j)
            acc += math.copysign(1.0, b) * np.exp(lm)
        out[live] += sign_j * acc
    return out


def _check(log_mag, j):
    if log_mag.size and float(np.max(log_mag)) > _LOG_MAX:
        raise SeriesOverflowError(f"series term of epoch j={j} exceeds the double range", epoch=j)
