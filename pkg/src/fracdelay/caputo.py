"""Caputo side of the delay model

    D_C^alpha y(t) + a y(t - T) = b(t),   y(0) = y0,   y = 0 on t < 0.

Here the truncated delay series is the exact solution on every epoch (the
Laplace transform of each term is exact), so it serves as a true reference.

Solvers
-------
All three fill the first delay interval from the series and step from there.

L1 Euler
    Piecewise-linear (L1) discretisation of the Caputo derivative at t_n,

        y_n = y_{n-1} + h^alpha Gamma(2-alpha) (b(t_n) - a y_{n-m})
              - sum_{k=1}^{n-1} w_k (y_{n-k} - y_{n-k-1}),
        w_k = (k+1)^(1-alpha) - k^(1-alpha).

    ``memory=False`` drops the history sum and uses the one-line update
    y_n = y_{n-1} + h^alpha/Gamma(alpha+1) (b(t_{n-1}) - a y_{n-1-m}).
    That update is not consistent with the Caputo operator (it forgets the
    memory term) and is kept only for comparison.

L2-1sigma
    Alikhanov's scheme, equation imposed at t_{n+sigma}, sigma = 1 - alpha/2:

        sum_{s=0}^{n} c_s (y_{n+1-s} - y_{n-s}) = h^alpha Gamma(2-alpha) (b(t_{n+sigma}) - a y_d),

    with y_d = (1-sigma) y_{n-m} + sigma y_{n+1-m} and

        A_0 = sigma^(1-alpha),  A_l = (l+sigma)^(1-alpha) - (l-1+sigma)^(1-alpha),
        B_l = [(l+sigma)^(2-alpha) - (l-1+sigma)^(2-alpha)]/(2-alpha)
              - [(l+sigma)^(1-alpha) + (l-1+sigma)^(1-alpha)]/2,
        c_0 = A_0 + B_1,  c_s = A_s + B_{s+1} - B_s (1 <= s < n),  c_n = A_n - B_n.

    The correction C_n is the difference between this update and the L1
    update at t_{n+1}; switching it off reproduces the L1 trajectory exactly.

Predictor-corrector
    Predictor: the series at t_n.  Corrector: product-trapezoid fractional
    Adams-Moulton step for y = y0 + I^alpha f, f = b - a y(t - T), over the
    whole history, with the delayed values read from the blended trajectory.
    At the activation node t = T, f jumps by -a y0; the cell ending at T uses
    the left limit and the cell starting at T the right limit.  The result is
    blend * corrector + (1 - blend) * predictor.  ``memory=False`` uses the
    local step y_{n-1} + h^alpha/Gamma(alpha+1) (f_{n-1} + f_n)/2 instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import special

from ._series import epoch_series
from .conformable import ProblemConfig, _check_horizon
from .forcing import eval_forcing
from .mesh import Trajectory
from .specfun import mittag_leffler


def _log_c0(j, log_alpha, alpha):
    return -math.lgamma(alpha * j + 1.0)


def _log_ck(j, k, log_alpha, alpha):
    p = j + k + 1
    return math.lgamma(alpha * k + 1.0) - k * log_alpha - math.lgamma(alpha * p + 1.0)


def series_solution_caputo(cfg: ProblemConfig, t):
    """Truncated delay series

        sum_j (-a)^j [ y0 D^(alpha j)/Gamma(alpha j + 1)
                       + sum_k (Gamma(alpha k + 1)/alpha^k) b_k D^((j+k+1) alpha)/Gamma((j+k+1) alpha + 1) ],

    D = t - jT >= 0, assembled in log space.
    """
    tt = _check_horizon(cfg, t, "caputo")
    al = cfg.alpha
    out = epoch_series(
        tt,
        al,
        cfg.a,
        cfg.T,
        cfg.y0,
        cfg.b.coeffs,
        lambda j, la: _log_c0(j, la, al),
        lambda j, k, la: _log_ck(j, k, la, al),
    )
    return float(out[0]) if tt.ndim == 0 else out


def caputo_constant_forcing(a, b0, y0, alpha, t):
    """No-delay constant-forcing solution y0 E + (b0/a)(1 - E), E = E_alpha(-a t^alpha)."""
    if a == 0:
        raise ValueError("caputo_constant_forcing needs a != 0")
    tt = np.asarray(t, dtype=float)
    if np.any(tt < 0):
        raise ValueError("t must be >= 0")
    E = np.array([mittag_leffler(alpha, -a * x**alpha) for x in tt.ravel()]).reshape(tt.shape)
    out = y0 * E + (b0 / a) * (1.0 - E)
    return float(out) if out.ndim == 0 else out


def _l1_weights(n, alpha):
    k = np.arange(n + 1, dtype=float)
    return (k + 1.0) ** (1.0 - alpha) - k ** (1.0 - alpha)


def discrete_caputo_l1(traj: Trajectory, alpha: float) -> np.ndarray:
    """L1 approximation of the Caputo derivative at t_1 .. t_N."""
    y = traj.values
    if y.size < 2:
        raise ValueError("need at least two values")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    d = np.diff(y)
    w = _l1_weights(d.size - 1, alpha)
    conv = np.convolve(d, w)[: d.size]
    return conv / (traj.mesh.h**alpha * special.gamma(2.0 - alpha))


@dataclass(frozen=True)
class L2SigmaParams:
    """Shift and weights of the L2-1sigma scheme.

    ``sigma=None`` means 1 - alpha/2.  ``correction=False`` zeroes the
    correction term so the scheme collapses to L1 Euler.
    """

    alpha: float
    sigma: Optional[float] = None
    correction: bool = True

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")
        if self.sigma is None:
            object.__setattr__(self, "sigma", 1.0 - self.alpha / 2.0)
        if not 0.0 < self.sigma <= 1.0:
            raise ValueError(f"sigma must lie in (0, 1], got {self.sigma}")
        A, B = self.kernel(1)
        if not (A[0] + B[1]) > 0:
            raise ValueError(f"c_0 = {A[0] + B[1]} is not positive for sigma={self.sigma}")

    def kernel(self, n: int):
        """Arrays A_0..A_{n+1} and B_0..B_{n+1} (B_0 unused, set to 0)."""
        al, s = self.alpha, self.sigma
        l = np.arange(1, n + 2, dtype=float)
        A = np.empty(n + 2)
        A[0] = s ** (1.0 - al)
        A[1:] = (l + s) ** (1.0 - al) - (l - 1.0 + s) ** (1.0 - al)
        B = np.zeros(n + 2)
        B[1:] = ((l + s) ** (2.0 - al) - (l - 1.0 + s) ** (2.0 - al)) / (2.0 - al) - (
            (l + s) ** (1.0 - al) + (l - 1.0 + s) ** (1.0 - al)
        ) / 2.0
        return A, B

    def weights(self, n: int) -> np.ndarray:
        """c_0 .. c_n for the step from t_n to t_{n+1}."""
        A, B = self.kernel(n)
        return _c_from_kernel(A, B, n)


def _c_from_kernel(A, B, n):
    if n == 0:
        return A[:1].copy()
    c = A[: n + 1] + B[1 : n + 2] - B[: n + 1]
    c[0] = A[0] + B[1]
    c[n] = A[n] - B[n]
    return c


def _initial_segment(cfg: ProblemConfig, fill_through_m: bool, tag: str):
    """Trajectory with the first-interval nodes taken from the series.

    Returns (traj, first index still to compute).
    """
    mesh = cfg.mesh
    last = min(mesh.m if fill_through_m else mesh.m - 1, mesh.N)
    traj = Trajectory.empty(mesh, tag)
    traj.values[: last + 1] = np.atleast_1d(series_solution_caputo(cfg, mesh.nodes[: last + 1]))
    return traj, last + 1


def _l1_step(y, d, n, w, g, bn, a, m):
    """L1 update for y_n given y_0..y_{n-1} and increments d_0..d_{n-2}."""
    yd = y[n - m] if n >= m else 0.0
    mem = np.dot(w[n - 1 : 0 : -1], d[: n - 1]) if n > 1 else 0.0
    return y[n - 1] + g * (bn - a * yd) - mem


def solve_l1_euler_caputo(cfg: ProblemConfig, memory: bool = True, fill_through_m: bool = True) -> Trajectory:
    """L1 Euler scheme; see the module docstring for both variants."""
    traj, start = _initial_segment(cfg, fill_through_m, "caputo-l1")
    mesh = traj.mesh
    N, m, h, al, a = mesh.N, mesh.m, mesh.h, cfg.alpha, cfg.a
    y = traj.values
    bt = eval_forcing(cfg.b, al, mesh.nodes)
    with np.errstate(over="ignore", invalid="ignore"):
        if memory:
            w = _l1_weights(N, al)
            d = np.zeros(max(N, 1))
            d[: start - 1] = np.diff(y[:start])
            g = h**al * special.gamma(2.0 - al)
            for n in range(start, N + 1):
                y[n] = _l1_step(y, d, n, w, g, bt[n], a, m)
                d[n - 1] = y[n] - y[n - 1]
        else:
            g = h**al / special.gamma(al + 1.0)
            for n in range(start, N + 1):
                yd = y[n - 1 - m] if n - 1 >= m else 0.0
                y[n] = y[n - 1] + g * (bt[n - 1] - a * yd)
    traj.mark_divergence()
    return traj


def solve_l2_1sigma_caputo(
    cfg: ProblemConfig, p: Optional[L2SigmaParams] = None, fill_through_m: bool = True
) -> Trajectory:
    """L2-1sigma scheme; see the module docstring for the weights."""
    p = p or L2SigmaParams(cfg.alpha)
    if p.alpha != cfg.alpha:
        raise ValueError(f"L2SigmaParams built for alpha={p.alpha}, config has alpha={cfg.alpha}")
    traj, start = _initial_segment(cfg, fill_through_m, "caputo-l21sigma")
    mesh = traj.mesh
    N, m, h, al, a, s = mesh.N, mesh.m, mesh.h, cfg.alpha, cfg.a, p.sigma
    y = traj.values
    t = mesh.nodes
    bt = eval_forcing(cfg.b, al, t)
    bs = eval_forcing(cfg.b, al, t + s * h)
    A, B = p.kernel(N)
    w = _l1_weights(N, al)
    g = h**al * special.gamma(2.0 - al)
    d = np.zeros(max(N, 1))
    d[: start - 1] = np.diff(y[:start])
    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(start - 1, N):
            y_l1 = _l1_step(y, d, n + 1, w, g, bt[n + 1], a, m)
            if p.correction:
                lo = y[n - m] if n >= m else 0.0
                hi = y[n + 1 - m] if n + 1 >= m else 0.0
                yd = (1.0 - s) * lo + s * hi
                c = _c_from_kernel(A, B, n)
                mem = np.dot(c[1:], d[n - 1 :: -1][:n]) if n > 0 else 0.0
                y_l2 = y[n] + (g * (bs[n] - a * yd) - mem) / c[0]
                y[n + 1] = y_l1 + (y_l2 - y_l1)
            else:
                y[n + 1] = y_l1
            d[n] = y[n + 1] - y[n]
    traj.mark_divergence()
    return traj


def _product_trapezoid_weights(N, alpha):
    """Cell weights L_k, R_k (k = 1..N, index 0 unused) of the product trapezoid rule.

    For the cell [t_{n-k}, t_{n-k+1}], int (t_n - s)^(alpha-1) f(s) ds is
    h^alpha [L_k f_left + R_k f_right], scaled by 1/Gamma(alpha) by the caller.
    """
    k = np.arange(N + 1, dtype=float)
    k[0] = 1.0
    P = (k**alpha - (k - 1.0) ** alpha) / alpha
    Q = (k ** (alpha + 1.0) - (k - 1.0) ** (alpha + 1.0)) / (alpha + 1.0)
    L = (1.0 - k) * P + Q
    R = k * P - Q
    L[0] = R[0] = 0.0
    return L, R


def solve_predictor_corrector_caputo(
    cfg: ProblemConfig, blend: float = 0.5, memory: bool = True, fill_through_m: bool = True
) -> Trajectory:
    """Series-anchored predictor-corrector; see the module docstring."""
    if not 0.0 <= blend <= 1.0:
        raise ValueError(f"blend must lie in [0, 1], got {blend}")
    traj, start = _initial_segment(cfg, fill_through_m, "caputo-pc")
    mesh = traj.mesh
    N, m, h, al, a, y0 = mesh.N, mesh.m, mesh.h, cfg.alpha, cfg.a, cfg.y0
    y = traj.values
    t = mesh.nodes
    bt = eval_forcing(cfg.b, al, t)
    pred = np.atleast_1d(series_solution_caputo(cfg, t)) if start <= N else None

    # f one-sided at each node: fp = right limit, fm = left limit
    fp = np.zeros(N + 1)
    fm = np.zeros(N + 1)

    def set_f(n):
        yd = y[n - m] if n >= m else 0.0
        fp[n] = bt[n] - a * yd
        fm[n] = bt[n] if n == m else fp[n]

    for n in range(start):
        set_f(n)
    with np.errstate(over="ignore", invalid="ignore"):
        if memory:
            L, R = _product_trapezoid_weights(N, al)
            g = h**al / special.gamma(al)
            for n in range(start, N + 1):
                set_f(n)
                corr = y0 + g * (np.dot(L[n:0:-1], fp[:n]) + np.dot(R[n:0:-1], fm[1 : n + 1]))
                y[n] = blend * corr + (1.0 - blend) * pred[n]
        else:
            g = h**al / special.gamma(al + 1.0)
            for n in range(start, N + 1):
                set_f(n)
                corr = y[n - 1] + g * (0.5 * fp[n - 1] + 0.5 * fm[n])
                y[n] = blend * corr + (1.0 - blend) * pred[n]
    traj.mark_divergence()
    return traj
