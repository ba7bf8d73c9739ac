"""Conformable side: closed forms, the truncated delay series, the mesh
conformable derivative and the Euler / RK4 / RK4-interp integrators.

The model is

    t^(1-alpha) y'(t) + a y(t - T) = b(t),   y(0) = y0,   y = 0 on t < 0,

with b(t) = sum_k b_k (t^alpha/alpha)^k.

Note on exactness: for alpha < 1 the series below is exact on the first
interval [0, T) only.  On later epochs the conformable operator does not map
(t - jT)^(alpha m) to a multiple of (t - jT)^(alpha m - alpha), so the series
and the true solution part ways once the delay activates.  The series is still
the reference the benchmark errors are measured against.  At alpha = 1 it is
the classical method-of-steps solution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from ._series import epoch_series
from .errors import ConfigError
from .forcing import ForcingSeries, eval_forcing
from .mesh import (
    Mesh,
    Trajectory,
    delayed_value_floor,
    delayed_value_interp,
    mesh_for_step,
)

FAMILIES = ("conformable", "caputo")


@dataclass(frozen=True)
class ProblemConfig:
    """Full problem specification shared by both families.

    ``K`` truncates the forcing to b_0..b_K (``None`` keeps every coefficient).
    ``floor_guard`` selects how delayed indices are floored by the conformable
    steppers: ``False`` (default) takes the raw floating-point floor, which
    is what the reference benchmark numbers were produced with.
    """

    alpha: float
    a: float
    T: float
    y0: float
    forcing: ForcingSeries
    h: float
    t_max: float
    K: Optional[int] = None
    family: str = "conformable"
    floor_guard: bool = False

    def __post_init__(self):
        if not isinstance(self.forcing, ForcingSeries):
            object.__setattr__(self, "forcing", ForcingSeries(self.forcing))
        problems = []
        if not (isinstance(self.alpha, (int, float)) and 0.0 < self.alpha <= 1.0):
            problems.append(f"alpha must lie in (0, 1], got {self.alpha}")
        for name in ("a", "y0"):
            if not math.isfinite(getattr(self, name)):
                problems.append(f"{name} must be finite, got {getattr(self, name)}")
        if not self.T > 0:
            problems.append(f"T must be positive, got {self.T}")
        if not self.h > 0:
            problems.append(f"h must be positive, got {self.h}")
        if not self.t_max >= 0:
            problems.append(f"t_max must be >= 0, got {self.t_max}")
        if self.K is not None and (int(self.K) != self.K or self.K < 0):
            problems.append(f"K must be a non-negative integer, got {self.K}")
        if self.family not in FAMILIES:
            problems.append(f"family must be one of {FAMILIES}, got {self.family!r}")
        if self.T > 0 and self.h > 0:
            ratio = self.T / self.h
            if round(ratio) < 1 or abs(ratio - round(ratio)) > 1e-12 * max(1.0, ratio):
                problems.append(f"T/h = {ratio!r} is not an integer (mesh must be delay-aligned)")
        if problems:
            raise ConfigError(problems)

    @property
    def b(self) -> ForcingSeries:
        """Forcing truncated to order K."""
        if self.K is None or self.K >= self.forcing.K:
            return self.forcing
        return self.forcing.truncated(int(self.K))

    @property
    def mesh(self) -> Mesh:
        return mesh_for_step(self.T, self.h, self.t_max)

    def with_(self, **changes) -> "ProblemConfig":
        """Copy with some fields changed (re-validated)."""
        return replace(self, **changes)


def conformable_linear_ivp(a, b, y0, alpha, t):
    """Solution of T_alpha y + a y = b, y(0) = y0: b/a + (y0 - b/a) exp(-a t^alpha/alpha)."""
    if a == 0:
        raise ValueError("conformable_linear_ivp needs a != 0")
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    tt = np.asarray(t, dtype=float)
    if np.any(tt < 0):
        raise ValueError("t must be >= 0")
    out = b / a + (y0 - b / a) * np.exp(-a * tt**alpha / alpha)
    return float(out) if out.ndim == 0 else out


def _log_c0(j, log_alpha):
    return -j * log_alpha - math.lgamma(j + 1)


def _log_ck(j, k, log_alpha):
    p = j + k + 1
    return math.lgamma(k + 1) - p * log_alpha - math.lgamma(p + 1)


def _check_horizon(cfg, t, family):
    if cfg.family != family:
        raise ValueError(f"config family is {cfg.family!r}, expected {family!r}")
    tt = np.asarray(t, dtype=float)
    if tt.size and float(tt.max()) > cfg.t_max * (1 + 1e-12) + 1e-12:
        raise ValueError(f"t={float(tt.max())} lies beyond t_max={cfg.t_max}")
    return tt


def series_solution_conformable(cfg: ProblemConfig, t):
    """Truncated delay series

        sum_j (-a)^j [ y0 D^(alpha j) / (alpha^j j!)
                       + sum_k b_k k! D^(alpha(j+k+1)) / (alpha^(j+k+1) (j+k+1)!) ],  D = t - jT,

    summed over the epochs with D >= 0.  Terms are assembled in log space;
    a term beyond the double range raises ``SeriesOverflowError``.
    """
    tt = _check_horizon(cfg, t, "conformable")
    out = epoch_series(tt, cfg.alpha, cfg.a, cfg.T, cfg.y0, cfg.b.coeffs, _log_c0, _log_ck)
    return float(out[0]) if tt.ndim == 0 else out


def series_trajectory(cfg: ProblemConfig, tag: str = "series") -> Trajectory:
    """The series sampled at every mesh node."""
    mesh = cfg.mesh
    if cfg.family == "conformable":
        vals = series_solution_conformable(cfg, mesh.nodes)
    else:
        from .caputo import series_solution_caputo

        vals = series_solution_caputo(cfg, mesh.nodes)
    return Trajectory(mesh, np.atleast_1d(vals), tag)


def conformable_derivative_mesh(traj: Trajectory, alpha: float) -> np.ndarray:
    """Backward-difference conformable derivative t_n^(1-alpha) (y_n - y_{n-1}) / h, n = 1..N."""
    y = traj.values
    if y.size < 2:
        raise ValueError("need at least two values")
    t = traj.t[1:]
    return t ** (1.0 - alpha) * np.diff(y) / traj.mesh.h


def conformable_integral_numeric(f: Callable[[float], float], alpha, a, t, n_panels=1000) -> float:
    """Composite trapezoid for int_a^t tau^(alpha-1) f(tau) dtau.

    The rule is applied in the variable u = tau^alpha/alpha, where the weight
    disappears (du = tau^(alpha-1) dtau), so the t = 0 singularity costs nothing.
    """
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    if a < 0 or not t > a:
        raise ValueError(f"need 0 <= a < t, got a={a}, t={t}")
    if n_panels < 1:
        raise ValueError("n_panels must be >= 1")
    u = np.linspace(a**alpha / alpha, t**alpha / alpha, int(n_panels) + 1)
    tau = (alpha * u) ** (1.0 / alpha)
    tau[0], tau[-1] = a, t
    fv = np.array([f(float(x)) for x in tau], dtype=float)
    return float(np.trapezoid(fv, u) if hasattr(np, "trapezoid") else np.trapz(fv, u))


def solve_euler_conformable(cfg: ProblemConfig) -> Trajectory:
    """Forward Euler with the slope taken at the new node:

        y_n = y_{n-1} + h (-a y(t_n - T) + b(t_n)) / t_n^(1-alpha),   n = 1..N,

    the delayed value read at the floor node.  Starting at n = 1 keeps the
    weight t^(1-alpha) away from t = 0.
    """
    mesh = cfg.mesh
    traj = Trajectory.empty(mesh, "euler")
    y = traj.values
    y[0] = cfg.y0
    h, T, a, al = mesh.h, cfg.T, cfg.a, cfg.alpha
    t = mesh.nodes
    bt = eval_forcing(cfg.b, al, t)
    with np.errstate(divide="ignore"):
        wt = h / t ** (1.0 - al)
    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(1, mesh.N + 1):
            yT = delayed_value_floor(traj, n, T, guard=cfg.floor_guard)
            y[n] = y[n - 1] + wt[n] * (bt[n] - a * yT)
    traj.mark_divergence()
    return traj


def solve_rk4_conformable(cfg: ProblemConfig, interp: bool = False) -> Trajectory:
    """Classical RK4 weights with one delayed value per step.

    Stage slopes (-a y_T + b(s)) / s^(1-alpha) are taken at s = t_n, t_n + h/2
    (twice) and t_n + h, and y_T is frozen over the step.  Because the slope does
    not depend on y once y_T is frozen, k2 = k3.  With ``interp`` the delayed
    value is the linear interpolant between the two surrounding nodes
    (falling back to the floor node, with an event logged, if the upper node
    is not yet computed).
    """
    mesh = cfg.mesh
    traj = Trajectory.empty(mesh, "rk4-interp" if interp else "rk4")
    y = traj.values
    y[0] = cfg.y0
    h, T, a, al = mesh.h, cfg.T, cfg.a, cfg.alpha
    t = mesh.nodes
    s1, s2, s4 = t, t + 0.5 * h, t + h
    b1, b2, b4 = (eval_forcing(cfg.b, al, s) for s in (s1, s2, s4))
    with np.errstate(divide="ignore"):
        w1, w2, w4 = (h / s ** (1.0 - al) for s in (s1, s2, s4))
    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(1, mesh.N + 1):
            if interp:
                yT = delayed_value_interp(
                    traj, n, T, filled=n - 1, guard=cfg.floor_guard, fallback=True
                )
            else:
                yT = delayed_value_floor(traj, n, T, guard=cfg.floor_guard)
            k1 = w1[n] * (b1[n] - a * yT)
            k2 = w2[n] * (b2[n] - a * yT)
            k3 = k2
            k4 = w4[n] * (b4[n] - a * yT)
            y[n] = y[n - 1] + (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
    traj.mark_divergence()
    return traj
