"""Error metrics, stability margin, scheme registry and convergence studies."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy import special

from .caputo import (
    series_solution_caputo,
    solve_l1_euler_caputo,
    solve_l2_1sigma_caputo,
    solve_predictor_corrector_caputo,
)
from .conformable import (
    ProblemConfig,
    series_trajectory,
    solve_euler_conformable,
    solve_rk4_conformable,
)
from .errors import MeshMismatchError
from .mesh import Trajectory

#: added to |reference| in relative-error denominators
REL_REGULARIZER = 1e-14

CSV_HEADER = "scheme,max_rel,rms_rel,max_abs,n_points,diverged_at"


@dataclass
class ErrorReport:
    max_rel: float
    rms_rel: float
    max_abs: float
    pointwise_abs: np.ndarray
    pointwise_rel: np.ndarray
    n_points: int
    diverged_at: Optional[int] = None
    scheme: str = ""

    @classmethod
    def from_pointwise(cls, abs_err, rel_err, scheme="", diverged_at=None) -> "ErrorReport":
        abs_err = np.asarray(abs_err, dtype=float)
        rel_err = np.asarray(rel_err, dtype=float)
        n = int(rel_err.size)
        if n == 0:
            return cls(0.0, 0.0, 0.0, abs_err, rel_err, 0, diverged_at, scheme)
        return cls(
            max_rel=float(rel_err.max()),
            rms_rel=float(np.sqrt(np.mean(rel_err**2))),
            max_abs=float(abs_err.max()),
            pointwise_abs=abs_err,
            pointwise_rel=rel_err,
            n_points=n,
            diverged_at=diverged_at,
            scheme=scheme,
        )

    def csv_row(self) -> str:
        div = "" if self.diverged_at is None else str(self.diverged_at)
        return (
            f"{self.scheme},{self.max_rel:.17g},{self.rms_rel:.17g},"
            f"{self.max_abs:.17g},{self.n_points},{div}"
        )


def format_table(reports: List[ErrorReport]) -> str:
    """Plain-text table with one row per scheme: max and RMS relative error."""
    lines = [f"{'Scheme':<18}{'Max Rel. Error':>18}{'RMS Rel. Error':>18}"]
    lines.append("-" * len(lines[0]))
    for r in reports:
        flag = f"  (diverged at n={r.diverged_at})" if r.diverged_at is not None else ""
        lines.append(f"{r.scheme:<18}{r.max_rel:>18.6e}{r.rms_rel:>18.6e}{flag}")
    return "\n".join(lines)


def compare(traj: Trajectory, reference: Trajectory, window: str = "all") -> ErrorReport:
    """Pointwise E_abs = |y - y_ref| and E_rel = E_abs / (|y_ref| + 1e-14).

    ``window="all"`` aggregates over n = 0..N, ``window="after_T"`` over the
    nodes t_n >= T.  A diverged trajectory is aggregated over the prefix
    before its first non-finite value.
    """
    mt, mr = traj.mesh, reference.mesh
    if mt.N != mr.N or mt.h != mr.h:
        raise MeshMismatchError(f"meshes differ: (h={mt.h}, N={mt.N}) vs (h={mr.h}, N={mr.N})")
    if window not in ("all", "after_T"):
        raise ValueError(f"unknown window {window!r}")
    y = traj.values
    bad = np.flatnonzero(~np.isfinite(y))
    div = int(bad[0]) if bad.size else None
    stop = div if div is not None else y.size
    lo = 0 if window == "all" else min(mt.m, stop)
    ref = reference.values[lo:stop]
    abs_err = np.abs(y[lo:stop] - ref)
    rel_err = abs_err / (np.abs(ref) + REL_REGULARIZER)
    return ErrorReport.from_pointwise(abs_err, rel_err, traj.scheme_tag, div)


def stability_margin(cfg: ProblemConfig) -> float:
    """a h^alpha / Gamma(alpha + 1); the formal condition is margin < 1."""
    return float(cfg.a * cfg.h**cfg.alpha / special.gamma(cfg.alpha + 1.0))


def _tagged(fn, tag):
    def run(cfg):
        traj = fn(cfg)
        traj.scheme_tag = tag
        return traj

    return run


#: label -> (family, solver)
SOLVERS: Dict[str, Tuple[str, Callable[[ProblemConfig], Trajectory]]] = {
    "series": ("conformable", lambda cfg: series_trajectory(cfg, "series")),
    "euler": ("conformable", solve_euler_conformable),
    "rk4": ("conformable", lambda cfg: solve_rk4_conformable(cfg, interp=False)),
    "rk4-interp": ("conformable", lambda cfg: solve_rk4_conformable(cfg, interp=True)),
    "caputo-series": ("caputo", lambda cfg: series_trajectory(cfg, "caputo-series")),
    "caputo-l1": ("caputo", solve_l1_euler_caputo),
    "caputo-l21sigma": ("caputo", lambda cfg: solve_l2_1sigma_caputo(cfg)),
    "caputo-pc": ("caputo", solve_predictor_corrector_caputo),
}


def scheme_family(label: str) -> str:
    if label not in SOLVERS:
        raise KeyError(f"unknown scheme {label!r}; known: {', '.join(SOLVERS)}")
    return SOLVERS[label][0]


def run_scheme(cfg: ProblemConfig, label: str) -> Trajectory:
    fam = scheme_family(label)
    if fam != cfg.family:
        raise ValueError(f"scheme {label!r} belongs to the {fam} family, config is {cfg.family}")
    return SOLVERS[label][1](cfg)


def reference_values(cfg: ProblemConfig, t) -> np.ndarray:
    from .conformable import series_solution_conformable

    if cfg.family == "caputo":
        return np.atleast_1d(series_solution_caputo(cfg, t))
    return np.atleast_1d(series_solution_conformable(cfg, t))


def convergence_study(
    cfg: ProblemConfig,
    scheme: str,
    levels: int = 3,
    exact: Optional[Callable] = None,
) -> List[Tuple[float, float, float]]:
    """Run ``scheme`` at h, h/2, ..., h/2^(levels-1).

    The error at each level is the RMS absolute error against the reference
    (``exact`` if given, else the family's series) on the coarsest mesh's
    nodes.  Each row is (h, error, slope) where slope = log2(e_{i-1}/e_i)
    against the previous level (nan on the first row, and next to any level
    that diverged).
    """
    if levels < 3:
        raise ValueError("levels must be >= 3")
    coarse = cfg.mesh
    tc = coarse.nodes
    ref = np.asarray(exact(tc) if exact is not None else reference_values(cfg, tc), dtype=float)
    rows = []
    prev = math.nan
    for i in range(levels):
        c = cfg.with_(h=cfg.h / 2**i)
        traj = run_scheme(c, scheme)
        y = traj.values[:: 2**i][: tc.size]
        if traj.diverged_at is not None or not np.all(np.isfinite(y)):
            err = math.nan
        else:
            err = float(np.sqrt(np.mean((y - ref) ** 2)))
        if i == 0 or not (prev > 0 and err > 0):
            slope = math.nan
        else:
            slope = math.log2(prev / err)
        rows.append((c.h, err, slope))
        prev = err
    return rows
