"""Uniform delay-aligned mesh, trajectories and delayed-value retrieval."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

import numpy as np

# relative tolerance for "is an integer" decisions on index arithmetic
_SNAP = 1e-9


def _floor_index(x: float, guard: bool) -> int:
    """floor(x), optionally snapping values within rounding noise of an integer."""
    if guard:
        r = round(x)
        if abs(x - r) <= _SNAP * max(1.0, abs(x)):
            return int(r)
    return math.floor(x)


@dataclass(frozen=True)
class Mesh:
    """Grid t_n = n h, n = 0..N, with h = T/m so every multiple of T is a node."""

    h: float
    m: int
    T: float
    N: int
    t_max: float

    @property
    def nodes(self) -> np.ndarray:
        # n * h, not linspace: delayed indices are computed from exactly these values
        return np.arange(self.N + 1) * self.h

    def t(self, n: int) -> float:
        return n * self.h

    def __len__(self):
        return self.N + 1


def build_mesh(T: float, m: int, t_max: float) -> Mesh:
    if not T > 0:
        raise ValueError(f"delay T must be positive, got {T}")
    if int(m) != m or m < 1:
        raise ValueError(f"m must be a positive integer, got {m}")
    if not t_max >= T:
        raise ValueError(f"t_max ({t_max}) must be >= T ({T})")
    m = int(m)
    h = T / m
    N = math.floor(t_max / h * (1.0 + 1e-12))
    return Mesh(h=h, m=m, T=float(T), N=N, t_max=float(t_max))


def mesh_for_step(T: float, h: float, t_max: float) -> Mesh:
    """Mesh from a requested step h; T/h must be an integer to 1e-12 relative.

    Unlike :func:`build_mesh` this accepts ``t_max < T``.
    """
    if not T > 0:
        raise ValueError(f"delay T must be positive, got {T}")
    if not h > 0:
        raise ValueError(f"h must be positive, got {h}")
    if not t_max >= 0:
        raise ValueError(f"t_max must be >= 0, got {t_max}")
    ratio = T / h
    m = round(ratio)
    if m < 1 or abs(ratio - m) > 1e-12 * max(1.0, ratio):
        raise ValueError(f"h={h} does not split the delay T={T} into a whole number of steps")
    step = T / m
    N = math.floor(t_max / step * (1.0 + 1e-12))
    return Mesh(h=step, m=m, T=float(T), N=N, t_max=float(t_max))


@dataclass
class Trajectory:
    """Values y_0 .. y_N on a mesh, tagged with the scheme that produced them.

    ``diverged_at`` is the first non-finite index, if any; ``events`` collects
    notes raised during integration (e.g. interpolation fallbacks).
    """

    mesh: Mesh
    values: np.ndarray
    scheme_tag: str
    diverged_at: Optional[int] = None
    events: List[str] = field(default_factory=list)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.mesh.N + 1,):
            raise ValueError(
                f"trajectory needs {self.mesh.N + 1} values, got shape {self.values.shape}"
            )

    @classmethod
    def empty(cls, mesh: Mesh, scheme_tag: str) -> "Trajectory":
        return cls(mesh, np.zeros(mesh.N + 1), scheme_tag)

    @property
    def t(self) -> np.ndarray:
        return self.mesh.nodes

    def mark_divergence(self) -> Optional[int]:
        bad = np.flatnonzero(~np.isfinite(self.values))
        self.diverged_at = int(bad[0]) if bad.size else None
        return self.diverged_at

    def to_csv(self, path) -> Path:
        path = Path(path)
        lines = ["t,y"]
        for tn, yn in zip(self.t, self.values):
            lines.append(f"{tn:.17g},{float(yn):.17g}")
        path.write_text("\n".join(lines) + "\n")
        return path

    @classmethod
    def from_csv(cls, path, mesh: Mesh, scheme_tag: str = "") -> "Trajectory":
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        return cls(mesh, data[:, 1], scheme_tag or Path(path).stem)


def delayed_value_floor(traj: Trajectory, n: int, T: float, guard: bool = True) -> float:
    """y(t_n - T) read at node floor((t_n - T)/h); zero before the history starts.

    With ``guard=False`` the index is the raw floating-point floor, which can
    land one node early when (t_n - T)/h is an integer up to rounding.
    """
    h = traj.mesh.h
    tau = n * h - T
    if tau < 0:
        return 0.0
    return float(traj.values[_floor_index(tau / h, guard)])


def delayed_value_interp(
    traj: Trajectory,
    n: int,
    T: float,
    filled: Optional[int] = None,
    guard: bool = True,
    fallback: bool = False,
) -> float:
    """Linear interpolant of y at t_n - T between the two surrounding nodes.

    ``filled`` is the last index holding a computed value (default: N).  If
    the interpolant would need ``values[filled + 1]`` an ``IndexError`` is
    raised, unless ``fallback`` is set, in which case the floor node is
    returned and the event is logged on the trajectory.
    """
    h = traj.mesh.h
    tau = n * h - T
    if tau <= 0:
        return 0.0
    x = tau / h
    i = _floor_index(x, guard)
    theta = x - i
    if guard and abs(theta) <= _SNAP * max(1.0, abs(x)):
        theta = 0.0
    if theta == 0.0:
        return float(traj.values[i])
    last = traj.mesh.N if filled is None else filled
    if i + 1 > last:
        if fallback:
            traj.events.append(f"interp fallback to floor at n={n} (needs index {i + 1}, filled {last})")
            return float(traj.values[i])
        raise IndexError(f"interpolation at n={n} needs index {i + 1} beyond filled index {last}")
    return float((1.0 - theta) * traj.values[i] + theta * traj.values[i + 1])
