"""Experiment runner.

    fracdelay --preset ex1 --tmax 10 --out runs/ex1 --plot-data

writes one ``<scheme>.csv`` per scheme, ``errors.csv`` and, with
``--plot-data``, ``plotdata.csv``.  Exit codes: 0 ok, 2 bad configuration,
3 a scheme diverged or a series overflowed (files still written), 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from .analysis import CSV_HEADER, SOLVERS, ErrorReport, compare, format_table, run_scheme
from .conformable import ProblemConfig, series_trajectory
from .errors import ConfigError, SeriesOverflowError
from .forcing import ForcingSeries

EXIT_OK, EXIT_CONFIG, EXIT_DIVERGED, EXIT_IO = 0, 2, 3, 4

_BENCH_B = [1.0, 0.2, -0.05]


def _preset(T, a=0.5, family="conformable", t_max=120.0):
    return dict(alpha=0.7, a=a, T=T, y0=1.0, h=0.001, b_coeffs=list(_BENCH_B), t_max=t_max, family=family)


PRESETS: Dict[str, dict] = {
    "ex1": _preset(0.7),
    "ex2": _preset(2.0),
    "ex3": _preset(3.0),
    "ex4": _preset(5.0),
    "ex5": _preset(3.0, a=1.1),
    "caputo-bench": _preset(1.0, family="caputo", t_max=10.0),
}

DEFAULT_SCHEMES = {
    "conformable": ["euler", "rk4", "rk4-interp"],
    "caputo": ["caputo-l1", "caputo-l21sigma", "caputo-pc"],
}

# JSON key -> expected python type(s); numbers reject bools explicitly
_KEYS = {
    "preset": str,
    "alpha": float,
    "a": float,
    "T": float,
    "y0": float,
    "h": float,
    "t_max": float,
    "b_coeffs": list,
    "K": int,
    "family": str,
    "floor_guard": bool,
    "schemes": list,
    "output_dir": str,
    "plot_data": bool,
}


@dataclass
class RunConfig:
    problem: ProblemConfig
    schemes: List[str]
    output_dir: str = "out"
    emit_plot_data: bool = False
    seed_examples: Optional[str] = None

    def to_dict(self) -> dict:
        p = self.problem
        d = {
            "alpha": p.alpha,
            "a": p.a,
            "T": p.T,
            "y0": p.y0,
            "h": p.h,
            "t_max": p.t_max,
            "b_coeffs": list(p.forcing.coeffs),
            "K": p.K,
            "family": p.family,
            "floor_guard": p.floor_guard,
            "schemes": list(self.schemes),
            "output_dir": self.output_dir,
            "plot_data": self.emit_plot_data,
        }
        if self.seed_examples is not None:
            d["preset"] = self.seed_examples
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


@dataclass
class RunSummary:
    paths: List[Path] = field(default_factory=list)
    reports: List[ErrorReport] = field(default_factory=list)
    diverged: List[str] = field(default_factory=list)
    failures: List[str] = field(default_factory=list)


def _type_ok(value, want) -> bool:
    if value is None:
        return True
    if want is float:
        return isinstance(value, (int, float)) and not isinstance(value, bool)
    if want is int:
        return isinstance(value, int) and not isinstance(value, bool)
    return isinstance(value, want)


def parse_config(source: str, overrides: Optional[dict] = None) -> RunConfig:
    """Validated RunConfig from JSON text; ``overrides`` (e.g. CLI flags) win.

    Every problem found is reported in one ``ConfigError``.
    """
    try:
        doc = json.loads(source) if source.strip() else {}
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    doc = dict(doc)
    for k, v in (overrides or {}).items():
        if v is not None:
            doc[k] = v
    return _build(doc)


def _build(doc: dict) -> RunConfig:
    problems = []
    unknown = sorted(set(doc) - set(_KEYS))
    if unknown:
        problems.append(f"unknown key(s): {', '.join(unknown)}")
    for k, want in _KEYS.items():
        if k in doc and not _type_ok(doc[k], want):
            problems.append(f"{k}: expected {want.__name__}, got {type(doc[k]).__name__}")

    preset = doc.get("preset")
    values = {}
    if preset is not None:
        if preset in PRESETS:
            values.update(PRESETS[preset])
        else:
            problems.append(f"preset: unknown preset {preset!r}; known: {', '.join(PRESETS)}")
    else:
        values.update(PRESETS["ex1"])
    # explicit keys beat the preset; K may be null on purpose (keep all coefficients)
    values.update({k: v for k, v in doc.items() if k in _KEYS and (v is not None or k == "K")})

    family = values.get("family", "conformable")
    schemes = values.get("schemes")
    if schemes is None:
        schemes = DEFAULT_SCHEMES.get(family, [])
    if isinstance(schemes, list):
        if not schemes:
            problems.append("schemes: at least one scheme is required")
        for s in schemes:
            if s not in SOLVERS:
                problems.append(f"schemes: unknown scheme {s!r}; known: {', '.join(SOLVERS)}")
            elif SOLVERS[s][0] != family and family in DEFAULT_SCHEMES:
                problems.append(f"schemes: {s!r} is a {SOLVERS[s][0]} scheme but family is {family!r}")

    forcing = None
    b = values.get("b_coeffs")
    if isinstance(b, list):
        if not all(_type_ok(c, float) and c is not None for c in b):
            problems.append("b_coeffs: every coefficient must be a number")
        else:
            try:
                forcing = ForcingSeries(b)
            except ValueError as exc:
                problems.append(f"b_coeffs: {exc}")

    problem = None
    numeric = ("alpha", "a", "T", "y0", "h", "t_max")
    if forcing is not None and all(_type_ok(values.get(k), float) and values.get(k) is not None for k in numeric):
        try:
            problem = ProblemConfig(
                alpha=float(values["alpha"]),
                a=float(values["a"]),
                T=float(values["T"]),
                y0=float(values["y0"]),
                forcing=forcing,
                h=float(values["h"]),
                t_max=float(values["t_max"]),
                K=values.get("K"),
                family=family,
                floor_guard=bool(values.get("floor_guard", False)),
            )
        except ConfigError as exc:
            problems.extend(exc.problems)
    if problems:
        raise ConfigError(problems)
    return RunConfig(
        problem=problem,
        schemes=list(schemes),
        output_dir=values.get("output_dir", "out"),
        emit_plot_data=bool(values.get("plot_data", False)),
        seed_examples=preset,
    )


def _write(path: Path, text: str, summary: RunSummary):
    try:
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    summary.paths.append(path)


def run_experiment(config: RunConfig) -> RunSummary:
    """Run every scheme, write trajectories, errors.csv and optionally plotdata.csv.

    A series overflow (in the reference or inside a scheme) does not abort
    the run: it is recorded in ``summary.failures`` and the remaining files
    are still written, with ``nan`` metrics where no reference exists.
    """
    out = Path(config.output_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc.strerror or exc}") from exc
    summary = RunSummary()
    cfg = config.problem
    ref_tag = "series" if cfg.family == "conformable" else "caputo-series"
    try:
        ref = series_trajectory(cfg, ref_tag)
    except SeriesOverflowError as exc:
        ref = None
        summary.failures.append(f"reference series: {exc}")

    trajs = {}
    for label in config.schemes:
        if label == ref_tag:
            traj = ref
        else:
            try:
                traj = run_scheme(cfg, label)
            except SeriesOverflowError as exc:
                traj = None
                summary.failures.append(f"{label}: {exc}")
        if traj is None:
            continue
        trajs[label] = traj
        path = out / f"{label}.csv"
        try:
            traj.to_csv(path)
        except OSError as exc:
            raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
        summary.paths.append(path)
        if ref is not None:
            rep = compare(traj, ref)
        else:
            nan = np.full(traj.values.size, np.nan)
            rep = ErrorReport(np.nan, np.nan, np.nan, nan, nan, 0, traj.mark_divergence(), label)
        summary.reports.append(rep)
        if traj.diverged_at is not None:
            summary.diverged.append(label)

    rows = [CSV_HEADER] + [r.csv_row() for r in summary.reports]
    _write(out / "errors.csv", "\n".join(rows) + "\n", summary)

    if config.emit_plot_data and ref is not None:
        labels = [s for s in config.schemes if s != ref_tag and s in trajs]
        cols = [ref.t, ref.values] + [trajs[s].values for s in labels]
        with np.errstate(invalid="ignore"):
            cols += [np.abs(trajs[s].values - ref.values) / (np.abs(ref.values) + 1e-14) for s in labels]
        header = ",".join(["t", "series"] + labels + [f"rel_{s}" for s in labels])
        body = np.column_stack(cols)
        lines = [header] + [",".join(f"{v:.17g}" for v in row) for row in body]
        _write(out / "plotdata.csv", "\n".join(lines) + "\n", summary)
    return summary


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fracdelay", description="Run fractional delay benchmark schemes.")
    p.add_argument("--config", help="JSON run configuration")
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--alpha", type=float)
    p.add_argument("--a", type=float)
    p.add_argument("--delay", type=float, help="delay T")
    p.add_argument("--y0", type=float)
    p.add_argument("--h", type=float)
    p.add_argument("--tmax", type=float)
    p.add_argument("--b-coeffs", help="comma-separated forcing coefficients b_0,b_1,...")
    p.add_argument("--K", type=int, help="forcing truncation order")
    p.add_argument("--family", choices=["conformable", "caputo"])
    p.add_argument("--schemes", help="comma-separated scheme labels")
    p.add_argument("--out", help="output directory")
    p.add_argument("--plot-data", action="store_true", default=None)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    source = "{}"
    if args.config:
        try:
            source = Path(args.config).read_text()
        except OSError as exc:
            print(f"error: cannot read {args.config}: {exc.strerror or exc}", file=sys.stderr)
            return EXIT_IO
    overrides = {
        "preset": args.preset,
        "alpha": args.alpha,
        "a": args.a,
        "T": args.delay,
        "y0": args.y0,
        "h": args.h,
        "t_max": args.tmax,
        "K": args.K,
        "family": args.family,
        "output_dir": args.out,
        "plot_data": args.plot_data,
    }
    problems = []
    if args.b_coeffs is not None:
        try:
            overrides["b_coeffs"] = list(ForcingSeries.parse(args.b_coeffs).coeffs)
        except ValueError as exc:
            problems.append(str(exc))
    if args.schemes is not None:
        overrides["schemes"] = [s.strip() for s in args.schemes.split(",") if s.strip()]
    try:
        if problems:
            raise ConfigError(problems)
        config = parse_config(source, overrides)
    except ConfigError as exc:
        for msg in exc.problems:
            print(f"config error: {msg}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        summary = run_experiment(config)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO

    print(format_table(summary.reports))
    for msg in summary.failures:
        print(f"error: {msg}", file=sys.stderr)
    if summary.diverged:
        print(f"diverged: {', '.join(summary.diverged)}", file=sys.stderr)
    if summary.diverged or summary.failures:
        return EXIT_DIVERGED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
