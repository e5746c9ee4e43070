"""Run a configuration end to end and write traces and reports."""
import csv
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, replace
from pathlib import Path

import numpy as np

from . import __version__
from .config import ConfigError
from .errors import NonConvergence
from .response import compare, simulate

TRACE_COLUMNS = ("t_tilde", "reA", "imA", "absA", "phase_principal",
                 "phase_unwrapped", "mu", "intensity")
SUMMARY_COLUMNS = ("value", "amplitude_ratio_21", "phase_offset_21",
                   "rise_time_1", "rise_time_2")
SWEEP_AXES = ("temperature", "s", "omega_c", "omega_p")


def run_config(cfg):
    """Simulate both initial conditions; return ``(trace1, trace2, report)``."""
    bath = cfg.bath()
    sys = cfg.system(bath)
    t1, t2, _ = simulate(sys, bath, cfg.grid())
    report = compare(t1, t2, cfg.stationarity_tol, cfg.tail_fraction)
    return t1, t2, report


def _clean(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def report_dict(report, cfg):
    out = {k: _clean(v) for k, v in asdict(report).items()}
    out["config"] = cfg.as_dict()
    out["version"] = __version__
    return out


def _fmt(x):
    return f"{x:.16e}"


def write_trace_csv(trace, path, stride=1):
    cols = (trace.grid, trace.a.real, trace.a.imag, trace.amplitude,
            trace.phase, trace.phase_unwrapped, trace.mu, trace.intensity)
    rows = np.column_stack(cols)[::stride]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRACE_COLUMNS)
        for row in rows:
            w.writerow([_fmt(x) for x in row])


def write_json(obj, path):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")


def simulate_to_dir(cfg, out_dir):
    """Write ``trace_case1.csv``, ``trace_case2.csv`` and ``report.json``."""
    out_dir = Path(out_dir)
    t1, t2, report = run_config(cfg)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_trace_csv(t1, out_dir / "trace_case1.csv", cfg.csv_stride)
    write_trace_csv(t2, out_dir / "trace_case2.csv", cfg.csv_stride)
    doc = report_dict(report, cfg)
    write_json(doc, out_dir / "report.json")
    return doc


def _sweep_point(cfg):
    try:
        _, _, report = run_config(cfg.validate())
        return report_dict(report, cfg)
    except NonConvergence as exc:
        return {"error": str(exc), "integral": exc.name, "config": cfg.as_dict()}
    except (ConfigError, ValueError, ArithmeticError) as exc:
        return {"error": str(exc), "config": cfg.as_dict()}


def worker_budget():
    env = os.environ.get("TRS_WORKERS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise ConfigError("TRS_WORKERS", f"not an integer: {env!r}") from None
        if n < 1:
            raise ConfigError("TRS_WORKERS", "must be >= 1")
        return n
    return os.cpu_count() or 1


def sweep(cfg, axis, values, workers=None):
    """One report per value of ``axis``; failures are recorded per point."""
    if axis not in SWEEP_AXES:
        raise ConfigError("axis", f"must be one of {', '.join(SWEEP_AXES)}")
    if not values:
        raise ConfigError("values", "need at least one value")
    configs = []
    for v in values:
        if not math.isfinite(v):
            raise ConfigError("values", f"non-finite value {v}")
        # validated per point so one bad value does not sink the sweep
        configs.append(replace(cfg, **{axis: float(v)}))
    workers = min(workers or worker_budget(), len(configs))
    if workers == 1:
        results = [_sweep_point(c) for c in configs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_point, configs))
    return [dict(value=float(v), **r) for v, r in zip(values, results)]


def sweep_to_dir(cfg, axis, values, out_dir, workers=None):
    """Write ``sweep.json`` (all reports) and ``sweep_summary.csv``."""
    out_dir = Path(out_dir)
    points = sweep(cfg, axis, values, workers)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_json({"axis": axis, "version": __version__, "points": points},
               out_dir / "sweep.json")
    with open(out_dir / "sweep_summary.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_COLUMNS)
        for p in points:
            w.writerow([_fmt(p["value"])] + [
                "nan" if p.get(k) is None else _fmt(p[k])
                for k in SUMMARY_COLUMNS[1:]])
    return points

