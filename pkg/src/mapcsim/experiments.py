"""Seeded sweep harness: STA count, inter-AP distance and power-cap studies.

A sweep runs an ensemble of random instances at every sweep point, feeds the
identical scenario to every requested solver (so per-instance gains are
paired), and aggregates per-point means.  Instances cycle through a list of
(near_fraction, rayleigh_shape_divisor) placement variants.  Every random
draw derives from the master seed (placement.seed) through fixed-purpose
child streams, so a sweep is reproducible byte for byte, including across
worker counts.

Seed streams: the scenario stream depends on the sweep point only for the
STA-count sweep; distance and power sweeps reuse the same instances across
points (the distance sweep stretches the AP layout of the base instance,
keeping every STA's offset from its AP; the power sweep reuses the geometry
untouched since placement ignores power caps).
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path

import numpy as np

from .baseline import BaselineConfig, non_coordinated_allocate
from .core import NetworkParams, evaluate, throughput_gain
from .exact import ExactConfig, SizeLimitError, solve_exact
from .heuristic import HeuristicConfig, run_heuristic
from .propagation import (
    PlacementConfig,
    build_gain_matrix,
    generate_scenario,
    rescale_ap_distance,
)


class SweepKind(Enum):
    STA_COUNT = "sta_count"
    AP_DISTANCE = "ap_distance"
    PMAX = "pmax"


class Solver(Enum):
    EXACT = "exact"
    HEURISTIC = "heuristic"
    BASELINE = "baseline"


# (near_fraction, rayleigh_shape_divisor) pairs cycled across the ensemble
DEFAULT_VARIANTS: tuple[tuple[float, float], ...] = (
    (0.30, 2.0), (0.375, 2.5), (0.45, 3.0), (0.525, 3.5), (0.60, 4.0),
)

PLOT_COLORS = {
    Solver.HEURISTIC: "#d62728",
    Solver.EXACT: "#1f77b4",
    Solver.BASELINE: "#7f7f7f",
}


@dataclass(frozen=True)
class SweepSpec:
    """One sweep: what to vary, how many instances, which solvers."""

    kind: SweepKind
    points: tuple[float, ...]
    instances_per_point: int = 20
    solvers: tuple[Solver, ...] = (Solver.HEURISTIC, Solver.BASELINE)
    base_params: NetworkParams = NetworkParams()
    placement: PlacementConfig = PlacementConfig()  # placement.seed is the master seed
    output_dir: str = "."
    variants: tuple[tuple[float, float], ...] = DEFAULT_VARIANTS
    n_aps: int = 4
    n_stas: int = 16          # STA count for distance and power sweeps
    exact_config: ExactConfig = ExactConfig()

    def __post_init__(self):
        pts = tuple(self.points)
        object.__setattr__(self, "points", pts)
        if not pts or any(a >= b for a, b in zip(pts, pts[1:])):
            raise ValueError("points must be non-empty and strictly increasing")
        if self.instances_per_point < 1:
            raise ValueError("instances_per_point must be >= 1")
        if not self.solvers:
            raise ValueError("need at least one solver")
        if not self.variants:
            raise ValueError("need at least one placement variant")


@dataclass(eq=False)
class SweepRow:
    """Aggregated result of one solver at one sweep point."""

    sweep_value: float
    solver: Solver
    mean_total_throughput_bps: float | None
    stddev_total_throughput_bps: float | None
    mean_gain_vs_baseline_pct: float | None
    per_instance_throughput_bps: tuple[float, ...] = ()
    seeds: tuple[int, ...] = ()
    note: str = ""


def _child_seed(master: int, purpose: int, point_idx: int, instance_idx: int) -> int:
    ss = np.random.SeedSequence(master, spawn_key=(purpose, point_idx, instance_idx))
    return int(ss.generate_state(1)[0])


def _power_levels(p_max_mw: float) -> tuple[float, ...]:
    """Discrete levels for a given cap: 5 and 10 mW when they fit, plus the cap."""
    return tuple(sorted({l for l in (5.0, 10.0) if l < p_max_mw} | {float(p_max_mw)}))


def _run_instance(task):
    """Solve one instance for every non-skipped solver (worker-side, pure)."""
    (spec, point_idx, instance_idx, scen_seed, baseline_seed, run_exact) = task
    point = spec.points[point_idx]
    p, a = spec.variants[instance_idx % len(spec.variants)]
    placement = replace(spec.placement, near_fraction=p,
                        rayleigh_shape_divisor=a, seed=scen_seed)

    if spec.kind is SweepKind.STA_COUNT:
        params = spec.base_params
        scenario = generate_scenario(spec.n_aps, int(point), params, placement)
    elif spec.kind is SweepKind.AP_DISTANCE:
        params = spec.base_params
        base = generate_scenario(spec.n_aps, spec.n_stas, params, placement)
        scenario = rescale_ap_distance(base, point)
    else:
        params = replace(spec.base_params, p_max_sta_mw=float(point))
        scenario = generate_scenario(spec.n_aps, spec.n_stas, params, placement)

    gains = build_gain_matrix(scenario)
    levels = _power_levels(params.p_max_sta_mw)
    totals: dict[Solver, float | None] = {}
    for solver in spec.solvers:
        if solver is Solver.HEURISTIC:
            cfg = HeuristicConfig(power_levels_mw=levels,
                                  sinr_threshold_linear=params.sinr_threshold_linear)
            alloc = run_heuristic(scenario, gains, cfg)
        elif solver is Solver.BASELINE:
            alloc = non_coordinated_allocate(scenario, BaselineConfig(seed=baseline_seed))
        else:
            if not run_exact:
                totals[solver] = None
                continue
            cfg = replace(spec.exact_config, power_grid_mw=levels)
            try:
                alloc, _ = solve_exact(scenario, gains, cfg)
            except SizeLimitError:
                totals[solver] = None
                continue
        totals[solver] = evaluate(scenario, gains, alloc).total_throughput_bps
    return point_idx, instance_idx, scen_seed, totals


def _exact_fits(spec: SweepSpec, point: float) -> bool:
    max_stas, max_rus, max_aps = spec.exact_config.limits
    n_stas = int(point) if spec.kind is SweepKind.STA_COUNT else spec.n_stas
    return (n_stas <= max_stas and spec.base_params.num_rus <= max_rus
            and spec.n_aps <= max_aps)


def run_sweep(spec: SweepSpec, workers: int = 1) -> list[SweepRow]:
    """Run the sweep and aggregate one row per (point, solver).

    Instances at one point run in parallel when workers > 1; every instance
    owns pre-derived seed material, and rows are assembled in (point,
    instance) order, so results do not depend on the worker count.  The exact
    solver is skipped with a note row at points outside its guard rails; its
    power grid (and the heuristic's levels) follow the active per-STA cap as
    (5, 10, cap) with levels above the cap dropped.
    """
    master = spec.placement.seed
    tasks = []
    for point_idx, point in enumerate(spec.points):
        seed_point = point_idx if spec.kind is SweepKind.STA_COUNT else 0
        run_exact = _exact_fits(spec, point)
        for i in range(spec.instances_per_point):
            tasks.append((
                spec, point_idx, i,
                _child_seed(master, 0, seed_point, i),
                _child_seed(master, 1, point_idx, i),
                run_exact,
            ))

    if workers <= 1:
        results = [_run_instance(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_instance, tasks, chunksize=1))

    by_key = {(p, i): (seed, totals) for p, i, seed, totals in results}
    rows: list[SweepRow] = []
    for point_idx, point in enumerate(spec.points):
        instances = [by_key[(point_idx, i)] for i in range(spec.instances_per_point)]
        seeds = tuple(seed for seed, _ in instances)
        for solver in spec.solvers:
            totals = [totals_i.get(solver) for _, totals_i in instances]
            if any(t is None for t in totals):
                rows.append(SweepRow(point, solver, None, None, None, (), seeds,
                                     note="skipped: exceeds exact solver limits"))
                continue
            mean = _mean(totals)
            gain = None
            if Solver.BASELINE in spec.solvers:
                if solver is Solver.BASELINE:
                    gain = 0.0
                else:
                    base = [totals_i[Solver.BASELINE] for _, totals_i in instances]
                    gain = _mean([100.0 * (t - b) / b for t, b in zip(totals, base)])
            rows.append(SweepRow(
                sweep_value=point,
                solver=solver,
                mean_total_throughput_bps=mean,
                stddev_total_throughput_bps=_sample_stddev(totals, mean),
                mean_gain_vs_baseline_pct=gain,
                per_instance_throughput_bps=tuple(totals),
                seeds=seeds,
            ))
    return rows


def _mean(values) -> float:
    total = 0.0
    for v in values:
        total += v
    return total / len(values)


def _sample_stddev(values, mean: float) -> float:
    if len(values) < 2:
        return 0.0
    acc = 0.0
    for v in values:
        acc += (v - mean) ** 2
    return math.sqrt(acc / (len(values) - 1))


def _sci6(x: float) -> str:
    """Scientific notation with six significant digits, bare exponent.

    132900000.0 renders as 1.32900e8, 0.0 as 0.00000e0.
    """
    mantissa, exponent = f"{x:.5e}".split("e")
    return f"{mantissa}e{int(exponent)}"


def _fmt_value(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float) and not x.is_integer():
        return _sci6(x)
    return str(int(x))


def emit_csv(rows: list[SweepRow], path) -> None:
    """Write sweep rows as CSV: fixed column order, LF endings, byte-stable.

    Floats use scientific notation with six significant digits; integral
    sweep values stay plain integers; the gain column appears only when a
    baseline ran.  Per-instance lists are semicolon-joined inside one field.
    """
    if not rows:
        raise ValueError("no rows to write")
    has_gain = any(r.mean_gain_vs_baseline_pct is not None for r in rows)
    header = ["sweep_value", "solver", "instances", "mean_total_throughput_bps",
              "stddev_total_throughput_bps"]
    if has_gain:
        header.append("mean_gain_vs_baseline_pct")
    header += ["per_instance_throughput_bps", "seeds", "note"]

    lines = [",".join(header)]
    for r in rows:
        cells = [
            _fmt_value(r.sweep_value),
            r.solver.value,
            str(len(r.per_instance_throughput_bps)),
            "" if r.mean_total_throughput_bps is None else _sci6(r.mean_total_throughput_bps),
            "" if r.stddev_total_throughput_bps is None else _sci6(r.stddev_total_throughput_bps),
        ]
        if has_gain:
            cells.append("" if r.mean_gain_vs_baseline_pct is None
                         else _sci6(r.mean_gain_vs_baseline_pct))
        cells.append(";".join(_sci6(t) for t in r.per_instance_throughput_bps))
        cells.append(";".join(str(s) for s in r.seeds))
        cells.append(r.note)
        lines.append(",".join(cells))
    try:
        with open(path, "w", newline="") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc}") from exc


def emit_plot_svg(rows: list[SweepRow], path, y_label: str = "mean total throughput (bit/s)") -> None:
    """Line chart of mean throughput per solver; deterministic bytes.

    Solvers with no data points are left out of the chart and legend; fewer
    than two populated sweep points is an error (a line chart would be
    degenerate; the CSV carries the numbers).
    """
    series: dict[Solver, list[tuple[float, float]]] = {}
    for r in rows:
        if r.mean_total_throughput_bps is not None:
            series.setdefault(r.solver, []).append(
                (float(r.sweep_value), r.mean_total_throughput_bps))
    xs = sorted({x for pts in series.values() for x, _ in pts})
    if len(xs) < 2:
        raise ValueError("fewer than two populated sweep points; "
                         "a line plot is degenerate, use the CSV output")
    ys = [y for pts in series.values() for _, y in pts]
    x_lo, x_hi = _margined(min(xs), max(xs))
    y_lo, y_hi = _margined(min(ys), max(ys))

    width, height = 800.0, 500.0
    left, right, top, bottom = 90.0, 770.0, 40.0, 440.0

    def sx(x: float) -> float:
        return left + (x - x_lo) / (x_hi - x_lo) * (right - left)

    def sy(y: float) -> float:
        return bottom - (y - y_lo) / (y_hi - y_lo) * (bottom - top)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" '
        f'height="{height:.0f}" viewBox="0 0 {width:.0f} {height:.0f}">',
        f'<rect x="0" y="0" width="{width:.0f}" height="{height:.0f}" fill="white"/>',
        f'<rect x="{left:.2f}" y="{top:.2f}" width="{right - left:.2f}" '
        f'height="{bottom - top:.2f}" fill="none" stroke="black"/>',
    ]
    for i in range(5):
        fx = x_lo + (x_hi - x_lo) * i / 4
        fy = y_lo + (y_hi - y_lo) * i / 4
        px, py = sx(fx), sy(fy)
        parts.append(f'<line x1="{px:.2f}" y1="{bottom:.2f}" x2="{px:.2f}" '
                     f'y2="{bottom + 6:.2f}" stroke="black"/>')
        parts.append(f'<text x="{px:.2f}" y="{bottom + 20:.2f}" font-size="12" '
                     f'text-anchor="middle">{fx:g}</text>')
        parts.append(f'<line x1="{left - 6:.2f}" y1="{py:.2f}" x2="{left:.2f}" '
                     f'y2="{py:.2f}" stroke="black"/>')
        parts.append(f'<text x="{left - 10:.2f}" y="{py + 4:.2f}" font-size="12" '
                     f'text-anchor="end">{fy:.3g}</text>')
    parts.append(f'<text x="{(left + right) / 2:.2f}" y="{height - 10:.2f}" '
                 f'font-size="13" text-anchor="middle">sweep value</text>')
    parts.append(f'<text x="18" y="{(top + bottom) / 2:.2f}" font-size="13" '
                 f'text-anchor="middle" transform="rotate(-90 18 '
                 f'{(top + bottom) / 2:.2f})">{y_label}</text>')

    legend_y = top + 16
    for solver, pts in series.items():
        color = PLOT_COLORS[solver]
        pts = sorted(pts)
        coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in pts)
        parts.append(f'<polyline points="{coords}" fill="none" stroke="{color}" '
                     f'stroke-width="2"/>')
        for x, y in pts:
            parts.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="4" '
                         f'fill="{color}"/>')
        parts.append(f'<line x1="{right - 150:.2f}" y1="{legend_y:.2f}" '
                     f'x2="{right - 120:.2f}" y2="{legend_y:.2f}" '
                     f'stroke="{color}" stroke-width="2"/>')
        parts.append(f'<text x="{right - 112:.2f}" y="{legend_y + 4:.2f}" '
                     f'font-size="12">{solver.value}</text>')
        legend_y += 18
    parts.append("</svg>")
    try:
        with open(path, "w", newline="") as fh:
            fh.write("\n".join(parts) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write SVG to {path}: {exc}") from exc


def _margined(lo: float, hi: float) -> tuple[float, float]:
    span = hi - lo
    if span == 0:
        span = abs(hi) if hi != 0 else 1.0
    return lo - 0.05 * span, hi + 0.05 * span


def sweep_output_paths(spec: SweepSpec) -> tuple[Path, Path]:
    """CSV and SVG paths inside the spec's output directory."""
    base = Path(spec.output_dir)
    stem = f"{spec.kind.value}_sweep"
    return base / f"{stem}.csv", base / f"{stem}.svg"
