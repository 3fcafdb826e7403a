"""Parametric studies over the (fiber loss, EDFA power) design plane.

Full rectangular sweeps with contour extraction, required-power solves at
fixed throughput targets, span-length trade-off curves, and sensitivity
deltas between plans.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, replace

import numpy as np

from .system import (
    DEFAULT_CONSTANTS,
    InfeasibleError,
    LinkPlan,
    OperatingPoint,
    TransceiverModel,
    cable_throughput,
    channel_net_rate,
    link_gsnr,
    span_count,
)
from .units import PhysicalConstants


@dataclass(frozen=True)
class GridSpec:
    """Rectangular lattice of operating points."""

    loss_min: float
    loss_max: float
    loss_steps: int
    power_min: float
    power_max: float
    power_steps: int

    def __post_init__(self) -> None:
        if not self.loss_min > 0:
            raise ValueError(f"loss_min must be > 0, got {self.loss_min}")
        if not self.loss_min < self.loss_max:
            raise ValueError(f"loss_min must be < loss_max, got {self.loss_min}..{self.loss_max}")
        if not self.power_min < self.power_max:
            raise ValueError(
                f"power_min must be < power_max, got {self.power_min}..{self.power_max}"
            )
        if self.loss_steps < 2 or self.power_steps < 2:
            raise ValueError("loss_steps and power_steps must be >= 2")


@dataclass(frozen=True)
class SweepGrid:
    """Evaluated lattice: axes plus GSNR and throughput per cell."""

    loss_db_per_km: np.ndarray
    edfa_power_dbm: np.ndarray
    gsnr_db: np.ndarray
    throughput_tbps: np.ndarray

    def __post_init__(self) -> None:
        shape = (len(self.loss_db_per_km), len(self.edfa_power_dbm))
        if self.gsnr_db.shape != shape or self.throughput_tbps.shape != shape:
            raise ValueError(f"field shapes must be {shape}")
        if not (np.all(np.isfinite(self.gsnr_db)) and np.all(np.isfinite(self.throughput_tbps))):
            raise ValueError("grid contains non-finite cells")


@dataclass(frozen=True)
class SolverSettings:
    """Bracket and stopping rule for the power bisection."""

    power_bracket_dbm: tuple[float, float] = (5.0, 30.0)
    tolerance_db: float = 0.01
    max_iterations: int = 100

    def __post_init__(self) -> None:
        low, high = self.power_bracket_dbm
        if not low < high:
            raise ValueError(f"power bracket must satisfy low < high, got {low}..{high}")
        if not self.tolerance_db > 0:
            raise ValueError(f"tolerance_db must be > 0, got {self.tolerance_db}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")


DEFAULT_SOLVER = SolverSettings()


@dataclass(frozen=True)
class SpanCurvePoint:
    """One sample of the span trade-off curve.

    span_km is snapped to an integer partition of the link; required_dbm is
    NaN when the solve is infeasible (feasible flags it).
    """

    span_km: float
    required_dbm: float
    feasible: bool


def sweep_grid(
    plan: LinkPlan,
    trx: TransceiverModel,
    grid: GridSpec,
    include_rbs: bool = False,
    const: PhysicalConstants = DEFAULT_CONSTANTS,
) -> SweepGrid:
    """Evaluate GSNR and throughput at every lattice point."""
    losses = np.linspace(grid.loss_min, grid.loss_max, grid.loss_steps)
    powers = np.linspace(grid.power_min, grid.power_max, grid.power_steps)
    gsnr = np.empty((grid.loss_steps, grid.power_steps))
    throughput = np.empty_like(gsnr)
    scale = plan.n_fibers_per_direction * plan.n_channels / 1e3
    for i, loss in enumerate(losses):
        for j, power in enumerate(powers):
            budget = link_gsnr(plan, OperatingPoint(float(loss), float(power)), include_rbs, const)
            gsnr[i, j] = budget.gsnr_db
            throughput[i, j] = scale * channel_net_rate(trx, budget.gsnr_db, plan.symbol_rate_hz)
    return SweepGrid(losses, powers, gsnr, throughput)


def _edge_crossing(pa, pb, va: float, vb: float, level: float) -> tuple[float, float]:
    t = (level - va) / (vb - va)
    return (pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1]))


def extract_contour(
    grid: SweepGrid,
    field: str,
    level: float,
) -> list[list[tuple[float, float]]]:
    """Marching-squares polylines of `field` ("gsnr" or "throughput") at `level`.

    Points are (loss_db_per_km, edfa_power_dbm) with linear interpolation along
    cell edges; saddle cells are disambiguated by the cell-center average.
    Returns an empty list when the level is never crossed.
    """
    fields = {"gsnr": grid.gsnr_db, "throughput": grid.throughput_tbps}
    if field not in fields:
        raise ValueError(f"field must be one of {sorted(fields)}, got {field!r}")
    values = fields[field]
    if not np.all(np.isfinite(values)):
        raise ValueError("grid contains non-finite cells")
    xs = grid.loss_db_per_km
    ys = grid.edfa_power_dbm

    segments: list[tuple[tuple[float, float], tuple[float, float]]] = []
    for i in range(len(xs) - 1):
        for j in range(len(ys) - 1):
            v00 = float(values[i, j])
            v10 = float(values[i + 1, j])
            v11 = float(values[i + 1, j + 1])
            v01 = float(values[i, j + 1])
            case = (
                (v00 >= level)
                | (v10 >= level) << 1
                | (v11 >= level) << 2
                | (v01 >= level) << 3
            )
            if case in (0, 15):
                continue
            p00, p10 = (float(xs[i]), float(ys[j])), (float(xs[i + 1]), float(ys[j]))
            p01, p11 = (float(xs[i]), float(ys[j + 1])), (float(xs[i + 1]), float(ys[j + 1]))
            edges = {
                "bottom": lambda: _edge_crossing(p00, p10, v00, v10, level),
                "right": lambda: _edge_crossing(p10, p11, v10, v11, level),
                "top": lambda: _edge_crossing(p01, p11, v01, v11, level),
                "left": lambda: _edge_crossing(p00, p01, v00, v01, level),
            }
            pairs = _SEGMENT_TABLE.get(case)
            if pairs is None:
                # Saddle: connect around the corners that match the center.
                center_inside = (v00 + v10 + v01 + v11) / 4.0 >= level
                if case == 5:
                    pairs = (
                        (("bottom", "right"), ("top", "left"))
                        if center_inside
                        else (("left", "bottom"), ("right", "top"))
                    )
                else:
                    pairs = (
                        (("left", "bottom"), ("right", "top"))
                        if center_inside
                        else (("bottom", "right"), ("top", "left"))
                    )
            for edge_a, edge_b in pairs:
                a, b = edges[edge_a](), edges[edge_b]()
                if a != b:
                    segments.append((a, b))
    return _chain_segments(segments)


_SEGMENT_TABLE: dict[int, tuple[tuple[str, str], ...]] = {
    1: (("left", "bottom"),),
    2: (("bottom", "right"),),
    3: (("left", "right"),),
    4: (("right", "top"),),
    6: (("bottom", "top"),),
    7: (("left", "top"),),
    8: (("top", "left"),),
    9: (("bottom", "top"),),
    11: (("right", "top"),),
    12: (("left", "right"),),
    13: (("bottom", "right"),),
    14: (("left", "bottom"),),
}


def _chain_segments(
    segments: list[tuple[tuple[float, float], tuple[float, float]]],
) -> list[list[tuple[float, float]]]:
    """Join segments sharing endpoints into polylines (exact float matching:
    shared cell edges interpolate from identical values)."""
    by_point: dict[tuple[float, float], list[int]] = defaultdict(list)
    for idx, (a, b) in enumerate(segments):
        by_point[a].append(idx)
        by_point[b].append(idx)
    used = [False] * len(segments)
    polylines: list[list[tuple[float, float]]] = []
    for start in range(len(segments)):
        if used[start]:
            continue
        used[start] = True
        a, b = segments[start]
        line = [a, b]
        for grow_at_end in (True, False):
            while True:
                tip = line[-1] if grow_at_end else line[0]
                next_idx = next((k for k in by_point[tip] if not used[k]), None)
                if next_idx is None:
                    break
                used[next_idx] = True
                pa, pb = segments[next_idx]
                nxt = pb if pa == tip else pa
                if grow_at_end:
                    line.append(nxt)
                else:
                    line.insert(0, nxt)
        polylines.append(line)
    return polylines


def required_edfa_power(
    plan: LinkPlan,
    trx: TransceiverModel,
    loss_db_per_km: float,
    span_km: float,
    target_tbps: float,
    include_rbs: bool = False,
    settings: SolverSettings = DEFAULT_SOLVER,
    const: PhysicalConstants = DEFAULT_CONSTANTS,
) -> float:
    """EDFA output power (dBm) reaching target_tbps, by monotone bisection."""
    working = replace(plan, span_length_km=span_km)

    def throughput(power_dbm: float) -> float:
        return cable_throughput(
            working, trx, OperatingPoint(loss_db_per_km, power_dbm), include_rbs, const
        )

    lo, hi = settings.power_bracket_dbm
    t_lo, t_hi = throughput(lo), throughput(hi)
    if not t_lo <= target_tbps <= t_hi:
        raise InfeasibleError(
            f"target {target_tbps:g} Tb/s not bracketed: {t_lo:.6g} Tb/s at "
            f"{lo:g} dBm and {t_hi:.6g} Tb/s at {hi:g} dBm"
        )
    for _ in range(settings.max_iterations):
        if hi - lo <= settings.tolerance_db:
            break
        mid = 0.5 * (lo + hi)
        if throughput(mid) < target_tbps:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def span_length_curve(
    plan: LinkPlan,
    trx: TransceiverModel,
    loss_db_per_km: float,
    span_min_km: float,
    span_max_km: float,
    n_points: int,
    target_tbps: float,
    include_rbs: bool = False,
    settings: SolverSettings = DEFAULT_SOLVER,
    const: PhysicalConstants = DEFAULT_CONSTANTS,
) -> list[SpanCurvePoint]:
    """Required EDFA power across span lengths.

    Samples snap to integer partitions of the link, so consecutive samples
    landing on the same span count collapse to one point. Infeasible solves
    are kept as flagged gaps rather than aborting the curve.
    """
    if not span_min_km > 0:
        raise ValueError(f"span_min_km must be > 0, got {span_min_km}")
    if span_min_km > span_max_km:
        raise ValueError(f"span range is empty: {span_min_km}..{span_max_km}")
    if n_points < 1:
        raise ValueError(f"n_points must be >= 1, got {n_points}")
    points: list[SpanCurvePoint] = []
    seen: set[int] = set()
    for span in np.linspace(span_min_km, span_max_km, n_points):
        n = span_count(plan.total_length_km, float(span))
        if n < 1 or n in seen:
            continue
        seen.add(n)
        effective = plan.total_length_km / n
        try:
            power = required_edfa_power(
                plan, trx, loss_db_per_km, effective, target_tbps, include_rbs, settings, const
            )
            points.append(SpanCurvePoint(effective, power, True))
        except InfeasibleError:
            points.append(SpanCurvePoint(effective, math.nan, False))
    return points


def sensitivity_delta(
    plan: LinkPlan,
    trx: TransceiverModel,
    base: OperatingPoint,
    modified_plan: LinkPlan,
    target_tbps: float,
    include_rbs: bool = False,
    settings: SolverSettings = DEFAULT_SOLVER,
    const: PhysicalConstants = DEFAULT_CONSTANTS,
) -> float:
    """Extra EDFA power (dB) the modified plan needs for the same target.

    The baseline solve always runs without backscatter; include_rbs applies
    to the modified solve only, so switching backscatter on is itself a
    sensitivity that can be measured with identical plans.
    """
    base_dbm = required_edfa_power(
        plan, trx, base.loss_db_per_km, plan.span_length_km, target_tbps, False, settings, const
    )
    modified_dbm = required_edfa_power(
        modified_plan,
        trx,
        base.loss_db_per_km,
        modified_plan.span_length_km,
        target_tbps,
        include_rbs,
        settings,
        const,
    )
    return modified_dbm - base_dbm
