"""End-to-end link composition.

Builds the channel grid, assembles the GSNR budget at an operating point,
maps GSNR to net throughput through a transceiver model, and evaluates the
electrical power feed and propagation latency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Union

import numpy as np

from .impairments import (
    AmplifierSpec,
    FiberSpec,
    SnrBudget,
    ase_inv_snr,
    combine_gsnr,
    gn_nli_psd_per_span,
    imi_inv_snr,
    nli_inv_snr,
    rbs_inv_snr,
)
from .units import PhysicalConstants, db_to_linear, dbm_to_watt

DEFAULT_CONSTANTS = PhysicalConstants()

# Group index used for the solid-core latency comparison output.
SOLID_CORE_GROUP_INDEX = 1.468


class InfeasibleError(RuntimeError):
    """The requested target cannot be reached inside the search bracket."""


def span_count(total_length_km: float, span_length_km: float) -> int:
    """Number of spans partitioning the link, rounding half up."""
    if not total_length_km > 0:
        raise ValueError(f"total_length_km must be > 0, got {total_length_km}")
    if not span_length_km > 0:
        raise ValueError(f"span_length_km must be > 0, got {span_length_km}")
    return int(total_length_km / span_length_km + 0.5)


def channels_in_band(band_hz: float, spacing_hz: float) -> int:
    """How many channels of the given spacing fit in the band."""
    if not band_hz > 0:
        raise ValueError(f"band_hz must be > 0, got {band_hz}")
    if not spacing_hz > 0:
        raise ValueError(f"spacing_hz must be > 0, got {spacing_hz}")
    return int(math.floor(band_hz / spacing_hz + 1e-9))


@dataclass(frozen=True)
class LinkPlan:
    """Topology and channel grid of one cable direction."""

    fiber: FiberSpec
    amp: AmplifierSpec
    total_length_km: float = 6600.0
    span_length_km: float = 200.0
    band_hz: float = 5e12
    channel_spacing_hz: float = 75e9
    symbol_rate_hz: float = 73.5e9
    n_fibers_per_direction: int = 26

    def __post_init__(self) -> None:
        if span_count(self.total_length_km, self.span_length_km) < 1:
            raise ValueError(
                f"span_length_km={self.span_length_km} leaves no full span "
                f"in total_length_km={self.total_length_km}"
            )
        if not self.symbol_rate_hz > 0:
            raise ValueError(f"symbol_rate_hz must be > 0, got {self.symbol_rate_hz}")
        if self.channel_spacing_hz < self.symbol_rate_hz:
            raise ValueError(
                f"channel_spacing_hz={self.channel_spacing_hz} must be >= "
                f"symbol_rate_hz={self.symbol_rate_hz} (no spectral overlap)"
            )
        if not self.band_hz > 0:
            raise ValueError(f"band_hz must be > 0, got {self.band_hz}")
        if self.n_fibers_per_direction < 0:
            raise ValueError(
                f"n_fibers_per_direction must be >= 0, got {self.n_fibers_per_direction}"
            )

    @property
    def n_spans(self) -> int:
        return span_count(self.total_length_km, self.span_length_km)

    @property
    def effective_span_km(self) -> float:
        """Span length after snapping to an integer partition of the link."""
        return self.total_length_km / self.n_spans

    @property
    def n_channels(self) -> int:
        return channels_in_band(self.band_hz, self.channel_spacing_hz)


@dataclass(frozen=True)
class OperatingPoint:
    """One point of the design plane: fiber loss and total EDFA output power."""

    loss_db_per_km: float
    edfa_total_output_dbm: float

    def __post_init__(self) -> None:
        if not self.loss_db_per_km > 0:
            raise ValueError(f"loss_db_per_km must be > 0, got {self.loss_db_per_km}")
        if not math.isfinite(self.edfa_total_output_dbm):
            raise ValueError("edfa_total_output_dbm must be finite")


@dataclass(frozen=True)
class PowerFeedSpec:
    """Electrical supply model: conductor dissipation plus repeater load."""

    feed_current_a: float = 1.0
    cable_resistance_ohm_per_km: float = 1.0
    repeater_power_w: float = 180.0
    supply_limit_w: float = 18000.0

    def __post_init__(self) -> None:
        for name in (
            "feed_current_a",
            "cable_resistance_ohm_per_km",
            "repeater_power_w",
            "supply_limit_w",
        ):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)}")


@dataclass(frozen=True)
class PowerFeedResult:
    cable_w: float
    repeaters_w: float
    total_w: float
    within_limit: bool


@dataclass(frozen=True)
class ShannonGapTransceiver:
    """Net rate 2*Rs*log2(1 + SNR/gap) in Gb/s, optionally capped."""

    gap_db: float
    max_rate_gbps: float = math.inf

    def __post_init__(self) -> None:
        if not self.gap_db >= 0:
            raise ValueError(f"gap_db must be >= 0, got {self.gap_db}")
        if not self.max_rate_gbps > 0:
            raise ValueError(f"max_rate_gbps must be > 0, got {self.max_rate_gbps}")

    def net_rate_gbps(self, gsnr_db: float, symbol_rate_hz: float) -> float:
        rate = 2.0 * symbol_rate_hz * math.log2(1.0 + db_to_linear(gsnr_db - self.gap_db)) / 1e9
        return min(rate, self.max_rate_gbps)


@dataclass(frozen=True)
class TabulatedTransceiver:
    """Piecewise-linear (gsnr_db, net_rate_gbps) curve, clamped at the ends."""

    points: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        points = tuple((float(g), float(r)) for g, r in self.points)
        if not points:
            raise ValueError("transceiver table needs at least one point")
        for (g0, r0), (g1, r1) in zip(points, points[1:]):
            if not g1 > g0:
                raise ValueError(f"table gsnr_db must be strictly increasing: {g0} then {g1}")
            if r1 < r0:
                raise ValueError(f"table net_rate_gbps must be nondecreasing: {r0} then {r1}")
        object.__setattr__(self, "points", points)

    def net_rate_gbps(self, gsnr_db: float, symbol_rate_hz: float) -> float:
        xs = [p[0] for p in self.points]
        ys = [p[1] for p in self.points]
        return float(np.interp(gsnr_db, xs, ys))


TransceiverModel = Union[ShannonGapTransceiver, TabulatedTransceiver]


def load_transceiver_table(path: str | Path) -> TabulatedTransceiver:
    """Read a "gsnr_db,net_rate_gbps" table; '#' starts a comment."""
    points: list[tuple[float, float]] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'gsnr_db,net_rate_gbps'")
            try:
                points.append((float(parts[0]), float(parts[1])))
            except ValueError:
                raise ValueError(f"{path}:{lineno}: non-numeric entry {line!r}") from None
    if not points:
        raise ValueError(f"{path}: empty transceiver table")
    return TabulatedTransceiver(tuple(points))


def per_channel_launch(
    edfa_total_output_dbm: float,
    n_channels: int,
    post_output_loss_db: float,
) -> float:
    """Per-channel power (W) entering the fiber after the post-EDFA losses."""
    if n_channels < 1:
        raise ValueError(f"n_channels must be >= 1, got {n_channels}")
    if post_output_loss_db < 0:
        raise ValueError(f"post_output_loss_db must be >= 0, got {post_output_loss_db}")
    return dbm_to_watt(
        edfa_total_output_dbm - 10.0 * math.log10(n_channels) - post_output_loss_db
    )


def link_gsnr(
    plan: LinkPlan,
    op: OperatingPoint,
    include_rbs: bool = False,
    const: PhysicalConstants = DEFAULT_CONSTANTS,
) -> SnrBudget:
    """Assemble the four-impairment budget at one operating point.

    The amplifier gain restores the fiber loss of one effective span plus the
    lumped pre/post losses; there is one gain block per span. The backscatter
    term uses the fiber-only span loss and enters only when include_rbs is set.
    """
    fiber = replace(plan.fiber, loss_db_per_km=op.loss_db_per_km)
    n_channels = plan.n_channels
    n_spans = plan.n_spans
    eff_span_km = plan.effective_span_km
    fiber_span_loss_db = op.loss_db_per_km * eff_span_km
    gain_db = fiber_span_loss_db + plan.amp.pre_input_loss_db + plan.amp.post_output_loss_db

    p_out_w = dbm_to_watt(op.edfa_total_output_dbm - 10.0 * math.log10(n_channels))
    p_launch_w = per_channel_launch(
        op.edfa_total_output_dbm, n_channels, plan.amp.post_output_loss_db
    )

    inv_ase = ase_inv_snr(plan.amp, p_out_w, gain_db, n_spans, plan.symbol_rate_hz, const)
    psd = gn_nli_psd_per_span(
        fiber, p_launch_w / plan.channel_spacing_hz, eff_span_km, plan.band_hz, const
    )
    inv_nli = nli_inv_snr(psd, n_spans, plan.symbol_rate_hz, p_launch_w)
    inv_imi = imi_inv_snr(fiber.imi_db_per_km, plan.total_length_km)
    inv_rbs = (
        rbs_inv_snr(fiber.backscatter_db_per_km, plan.total_length_km, fiber_span_loss_db)
        if include_rbs
        else 0.0
    )
    return combine_gsnr([inv_ase, inv_nli, inv_imi, inv_rbs])


def channel_net_rate(trx: TransceiverModel, gsnr_db: float, symbol_rate_hz: float) -> float:
    """Net information rate (Gb/s) of one channel at the given GSNR."""
    if not math.isfinite(gsnr_db):
        raise ValueError(f"gsnr_db must be finite, got {gsnr_db}")
    return trx.net_rate_gbps(gsnr_db, symbol_rate_hz)


def cable_throughput(
    plan: LinkPlan,
    trx: TransceiverModel,
    op: OperatingPoint,
    include_rbs: bool = False,
    const: PhysicalConstants = DEFAULT_CONSTANTS,
) -> float:
    """Net cable throughput in one direction, in Tb/s."""
    if plan.n_fibers_per_direction == 0:
        return 0.0
    budget = link_gsnr(plan, op, include_rbs, const)
    rate_gbps = channel_net_rate(trx, budget.gsnr_db, plan.symbol_rate_hz)
    return plan.n_fibers_per_direction * plan.n_channels * rate_gbps / 1e3


def repeater_count(total_length_km: float, span_length_km: float) -> int:
    """In-line repeaters: one per span boundary, end blocks live on shore."""
    if span_length_km > total_length_km:
        raise ValueError(
            f"span_length_km={span_length_km} exceeds total_length_km={total_length_km}"
        )
    return span_count(total_length_km, span_length_km) - 1


def power_feed(
    feed: PowerFeedSpec,
    total_length_km: float,
    n_repeaters: int,
) -> PowerFeedResult:
    """Electrical budget: I^2*R conductor dissipation plus repeater load."""
    if total_length_km < 0:
        raise ValueError(f"total_length_km must be >= 0, got {total_length_km}")
    if n_repeaters < 0:
        raise ValueError(f"n_repeaters must be >= 0, got {n_repeaters}")
    cable_w = feed.feed_current_a**2 * feed.cable_resistance_ohm_per_km * total_length_km
    repeaters_w = n_repeaters * feed.repeater_power_w
    total_w = cable_w + repeaters_w
    return PowerFeedResult(cable_w, repeaters_w, total_w, total_w <= feed.supply_limit_w)


def propagation_latency(
    total_length_km: float,
    group_index: float,
    const: PhysicalConstants = DEFAULT_CONSTANTS,
) -> float:
    """One-way propagation time in milliseconds."""
    if group_index < 1:
        raise ValueError(f"group_index must be >= 1, got {group_index}")
    if total_length_km < 0:
        raise ValueError(f"total_length_km must be >= 0, got {total_length_km}")
    return total_length_km * group_index / const.light_speed_km_s * 1e3


def calibrate_trx_gap(
    plan: LinkPlan,
    reference: OperatingPoint,
    target_tbps: float,
    include_rbs: bool = False,
    const: PhysicalConstants = DEFAULT_CONSTANTS,
) -> float:
    """Shannon gap (dB) that pins the plan to target_tbps at the reference point.

    Bisection on the gap; throughput is strictly decreasing in it.
    """
    if not target_tbps > 0:
        raise ValueError(f"target_tbps must be > 0, got {target_tbps}")

    def throughput(gap_db: float) -> float:
        return cable_throughput(plan, ShannonGapTransceiver(gap_db), reference, include_rbs, const)

    zero_gap = throughput(0.0)
    if target_tbps > zero_gap:
        raise InfeasibleError(
            f"target {target_tbps:g} Tb/s exceeds the zero-gap Shannon throughput "
            f"{zero_gap:.6g} Tb/s at the reference point"
        )
    if abs(zero_gap - target_tbps) <= 1e-6 * target_tbps:
        return 0.0
    lo, hi = 0.0, 15.0
    while throughput(hi) > target_tbps:
        hi *= 2.0
        if hi > 60.0:
            raise InfeasibleError(
                f"target {target_tbps:g} Tb/s would need a shaping gap above 60 dB"
            )
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        t = throughput(mid)
        if abs(t - target_tbps) <= 1e-6 * target_tbps:
            return mid
        if t > target_tbps:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
