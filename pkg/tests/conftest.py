from __future__ import annotations

import pytest

from hcflink import (
    AmplifierSpec,
    FiberSpec,
    LinkPlan,
    OperatingPoint,
    PhysicalConstants,
    ShannonGapTransceiver,
    calibrate_trx_gap,
)


@pytest.fixture(scope="session")
def const() -> PhysicalConstants:
    return PhysicalConstants()


@pytest.fixture(scope="session")
def reference_fiber() -> FiberSpec:
    return FiberSpec(
        loss_db_per_km=0.06,
        dispersion_ps_nm_km=3.0,
        gamma_per_w_km=5e-4,
        imi_db_per_km=-65.0,
        backscatter_db_per_km=-70.0,
    )


@pytest.fixture(scope="session")
def reference_amp() -> AmplifierSpec:
    return AmplifierSpec(noise_figure_db=4.6, total_output_power_dbm=20.3)


@pytest.fixture(scope="session")
def reference_plan(reference_fiber, reference_amp) -> LinkPlan:
    return LinkPlan(fiber=reference_fiber, amp=reference_amp)


@pytest.fixture(scope="session")
def reference_op() -> OperatingPoint:
    return OperatingPoint(loss_db_per_km=0.06, edfa_total_output_dbm=20.3)


@pytest.fixture(scope="session")
def calibrated_gap(reference_plan, reference_op) -> float:
    return calibrate_trx_gap(reference_plan, reference_op, 1000.0, include_rbs=False)


@pytest.fixture(scope="session")
def calibrated_trx(calibrated_gap) -> ShannonGapTransceiver:
    return ShannonGapTransceiver(gap_db=calibrated_gap)
