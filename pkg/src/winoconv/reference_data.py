"""Static reference rows for report tables.

Published measurements of prior FPGA accelerator implementations and of the
synthesized builds of this architecture (frequency, power, logic resources).
None of these values is computed by this package: synthesis, clock and power
numbers require an actual FPGA flow, so reports only echo them next to the
quantities the models do derive.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ReferenceDesign:
    """One published accelerator evaluation on the VGG16-D conv layers."""

    name: str
    multipliers: int
    pes: int | None
    precision_bits: int
    freq_mhz: float
    conv_ms: tuple[float, float, float, float, float]
    overall_ms: float
    gops: float
    gops_per_mult: float
    power_w: float
    gops_per_w: float
    note: str = ""


# Prior published designs (static echo only).
PRIOR_DESIGNS = (
    ReferenceDesign(
        name="prior_zynq_16bit",
        multipliers=780, pes=None, precision_bits=16, freq_mhz=150.0,
        conv_ms=(31.29, 23.58, 39.29, 36.30, 32.95),
        overall_ms=163.4, gops=187.8, gops_per_mult=0.24,
        power_w=9.63, gops_per_w=19.50,
        note="older embedded implementation, fixed point",
    ),
    ReferenceDesign(
        name="prior_1d_engine",
        multipliers=256, pes=16, precision_bits=32, freq_mhz=200.0,
        conv_ms=(16.81, 24.08, 40.14, 40.14, 12.04),
        overall_ms=133.22, gops=230.4, gops_per_mult=0.90,
        power_w=8.04, gops_per_w=28.66,
        note="per-PE data transform, F(2x2,3x3), as published",
    ),
    ReferenceDesign(
        name="prior_1d_engine_norm688",
        multipliers=688, pes=43, precision_bits=32, freq_mhz=200.0,
        conv_ms=(6.25, 8.96, 14.94, 14.94, 4.48),
        overall_ms=49.57, gops=619.2, gops_per_mult=0.90,
        power_w=21.61, gops_per_w=28.66,
        note="normalized to the 688-multiplier budget of the F(2x2,3x3) build",
    ),
)

# Synthesized power of the shared-transform builds (static echo only), keyed by m.
SHARED_DESIGN_POWER_W = {2: 13.03, 3: 23.96, 4: 36.32}
SHARED_DESIGN_GOPS_PER_W = {2: 41.34, 3: 37.87, 4: 30.13}

# Logic-resource model.  Synthesis of the 19-PE F(4x4,3x3) builds showed the
# per-PE slice-LUT slope below for each design style; the shared-transform
# build additionally pays one fixed block for the standalone data transform.
LUT_PER_PE_SHARED = 5312
LUT_PER_PE_REFERENCE = 12224
LUT_SHARED_FIXED_BLOCK = 6911  # 19-PE total 107839 minus 19 * 5312

# Synthesized resource utilization of the 19-PE F(4x4,3x3) builds (echo only).
RESOURCE_UTILIZATION_19PE = {
    "reference_style": {"registers": 97052, "luts": 232256, "dsps": 2736, "multipliers": 684},
    "shared_transform": {"registers": 76500, "luts": 107839, "dsps": 2736, "multipliers": 684},
    "available": {"registers": 607200, "luts": 303600, "dsps": 2800, "multipliers": 700},
}

# The three shared-transform builds evaluated on VGG16-D: (m, r, multiplier budget).
SHARED_DESIGN_BUDGETS = ((2, 3, 688), (3, 3, 700), (4, 3, 684))
