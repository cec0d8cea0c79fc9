"""Design space exploration over output tile size and multiplier budget.

run_sweep evaluates every (m, budget) pair of a SweepSpec against a workload
and derives the percentage-change columns between consecutive tile sizes:

  - multiplication savings: 100 * (O_m(m) - O_m(m')) / O_m(m)
  - transform overhead:     100 * (t(m') - t(m)) / t(m), where
    t(m) = (beta + gamma + delta) / m^2 is the per-output-pixel transform
    cost of one tile (the workload-independent normalization; m and m' are
    consecutive swept tile sizes).

recommend() picks the highest-throughput design among tile sizes whose
incoming transition is favorable, i.e. whose transform-overhead increase
does not exceed the multiplication savings.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from .cost_model import (
    DesignPoint,
    HardwareConfig,
    TransformOpCounts,
    count_transform_ops,
    evaluate_design,
    implementation_transform_complexity,
    layer_latency,
    multiplication_complexity,
    normalized_transform_ops,
    pe_count,
    spatial_ops,
    transform_complexity,
)
from .reference_data import (
    PRIOR_DESIGNS,
    SHARED_DESIGN_BUDGETS,
    SHARED_DESIGN_GOPS_PER_W,
    SHARED_DESIGN_POWER_W,
)
from .transforms import MinimalParams, generate_transforms
from .workload import Workload


@dataclass(frozen=True)
class SweepSpec:
    m_values: tuple[int, ...]
    r: int
    budgets: tuple[int, ...]
    workload: Workload
    hw: HardwareConfig  # template; m_total is overridden per budget

    def __post_init__(self):
        if not self.m_values or not self.budgets:
            raise ValueError("m_values and budgets must be nonempty")
        if min(self.m_values) < 1:
            raise ValueError("all m values must be >= 1")
        if self.r < 1:
            raise ValueError("r must be >= 1")


@dataclass(frozen=True)
class SweepRow:
    """Per layer-group complexity and latency of one (m, budget) point."""

    m: int
    budget: int
    group: str
    o_m: float
    o_t: float
    o_T: float
    o_s: float
    latency_s: float


@dataclass(frozen=True)
class Transition:
    """Percentage changes between consecutive swept tile sizes."""

    m_from: int
    m_to: int
    pct_mult_decrease: float
    pct_transform_increase: float | None  # None when the smaller m has no transforms

    @property
    def favorable(self) -> bool:
        """Savings at least cover the added transform overhead."""
        if self.pct_transform_increase is None:
            return self.pct_mult_decrease > 0
        return self.pct_transform_increase <= self.pct_mult_decrease


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    points: tuple[DesignPoint, ...]          # sorted by (m, budget)
    rows: tuple[SweepRow, ...]               # one per (m, budget, group)
    transitions: tuple[Transition, ...]      # between consecutive m values
    op_counts: dict[int, TransformOpCounts]


def run_sweep(spec: SweepSpec) -> SweepResult:
    ms = sorted(set(spec.m_values))
    budgets = sorted(set(spec.budgets))
    counts: dict[int, TransformOpCounts] = {}
    for m in ms:
        try:
            ts = generate_transforms(MinimalParams(m, spec.r))
        except ValueError as exc:
            raise ValueError(f"transform generation failed for m={m}: {exc}") from exc
        counts[m] = count_transform_ops(ts)

    points: list[DesignPoint] = []
    rows: list[SweepRow] = []
    for m in ms:
        params = MinimalParams(m, spec.r)
        for budget in budgets:
            hw = HardwareConfig(
                m_total=budget, t_c=spec.hw.t_c, d_p=spec.hw.d_p,
                lut_per_pe_shared=spec.hw.lut_per_pe_shared,
                lut_per_pe_reference=spec.hw.lut_per_pe_reference,
            )
            points.append(evaluate_design(spec.workload.shapes, params, hw, counts[m]))
            p = pe_count(hw, params)
            for group in spec.workload.groups:
                shapes = [l.shape for l in spec.workload.group_layers(group)]
                rows.append(SweepRow(
                    m=m, budget=budget, group=group,
                    o_m=sum(multiplication_complexity(s, params) for s in shapes),
                    o_t=sum(transform_complexity(s, params, counts[m]).total for s in shapes),
                    o_T=sum(
                        implementation_transform_complexity(s, params, counts[m], p)
                        for s in shapes
                    ),
                    o_s=sum(spatial_ops(s) for s in shapes),
                    latency_s=sum(layer_latency(s, params, p, hw) for s in shapes),
                ))

    transitions: list[Transition] = []
    any_layer = spec.workload.shapes[0]
    for m_from, m_to in zip(ms, ms[1:]):
        om_from = multiplication_complexity(any_layer, MinimalParams(m_from, spec.r))
        om_to = multiplication_complexity(any_layer, MinimalParams(m_to, spec.r))
        pct_mult = 100.0 * (om_from - om_to) / om_from
        t_from = normalized_transform_ops(MinimalParams(m_from, spec.r), counts[m_from])
        t_to = normalized_transform_ops(MinimalParams(m_to, spec.r), counts[m_to])
        transitions.append(Transition(
            m_from=m_from, m_to=m_to,
            pct_mult_decrease=pct_mult,
            pct_transform_increase=(100.0 * (t_to - t_from) / t_from) if t_from > 0 else None,
        ))

    return SweepResult(
        spec=spec, points=tuple(points), rows=tuple(rows),
        transitions=tuple(transitions), op_counts=counts,
    )


def recommend(result: SweepResult) -> DesignPoint:
    """Max-throughput design whose incoming m transition is favorable.

    The smallest swept m is always feasible.  Ties break toward smaller m,
    then toward the smaller budget.
    """
    if not result.points:
        raise ValueError("cannot recommend from an empty sweep")
    feasible = {min(p.params.m for p in result.points)}
    for tr in result.transitions:
        if tr.favorable:
            feasible.add(tr.m_to)
    candidates = [p for p in result.points if p.params.m in feasible]
    return max(candidates, key=lambda p: (p.throughput, -p.params.m, -p.hw.m_total))


@dataclass(frozen=True)
class Table2Row:
    name: str
    m: int | None
    r: int | None
    multipliers: int
    pes: int | None
    precision_bits: int
    freq_mhz: float
    conv_ms: tuple[float, ...]
    overall_ms: float
    gops: float
    gops_per_mult: float
    power_w: float | None
    gops_per_w: float | None
    computed: bool


@dataclass(frozen=True)
class Table2Report:
    groups: tuple[str, ...]
    rows: tuple[Table2Row, ...]


def table2_report(
    workload: Workload,
    designs=SHARED_DESIGN_BUDGETS,
    freq_hz: float = 200e6,
    include_prior: bool = True,
) -> Table2Report:
    """Per-group latency / throughput / efficiency comparison on VGG16-D.

    Latency, throughput and multiplier efficiency of the shared-transform
    designs are computed from the analytical model; frequency, precision and
    power columns of prior designs are echoed from the static reference rows
    and never derived.
    """
    if workload.name != "vgg16d":
        raise ValueError(
            f"the comparison table is defined for the vgg16d workload, got {workload.name!r}"
        )
    groups = workload.groups
    rows: list[Table2Row] = []
    if include_prior:
        for ref in PRIOR_DESIGNS:
            rows.append(Table2Row(
                name=ref.name, m=None, r=None,
                multipliers=ref.multipliers, pes=ref.pes,
                precision_bits=ref.precision_bits, freq_mhz=ref.freq_mhz,
                conv_ms=ref.conv_ms, overall_ms=ref.overall_ms,
                gops=ref.gops, gops_per_mult=ref.gops_per_mult,
                power_w=ref.power_w, gops_per_w=ref.gops_per_w,
                computed=False,
            ))
    for m, r, budget in designs:
        params = MinimalParams(m, r)
        hw = HardwareConfig(m_total=budget, t_c=1.0 / freq_hz)
        ts = generate_transforms(params)
        counts = count_transform_ops(ts)
        point = evaluate_design(workload.shapes, params, hw, counts)
        conv_ms = tuple(
            1e3 * sum(
                layer_latency(l.shape, params, point.p, hw)
                for l in workload.group_layers(g)
            )
            for g in groups
        )
        power = SHARED_DESIGN_POWER_W.get(m)
        rows.append(Table2Row(
            name=f"shared_transform_m{m}", m=m, r=r,
            multipliers=budget, pes=point.p, precision_bits=32,
            freq_mhz=freq_hz / 1e6,
            conv_ms=conv_ms, overall_ms=point.t_total * 1e3,
            gops=point.throughput / 1e9,
            gops_per_mult=point.throughput / 1e9 / budget,
            power_w=power, gops_per_w=SHARED_DESIGN_GOPS_PER_W.get(m),
            computed=True,
        ))
    return Table2Report(groups=groups, rows=tuple(rows))


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.6g}"
    return str(x)


def write_fig1_csv(result: SweepResult, path: str | Path):
    """Per-group multiplication complexity: m, group, O_m."""
    budget0 = min(r.budget for r in result.rows)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["m", "group", "o_m"])
        for row in result.rows:
            if row.budget == budget0:
                w.writerow([row.m, row.group, _fmt(row.o_m)])


def write_fig2_csv(result: SweepResult, path: str | Path):
    """Whole-network transform complexity: m, O_t."""
    budget0 = min(r.budget for r in result.rows)
    totals: dict[int, float] = {}
    for row in result.rows:
        if row.budget == budget0:
            totals[row.m] = totals.get(row.m, 0.0) + row.o_t
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["m", "o_t"])
        for m in sorted(totals):
            w.writerow([m, _fmt(totals[m])])


def write_fig3_csv(result: SweepResult, path: str | Path):
    """Percentage changes between consecutive m, keyed by the destination m."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["m", "pct_mult_decrease", "pct_transform_increase"])
        for tr in result.transitions:
            w.writerow([tr.m_to, _fmt(tr.pct_mult_decrease), _fmt(tr.pct_transform_increase)])


def write_fig6_csv(result: SweepResult, path: str | Path):
    """Throughput surface: m, multipliers, gops."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["m", "multipliers", "gops"])
        for point in result.points:
            w.writerow([point.params.m, point.hw.m_total, _fmt(point.throughput / 1e9)])


def write_table2_csv(report: Table2Report, path: str | Path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        header = ["design"] + [f"{g}_ms" for g in report.groups]
        header += ["overall_ms", "gops", "gops_per_mult"]
        w.writerow(header)
        for row in report.rows:
            w.writerow([row.name] + [_fmt(round(v, 4)) for v in row.conv_ms]
                       + [_fmt(round(row.overall_ms, 4)), _fmt(round(row.gops, 2)),
                          _fmt(round(row.gops_per_mult, 4))])


def write_table2_reference_csv(report: Table2Report, path: str | Path):
    """Echoed static attributes (precision, frequency, power) per design."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["design", "multipliers", "pes", "precision_bits", "freq_mhz",
                    "power_w", "gops_per_w", "computed"])
        for row in report.rows:
            w.writerow([row.name, row.multipliers, _fmt(row.pes), row.precision_bits,
                        _fmt(row.freq_mhz), _fmt(row.power_w), _fmt(row.gops_per_w),
                        int(row.computed)])
