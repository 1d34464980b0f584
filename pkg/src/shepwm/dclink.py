"""Variable-DC-link operation: duty mapping, lookup tables, method comparison.

The conventional approach re-solves the elimination problem at every
commanded per-unit voltage and feeds the cells from the nominal DC link.
The variable-DC-link approach solves once at full modulation and reaches
lower outputs by scaling every cell's DC voltage through the duty cycle of
an idealized isolated DC-DC converter (output = duty * input, all cells
driven identically). Scaling the DC link scales every harmonic by the same
factor, so the full-modulation solution's THD carries over unchanged to the
entire output range.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

from .errors import InfeasibleBasePoint, OutOfRange, ShePwmError
from .harmonics import DEFAULT_MAX_ORDER, analytic_harmonic, pattern_thd
from .optimizer import PsoConfig, derive_seed
from .pattern import SwitchingPattern
from .she import SheProblem, Solution, solve

CONVENTIONAL = "conventional"
PROPOSED = "proposed"


@dataclass(frozen=True)
class LookupRow:
    """One operating point: commanded voltage, duty, angles, quality figures."""

    v_pu: float
    method: str
    duty: float
    thd: float
    feasible: bool
    fundamental_v: float
    angles: tuple[float, ...]


@dataclass(frozen=True)
class LookupTable:
    """Rows sorted ascending by commanded per-unit voltage.

    Proposed rows carry duty = v_pu (all derived from the one base solve);
    conventional rows run at full DC link, duty = 1.
    """

    rows: tuple[LookupRow, ...]
    base_vdc_per_cell: float
    cells: int
    thd_max_order: int

    def __post_init__(self):
        v = [r.v_pu for r in self.rows]
        if any(b < a for a, b in zip(v, v[1:])):
            raise ShePwmError("lookup rows must be sorted ascending by v_pu")
        for r in self.rows:
            if not (0.0 <= r.v_pu <= 1.0 and 0.0 <= r.duty <= 1.0):
                raise ShePwmError(f"row at v_pu={r.v_pu} outside the unit ranges")
            if r.method == PROPOSED:
                if r.duty != r.v_pu:
                    raise ShePwmError(
                        f"proposed row at v_pu={r.v_pu} must have duty=v_pu"
                    )
            elif r.method == CONVENTIONAL:
                if r.duty != 1.0:
                    raise ShePwmError(
                        f"conventional row at v_pu={r.v_pu} must have duty=1"
                    )
            else:
                raise ShePwmError(f"unknown method {r.method!r}")


@dataclass(frozen=True)
class ComparisonRow:
    """Conventional vs variable-DC-link quality at one commanded voltage.

    improvement is the fractional THD reduction (thd_conv - thd_prop) /
    thd_conv, or None when the two THD values are identical (shared
    operating point at full modulation).
    """

    v_pu: float
    thd_conventional: float
    thd_proposed: float
    improvement: float | None
    feasible_conventional: bool
    feasible_proposed: bool


@dataclass(frozen=True)
class ComparisonTable:
    rows: tuple[ComparisonRow, ...]
    base_solution: Solution
    lookup: LookupTable
    conventional: tuple[Solution, ...]


def duty_for_target(v_pu: float) -> float:
    """Converter duty cycle that reaches a commanded per-unit voltage.

    With the base solve pinned at full modulation, the old modulation index
    equals the duty cycle, so the mapping is the identity on [0, 1].
    """
    if not (0.0 <= v_pu <= 1.0):
        raise OutOfRange(f"per-unit voltage {v_pu} outside [0, 1]")
    return float(v_pu)


def scale_pattern(pattern: SwitchingPattern, duty: float) -> SwitchingPattern:
    """Same angles and signs with every cell's DC voltage scaled by the duty.

    duty must lie in (0, 1]: zero duty would zero the DC link, for which the
    pattern type (and THD) is undefined.
    """
    if not (0.0 < duty <= 1.0):
        raise OutOfRange(f"duty {duty} outside (0, 1]")
    return SwitchingPattern(
        angles=pattern.angles,
        signs=pattern.signs,
        cells=pattern.cells,
        vdc_per_cell=pattern.vdc_per_cell * duty,
    )


def _check_grid(v_pu_grid) -> list[float]:
    grid = [float(v) for v in v_pu_grid]
    if not grid:
        raise ShePwmError("empty per-unit voltage grid")
    for v in grid:
        if not (0.0 < v <= 1.0):
            raise OutOfRange(
                f"grid value {v} outside (0, 1]; zero output has no defined THD"
            )
    return sorted(grid)


def solve_base(problem: SheProblem, pso: PsoConfig) -> Solution:
    """Full-modulation solve that anchors the variable-DC-link method."""
    return solve(replace(problem, target_m=1.0), pso)


def build_lookup(
    v_pu_grid,
    pso: PsoConfig,
    problem: SheProblem,
    thd_max_order: int = DEFAULT_MAX_ORDER,
    require_feasible_base: bool = False,
    base_solution: Solution | None = None,
) -> LookupTable:
    """Variable-DC-link lookup rows for a grid of commanded voltages.

    Solves once at full modulation (or reuses base_solution), then derives
    each row by duty scaling; every row shares the base angles. With
    require_feasible_base the call refuses an out-of-tolerance base solve by
    raising InfeasibleBasePoint; by default the rows simply carry the base
    feasibility flag, since duty scaling preserves the residuals in per-unit
    terms exactly.
    """
    grid = _check_grid(v_pu_grid)
    base = base_solution if base_solution is not None else solve_base(problem, pso)
    if require_feasible_base and not base.feasible:
        worst = max(base.residuals_pu.values())
        raise InfeasibleBasePoint(
            f"full-modulation solve misses thresholds (worst residual "
            f"{worst:.3e} pu, fundamental {base.fundamental_pu:.6f} pu)"
        )
    rows = []
    for v in grid:
        duty = duty_for_target(v)
        scaled = scale_pattern(base.pattern, duty)
        rows.append(
            LookupRow(
                v_pu=v,
                method=PROPOSED,
                duty=duty,
                thd=pattern_thd(scaled, thd_max_order),
                feasible=base.feasible,
                fundamental_v=abs(analytic_harmonic(scaled, 1)),
                angles=scaled.angles,
            )
        )
    return LookupTable(
        rows=tuple(rows),
        base_vdc_per_cell=problem.vdc_per_cell,
        cells=problem.cells,
        thd_max_order=thd_max_order,
    )


def _conventional_indexed(args) -> Solution:
    problem, v, pso, index = args
    return solve(
        replace(problem, target_m=v), replace(pso, seed=derive_seed(pso.seed, index))
    )


def compare_methods(
    v_pu_grid,
    pso: PsoConfig,
    problem: SheProblem,
    thd_max_order: int = DEFAULT_MAX_ORDER,
    jobs: int = 1,
) -> ComparisonTable:
    """Conventional re-solve at every grid point vs the duty-scaled base solve.

    Conventional solve i uses seed derive_seed(pso.seed, i) over the sorted
    grid, so results are independent of scheduling; at v_pu = 1.0 both
    methods share the base operating point and the improvement is undefined.
    """
    grid = _check_grid(v_pu_grid)
    base = solve_base(problem, pso)
    lookup = build_lookup(
        grid, pso, problem, thd_max_order=thd_max_order, base_solution=base
    )
    work = [
        (problem, v, pso, i) for i, v in enumerate(grid) if v != 1.0
    ]
    if jobs > 1 and work:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            solved = list(pool.map(_conventional_indexed, work))
    else:
        solved = [_conventional_indexed(w) for w in work]
    conventional: list[Solution] = []
    it = iter(solved)
    for v in grid:
        conventional.append(base if v == 1.0 else next(it))

    rows = []
    for conv, prop_row in zip(conventional, lookup.rows):
        thd_c = pattern_thd(conv.pattern, thd_max_order)
        thd_p = prop_row.thd
        improvement = None if thd_c == thd_p else (thd_c - thd_p) / thd_c
        rows.append(
            ComparisonRow(
                v_pu=prop_row.v_pu,
                thd_conventional=thd_c,
                thd_proposed=thd_p,
                improvement=improvement,
                feasible_conventional=conv.feasible,
                feasible_proposed=prop_row.feasible,
            )
        )
    return ComparisonTable(
        rows=tuple(rows),
        base_solution=base,
        lookup=lookup,
        conventional=tuple(conventional),
    )


def _angle_headers(k: int) -> list[str]:
    return [f"theta_{i + 1}" for i in range(k)]


def write_lookup_csv(table: LookupTable, path) -> None:
    """CSV with angles at 17 significant digits; parses back bit-exactly."""
    k = len(table.rows[0].angles) if table.rows else 0
    header = ["v_pu", "method", "duty", "thd_pct", "feasible", "fundamental_v"]
    header += _angle_headers(k)
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for r in table.rows:
            cells = [
                repr(r.v_pu),
                r.method,
                repr(r.duty),
                repr(100.0 * r.thd),
                "true" if r.feasible else "false",
                repr(r.fundamental_v),
            ]
            cells += [format(a, ".17g") for a in r.angles]
            fh.write(",".join(cells) + "\n")


def read_lookup_csv(
    path,
    base_vdc_per_cell: float = 200.0,
    cells: int = 2,
    thd_max_order: int = DEFAULT_MAX_ORDER,
) -> LookupTable:
    """Parse a lookup CSV back; structural metadata comes from the caller
    (it lives in the run manifest, not in the CSV schema)."""
    rows = []
    with open(path, newline="") as fh:
        header = fh.readline().strip().split(",")
        n_theta = sum(1 for h in header if h.startswith("theta_"))
        for line in fh:
            parts = line.strip().split(",")
            if not parts or parts == [""]:
                continue
            rows.append(
                LookupRow(
                    v_pu=float(parts[0]),
                    method=parts[1],
                    duty=float(parts[2]),
                    thd=float(parts[3]) / 100.0,
                    feasible=parts[4] == "true",
                    fundamental_v=float(parts[5]),
                    angles=tuple(float(x) for x in parts[6 : 6 + n_theta]),
                )
            )
    return LookupTable(
        rows=tuple(rows),
        base_vdc_per_cell=base_vdc_per_cell,
        cells=cells,
        thd_max_order=thd_max_order,
    )


def write_lookup_json(table: LookupTable, path) -> None:
    doc = {
        "base_vdc_per_cell": table.base_vdc_per_cell,
        "cells": table.cells,
        "thd_max_order": table.thd_max_order,
        "rows": [
            {
                "v_pu": r.v_pu,
                "method": r.method,
                "duty": r.duty,
                "thd_pct": 100.0 * r.thd,
                "feasible": r.feasible,
                "fundamental_v": r.fundamental_v,
                "angles_rad": list(r.angles),
            }
            for r in table.rows
        ],
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def write_comparison_csv(table: ComparisonTable, path) -> None:
    """Comparison rows with the improvement column; '-' marks the undefined
    improvement at a shared operating point."""
    header = [
        "v_pu",
        "thd_conventional_pct",
        "thd_proposed_pct",
        "improvement_pct",
        "feasible_conventional",
        "feasible_proposed",
    ]
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for r in table.rows:
            imp = "-" if r.improvement is None else repr(100.0 * r.improvement)
            fh.write(
                ",".join(
                    [
                        repr(r.v_pu),
                        repr(100.0 * r.thd_conventional),
                        repr(100.0 * r.thd_proposed),
                        imp,
                        "true" if r.feasible_conventional else "false",
                        "true" if r.feasible_proposed else "false",
                    ]
                )
                + "\n"
            )
