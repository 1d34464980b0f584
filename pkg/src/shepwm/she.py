"""Selective harmonic elimination: problem setup, cost function, PSO solve.

The solver searches the box [0, pi/2]^K for switching angles that hit a
target per-unit fundamental while nulling a chosen set of odd harmonics.
Raw optimizer coordinates are sort-repaired into nondecreasing order before
evaluation, which makes the objective total on the box and permutation
invariant. The hot batched cost goes through the kernel backend; the scalar
path below is the reference implementation used for reporting and tests.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from . import kernels
from .errors import (
    EmptySweep,
    OutOfRange,
    PatternError,
    ShePwmError,
    SignPatternInvalid,
)
from .harmonics import analytic_harmonic
from .optimizer import OptimizerResult, PsoConfig, derive_seed, minimize
from .pattern import HALF_PI, SwitchingPattern, default_sign_pattern

# A solution is feasible when every eliminated-order residual and the
# fundamental tracking error are below 0.1% of the DC base s*V_dc.
RESIDUAL_THRESHOLD_PU = 1e-3
FUNDAMENTAL_THRESHOLD_PU = 1e-3

DEFAULT_ELIMINATE = (3, 5, 7, 9, 11)


@dataclass(frozen=True)
class SheProblem:
    """One elimination problem: target fundamental plus structure and weights."""

    target_m: float
    eliminate_orders: tuple[int, ...] = DEFAULT_ELIMINATE
    cells: int = 2
    angles_per_cell: int = 3
    sign_pattern: tuple[int, ...] | None = None
    weight_fundamental: float = 100.0
    weight_harmonics: float = 10.0
    vdc_per_cell: float = 200.0

    def __post_init__(self):
        if not (0.0 <= self.target_m <= 1.0):
            raise OutOfRange(f"target_m must be in [0, 1], got {self.target_m}")
        if self.cells < 1 or self.angles_per_cell < 1:
            raise ShePwmError("cells and angles_per_cell must be >= 1")
        object.__setattr__(
            self, "eliminate_orders", tuple(int(n) for n in self.eliminate_orders)
        )
        k = self.n_angles
        orders = self.eliminate_orders
        if len(set(orders)) != len(orders):
            raise ShePwmError(f"eliminate_orders must be distinct, got {orders}")
        if any(n <= 1 or n % 2 == 0 for n in orders):
            raise ShePwmError(f"eliminate_orders must be odd and > 1, got {orders}")
        if len(orders) > k - 1:
            raise ShePwmError(
                f"{k} angles support at most {k - 1} eliminations, got {len(orders)}"
            )
        signs = self.sign_pattern
        if signs is None:
            signs = default_sign_pattern(self.cells, self.angles_per_cell)
        object.__setattr__(self, "sign_pattern", tuple(int(s) for s in signs))
        if len(self.sign_pattern) != k:
            raise SignPatternInvalid(
                f"sign pattern length {len(self.sign_pattern)} != K = {k}"
            )
        try:
            self.make_pattern(np.zeros(k))
        except PatternError as exc:
            raise SignPatternInvalid(str(exc)) from exc

    @property
    def n_angles(self) -> int:
        return self.cells * self.angles_per_cell

    @property
    def base_volts(self) -> float:
        return self.cells * self.vdc_per_cell

    def make_pattern(self, angles: Sequence[float]) -> SwitchingPattern:
        return SwitchingPattern(
            angles=tuple(angles),
            signs=self.sign_pattern,
            cells=self.cells,
            vdc_per_cell=self.vdc_per_cell,
        )


@dataclass(frozen=True)
class Solution:
    """Solved angles with the residual bookkeeping for one target.

    Equality covers the solution payload; optimizer diagnostics are excluded.
    """

    pattern: SwitchingPattern
    cost: float
    fundamental_pu: float
    residuals_pu: dict[int, float]
    feasible: bool
    diagnostics: OptimizerResult = field(repr=False, compare=False)
    target_m: float = 0.0


def cost(angles: Sequence[float], problem: SheProblem) -> float:
    """Reference scalar evaluation of the elimination cost.

    Sorts the raw angles, then weighs the fundamental tracking error against
    the 1/n-weighted per-unit magnitudes of the orders to eliminate.
    """
    arr = np.asarray(angles, dtype=np.float64)
    if arr.shape != (problem.n_angles,):
        raise ShePwmError(
            f"expected {problem.n_angles} angles, got shape {arr.shape}"
        )
    if np.any(arr < 0.0) or np.any(arr > HALF_PI):
        raise OutOfRange("angles must lie within [0, pi/2]")
    pat = problem.make_pattern(np.sort(arr))
    base = problem.base_volts
    v1_pu = abs(analytic_harmonic(pat, 1)) / base
    total = problem.weight_fundamental * abs(problem.target_m - v1_pu)
    for n in problem.eliminate_orders:
        total += (
            problem.weight_harmonics / n * abs(analytic_harmonic(pat, n)) / base
        )
    return total


def cost_batch(positions: np.ndarray, problem: SheProblem) -> np.ndarray:
    """Kernel-backed batched cost over a (P, K) matrix of raw angle vectors."""
    return kernels.she_cost_batch(
        positions,
        np.asarray(problem.sign_pattern, dtype=np.float64),
        np.asarray(problem.eliminate_orders, dtype=np.int64),
        problem.target_m,
        problem.weight_fundamental,
        problem.weight_harmonics,
        problem.cells,
    )


def solve(problem: SheProblem, pso: PsoConfig) -> Solution:
    """Minimize the elimination cost and package the repaired best point."""
    k = problem.n_angles
    result = minimize(
        lambda pts: cost_batch(pts, problem),
        bounds=[(0.0, HALF_PI)] * k,
        config=pso,
        vectorized=True,
    )
    repaired = np.sort(result.best_position)
    pat = problem.make_pattern(repaired)
    base = problem.base_volts
    fund_pu = abs(analytic_harmonic(pat, 1)) / base
    residuals = {
        n: abs(analytic_harmonic(pat, n)) / base for n in problem.eliminate_orders
    }
    feasible = (
        abs(fund_pu - problem.target_m) <= FUNDAMENTAL_THRESHOLD_PU
        and all(r <= RESIDUAL_THRESHOLD_PU for r in residuals.values())
    )
    return Solution(
        pattern=pat,
        cost=cost(repaired, problem),
        fundamental_pu=fund_pu,
        residuals_pu=residuals,
        feasible=feasible,
        diagnostics=result,
        target_m=problem.target_m,
    )


def _solve_indexed(args) -> Solution:
    problem, m, pso, index = args
    return solve(
        replace(problem, target_m=m), replace(pso, seed=derive_seed(pso.seed, index))
    )


def sweep(
    problem: SheProblem,
    m_values: Sequence[float],
    pso: PsoConfig,
    jobs: int = 1,
) -> list[Solution]:
    """Independent solves over a list of targets, in input order.

    Solve i runs with seed derive_seed(pso.seed, i), so results do not depend
    on how the work is scheduled; jobs > 1 fans the solves out to processes.
    """
    if len(m_values) == 0:
        raise EmptySweep("no target values given")
    for m in m_values:
        if not (0.0 <= m <= 1.0):
            raise OutOfRange(f"per-unit target {m} outside [0, 1]")
    work = [(problem, float(m), pso, i) for i, m in enumerate(m_values)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_solve_indexed, work))
    return [_solve_indexed(w) for w in work]
