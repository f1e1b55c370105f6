"""Two-angle layer search shared by the simulator-driven and analytic optimizers.

A coarse grid over (beta, gamma) picks starting points; the best few, plus
the previous layer's angles when given, are polished with Nelder-Mead.
The identity layer (0, 0) is always a candidate, so a new layer can never
lower the objective.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict
from typing import Callable

import numpy as np
from scipy.optimize import minimize

__all__ = ["OptBudget", "LayerResult", "maximize_layer", "wrap_beta"]

# Candidates within ``tie_rel`` of the best (relative) are ties.  Ties go to
# the candidate nearest the previous layer's angles, then small |beta|, |gamma|.
ABS_TIE = 1e-12


class BudgetError(ValueError):
    pass


@dataclass(frozen=True)
class OptBudget:
    beta_points: int = 24
    gamma_points: int = 48
    refine_evals: int = 200
    multistart: int = 3
    gamma_scale: float = 4.0
    ftol: float = 1e-10
    tie_rel: float = 1e-7

    def __post_init__(self):
        if self.beta_points < 1 or self.gamma_points < 1:
            raise BudgetError("grid needs at least one point per axis")
        if self.refine_evals < 0 or self.multistart < 0:
            raise BudgetError("refinement counts must be non-negative")

    @classmethod
    def from_dict(cls, data: dict | None) -> "OptBudget":
        return cls(**(data or {}))

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class LayerResult:
    beta: float
    gamma: float
    value: float
    evals: int


def wrap_beta(beta: float) -> float:
    """Map beta into [0, pi); every objective here is pi-periodic in beta."""
    b = math.fmod(beta, math.pi)
    if b < 0:
        b += math.pi
    if b >= math.pi:
        b = 0.0
    return b


def _beta_distance(a: float, b: float) -> float:
    d = abs(a - b) % math.pi
    return min(d, math.pi - d)


def _select(candidates: list[LayerResult], floor: float,
            previous: tuple[float, float] | None, tie_rel: float) -> LayerResult:
    top = max(c.value for c in candidates)
    cutoff = max(top - max(tie_rel * abs(top), ABS_TIE), floor - ABS_TIE)
    tied = [c for c in candidates if c.value >= cutoff]

    def key(c: LayerResult):
        near = 0.0
        if previous is not None:
            near = math.hypot(_beta_distance(c.beta, previous[0]), c.gamma - previous[1])
        return (near, abs(c.beta), abs(c.gamma))
    return min(tied, key=key)


def maximize_layer(
    grid_fn: Callable[[np.ndarray, np.ndarray], np.ndarray],
    gamma_max: float,
    budget: OptBudget,
    gamma_nonneg: bool = False,
    previous: tuple[float, float] | None = None,
) -> LayerResult:
    """Maximise a two-angle objective over beta in [0, pi) and |gamma| <= gamma_max.

    Parameters
    ----------
    grid_fn : callable
        ``grid_fn(betas, gammas)`` returns the objective on the outer-product
        grid, shape ``(len(betas), len(gammas))``.  An optional attribute
        ``grid_fn.point(beta, gamma)`` gives a faster scalar evaluation.
    gamma_max : float
        Half-width of the gamma search box.
    budget : OptBudget
        Grid resolution and Nelder-Mead allowance.
    gamma_nonneg : bool
        Search gamma in [0, gamma_max] only.  Valid when the objective is
        symmetric under (beta, gamma) -> (-beta, -gamma), as happens for a
        real initial state.
    previous : (float, float), optional
        Angles of the preceding layer; used as an extra refinement start and
        to break near-ties in favour of a smooth schedule.
    """
    betas = np.arange(budget.beta_points) * (math.pi / budget.beta_points)
    lo = 0.0 if gamma_nonneg else -gamma_max
    gammas = np.linspace(lo, gamma_max, budget.gamma_points)
    values = np.asarray(grid_fn(betas, gammas), dtype=float)
    if values.size == 0:
        raise BudgetError("grid produced no evaluations")
    evals = values.size

    point = getattr(grid_fn, "point", None)
    if point is None:
        def point(beta: float, gamma: float) -> float:
            return float(grid_fn(np.array([beta]), np.array([gamma]))[0, 0])

    identity = LayerResult(0.0, 0.0, point(0.0, 0.0), 0)
    evals += 1
    candidates = [identity]
    flat = values.ravel()
    # stable sort keeps grid order among equal values
    order = np.argsort(-flat, kind="stable")
    starts = []
    for idx in order[: max(1, budget.multistart)]:
        i, j = divmod(int(idx), values.shape[1])
        candidates.append(LayerResult(float(betas[i]), float(gammas[j]), float(flat[idx]), 0))
        starts.append((float(betas[i]), float(gammas[j])))
    starts = starts[: budget.multistart]
    if previous is not None and budget.multistart > 0:
        pb, pg = wrap_beta(previous[0]), float(previous[1])
        candidates.append(LayerResult(pb, pg, point(pb, pg), 0))
        evals += 1
        starts.append((pb, pg))

    db = math.pi / budget.beta_points / 2
    dg = (gamma_max - lo) / max(1, budget.gamma_points - 1) / 2 or 0.05
    for b0, g0 in starts if budget.refine_evals > 0 else ():
        x0 = np.array([b0, g0])
        simplex = np.array([x0, x0 + [db, 0.0], x0 + [0.0, dg]])
        res = minimize(
            lambda x: -point(x[0], x[1]),
            x0,
            method="Nelder-Mead",
            options={
                "maxfev": budget.refine_evals,
                "fatol": budget.ftol,
                "xatol": 1e-9,
                "initial_simplex": simplex,
            },
        )
        evals += int(res.nfev)
        candidates.append(LayerResult(wrap_beta(float(res.x[0])), float(res.x[1]),
                                      -float(res.fun), 0))
    best = _select(candidates, identity.value, previous, budget.tie_rel)
    return LayerResult(best.beta, best.gamma, best.value, evals)
