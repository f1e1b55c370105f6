"""Ensemble experiments: success-probability curves and critical depths.

Methods
-------
XM, GM
    Layer-wise optimised transverse-field and Grover mixers.
GMa
    Grover mixer with angles from the analytic pre-optimiser.
GMc
    Grover mixer with the constant schedule beta = pi/2, gamma = -pi/E_est.

A cell is one (problem, n, D) combination.  Instances are independent and
each is a pure function of the configuration, so cells can be mapped over
worker processes without affecting the output.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .analytic import MODES, preoptimize_gm_angles
from .evt import constant_angles, emin_estimate_quantile
from .hubo import enumerate_spectrum, generate_maxcut_hypergraph, generate_sk, sigma_squared
from .search import OptBudget
from .simulator import ParamSchedule, prefix_states, success_probability
from .variational import optimize_layerwise

__all__ = [
    "PROBLEMS",
    "METHODS",
    "ExperimentConfig",
    "CurveSet",
    "run_instance",
    "run_cell",
    "run_sweep",
    "xm_plateau",
    "critical_depth",
    "critical_summary",
    "aggregate_critical",
    "fold_angles",
    "results_json",
    "flat_csv",
    "fig2_csv",
]

PROBLEMS = ("SK", "MaxCutHypergraph")
METHODS = ("XM", "GM", "GMa", "GMc")


@dataclass(frozen=True)
class ExperimentConfig:
    problem: str
    n_list: tuple[int, ...]
    d_list: tuple[int, ...]
    instances: int = 100
    max_depth: int = 64
    methods: tuple[str, ...] = METHODS
    seed: int = 0
    budgets: dict = field(default_factory=dict)
    analytic_mode: str = "paper"
    maxcut_sign: int = 1
    workers: int = 1

    def __post_init__(self):
        if self.problem not in PROBLEMS:
            raise ValueError(f"problem must be one of {PROBLEMS}, got {self.problem!r}")
        object.__setattr__(self, "n_list", tuple(int(n) for n in self.n_list))
        object.__setattr__(self, "d_list", tuple(int(d) for d in self.d_list))
        object.__setattr__(self, "methods", tuple(self.methods))
        if self.instances < 1 or self.max_depth < 1:
            raise ValueError("instances and max_depth must be >= 1")
        if not self.n_list or min(self.n_list) < 2:
            raise ValueError("n_list entries must be >= 2")
        if not self.d_list or min(self.d_list) < 2:
            raise ValueError("d_list entries must be >= 2")
        bad = set(self.methods) - set(METHODS)
        if bad or not self.methods:
            raise ValueError(f"unknown methods {sorted(bad)}; choose from {METHODS}")
        if self.analytic_mode not in MODES:
            raise ValueError(f"analytic_mode must be one of {MODES}")
        unknown = set(self.budgets) - set(METHODS)
        if unknown:
            raise ValueError(f"budgets given for unknown methods {sorted(unknown)}")
        budgets = {m: b if isinstance(b, OptBudget) else OptBudget.from_dict(b)
                   for m, b in self.budgets.items()}
        object.__setattr__(self, "budgets", budgets)

    def budget(self, method: str) -> OptBudget:
        return self.budgets.get(method, OptBudget())

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        data = dict(data)
        if "seeds" in data and "seed" not in data:
            data["seed"] = data.pop("seeds")
        return cls(**data)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["n_list"] = list(self.n_list)
        out["d_list"] = list(self.d_list)
        out["methods"] = list(self.methods)
        out["budgets"] = {m: b.to_dict() for m, b in sorted(self.budgets.items())}
        return out


@dataclass
class CurveSet:
    """Per-method curves for one cell; rows of ``per_instance`` are instances."""

    per_instance: dict[str, np.ndarray]

    @property
    def mean(self) -> dict[str, np.ndarray]:
        return {m: p.mean(axis=0) for m, p in self.per_instance.items()}

    @property
    def std(self) -> dict[str, np.ndarray]:
        # population standard deviation over instances
        return {m: p.std(axis=0) for m, p in self.per_instance.items()}


def _generate(config: ExperimentConfig, n: int, d: int, index: int):
    if config.problem == "SK":
        return generate_sk(n, d, config.seed, index)
    return generate_maxcut_hypergraph(n, d, config.seed, index, config.maxcut_sign)


def _evaluate_prefixes(spectrum, schedule: ParamSchedule) -> list[float]:
    states = prefix_states(spectrum, schedule, "GM")
    return [success_probability(s, spectrum) for s in states[1:]]


def run_instance(config: ExperimentConfig, n: int, d: int, index: int) -> dict:
    """All enabled methods on one generated instance."""
    instance = _generate(config, n, d, index)
    spectrum = enumerate_spectrum(instance)
    sigma2 = sigma_squared(instance)
    e_est = emin_estimate_quantile(math.sqrt(sigma2), n)
    record = {
        "index": index,
        "label": instance.label,
        "e_min": spectrum.e_min,
        "degeneracy": int(spectrum.ground_states.size),
        "sigma2": sigma2,
        "e_min_est": e_est,
        "curves": {},
        "schedules": {},
        "evals": {},
    }
    depth = config.max_depth
    for method in config.methods:
        if method in ("XM", "GM"):
            trace = optimize_layerwise(spectrum, method, depth, config.budget(method))
            curve, schedule = list(trace.p_success), trace.schedule
            record["evals"][method] = list(trace.evals)
        elif method == "GMa":
            schedule = preoptimize_gm_angles(n, sigma2, depth, config.budget(method),
                                             config.analytic_mode)
            curve = _evaluate_prefixes(spectrum, schedule)
        else:
            schedule = constant_angles(e_est, depth)
            curve = _evaluate_prefixes(spectrum, schedule)
        record["curves"][method] = curve
        record["schedules"][method] = schedule.to_dict()
    return record


def _instance_task(args):
    return run_instance(*args)


def run_cell(config: ExperimentConfig, n: int, d: int) -> dict:
    """Run every instance of one (n, D) cell and attach aggregates."""
    if n not in config.n_list or d not in config.d_list:
        raise ValueError(f"cell (n={n}, D={d}) is not in the configured grid")
    if d > n:
        raise ValueError(f"interaction order D={d} exceeds n={n}")
    tasks = [(config, n, d, i) for i in range(config.instances)]
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            records = list(pool.map(_instance_task, tasks))
    else:
        records = [run_instance(*t) for t in tasks]
    return summarize_cell(config.problem, n, d, records)


def curves_of(cell: dict) -> CurveSet:
    methods = cell["instances"][0]["curves"].keys()
    return CurveSet({m: np.array([r["curves"][m] for r in cell["instances"]]) for m in methods})


def summarize_cell(problem: str, n: int, d: int, records: list[dict]) -> dict:
    cell = {"problem": problem, "n": n, "D": d, "instances": records}
    cs = curves_of(cell)
    cell["curves"] = {m: {"mean": cs.mean[m].tolist(), "std": cs.std[m].tolist()}
                      for m in cs.per_instance}
    cell["critical"] = {}
    if "XM" in cs.per_instance:
        plateaus = [xm_plateau(c) for c in cs.per_instance["XM"]]
        mean_plateau = xm_plateau(cs.mean["XM"])
        for m in ("GM", "GMa"):
            if m in cs.per_instance:
                summary = critical_summary(cs.per_instance[m], plateaus)
                summary["mean_curve_depth"] = critical_depth(cs.mean[m], mean_plateau)
                cell["critical"][m] = summary
    return cell


def xm_plateau(curve: Sequence[float]) -> float:
    """Plateau level of an XM curve: its maximum over all computed depths."""
    if len(curve) == 0:
        raise ValueError("empty curve")
    return float(np.max(curve))


def critical_depth(gm_curve: Sequence[float], plateau: float) -> int | None:
    """First 1-based depth where the curve strictly exceeds ``plateau``, or None."""
    for k, p in enumerate(gm_curve, start=1):
        if p > plateau:
            return k
    return None


def critical_summary(curves: np.ndarray, plateaus: Sequence[float]) -> dict:
    depths = [critical_depth(c, q) for c, q in zip(curves, plateaus)]
    p_at = [float(c[k - 1]) if k is not None else None for c, k in zip(curves, depths)]
    found = [k for k in depths if k is not None]
    p_found = [p for p in p_at if p is not None]
    return {
        "per_instance": depths,
        "p_at_critical": p_at,
        "mean": float(np.mean(found)) if found else None,
        "std": float(np.std(found)) if found else None,
        "absent": len(depths) - len(found),
        "mean_p": float(np.mean(p_found)) if p_found else None,
        "std_p": float(np.std(p_found)) if p_found else None,
    }


def aggregate_critical(cells: Sequence[dict], method: str = "GM") -> list[dict]:
    """Critical-depth table over n for cells sharing one D.

    Instances that never cross the plateau are left out of the means and
    counted in ``absent``.
    """
    rows = []
    for cell in sorted(cells, key=lambda c: c["n"]):
        if method not in cell["critical"]:
            raise KeyError(f"cell n={cell['n']} D={cell['D']} has no {method} vs XM data")
        s = cell["critical"][method]
        rows.append({"n": cell["n"], "D": cell["D"], "mean_depth": s["mean"], "std_depth": s["std"],
                     "absent": s["absent"], "mean_p": s["mean_p"], "std_p": s["std_p"]})
    return rows


def fold_angles(betas: Sequence[float], gammas: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    """Map each layer onto the gamma >= 0 branch via (beta, gamma) -> (pi - beta, -gamma).

    The two branches are mirror images under complex conjugation; folding
    makes angle schedules from different instances comparable.
    """
    b = np.mod(np.asarray(betas, dtype=float), math.pi)
    g = np.asarray(gammas, dtype=float)
    neg = g < 0
    return np.where(neg, math.pi - b, b), np.abs(g)


def run_sweep(config: ExperimentConfig) -> list[dict]:
    return [run_cell(config, n, d) for d in config.d_list for n in config.n_list if d <= n]


def _dumps(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True, allow_nan=False) + "\n"


def results_json(config: ExperimentConfig, cells: list[dict], config_text: str | None = None) -> str:
    return _dumps({
        "config": config.to_dict(),
        "config_text": config_text,
        "cells": cells,
    })


def _csv(header: list[str], rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(["" if v is None else repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


FLAT_HEADER = ["problem", "D", "n", "instance", "method", "depth", "p_success"]
CURVE_HEADER = ["problem", "D", "n", "method", "depth", "mean", "std"]


def flat_csv(cells: list[dict]) -> str:
    rows = []
    for cell in cells:
        for rec in cell["instances"]:
            for m, curve in rec["curves"].items():
                for k, p in enumerate(curve, start=1):
                    rows.append([cell["problem"], cell["D"], cell["n"], rec["index"], m, k, float(p)])
    return _csv(FLAT_HEADER, rows)


def curve_rows(cells: list[dict], methods: Sequence[str]) -> list[list]:
    rows = []
    for cell in cells:
        for m in methods:
            if m not in cell["curves"]:
                continue
            c = cell["curves"][m]
            for k, (mu, sd) in enumerate(zip(c["mean"], c["std"]), start=1):
                rows.append([cell["problem"], cell["D"], cell["n"], m, k, float(mu), float(sd)])
    return rows


def fig2_csv(cells: list[dict]) -> str:
    return _csv(CURVE_HEADER, curve_rows(cells, ("XM", "GM")))
