"""Energy-resolved GM-QAOA amplitudes under a Gaussian energy density.

After k layers every basis state with energy E carries the amplitude

    Psi_k(E) = A_k + sum_{j=1..k} A_{k-j} exp(-i (gamma_k + ... + gamma_{k-j+1}) E),

with A_0 = 2^{-n/2} and

    A_k = (exp(-2i beta_k) - 1) sum_{i=1..k} damping_i(k) A_{k-i}.

The damping of the i-th term is exp(-sigma^2/2 * Q) where ``Q`` is the sum of
the last i squared gammas (``mode="paper"``) or the square of the sum of the
last i gammas (``mode="exact-cf"``, the Gaussian characteristic function of
the accumulated phase).  The two coincide whenever at most one gamma is
nonzero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .evt import emin_estimate_quantile
from .search import OptBudget, maximize_layer
from .simulator import ParamSchedule

__all__ = [
    "MODES",
    "AnalyticState",
    "initial_state",
    "analytic_step",
    "analytic_amplitude",
    "analytic_success_objective",
    "analytic_layer_objective",
    "preoptimize_gm_angles",
    "schedule_record",
]

MODES = ("paper", "exact-cf")


def _check_mode(mode: str) -> str:
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    return mode


@dataclass(frozen=True)
class AnalyticState:
    n: int
    sigma2: float
    a_coeffs: tuple[complex, ...]
    gammas_applied: tuple[float, ...] = ()
    betas_applied: tuple[float, ...] = ()

    @property
    def depth(self) -> int:
        return len(self.gammas_applied)

    def tail_sums(self) -> tuple[np.ndarray, np.ndarray]:
        """Sums of the last m applied gammas and of their squares, m = 0..k."""
        rev = np.array(self.gammas_applied[::-1], dtype=float)
        lin = np.concatenate(([0.0], np.cumsum(rev)))
        sq = np.concatenate(([0.0], np.cumsum(rev ** 2)))
        return lin, sq


def initial_state(n: int, sigma2: float) -> AnalyticState:
    if sigma2 < 0:
        raise ValueError(f"sigma2 must be non-negative, got {sigma2}")
    return AnalyticState(n=n, sigma2=float(sigma2), a_coeffs=(complex(2.0 ** (-n / 2)),))


def _damping(state: AnalyticState, gammas: np.ndarray, mode: str) -> np.ndarray:
    # rows: candidate new gamma; columns: m = number of earlier layers in the phase
    lin, sq = state.tail_sums()
    g = np.asarray(gammas, dtype=float)[:, None]
    if mode == "paper":
        q = g ** 2 + sq[None, :]
    else:
        q = (g + lin[None, :]) ** 2
    return np.exp(-0.5 * state.sigma2 * q)


def analytic_step(state: AnalyticState, beta: float, gamma: float,
                  mode: str = "paper") -> AnalyticState:
    """Append one layer (cost angle ``gamma``, mixer angle ``beta``)."""
    _check_mode(mode)
    # A_{k-m} for m = 0..k, newest first
    prev = np.array(state.a_coeffs[::-1])
    damp = _damping(state, np.array([gamma]), mode)[0]
    a_new = (np.exp(-2j * beta) - 1.0) * np.dot(damp, prev)
    return AnalyticState(
        n=state.n,
        sigma2=state.sigma2,
        a_coeffs=state.a_coeffs + (complex(a_new),),
        gammas_applied=state.gammas_applied + (float(gamma),),
        betas_applied=state.betas_applied + (float(beta),),
    )


def analytic_amplitude(state: AnalyticState, e) -> complex | np.ndarray:
    """Psi_k(E) = A_k + B_k(E); ``e`` may be a scalar or an array of energies."""
    k = state.depth
    lin, _ = state.tail_sums()
    a = np.array(state.a_coeffs)
    e_arr = np.asarray(e, dtype=float)
    # B_k(E) = sum_j A_{k-j} exp(-i * (sum of last j gammas) * E)
    phases = np.exp(-1j * np.multiply.outer(e_arr, lin[1:]))
    out = a[k] + phases @ a[k - 1::-1] if k else np.full(e_arr.shape, a[0])
    return complex(out) if np.ndim(out) == 0 else out


def analytic_success_objective(state: AnalyticState, e_min_est: float) -> float:
    return float(abs(analytic_amplitude(state, e_min_est)) ** 2)


def analytic_layer_objective(state: AnalyticState, e_target: float, mode: str = "paper"):
    """Return ``f(betas, gammas)``: |Psi_{k+1}(e_target)|^2 over a grid of new angles."""
    _check_mode(mode)
    lin, _ = state.tail_sums()
    prev = np.array(state.a_coeffs[::-1])

    def grid(betas, gammas):
        gammas = np.asarray(gammas, dtype=float)
        s = _damping(state, gammas, mode) @ prev
        b = np.exp(-1j * (gammas[:, None] + lin[None, :]) * e_target) @ prev
        shift = np.exp(-2j * np.asarray(betas)) - 1.0
        amp = shift[:, None] * s[None, :] + b[None, :]
        return amp.real ** 2 + amp.imag ** 2
    return grid


def preoptimize_gm_angles(n: int, sigma2: float, depth: int,
                          budget: OptBudget | None = None, mode: str = "paper",
                          e_min_est: float | None = None) -> ParamSchedule:
    """Layer-by-layer maximisation of |Psi_k(E_min_est)|^2, with no circuit simulation.

    The target defaults to the Gumbel-mode estimate ``sqrt(sigma2) *
    inv_norm_cdf(2**-n)``.
    """
    _check_mode(mode)
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    if n < 2:
        raise ValueError("the minimum-energy estimate needs n >= 2")
    if not sigma2 > 0:
        raise ValueError(f"sigma2 must be positive, got {sigma2}")
    budget = budget or OptBudget()
    if e_min_est is None:
        e_min_est = emin_estimate_quantile(math.sqrt(sigma2), n)
    gamma_max = budget.gamma_scale * math.pi / abs(e_min_est)
    state = initial_state(n, sigma2)
    for k in range(depth):
        grid = analytic_layer_objective(state, e_min_est, mode)
        previous = (state.betas_applied[-1], state.gammas_applied[-1]) if k else None
        res = maximize_layer(grid, gamma_max, budget, gamma_nonneg=k == 0, previous=previous)
        state = analytic_step(state, res.beta, res.gamma, mode)
    return ParamSchedule(state.betas_applied, state.gammas_applied)


def schedule_record(schedule: ParamSchedule, n: int, sigma2: float, mode: str,
                    e_min_est: float | None = None) -> dict:
    """JSON-ready description of a pre-optimised schedule."""
    if e_min_est is None:
        e_min_est = emin_estimate_quantile(math.sqrt(sigma2), n)
    analytic = initial_state(n, sigma2)
    for b, g in zip(schedule.betas, schedule.gammas):
        analytic = analytic_step(analytic, b, g, mode)
    return {
        "mixer": "GM",
        "source": "analytic",
        "mode": mode,
        "n": n,
        "sigma2": sigma2,
        "e_min_est": e_min_est,
        "betas": list(schedule.betas),
        "gammas": list(schedule.gammas),
        "objective": analytic_success_objective(analytic, e_min_est),
    }
