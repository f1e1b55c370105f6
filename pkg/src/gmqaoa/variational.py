"""Greedy layer-by-layer maximisation of P(E_min) on the exact simulator."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .evt import emin_estimate_quantile
from .hubo import Spectrum
from .search import OptBudget, maximize_layer
from .simulator import (
    ParamSchedule,
    StateVector,
    apply_cost,
    apply_mixer,
    check_mixer,
    init_uniform,
    prefix_states,
    success_probability,
)

__all__ = [
    "LayerwiseTrace",
    "layer_objective",
    "gamma_range",
    "optimize_layer",
    "optimize_layerwise",
]


@dataclass(frozen=True)
class LayerwiseTrace:
    mixer: str
    schedule: ParamSchedule
    p_success: tuple[float, ...]
    evals: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "mixer": self.mixer,
            "betas": list(self.schedule.betas),
            "gammas": list(self.schedule.gammas),
            "p_success": list(self.p_success),
            "evals": list(self.evals),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LayerwiseTrace":
        return cls(
            mixer=data["mixer"],
            schedule=ParamSchedule(tuple(data["betas"]), tuple(data["gammas"])),
            p_success=tuple(data["p_success"]),
            evals=tuple(data["evals"]),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)


def _hamming_weights_of(x: np.ndarray, n: int) -> np.ndarray:
    w = np.zeros_like(x)
    for j in range(n):
        w += (x >> j) & 1
    return w


def layer_objective(spectrum: Spectrum, state: StateVector, mixer: str):
    """Return ``f(betas, gammas)``: P(E_min) after one more layer on ``state``.

    The result has shape ``(len(betas), len(gammas))``.  Only ground-state
    amplitudes are formed: GM through the rank-one update, XM through the
    product form of the mixer's matrix elements.
    """
    mixer = check_mixer(mixer)
    energies = spectrum.energies
    ground = spectrum.ground_states
    psi = state.amps
    n = spectrum.n

    if mixer == "GM":
        def grid(betas, gammas):
            phased = np.exp(-1j * np.outer(gammas, energies)) * psi
            mean = phased.mean(axis=1)
            shift = np.exp(-2j * np.asarray(betas)) - 1.0
            amp = phased[None, :, ground] + shift[:, None, None] * mean[None, :, None]
            return np.sum(amp.real ** 2 + amp.imag ** 2, axis=2)

        def point(beta, gamma):
            phased = np.exp(-1j * gamma * energies) * psi
            amp = phased[ground] + (np.exp(-2j * beta) - 1.0) * phased.mean()
            return float(np.vdot(amp, amp).real)
        grid.point = point
        return grid

    # <z|U_X(beta)|y> = cos(beta)^(n-d) (-i sin(beta))^d with d the Hamming
    # distance, so each ground amplitude only needs the phased state summed
    # over distance shells around z.
    size = 2 ** n
    x = np.arange(size)
    shells = np.zeros((ground.size, n + 1, size))
    for row, z in enumerate(ground):
        shells[row, _hamming_weights_of(x ^ int(z), n), x] = 1.0
    shells = shells.reshape(ground.size * (n + 1), size).T.astype(complex)
    d = np.arange(n + 1)

    def grid(betas, gammas):
        phased = np.exp(-1j * np.outer(gammas, energies)) * psi
        by_shell = (phased @ shells).reshape(len(gammas), ground.size, n + 1)
        betas = np.asarray(betas, dtype=float)[:, None]
        kernel = np.cos(betas) ** (n - d) * (-1j * np.sin(betas)) ** d
        amp = np.einsum("bd,kgd->bkg", kernel, by_shell)
        return np.sum(amp.real ** 2 + amp.imag ** 2, axis=2)

    def point(beta, gamma):
        by_shell = (np.exp(-1j * gamma * energies) * psi) @ shells
        kernel = math.cos(beta) ** (n - d) * (-1j * math.sin(beta)) ** d
        amp = by_shell.reshape(ground.size, n + 1) @ kernel
        return float(np.vdot(amp, amp).real)
    grid.point = point
    return grid


def gamma_range(spectrum: Spectrum, mixer: str, scale: float = 4.0) -> float:
    """Half-width of the gamma search box, tied to the spectral energy scale."""
    sigma = math.sqrt(spectrum.second_moment)
    est = emin_estimate_quantile(sigma, spectrum.n) if spectrum.n >= 2 else 0.0
    gmax = scale * math.pi / abs(est) if est != 0 else math.pi
    if check_mixer(mixer) == "XM" and sigma > 0:
        gmax = min(gmax, 2 * math.pi / sigma)
    if spectrum.is_integral():
        # integer energies make every objective 2*pi periodic in gamma
        gmax = min(gmax, math.pi)
    return gmax


def optimize_layer(spectrum: Spectrum, prefix: ParamSchedule, mixer: str,
                   budget: OptBudget | None = None,
                   state: StateVector | None = None) -> tuple[float, float, float]:
    """Best (beta, gamma) for one new layer on top of the frozen ``prefix``.

    Returns ``(beta, gamma, p)`` where ``p`` is P(E_min) of the extended circuit.
    """
    beta, gamma, p, _, _ = _optimize_layer(spectrum, prefix, mixer, budget or OptBudget(), state)
    return beta, gamma, p


def _optimize_layer(spectrum, prefix, mixer, budget, state=None):
    mixer = check_mixer(mixer)
    if state is None:
        state = prefix_states(spectrum, prefix, mixer)[-1]
    grid = layer_objective(spectrum, state, mixer)
    previous = (prefix.betas[-1], prefix.gammas[-1]) if len(prefix) else None
    res = maximize_layer(grid, gamma_range(spectrum, mixer, budget.gamma_scale), budget,
                         gamma_nonneg=len(prefix) == 0, previous=previous)
    new_state = apply_mixer(apply_cost(state, spectrum, res.gamma), res.beta, mixer)
    return res.beta, res.gamma, success_probability(new_state, spectrum), res.evals, new_state


def optimize_layerwise(spectrum: Spectrum, mixer: str, max_depth: int,
                       budget: OptBudget | None = None) -> LayerwiseTrace:
    """Grow a schedule one optimised layer at a time, freezing earlier angles."""
    if max_depth < 1:
        raise ValueError(f"max_depth must be >= 1, got {max_depth}")
    mixer = check_mixer(mixer)
    budget = budget or OptBudget()
    schedule = ParamSchedule()
    state = init_uniform(spectrum.n)
    probs, evals = [], []
    for _ in range(max_depth):
        beta, gamma, p, count, state = _optimize_layer(spectrum, schedule, mixer, budget, state)
        schedule = schedule.extend(beta, gamma)
        probs.append(p)
        evals.append(count)
    return LayerwiseTrace(mixer, schedule, tuple(probs), tuple(evals))
