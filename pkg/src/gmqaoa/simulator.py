"""Exact statevector simulation of XM- and GM-QAOA circuits.

Both mixers are applied algebraically in O(2^n) per layer: the Grover
mixer as a rank-one update along the uniform superposition, the
transverse-field mixer as one 2x2 butterfly per qubit.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .hubo import MAX_QUBITS, CapacityError, HuboInstance, Spectrum, enumerate_spectrum

__all__ = [
    "MIXERS",
    "StateVector",
    "ParamSchedule",
    "init_uniform",
    "apply_cost",
    "apply_grover_mixer",
    "apply_x_mixer",
    "apply_mixer",
    "run_circuit",
    "prefix_states",
    "success_probability",
    "energy_distribution",
    "needle_spectrum",
    "dump_amplitudes_csv",
]

MIXERS = ("XM", "GM")


def check_mixer(mixer: str) -> str:
    m = str(mixer).upper()
    if m not in MIXERS:
        raise ValueError(f"unknown mixer {mixer!r}; expected one of {MIXERS}")
    return m


@dataclass(frozen=True)
class StateVector:
    n: int
    amps: np.ndarray

    def __post_init__(self):
        if self.amps.shape != (2 ** self.n,):
            raise ValueError(f"expected {2 ** self.n} amplitudes, got {self.amps.shape}")

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def norm(self) -> float:
        return float(np.sqrt(np.sum(self.probabilities)))


@dataclass(frozen=True)
class ParamSchedule:
    """Paired mixer angles ``betas`` and cost angles ``gammas``, one pair per layer."""

    betas: tuple[float, ...] = ()
    gammas: tuple[float, ...] = ()

    def __post_init__(self):
        betas = tuple(float(b) for b in self.betas)
        gammas = tuple(float(g) for g in self.gammas)
        if len(betas) != len(gammas):
            raise ValueError(f"{len(betas)} betas but {len(gammas)} gammas")
        object.__setattr__(self, "betas", betas)
        object.__setattr__(self, "gammas", gammas)

    def __len__(self) -> int:
        return len(self.betas)

    @property
    def depth(self) -> int:
        return len(self.betas)

    def prefix(self, k: int) -> "ParamSchedule":
        return ParamSchedule(self.betas[:k], self.gammas[:k])

    def extend(self, beta: float, gamma: float) -> "ParamSchedule":
        return ParamSchedule(self.betas + (beta,), self.gammas + (gamma,))

    def to_dict(self) -> dict:
        return {"betas": list(self.betas), "gammas": list(self.gammas)}


def init_uniform(n: int, max_qubits: int = MAX_QUBITS) -> StateVector:
    if not 1 <= n <= max_qubits:
        raise CapacityError(f"n={n} outside the simulator range [1, {max_qubits}]")
    size = 2 ** n
    return StateVector(n, np.full(size, 1.0 / math.sqrt(size), dtype=complex))


def _check_dims(state: StateVector, spectrum: Spectrum) -> None:
    if state.n != spectrum.n:
        raise ValueError(f"state has n={state.n} but spectrum has n={spectrum.n}")


def apply_cost(state: StateVector, spectrum: Spectrum, gamma: float) -> StateVector:
    """Multiply each amplitude by exp(-i gamma E(z))."""
    _check_dims(state, spectrum)
    return StateVector(state.n, np.exp(-1j * gamma * spectrum.energies) * state.amps)


def apply_grover_mixer(state: StateVector, beta: float) -> StateVector:
    """Apply I + (exp(-2i beta) - 1)|sym><sym|."""
    # <sym|psi> * 2^{-n/2} is just the mean amplitude
    shift = (np.exp(-2j * beta) - 1.0) * state.amps.mean()
    return StateVector(state.n, state.amps + shift)


def apply_x_mixer(state: StateVector, beta: float) -> StateVector:
    """Apply exp(-i beta X_j) on every qubit."""
    c, s = math.cos(beta), -1j * math.sin(beta)
    out = state.amps.copy()
    n = state.n
    for j in range(n):
        view = out.reshape(2 ** (n - 1 - j), 2, 2 ** j)
        a0 = view[:, 0, :].copy()
        a1 = view[:, 1, :]
        view[:, 0, :] = c * a0 + s * a1
        view[:, 1, :] = s * a0 + c * a1
    return StateVector(n, out)


def apply_mixer(state: StateVector, beta: float, mixer: str) -> StateVector:
    if check_mixer(mixer) == "GM":
        return apply_grover_mixer(state, beta)
    return apply_x_mixer(state, beta)


def _as_spectrum(problem: HuboInstance | Spectrum) -> Spectrum:
    if isinstance(problem, Spectrum):
        return problem
    return enumerate_spectrum(problem)


def run_circuit(problem: HuboInstance | Spectrum, schedule: ParamSchedule,
                mixer: str) -> StateVector:
    """Alternate cost and mixer layers starting from the uniform superposition."""
    return prefix_states(problem, schedule, mixer)[-1]


def prefix_states(problem: HuboInstance | Spectrum, schedule: ParamSchedule,
                  mixer: str) -> list[StateVector]:
    """States after 0, 1, ..., p layers of ``schedule``."""
    mixer = check_mixer(mixer)
    spectrum = _as_spectrum(problem)
    state = init_uniform(spectrum.n)
    states = [state]
    for beta, gamma in zip(schedule.betas, schedule.gammas):
        state = apply_mixer(apply_cost(state, spectrum, gamma), beta, mixer)
        states.append(state)
    return states


def success_probability(state: StateVector, spectrum: Spectrum) -> float:
    """Probability mass on the ground level, P(E_min)."""
    _check_dims(state, spectrum)
    return float(np.sum(np.abs(state.amps[spectrum.ground_states]) ** 2))


def energy_distribution(state: StateVector, spectrum: Spectrum) -> list[tuple[float, float]]:
    _check_dims(state, spectrum)
    probs = state.probabilities
    return [(e, float(probs[members].sum())) for e, members in spectrum.levels]


def needle_spectrum(n: int, marked: int = 0) -> Spectrum:
    """Energy -1 on one marked state and 0 elsewhere (Grover search)."""
    energies = np.zeros(2 ** n)
    energies[marked] = -1.0
    return Spectrum.from_energies(energies)


def dump_amplitudes_csv(state: StateVector, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["z", "re", "im", "prob"])
        for z, a in enumerate(state.amps):
            writer.writerow([z, repr(float(a.real)), repr(float(a.imag)), repr(float(abs(a) ** 2))])
