"""HUBO instances in spin form, energy evaluation and the random ensembles.

Basis-state convention: bit ``i`` of the integer ``z`` encodes spin ``i``,
with bit 0 meaning s_i = +1 and bit 1 meaning s_i = -1.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .evt import inv_norm_cdf

__all__ = [
    "CapacityError",
    "HuboTerm",
    "HuboInstance",
    "Spectrum",
    "energy",
    "energies_from_terms",
    "enumerate_spectrum",
    "sigma_squared",
    "instance_rng",
    "generate_sk",
    "generate_maxcut_hypergraph",
    "load_instance",
    "save_instance",
]

MAX_QUBITS = 24


class CapacityError(ValueError):
    """Raised when a problem is too large to enumerate or simulate."""


@dataclass(frozen=True)
class HuboTerm:
    sites: tuple[int, ...]
    coeff: float

    def __post_init__(self):
        sites = tuple(int(s) for s in self.sites)
        if not sites:
            raise ValueError("a term needs at least one site")
        if any(b <= a for a, b in zip(sites, sites[1:])):
            raise ValueError(f"sites must be strictly increasing, got {sites}")
        object.__setattr__(self, "sites", sites)
        object.__setattr__(self, "coeff", float(self.coeff))

    @property
    def mask(self) -> int:
        m = 0
        for s in self.sites:
            m |= 1 << s
        return m


@dataclass(frozen=True)
class HuboInstance:
    """A sparse polynomial over ``n`` spins with interaction order at most ``order``."""

    n: int
    order: int
    terms: tuple[HuboTerm, ...]
    label: str = ""

    def __post_init__(self):
        terms = tuple(t if isinstance(t, HuboTerm) else HuboTerm(*t) for t in self.terms)
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if not 1 <= self.order <= self.n:
            raise ValueError(f"order must lie in [1, n], got {self.order}")
        seen = set()
        for t in terms:
            if t.sites[0] < 0 or t.sites[-1] >= self.n:
                raise ValueError(f"term sites {t.sites} out of range for n={self.n}")
            if len(t.sites) > self.order:
                raise ValueError(f"term {t.sites} exceeds order {self.order}")
            if t.sites in seen:
                raise ValueError(f"duplicate term {t.sites}; merge coefficients first")
            seen.add(t.sites)
        object.__setattr__(self, "terms", terms)

    @classmethod
    def from_dict(cls, data: dict) -> "HuboInstance":
        terms = tuple(HuboTerm(tuple(t["sites"]), t["coeff"]) for t in data["terms"])
        return cls(n=int(data["n"]), order=int(data["order"]), terms=terms,
                   label=str(data.get("label", "")))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "order": self.order,
            "label": self.label,
            "terms": [{"sites": list(t.sites), "coeff": t.coeff} for t in self.terms],
        }


def save_instance(instance: HuboInstance, path) -> None:
    # json emits floats with repr(), the shortest round-trip form
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(instance.to_dict(), fh, indent=1)
        fh.write("\n")


def load_instance(path) -> HuboInstance:
    with open(path, encoding="utf-8") as fh:
        return HuboInstance.from_dict(json.load(fh))


def energy(instance: HuboInstance, z: int) -> float:
    """Energy of basis state ``z`` by direct evaluation of every monomial."""
    if not 0 <= z < 2 ** instance.n:
        raise ValueError(f"basis index {z} out of range for n={instance.n}")
    total = 0.0
    for t in instance.terms:
        sign = 1
        for i in t.sites:
            if (z >> i) & 1:
                sign = -sign
        total += t.coeff * sign
    return total


def _walsh_hadamard(vec: np.ndarray) -> np.ndarray:
    """Unnormalised fast Walsh-Hadamard transform along the last axis."""
    out = np.array(vec, copy=True)
    size = out.shape[-1]
    n = size.bit_length() - 1
    lead = out.shape[:-1]
    for j in range(n):
        view = out.reshape(*lead, size >> (j + 1), 2, 1 << j)
        a = view[..., 0, :].copy()
        b = view[..., 1, :]
        view[..., 0, :] += b
        view[..., 1, :] = a - b
    return out


def energies_from_terms(instance: HuboInstance) -> np.ndarray:
    """All 2^n energies at once.

    The energy is a Walsh expansion, E(z) = sum_m J_m (-1)^popcount(z & m),
    so the diagonal is the Hadamard transform of the coefficient table
    indexed by site mask.
    """
    n = instance.n
    if n > MAX_QUBITS:
        raise CapacityError(f"n={n} exceeds the enumeration limit {MAX_QUBITS}")
    table = np.zeros(2 ** n)
    for t in instance.terms:
        table[t.mask] += t.coeff
    return _walsh_hadamard(table)


@dataclass(frozen=True)
class Spectrum:
    """Energy table over all basis states, grouped into degenerate levels."""

    n: int
    energies: np.ndarray
    group_tol: float
    level_energies: np.ndarray = field(repr=False)
    level_members: tuple[np.ndarray, ...] = field(repr=False)

    @classmethod
    def from_energies(cls, energies, group_tol: float | None = None) -> "Spectrum":
        """Build a spectrum from an explicit diagonal (also the override hook)."""
        energies = np.array(energies, dtype=float)
        size = energies.shape[0]
        n = size.bit_length() - 1
        if energies.ndim != 1 or size != 2 ** n or n < 1:
            raise ValueError("energies must be a 1-D table of length 2^n, n >= 1")
        if group_tol is None:
            group_tol = 1e-9 * max(1.0, abs(float(energies.min())))
        if group_tol < 0:
            raise ValueError("group_tol must be non-negative")
        order = np.argsort(energies, kind="stable")
        ordered = energies[order]
        cuts = np.nonzero(np.diff(ordered) > group_tol)[0] + 1
        members = tuple(np.sort(chunk) for chunk in np.split(order, cuts))
        level_e = np.array([ordered[s] for s in np.concatenate(([0], cuts))])
        energies.setflags(write=False)
        return cls(n=n, energies=energies, group_tol=float(group_tol),
                   level_energies=level_e, level_members=members)

    @property
    def e_min(self) -> float:
        return float(self.level_energies[0])

    @property
    def ground_states(self) -> np.ndarray:
        return self.level_members[0]

    @property
    def levels(self) -> list[tuple[float, np.ndarray]]:
        return list(zip(self.level_energies.tolist(), self.level_members))

    @property
    def second_moment(self) -> float:
        """Mean of E^2 over basis states; equals the sum of squared couplings for HUBO."""
        return float(np.mean(self.energies ** 2))

    def is_integral(self) -> bool:
        return bool(np.all(self.energies == np.round(self.energies)))


def enumerate_spectrum(instance: HuboInstance, group_tol: float | None = None,
                       max_qubits: int = MAX_QUBITS) -> Spectrum:
    if instance.n > max_qubits:
        raise CapacityError(f"n={instance.n} exceeds the enumeration limit {max_qubits}")
    return Spectrum.from_energies(energies_from_terms(instance), group_tol)


def sigma_squared(instance: HuboInstance) -> float:
    """Spectral variance: the sum of squared coefficients."""
    return float(sum(t.coeff ** 2 for t in instance.terms))


def instance_rng(seed: int, index: int = 0, *key: int) -> np.random.Generator:
    """PCG64 stream for one ensemble member.

    ``(seed, index, *key)`` is mixed by numpy's ``SeedSequence`` hash, so
    member streams are independent and stable across platforms.
    """
    entropy = [int(seed), int(index), *(int(k) for k in key)]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


def _uniform_open(rng: np.random.Generator, size: int) -> np.ndarray:
    # 53-bit midpoints, strictly inside (0, 1)
    k = rng.integers(0, 2 ** 53, size=size, dtype=np.uint64)
    return (k.astype(np.float64) + 0.5) / 2.0 ** 53


def _subsets(n: int, order: int) -> Iterable[tuple[int, ...]]:
    for d in range(2, order + 1):
        yield from itertools.combinations(range(n), d)


def _check_order(n: int, order: int) -> None:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 2 <= order <= n:
        raise ValueError(f"order must satisfy 2 <= D <= n, got D={order}, n={n}")


def generate_sk(n: int, order: int, seed: int, index: int = 0) -> HuboInstance:
    """Higher-order SK instance: one N(0, 1) coupling per subset of size 2..D.

    Normal draws come from inverse-CDF sampling of 53-bit uniforms.
    """
    _check_order(n, order)
    subsets = list(_subsets(n, order))
    rng = instance_rng(seed, index, n, order)
    u = _uniform_open(rng, len(subsets))
    terms = tuple(HuboTerm(s, inv_norm_cdf(p)) for s, p in zip(subsets, u))
    return HuboInstance(n=n, order=order, terms=terms,
                        label=f"sk n={n} D={order} seed={seed} index={index}")


def generate_maxcut_hypergraph(n: int, order: int, seed: int, index: int = 0,
                               maxcut_sign: int = 1) -> HuboInstance:
    """Random hypergraph: each subset of size 2..D is an edge with probability 1/2."""
    _check_order(n, order)
    if maxcut_sign not in (1, -1):
        raise ValueError("maxcut_sign must be +1 or -1")
    subsets = list(_subsets(n, order))
    rng = instance_rng(seed, index, n, order)
    keep = rng.integers(0, 2, size=len(subsets))
    terms = tuple(HuboTerm(s, float(maxcut_sign)) for s, k in zip(subsets, keep) if k)
    return HuboInstance(n=n, order=order, terms=terms,
                        label=f"maxcut n={n} D={order} seed={seed} index={index}")


def dense_hamiltonian_diagonal(instance: HuboInstance) -> np.ndarray:
    """Diagonal of the cost Hamiltonian built from explicit Kronecker products.

    Exponential in memory; intended for small-n cross-checks only.
    """
    n = instance.n
    z = np.array([1.0, -1.0])
    one = np.ones(2)
    diag = np.zeros(2 ** n)
    for t in instance.terms:
        factor = np.ones(1)
        # qubit n-1 is the most significant bit, so it comes first in the product
        for q in reversed(range(n)):
            factor = np.kron(factor, z if q in t.sites else one)
        diag += t.coeff * factor
    return diag
