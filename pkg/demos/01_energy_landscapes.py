"""
Random HUBO energy landscapes
=============================

Generate a Sherrington-Kirkpatrick style instance and a hypergraph Max-Cut
instance, enumerate their spectra, and check the two moment identities the
rest of the package leans on.
"""
from __future__ import annotations

import math

import numpy as np

from gmqaoa.evt import emin_estimate_quantile
from gmqaoa.hubo import enumerate_spectrum, generate_maxcut_hypergraph, generate_sk, sigma_squared

# An order-3 SK instance on 8 spins has a Gaussian coupling on every subset
# of one to three sites.
sk = generate_sk(8, 3, seed=1)
print(sk.label, "with", len(sk.terms), "terms")

spec = enumerate_spectrum(sk)
print("ground energy", spec.e_min, "degeneracy", spec.ground_states.size)

# Every term is traceless, so the energies average to zero, and the squared
# couplings add up to the spectral variance.
print("mean energy  ", spec.energies.mean())
print("mean E^2     ", np.mean(spec.energies ** 2), "vs sigma^2", sigma_squared(sk))

# Extreme-value theory guesses the minimum from sigma and n alone.
est = emin_estimate_quantile(math.sqrt(sigma_squared(sk)), sk.n)
print("estimated minimum", est)

# Max-Cut instances have integer energies, so the spectrum has few levels.
mc = generate_maxcut_hypergraph(8, 3, seed=1)
mspec = enumerate_spectrum(mc)
print(mc.label, "lowest levels (energy, count):",
      [(e, len(members)) for e, members in mspec.levels[:5]])
