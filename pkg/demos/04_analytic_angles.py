"""
Angles without a quantum simulation
===================================

The analytic recursion treats the energy landscape as Gaussian with the
instance's variance, so it needs only n and sigma^2.  Angles found this
way (GMa) are then run on the real instance and compared with the constant
schedule beta = pi/2, gamma = -pi/E_est (GMc).
"""
from __future__ import annotations

import math

import numpy as np

from gmqaoa.evt import constant_angles, emin_estimate_quantile
from gmqaoa.harness import fold_angles
from gmqaoa.hubo import enumerate_spectrum, generate_sk, sigma_squared
from gmqaoa.analytic import preoptimize_gm_angles
from gmqaoa.simulator import run_circuit, success_probability

inst = generate_sk(8, 3, seed=2)
spec = enumerate_spectrum(inst)
s2 = sigma_squared(inst)
depth = 25

gma = preoptimize_gm_angles(inst.n, s2, depth)
gmc = constant_angles(emin_estimate_quantile(math.sqrt(s2), inst.n), depth)

for name, sched in (("GMa", gma), ("GMc", gmc)):
    print(name, "P(E_min) =", round(success_probability(run_circuit(spec, sched, "GM"), spec), 4))

# Mirror-image layers (beta, gamma) and (pi - beta, -gamma) are equally good;
# folding onto gamma >= 0 shows the beta profile settling away from pi/2.
betas, _ = fold_angles(gma.betas, gma.gammas)
print("folded beta, first layers:", np.round(betas[:5], 3).tolist())
print("folded beta, last layers: ", np.round(betas[-3:], 3).tolist())
