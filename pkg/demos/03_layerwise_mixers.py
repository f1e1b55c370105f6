"""
Layer-wise optimisation with two mixers
=======================================

Optimise the transverse-field mixer (XM) and the Grover mixer (GM) one
layer at a time on the same instance, and find the depth where GM first
beats the best XM value.
"""
from __future__ import annotations

from gmqaoa.harness import critical_depth, xm_plateau
from gmqaoa.hubo import enumerate_spectrum, generate_sk
from gmqaoa.variational import optimize_layerwise

spec = enumerate_spectrum(generate_sk(6, 2, seed=0))
depth = 20

xm = optimize_layerwise(spec, "XM", depth)
gm = optimize_layerwise(spec, "GM", depth)

for k in range(0, depth, 4):
    print(f"depth {k + 1:2d}  XM {xm.p_success[k]:.3f}  GM {gm.p_success[k]:.3f}")

# Earlier layers are frozen, so the GM curve can only go up.
plateau = xm_plateau(xm.p_success)
print("XM plateau", round(plateau, 3), "GM critical depth", critical_depth(gm.p_success, plateau))
