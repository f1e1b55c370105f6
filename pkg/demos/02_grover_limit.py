"""
Grover search as a special case
===============================

With a needle landscape (one marked state at energy -1), a Grover-mixer
layer at beta = pi/2, gamma = pi is exactly one Grover iteration.
"""
from __future__ import annotations

import math

from gmqaoa.simulator import ParamSchedule, needle_spectrum, run_circuit, success_probability

n = 10
spec = needle_spectrum(n)
theta = math.asin(2 ** (-n / 2))

for k in range(1, 9):
    sched = ParamSchedule([math.pi / 2] * k, [math.pi] * k)
    p = success_probability(run_circuit(spec, sched, "GM"), spec)
    print(f"k={k}  simulated {p:.6f}  sin^2((2k+1)theta) {math.sin((2 * k + 1) * theta) ** 2:.6f}")
