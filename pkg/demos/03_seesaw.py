"""Maximizing I_{d+1} with both see-saw iterations.

Run with ``python demos/03_seesaw.py``.
"""
import math

from dimwit import OptimizerConfig, bound_sandwich, build_I_witness, multi_restart, seesaw_general, seesaw_rank1

config = OptimizerConfig(restarts=16, seed=1)
print(" d   rank-1 see-saw   general see-saw   analytic bounds")
for d in range(2, 5):
    w = build_I_witness(d)
    r1 = multi_restart(seesaw_rank1, w, config)
    g = multi_restart(seesaw_general, w, config)
    lo, hi = bound_sandwich(d)
    print(f"{d:2d}   {r1.value:.10f}     {g.value:.10f}      [{lo:.6f}, {hi:.0f}]")
print("sqrt(2) =", math.sqrt(2))

# %% Convergence of one run, value every 25 iterations.
run = seesaw_rank1(build_I_witness(3), config)
print("trace:", [round(v, 6) for v in run.trace[::25]])
