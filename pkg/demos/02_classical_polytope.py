"""Classical bounds by enumeration and membership in the classical polytope.

Run with ``python demos/02_classical_polytope.py``.
"""
from dimwit import (OptimizerConfig, Scenario, born_probabilities, build_I_witness, classical_max,
                    conv_c_membership, multi_restart, seesaw_rank1, strategy_count)
from dimwit.gallery import nonconvex_tensor

# %% Deterministic strategies are the vertices of the classical polytope.
for d in (2, 3):
    w = build_I_witness(d)
    value, best = classical_max(w)
    print(f"I_{d + 1}: {strategy_count(w.scenario)} strategies, classical max {value}, argmax {best}")

# %% The qubit table from demo 01 is reachable classically once randomness is shared.
res = conv_c_membership(nonconvex_tensor(), d=2)
print("example tensor feasible:", res.feasible)
for strat, weight in res.strategies(Scenario(3, 2, 2, 2)):
    print(f"  weight {weight:.2f}: {strat}")

# %% The qubit optimum of I_3 is not: its witness value exceeds the classical bound.
opt = multi_restart(seesaw_rank1, build_I_witness(2), OptimizerConfig(restarts=8))
p_opt = born_probabilities(opt.states, opt.povms)
print("I_3 optimum feasible:", conv_c_membership(p_opt, d=2).feasible)
