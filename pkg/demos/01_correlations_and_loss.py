"""Born-rule correlations, shared randomness, and the detection-loss model.

Run with ``python demos/01_correlations_and_loss.py``.
"""
import numpy as np

from dimwit import apply_loss, born_probabilities, mix_correlations
from dimwit.gallery import nonconvex_classical_realization, nonconvex_quantum_realization

# %% A qubit prepared in |0>, |+>, |1> and measured in the Z and X bases.
states, povms = nonconvex_quantum_realization()
p = born_probabilities(states, povms)
print("p[i, k, j] from the qubit realization:")
print(p.p)

# %% The same table from two classical bits and a fair shared coin.
q = mix_correlations(nonconvex_classical_realization())
print("identical to the classical mixture:", np.array_equal(p.p.round(12), q.p))

# %% Loss appends a no-click outcome. Probabilities interpolate linearly in eta.
for eta in (1.0, 0.8, 0.5):
    lossy = born_probabilities(states, [apply_loss(P, eta) for P in povms])
    print(f"eta={eta}: row (i=1, k=1) ->", lossy.p[1, 0].round(3))
