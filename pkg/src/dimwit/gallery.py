"""Small hand-built realizations used by the demos and tests.

The ``nonconvex_*`` objects describe one tensor with M=3, K=2, N=2, d=2 that
a qubit reproduces without shared randomness, that two classical bits
reproduce with a fair shared coin, and that no single classical bit strategy
reproduces.
"""
import numpy as np

from .correlations import ConvexCombination, CorrelationTensor, Povm

KET0 = np.array([1.0, 0.0], dtype=complex)
KET1 = np.array([0.0, 1.0], dtype=complex)
PLUS = np.array([1.0, 1.0], dtype=complex) / np.sqrt(2)
MINUS = np.array([1.0, -1.0], dtype=complex) / np.sqrt(2)


def nonconvex_tensor() -> CorrelationTensor:
    p1 = [[1.0, 0.0], [0.5, 0.5], [0.0, 1.0]]  # measurement 1, rows i, columns j
    p2 = [[0.5, 0.5], [1.0, 0.0], [0.5, 0.5]]
    return CorrelationTensor(np.stack([p1, p2], axis=1))


def _basis_povm(u, v):
    return Povm([np.outer(u, u.conj()), np.outer(v, v.conj())])


def nonconvex_quantum_realization():
    """States ``|0>, |+>, |1>``; measurements in the Z and X bases."""
    return [KET0, PLUS, KET1], [_basis_povm(KET0, KET1), _basis_povm(PLUS, MINUS)]


def nonconvex_classical_realization() -> ConvexCombination:
    z = _basis_povm(KET0, KET1)
    flip = _basis_povm(KET1, KET0)
    branch1 = ([KET0, KET0, KET1], [z, z])
    branch2 = ([KET0, KET1, KET1], [z, flip])
    return ConvexCombination((0.5, 0.5), (branch1, branch2))
