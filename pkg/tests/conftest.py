import numpy as np
import pytest

from dimwit.correlations import born_probabilities
from dimwit.optimizer import OptimizerConfig, multi_restart, seesaw_rank1
from dimwit.witness import build_I_witness

ACCEPTANCE_LINES = []


def random_state(rng, d, real=False):
    v = rng.standard_normal(d) + (0 if real else 1j * rng.standard_normal(d))
    return v / np.linalg.norm(v)


def random_povm(rng, d, N):
    """Random full-rank POVM: G_j = X_j X_j^dag, renormalized by S^{-1/2}."""
    G = []
    for _ in range(N):
        X = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        G.append(X @ X.conj().T)
    S = sum(G)
    w, V = np.linalg.eigh(S)
    R = (V / np.sqrt(w)) @ V.conj().T
    return [R @ g @ R for g in G]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def i3_optimum():
    w = build_I_witness(2)
    res = multi_restart(seesaw_rank1, w, OptimizerConfig(seed=0))
    return w, res, born_probabilities(res.states, res.povms)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
