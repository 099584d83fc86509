import math

import numpy as np
import pytest

from dimwit.correlations import COMPLETENESS_ATOL, born_probabilities
from dimwit.errors import UnsupportedWitnessError, ValidationError
from dimwit.optimizer import OptimizerConfig, multi_restart, seesaw_general, seesaw_rank1
from dimwit.witness import WitnessCoefficients, build_I_witness, evaluate

SQRT2 = math.sqrt(2)
# Independent route: for fixed states the best first effect of measurement k is
# the projector onto the positive eigenspace of sum_i c[i,k] |psi_i><psi_i|, so
# I* = max over states of sum_k (sum of positive eigenvalues); that outer
# maximization was done with BFGS from 50 random real starts (scipy).
ORACLE_I_STAR = {
    2: 1.4142135623730954,
    3: 2.484435331765857,
    4: 3.5181765153061857,
    5: 4.537906218579027,
    6: 5.550865613977816,
}


def test_config_validation():
    with pytest.raises(ValidationError):
        OptimizerConfig(restarts=0)
    with pytest.raises(ValidationError):
        OptimizerConfig(epsilon=1.0)
    with pytest.raises(ValidationError):
        OptimizerConfig(seed=-1)


def test_general_I3():
    res = multi_restart(seesaw_general, build_I_witness(2), OptimizerConfig())
    assert abs(res.value - SQRT2) <= 1e-6


def test_general_zero_witness():
    w = WitnessCoefficients(np.zeros((3, 2, 3)), 2, 0)
    res = seesaw_general(w, OptimizerConfig(window=10))
    assert res.value == 0.0
    assert res.iterations == 10


def test_general_I4_in_sandwich():
    res = multi_restart(seesaw_general, build_I_witness(3), OptimizerConfig())
    assert 1 + SQRT2 <= res.value <= 3
    assert abs(res.value - ORACLE_I_STAR[3]) <= 1e-6


def test_rank1_I3_agrees_with_general():
    r1 = multi_restart(seesaw_rank1, build_I_witness(2), OptimizerConfig())
    g = multi_restart(seesaw_general, build_I_witness(2), OptimizerConfig())
    assert abs(r1.value - SQRT2) <= 1e-6
    assert abs(r1.value - g.value) <= 1e-6


def test_rank1_family_matches_oracle_and_recursion():
    values = {d: multi_restart(seesaw_rank1, build_I_witness(d), OptimizerConfig()).value for d in range(2, 7)}
    for d, v in values.items():
        assert abs(v - ORACLE_I_STAR[d]) <= 1e-6
        assert v <= d + 1e-6
    for d in range(2, 6):
        assert values[d + 1] >= values[d] + 1 - 1e-6


def test_rank1_rejects_other_outcomes():
    c = np.zeros((3, 2, 3))
    c[0, 0, 1] = 1
    with pytest.raises(UnsupportedWitnessError):
        seesaw_rank1(WitnessCoefficients(c, 2, 0), OptimizerConfig())


@pytest.mark.parametrize("inner", [seesaw_rank1, seesaw_general])
def test_determinism(inner):
    w = build_I_witness(2)
    a = inner(w, OptimizerConfig(seed=5), restart_index=3)
    b = inner(w, OptimizerConfig(seed=5), restart_index=3)
    assert np.array(a.trace).tobytes() == np.array(b.trace).tobytes()
    assert a.states.tobytes() == b.states.tobytes()


@pytest.mark.parametrize("inner", [seesaw_rank1, seesaw_general])
def test_single_restart_equals_inner(inner):
    w = build_I_witness(2)
    config = OptimizerConfig(restarts=1, seed=9)
    multi = multi_restart(inner, w, config)
    single = inner(w, config)
    assert multi.value == single.value and multi.trace == single.trace


def test_max_semantics_and_seeds():
    w = build_I_witness(2)
    for seed in (0, 1234):
        res = multi_restart(seesaw_rank1, w, OptimizerConfig(seed=seed))
        assert len(res.restart_values) == 32
        assert res.value == max(res.restart_values)
        assert res.restart_index == res.restart_values.index(res.value)
        assert abs(res.value - 1.41421356) <= 1e-6


def test_parallel_matches_sequential():
    w = build_I_witness(3)
    config = OptimizerConfig(restarts=6, seed=4)
    a = multi_restart(seesaw_rank1, w, config, workers=1)
    b = multi_restart(seesaw_rank1, w, config, workers=3)
    assert a.value == b.value and a.restart_values == b.restart_values
    assert a.states.tobytes() == b.states.tobytes()


@pytest.mark.parametrize("inner", [seesaw_rank1, seesaw_general])
def test_result_value_matches_born(inner):
    w = build_I_witness(3)
    res = multi_restart(inner, w, OptimizerConfig(restarts=4))
    assert abs(res.value - evaluate(w, born_probabilities(res.states, res.povms))) <= 1e-10


def test_rank1_reported_povms():
    res = seesaw_rank1(build_I_witness(2), OptimizerConfig())
    for P, v in zip(res.povms, res.vectors):
        assert np.allclose(P[0], np.outer(v, v.conj()))
        assert np.allclose(P[0] + P[1], np.eye(2))
        assert not np.any(P[2])


@pytest.mark.parametrize("d", [2, 3])
def test_general_iterates_valid_and_monotone(d):
    seen = []

    def check(n, point, value):
        psi, E = point
        assert np.allclose(np.linalg.norm(psi, axis=1), 1, atol=1e-12)
        assert np.linalg.eigvalsh(E).min() >= -1e-10
        assert np.max(np.abs(E.sum(axis=1) - np.eye(d))) <= COMPLETENESS_ATOL
        seen.append(value)

    res = seesaw_general(build_I_witness(d), OptimizerConfig(seed=2), callback=check)
    assert seen and np.all(np.diff(seen) >= 0)
    assert np.all(np.diff(res.trace) >= 0)


def test_real_only():
    res = multi_restart(seesaw_rank1, build_I_witness(2), OptimizerConfig(real_only=True))
    assert not np.any(res.states.imag) and not np.any(res.vectors.imag)
    assert abs(res.value - SQRT2) <= 1e-6


def test_supplied_initial_point():
    rng = np.random.default_rng(0)
    psi = rng.standard_normal((3, 2))
    pi = rng.standard_normal((2, 2))
    res = seesaw_rank1(build_I_witness(2), OptimizerConfig(), initial=(psi, pi))
    assert res.value >= res.trace[0]
    with pytest.raises(ValidationError):
        seesaw_rank1(build_I_witness(2), OptimizerConfig(), initial=(psi[:2], pi))


@pytest.mark.slow
def test_algorithms_agree_up_to_d5():
    for d in range(2, 6):
        w = build_I_witness(d)
        g = multi_restart(seesaw_general, w, OptimizerConfig())
        r = multi_restart(seesaw_rank1, w, OptimizerConfig())
        assert abs(g.value - r.value) <= 1e-6, d
