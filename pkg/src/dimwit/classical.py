"""Classical strategies, classical witness maxima and membership in Conv C.

A deterministic strategy assigns each preparation ``i`` a classical symbol
``v in range(d)`` and each pair ``(k, v)`` an outcome ``j in range(N)``. With
shared randomness the achievable tensors are exactly the convex hull of these
deterministic tensors, so there are ``d**M * N**(K*d)`` vertices.

Strategies are ordered lexicographically on ``(state_assignment, response)``
with ``response`` flattened in ``(k, v)`` order; the position in that order is
the strategy index.
"""
import itertools
from dataclasses import dataclass
from typing import Iterator, List, Optional, Tuple

import numpy as np

from .correlations import CorrelationTensor, Scenario
from .errors import CapacityError, ValidationError
from .simplex import phase1
from .witness import WitnessCoefficients

ENUMERATION_CAP = 10**7
MEMBERSHIP_CAP = 10**5
LP_TOL = 1e-9
TIE_RTOL = 1e-12
_BLOCK = 1 << 18


@dataclass(frozen=True)
class DeterministicStrategy:
    state_assignment: Tuple[int, ...]  # length M
    response: Tuple[Tuple[int, ...], ...]  # response[k][v]

    def outcome(self, i: int, k: int) -> int:
        return self.response[k][self.state_assignment[i]]


def strategy_count(s: Scenario) -> int:
    return s.d**s.M * s.N ** (s.K * s.d)


def _check_cap(s: Scenario, cap: int) -> int:
    count = strategy_count(s)
    if count > cap:
        raise CapacityError(count, cap)
    return count


def strategy_from_index(index: int, s: Scenario) -> DeterministicStrategy:
    n_resp = s.N ** (s.K * s.d)
    a_idx, r_idx = divmod(int(index), n_resp)
    states = np.unravel_index(a_idx, (s.d,) * s.M) if s.M else ()
    resp = np.unravel_index(r_idx, (s.N,) * (s.K * s.d))
    resp = np.asarray(resp, dtype=int).reshape(s.K, s.d)
    return DeterministicStrategy(tuple(int(v) for v in states), tuple(tuple(int(j) for j in row) for row in resp))


def enumerate_strategies(s: Scenario, cap: int = ENUMERATION_CAP) -> Iterator[DeterministicStrategy]:
    """Lazily yield every deterministic strategy in lexicographic order."""
    _check_cap(s, cap)
    return _iter_strategies(s)


def _iter_strategies(s: Scenario):
    for states in itertools.product(range(s.d), repeat=s.M):
        for flat in itertools.product(range(s.N), repeat=s.K * s.d):
            resp = tuple(flat[k * s.d:(k + 1) * s.d] for k in range(s.K))
            yield DeterministicStrategy(states, resp)


def strategy_to_correlations(strategy: DeterministicStrategy, s: Scenario) -> CorrelationTensor:
    if len(strategy.state_assignment) != s.M or len(strategy.response) != s.K:
        raise ValidationError("strategy does not match scenario")
    p = np.zeros(s.shape)
    for i, v in enumerate(strategy.state_assignment):
        if not 0 <= v < s.d:
            raise ValidationError(f"symbol {v} outside range({s.d})")
        for k in range(s.K):
            j = strategy.response[k][v]
            if not 0 <= j < s.N:
                raise ValidationError(f"outcome {j} outside range({s.N})")
            p[i, k, j] = 1.0
    return CorrelationTensor(p, check=False)


def _response_values(table: np.ndarray, s: Scenario):
    """Yield ``(offset, values)`` blocks of witness values over all responses.

    ``table[k, v, j]`` is the total coefficient collected when symbol ``v`` is
    answered with ``j`` on measurement ``k``. Blocks follow lexicographic
    response order.
    """
    slots = table.reshape(s.K * s.d, s.N)
    n_slots = slots.shape[0]
    inner = n_slots
    while inner > 0 and s.N**inner > _BLOCK:
        inner -= 1
    outer = n_slots - inner
    tail = np.zeros(1)
    for t in range(outer, n_slots):
        tail = (tail[:, None] + slots[t][None, :]).reshape(-1)
    block = tail.size
    for n, head in enumerate(itertools.product(range(s.N), repeat=outer)):
        base = sum(slots[t, head[t]] for t in range(outer))
        yield n * block, base + tail


def classical_max(w: WitnessCoefficients, cap: int = ENUMERATION_CAP):
    """Exact classical maximum of ``w`` by exhaustive enumeration.

    Returns ``(value, strategy)``; among maximizers the lexicographically first
    strategy is reported, where values within ``TIE_RTOL`` count as equal.
    Enumeration streams over state assignments and
    never materializes all vertices.
    """
    s = w.scenario
    _check_cap(s, cap)
    c = w.c
    n_resp = s.N ** (s.K * s.d)
    best_val, best_idx = -np.inf, -1
    for a_idx, states in enumerate(itertools.product(range(s.d), repeat=s.M)):
        table = np.zeros((s.K, s.d, s.N))
        for i, v in enumerate(states):
            table[:, v, :] += c[i]
        for offset, values in _response_values(table, s):
            top = values.max()
            if top > best_val + _tie_tol(best_val):
                j = int(np.argmax(values >= top - _tie_tol(top)))
                best_val, best_idx = float(values[j]), a_idx * n_resp + offset + j
    return best_val, strategy_from_index(best_idx, s)


def _tie_tol(value: float) -> float:
    # values within round-off of each other count as ties
    return TIE_RTOL * max(1.0, abs(value)) if np.isfinite(value) else 0.0


def vertex_matrix(s: Scenario, cap: int = MEMBERSHIP_CAP) -> np.ndarray:
    """All deterministic tensors as columns: shape ``(M*K*N, n_strategies)``."""
    count = _check_cap(s, cap)
    states = np.array(list(itertools.product(range(s.d), repeat=s.M)), dtype=int).reshape(-1, s.M)
    resp = np.array(list(itertools.product(range(s.N), repeat=s.K * s.d)), dtype=int)
    resp = resp.reshape(-1, s.K, s.d)
    # outs[a, r, k, i] = resp[r, k, states[a, i]]
    outs = np.stack([resp[:, :, a] for a in states])
    onehot = outs.transpose(0, 1, 3, 2)[..., None] == np.arange(s.N)  # (A, R, M, K, N)
    V = onehot.reshape(count, s.M * s.K * s.N).T.astype(float)
    return V


@dataclass(frozen=True)
class MembershipResult:
    feasible: bool
    weights: Optional[List[Tuple[int, float]]]
    residual: float
    d: int

    def strategies(self, s: Scenario) -> List[Tuple[DeterministicStrategy, float]]:
        return [(strategy_from_index(i, s), w) for i, w in (self.weights or [])]

    def reconstruct(self, s: Scenario) -> np.ndarray:
        p = np.zeros(s.shape)
        for strat, wt in self.strategies(s):
            p += wt * strategy_to_correlations(strat, s).p
        return p


def conv_c_membership(p: CorrelationTensor, d: int, cap: int = MEMBERSHIP_CAP,
                      tol: float = LP_TOL) -> MembershipResult:
    """Decide whether ``p`` is a shared-randomness mixture of d-dimensional classical strategies.

    Solves the phase-1 LP ``V lam = p, sum(lam) = 1, lam >= 0`` over the
    vertex matrix ``V``. Duplicate vertices are merged onto the first strategy
    index that produces them.
    """
    if not isinstance(p, CorrelationTensor):
        p = CorrelationTensor(p)
    s = p.scenario(d)
    V = vertex_matrix(s, cap)
    _, first = np.unique(V.T, axis=0, return_index=True)
    first = np.sort(first)
    A = np.vstack([V[:, first], np.ones(first.size)])
    b = np.concatenate([p.p.reshape(-1), [1.0]])
    res = phase1(A, b, tol=tol)
    if not res.feasible:
        return MembershipResult(False, None, res.residual, s.d)
    lam = res.x / res.x.sum()
    weights = [(int(first[n]), float(lam[n])) for n in np.flatnonzero(lam > 0)]
    return MembershipResult(True, weights, res.residual, s.d)
