"""See-saw maximization of linear witnesses over pure states and POVMs.

Two steepest-ascent iterations are provided:

* :func:`seesaw_general` updates pure states and full POVMs.
* :func:`seesaw_rank1` handles witnesses that only weight the first outcome
  (the ``I_{d+1}`` family). There the first effect of each optimal POVM can be
  taken as a rank-1 projector ``|pi_k><pi_k|``, so the iteration runs on
  vectors only.

Both runs share one driver: a proposed step is accepted only if the witness
value does not decrease; otherwise the step is discarded and the step length
halved. After 50 consecutive accepted steps the step length returns to its
configured value. A run stops once the best value has improved by less than
``tolerance * max(1, |value|)`` over the last ``window`` iterations.
"""
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import partial
from typing import Callable, List, Optional, Tuple

import numpy as np

from .correlations import COMPLETENESS_ATOL, Povm
from .errors import UnsupportedWitnessError, ValidationError
from .linalg import PSD_FLOOR, hermitize, inv_sqrtm_psd
from .witness import WitnessCoefficients

log = logging.getLogger(__name__)

RESTORE_AFTER = 50
INIT_SMOOTHING = 0.01


@dataclass(frozen=True)
class OptimizerConfig:
    epsilon: float = 0.1
    max_iterations: int = 5000
    tolerance: float = 1e-10
    window: int = 10
    restarts: int = 32
    seed: int = 0
    real_only: bool = False

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise ValidationError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        for name in ("max_iterations", "window", "restarts"):
            v = getattr(self, name)
            if int(v) != v or v < 1:
                raise ValidationError(f"{name} must be a positive integer, got {v!r}")
        if self.tolerance < 0:
            raise ValidationError(f"tolerance must be nonnegative, got {self.tolerance}")
        if int(self.seed) != self.seed or self.seed < 0:
            raise ValidationError(f"seed must be a nonnegative integer, got {self.seed!r}")


@dataclass(frozen=True)
class OptimizationResult:
    value: float
    states: np.ndarray  # (M, d); row i is |psi_i>
    povms: List[Povm]
    iterations: int
    restart_index: int
    algorithm: str
    vectors: Optional[np.ndarray] = None  # (K, d) for the rank-1 run
    trace: Tuple[float, ...] = field(default=(), repr=False)
    restart_values: Tuple[float, ...] = ()


def restart_rng(seed: int, restart_index: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(restart_index)])


def _random_vectors(rng, count, d, real_only):
    X = rng.standard_normal((count, d))
    if not real_only:
        X = X + 1j * rng.standard_normal((count, d))
    X = X.astype(complex)
    return X / np.linalg.norm(X, axis=1, keepdims=True)


def _random_povms(rng, K, N, d, real_only):
    E = np.zeros((K, N, d, d), dtype=complex)
    for k in range(K):
        G = rng.standard_normal((d, d))
        if not real_only:
            G = G + 1j * rng.standard_normal((d, d))
        U, _ = np.linalg.qr(G)
        labels = rng.integers(N, size=d)
        for a in range(d):
            E[k, labels[a]] += np.outer(U[:, a], U[:, a].conj())
    E += INIT_SMOOTHING * np.eye(d)
    R = inv_sqrtm_psd(E.sum(axis=1))
    return hermitize(R[:, None] @ E @ R[:, None])


def _general_value(c, psi, E):
    # psi: (M, d); E: (K, N, d, d)
    p = np.einsum("ia,kjab,ib->ikj", psi.conj(), E, psi).real
    return float(np.sum(c * p))


def _rank1_value(C, psi, pi):
    overlap = pi.conj() @ psi.T  # overlap[k, i] = <pi_k|psi_i>
    return float(np.sum(C.T * np.abs(overlap) ** 2))


def _ascend(propose, point, value, config, callback):
    eps = config.epsilon
    trace = [value]
    streak = 0
    n = 0
    for n in range(1, config.max_iterations + 1):
        cand = propose(point, eps)
        if cand is not None and cand[1] >= value:
            point, value = cand
            streak += 1
            if callback is not None:
                callback(n, point, value)
            if streak >= RESTORE_AFTER:
                eps, streak = config.epsilon, 0
        else:
            eps *= 0.5
            streak = 0
        trace.append(value)
        if n >= config.window and trace[n] - trace[n - config.window] < config.tolerance * max(1.0, abs(value)):
            break
    return point, value, n, trace


def _povm_valid(E) -> bool:
    d = E.shape[-1]
    if np.max(np.abs(E.sum(axis=1) - np.eye(d))) > COMPLETENESS_ATOL:
        return False
    return bool(np.linalg.eigvalsh(E).min() >= PSD_FLOOR)


def seesaw_general(w: WitnessCoefficients, config: OptimizerConfig = OptimizerConfig(),
                   restart_index: int = 0, initial=None,
                   callback: Optional[Callable] = None) -> OptimizationResult:
    """One see-saw run over pure states and general POVMs.

    Per iteration, with step ``eps`` and the current states and POVMs:

    1. ``psi_i <- [(1 - eps) I + eps sum_{k,j} c[i,k,j] Pi_k^j] psi_i``
    2. ``Pi_k^j <- A Pi_k^j A`` with ``A = (1 - eps) I + eps sum_i c[i,k,j] |psi_i><psi_i|``
    3. renormalize every state to unit length
    4. ``Pi_k^j <- S_k^{-1/2} Pi_k^j S_k^{-1/2}`` with ``S_k = sum_j Pi_k^j``

    Steps 1 and 2 both read the previous iterate. ``A Pi A`` equals
    ``(A sqrt(Pi))(A sqrt(Pi))^dagger`` and is PSD by construction.

    ``initial`` may supply ``(states, povms)``; otherwise they are drawn from
    the restart's random stream. ``callback(iteration, (states, effects),
    value)`` is called for every accepted iterate.
    """
    c = w.c
    M, K, N = c.shape
    d = w.d
    if initial is None:
        rng = restart_rng(config.seed, restart_index)
        psi = _random_vectors(rng, M, d, config.real_only)
        E = _random_povms(rng, K, N, d, config.real_only)
    else:
        psi = np.array([np.asarray(s, dtype=complex) for s in initial[0]])
        E = np.array([P.elements if isinstance(P, Povm) else P for P in initial[1]], dtype=complex)
        if psi.shape != (M, d) or E.shape != (K, N, d, d):
            raise ValidationError("initial states/POVMs do not match the witness scenario")
    I = np.eye(d)

    def propose(point, eps):
        psi, E = point
        G = np.einsum("ikj,kjab->iab", c, E)
        new_psi = np.einsum("iab,ib->ia", (1 - eps) * I + eps * G, psi)
        proj = np.einsum("ia,ib->iab", psi, psi.conj())
        A = (1 - eps) * I + eps * np.einsum("ikj,iab->kjab", c, proj)
        bar = hermitize(A @ E @ A)
        norms = np.linalg.norm(new_psi, axis=1, keepdims=True)
        if not np.all(norms > 0):
            return None
        new_psi = new_psi / norms
        R = inv_sqrtm_psd(bar.sum(axis=1))
        new_E = hermitize(R[:, None] @ bar @ R[:, None])
        if not _povm_valid(new_E):
            return None
        return (new_psi, new_E), _general_value(c, new_psi, new_E)

    (psi, E), value, n, trace = _ascend(propose, (psi, E), _general_value(c, psi, E), config, callback)
    return OptimizationResult(value, psi, [Povm(e, check=False) for e in E], n, restart_index,
                              "general", trace=tuple(trace))


def rank1_coefficients(w: WitnessCoefficients) -> np.ndarray:
    """First-outcome coefficient matrix ``C[i, k]``; rejects witnesses weighting other outcomes."""
    if w.shape[2] < 2:
        raise UnsupportedWitnessError("rank-1 see-saw needs at least two outcomes")
    if np.any(w.c[:, :, 1:] != 0):
        raise UnsupportedWitnessError(
            "rank-1 see-saw supports only witnesses with nonzero coefficients on the first outcome")
    return w.c[:, :, 0]


def rank1_povms(vectors: np.ndarray, N: int) -> List[Povm]:
    """``{|pi><pi|, I - |pi><pi|, 0, ...}`` for each measurement vector."""
    d = vectors.shape[1]
    out = []
    for v in vectors:
        E = np.zeros((N, d, d), dtype=complex)
        E[0] = np.outer(v, v.conj())
        E[1] = np.eye(d) - E[0]
        out.append(Povm(E, check=False))
    return out


def seesaw_rank1(w: WitnessCoefficients, config: OptimizerConfig = OptimizerConfig(),
                 restart_index: int = 0, initial=None,
                 callback: Optional[Callable] = None) -> OptimizationResult:
    """One see-saw run over pure states and rank-1 first effects.

    Updates (both read the previous iterate, then renormalize)::

        psi_i <- psi_i + eps sum_k C[i,k] <pi_k|psi_i> pi_k
        pi_k  <- pi_k  + eps sum_i C[i,k] <psi_i|pi_k> psi_i
    """
    C = rank1_coefficients(w)
    M, K, N = w.shape
    d = w.d
    if initial is None:
        rng = restart_rng(config.seed, restart_index)
        psi = _random_vectors(rng, M, d, config.real_only)
        pi = _random_vectors(rng, K, d, config.real_only)
    else:
        psi = np.array([np.asarray(s, dtype=complex) for s in initial[0]])
        pi = np.array([np.asarray(v, dtype=complex) for v in initial[1]])
        if psi.shape != (M, d) or pi.shape != (K, d):
            raise ValidationError("initial states/vectors do not match the witness scenario")
        psi = psi / np.linalg.norm(psi, axis=1, keepdims=True)
        pi = pi / np.linalg.norm(pi, axis=1, keepdims=True)

    def propose(point, eps):
        psi, pi = point
        overlap = pi.conj() @ psi.T  # [k, i]
        new_psi = psi + eps * (C.T * overlap).T @ pi
        new_pi = pi + eps * (C * overlap.conj().T).T @ psi
        a = np.linalg.norm(new_psi, axis=1, keepdims=True)
        b = np.linalg.norm(new_pi, axis=1, keepdims=True)
        if not (np.all(a > 0) and np.all(b > 0)):
            return None
        new_psi, new_pi = new_psi / a, new_pi / b
        return (new_psi, new_pi), _rank1_value(C, new_psi, new_pi)

    (psi, pi), value, n, trace = _ascend(propose, (psi, pi), _rank1_value(C, psi, pi), config, callback)
    return OptimizationResult(value, psi, rank1_povms(pi, N), n, restart_index, "rank1",
                              vectors=pi, trace=tuple(trace))


ALGORITHMS = {"general": seesaw_general, "rank1": seesaw_rank1}


def resolve_workers(workers: Optional[int] = None) -> int:
    """Worker count: explicit value, else ``DIMWIT_THREADS`` (0 means one per CPU), else 1."""
    if workers is None:
        workers = int(os.environ.get("DIMWIT_THREADS", "1") or 1)
    if workers <= 0:
        workers = os.cpu_count() or 1
    return workers


def multi_restart(inner, w: WitnessCoefficients, config: OptimizerConfig = OptimizerConfig(),
                  workers: Optional[int] = 1) -> OptimizationResult:
    """Best of ``config.restarts`` independent runs of ``inner``.

    Restart ``r`` draws its start from ``restart_rng(config.seed, r)``, so the
    outcome does not depend on how restarts are scheduled across workers. Ties
    go to the lowest restart index.
    """
    if isinstance(inner, str):
        inner = ALGORITHMS[inner]
    run = partial(inner, w, config)
    indices = range(config.restarts)
    workers = min(resolve_workers(workers), config.restarts)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, indices))
    else:
        results = [run(r) for r in indices]
    values = tuple(r.value for r in results)
    best = results[int(np.argmax(values))]
    log.info("%s restarts on %s: best %.12g, worst %.12g, spread %.3g",
             len(values), w, max(values), min(values), max(values) - min(values))
    return replace(best, restart_values=values)
