"""Scenarios, states, POVMs and conditional-probability tensors.

Every tensor uses the layout ``p[i, k, j]``: preparation ``i``, measurement
``k``, outcome ``j``. Indices are 0-based. Under loss the no-click outcome is
always the last index.
"""
import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import RangeError, ValidationError
from .linalg import PSD_FLOOR, as_hermitian, hermitize

NORM_ATOL = 1e-12
COMPLETENESS_ATOL = 1e-9
ROW_ATOL = 1e-9


@dataclass(frozen=True)
class Scenario:
    """Prepare-and-measure setting: M preparations, K measurements, N outcomes, dimension d."""

    M: int
    K: int
    N: int
    d: int

    def __post_init__(self):
        for name in ("M", "K", "N", "d"):
            v = getattr(self, name)
            if int(v) != v or v < 1:
                raise ValidationError(f"{name} must be a positive integer, got {v!r}")

    @property
    def shape(self):
        return (self.M, self.K, self.N)


def pure_state(amplitudes) -> np.ndarray:
    """Validate a unit vector and return it as a complex array."""
    psi = np.asarray(amplitudes, dtype=complex)
    if psi.ndim != 1 or psi.size < 1:
        raise ValidationError(f"state vector must be 1-d, got shape {psi.shape}")
    err = abs(np.vdot(psi, psi).real - 1.0)
    if err > NORM_ATOL:
        raise ValidationError(f"state vector is not normalized (|norm^2 - 1| = {err:.3g})")
    return psi


def normalize(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    return v / np.linalg.norm(v)


def density_matrix(state) -> np.ndarray:
    """Density matrix of a pure state vector, or a validated density matrix."""
    s = np.asarray(state, dtype=complex)
    if s.ndim == 1:
        psi = pure_state(s)
        return np.outer(psi, psi.conj())
    rho = as_hermitian(s)
    tr = np.trace(rho).real
    if abs(tr - 1.0) > COMPLETENESS_ATOL:
        raise ValidationError(f"density matrix has trace {tr}")
    if np.linalg.eigvalsh(hermitize(rho))[0] < PSD_FLOOR:
        raise ValidationError("density matrix is not positive semi-definite")
    return rho


class Povm:
    """Ordered list of PSD effects summing to the identity.

    Elements are stored as a read-only array of shape ``(N, d, d)``.
    """

    __slots__ = ("elements",)

    def __init__(self, elements, check: bool = True):
        E = np.array(elements, dtype=complex)
        if E.ndim != 3 or E.shape[1] != E.shape[2] or E.shape[0] < 1:
            raise ValidationError(f"POVM elements must have shape (N, d, d), got {E.shape}")
        if check:
            for j, e in enumerate(E):
                as_hermitian(e)
                lo = np.linalg.eigvalsh(hermitize(e))[0]
                if lo < PSD_FLOOR:
                    raise ValidationError(f"POVM element {j} has eigenvalue {lo:.3g}")
            resid = completeness_residual(E)
            if resid > COMPLETENESS_ATOL:
                raise ValidationError(f"POVM elements do not sum to identity (residual {resid:.3g})")
        E.setflags(write=False)
        object.__setattr__(self, "elements", E)

    def __setattr__(self, name, value):
        raise AttributeError("Povm is immutable")

    def __reduce__(self):
        return type(self), (self.elements, False)

    @property
    def N(self) -> int:
        return self.elements.shape[0]

    @property
    def d(self) -> int:
        return self.elements.shape[1]

    def __len__(self):
        return self.N

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, j):
        return self.elements[j]

    def __repr__(self):
        return f"Povm(N={self.N}, d={self.d})"

    @classmethod
    def projective(cls, basis, outcomes=None) -> "Povm":
        """Rank-1 projective measurement onto the columns of ``basis``.

        ``outcomes`` optionally assigns each column to an outcome label; by
        default column ``a`` is outcome ``a``.
        """
        U = np.asarray(basis, dtype=complex)
        d = U.shape[0]
        labels = list(range(U.shape[1])) if outcomes is None else list(outcomes)
        N = max(labels) + 1
        E = np.zeros((N, d, d), dtype=complex)
        for a, j in enumerate(labels):
            E[j] += np.outer(U[:, a], U[:, a].conj())
        return cls(E)


def completeness_residual(elements) -> float:
    E = np.asarray(elements)
    return float(np.max(np.abs(E.sum(axis=0) - np.eye(E.shape[1]))))


class CorrelationTensor:
    """Conditional probabilities ``p[i, k, j]`` with every ``(i, k)`` row normalized."""

    __slots__ = ("p",)

    def __init__(self, p, check: bool = True):
        arr = np.array(p, dtype=float)
        if arr.ndim != 3 or min(arr.shape) < 1:
            raise ValidationError(f"tensor must have shape (M, K, N), got {arr.shape}")
        if check:
            validate_tensor(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "p", arr)

    def __setattr__(self, name, value):
        raise AttributeError("CorrelationTensor is immutable")

    def __reduce__(self):
        return type(self), (self.p, False)

    @property
    def shape(self):
        return self.p.shape

    @property
    def M(self) -> int:
        return self.p.shape[0]

    @property
    def K(self) -> int:
        return self.p.shape[1]

    @property
    def N(self) -> int:
        return self.p.shape[2]

    def scenario(self, d: int) -> Scenario:
        return Scenario(self.M, self.K, self.N, d)

    def __repr__(self):
        return f"CorrelationTensor(M={self.M}, K={self.K}, N={self.N})"

    def __eq__(self, other):
        return isinstance(other, CorrelationTensor) and np.array_equal(self.p, other.p)

    __hash__ = None

    def allclose(self, other, atol=1e-12) -> bool:
        q = other.p if isinstance(other, CorrelationTensor) else np.asarray(other)
        return self.shape == q.shape and bool(np.allclose(self.p, q, rtol=0, atol=atol))

    def pad_outcomes(self, N: int) -> "CorrelationTensor":
        """Append zero-probability outcomes up to ``N``."""
        if N < self.N:
            raise ValidationError(f"cannot pad {self.N} outcomes down to {N}")
        q = np.zeros((self.M, self.K, N))
        q[:, :, : self.N] = self.p
        return CorrelationTensor(q, check=False)

    def to_dict(self) -> dict:
        return {"M": self.M, "K": self.K, "N": self.N, "p": self.p.tolist()}

    @classmethod
    def from_dict(cls, doc: dict) -> "CorrelationTensor":
        try:
            M, K, N, p = int(doc["M"]), int(doc["K"]), int(doc["N"]), doc["p"]
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"correlation document missing field: {exc}") from None
        arr = np.array(p, dtype=float)
        if arr.shape != (M, K, N):
            raise ValidationError(f"p has shape {arr.shape}, header says {(M, K, N)}")
        return cls(arr)

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_json(cls, text: str) -> "CorrelationTensor":
        return cls.from_dict(json.loads(text))


def validate_tensor(p: np.ndarray) -> None:
    """Raise :class:`ValidationError` listing every offending ``(i, k)`` row."""
    bad_range = np.argwhere((p < -ROW_ATOL) | (p > 1 + ROW_ATOL))
    if bad_range.size:
        cells = ", ".join(str(tuple(int(x) for x in c)) for c in bad_range[:10])
        raise ValidationError(f"probabilities outside [0, 1] at (i, k, j): {cells}")
    sums = p.sum(axis=2)
    bad = np.argwhere(np.abs(sums - 1.0) > ROW_ATOL)
    if bad.size:
        rows = ", ".join(f"({i}, {k}) sums to {sums[i, k]:.12g}" for i, k in bad[:10])
        raise ValidationError(f"unnormalized rows: {rows}")


def _as_povm(obj) -> Povm:
    return obj if isinstance(obj, Povm) else Povm(obj)


def born_probabilities(states: Sequence, povms: Sequence) -> CorrelationTensor:
    """``p[i, k, j] = Tr[rho_i Pi_k^j]`` for pure state vectors or density matrices."""
    povms = [_as_povm(P) for P in povms]
    if not povms or len(states) == 0:
        raise ValidationError("need at least one state and one POVM")
    d, N = povms[0].d, povms[0].N
    for k, P in enumerate(povms):
        if P.d != d or P.N != N:
            raise ValidationError(f"POVM {k} has (N, d) = {(P.N, P.d)}, expected {(N, d)}")
    rhos = []
    for i, s in enumerate(states):
        rho = density_matrix(s)
        if rho.shape[0] != d:
            raise ValidationError(f"state {i} has dimension {rho.shape[0]}, POVMs have {d}")
        rhos.append(rho)
    E = np.stack([P.elements for P in povms])  # (K, N, d, d)
    R = np.stack(rhos)  # (M, d, d)
    p = np.einsum("iab,kjba->ikj", R, E).real
    return CorrelationTensor(p)


@dataclass(frozen=True)
class ConvexCombination:
    """Shared-randomness mixture: ``weights[l]`` selects branch ``(states, povms)``."""

    weights: tuple
    branches: tuple

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if len(self.weights) != len(self.branches) or len(self.weights) == 0:
            raise ValidationError("weights and branches must be non-empty and of equal length")
        if np.any(w < 0) or abs(w.sum() - 1.0) > ROW_ATOL:
            raise ValidationError(f"weights must be nonnegative and sum to 1, got {self.weights}")


def mix_correlations(combo: ConvexCombination) -> CorrelationTensor:
    tensors = [born_probabilities(s, P) for s, P in combo.branches]
    shape = tensors[0].shape
    for t in tensors[1:]:
        if t.shape != shape:
            raise ValidationError(f"branch scenario {t.shape} differs from {shape}")
    p = sum(q * t.p for q, t in zip(combo.weights, tensors))
    return CorrelationTensor(p)


def _check_eta(eta: float) -> float:
    eta = float(eta)
    if not 0.0 <= eta <= 1.0:
        raise RangeError(f"detection efficiency must lie in [0, 1], got {eta}")
    return eta


def apply_loss(povm, eta: float) -> Povm:
    """Lossy POVM ``{eta * Pi^j} + {(1 - eta) I}``; the no-click effect is appended last."""
    eta = _check_eta(eta)
    P = _as_povm(povm)
    E = np.concatenate([eta * P.elements, [(1.0 - eta) * np.eye(P.d, dtype=complex)]])
    return Povm(E, check=False)


def lossy_mixture(p_signal: CorrelationTensor, p_noclick: CorrelationTensor, eta: float) -> CorrelationTensor:
    eta = _check_eta(eta)
    if p_signal.shape != p_noclick.shape:
        raise ValidationError(f"tensor shapes differ: {p_signal.shape} vs {p_noclick.shape}")
    return CorrelationTensor(eta * p_signal.p + (1.0 - eta) * p_noclick.p)
