"""Linear dimension witnesses ``W(p) = sum c[i, k, j] p[i, k, j]``."""
import json
import math
from enum import Enum
from typing import Optional

import numpy as np

from .correlations import CorrelationTensor, Scenario
from .errors import RangeError, ValidationError

VERDICT_TOL = 1e-9


class Verdict(str, Enum):
    CLASSICAL = "exceeds classical bound"
    DIMENSION = "exceeds dimension bound"
    INCONCLUSIVE = "inconclusive"

    def __str__(self):
        return self.value


class WitnessCoefficients:
    """Coefficient tensor ``c[i, k, j]`` plus the bounds that go with it.

    ``classical_bound`` is the maximum over classical strategies of dimension
    ``d``; ``quantum_dim_bound`` is the maximum attainable in any dimension
    above ``d`` (``None`` when unknown). ``canonical`` is true when the last
    (no-click) outcome carries zero weight for every ``(i, k)``.
    """

    __slots__ = ("c", "d", "classical_bound", "quantum_dim_bound")

    def __init__(self, c, d: int, classical_bound: float,
                 quantum_dim_bound: Optional[float] = None):
        arr = np.array(c, dtype=float)
        if arr.ndim != 3 or min(arr.shape) < 1:
            raise ValidationError(f"coefficients must have shape (M, K, N), got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValidationError("coefficients must be finite")
        arr.setflags(write=False)
        Scenario(*arr.shape, d)
        set_ = object.__setattr__
        set_(self, "c", arr)
        set_(self, "d", int(d))
        set_(self, "classical_bound", float(classical_bound))
        set_(self, "quantum_dim_bound", None if quantum_dim_bound is None else float(quantum_dim_bound))

    def __setattr__(self, name, value):
        raise AttributeError("WitnessCoefficients is immutable")

    def __reduce__(self):
        return type(self), (self.c, self.d, self.classical_bound, self.quantum_dim_bound)

    @property
    def scenario(self) -> Scenario:
        return Scenario(*self.c.shape, self.d)

    @property
    def shape(self):
        return self.c.shape

    @property
    def canonical(self) -> bool:
        return bool(np.all(self.c[:, :, -1] == 0.0))

    def __eq__(self, other):
        return (isinstance(other, WitnessCoefficients)
                and np.array_equal(self.c, other.c)
                and self.d == other.d
                and self.classical_bound == other.classical_bound
                and self.quantum_dim_bound == other.quantum_dim_bound)

    __hash__ = None

    def __repr__(self):
        M, K, N = self.shape
        return (f"WitnessCoefficients(M={M}, K={K}, N={N}, d={self.d}, "
                f"classical_bound={self.classical_bound}, quantum_dim_bound={self.quantum_dim_bound})")

    def to_dict(self) -> dict:
        M, K, N = self.shape
        return {"M": M, "K": K, "N": N, "d": self.d, "c": self.c.tolist(),
                "classical_bound": self.classical_bound,
                "quantum_dim_bound": self.quantum_dim_bound,
                "canonical": self.canonical}

    @classmethod
    def from_dict(cls, doc: dict) -> "WitnessCoefficients":
        try:
            M, K, N, d = (int(doc[k]) for k in ("M", "K", "N", "d"))
            w = cls(doc["c"], d, doc["classical_bound"], doc.get("quantum_dim_bound"))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"witness document missing or malformed field: {exc}") from None
        if w.shape != (M, K, N):
            raise ValidationError(f"c has shape {w.shape}, header says {(M, K, N)}")
        if doc.get("canonical") and not w.canonical:
            raise ValidationError("document flagged canonical but no-click coefficients are nonzero")
        return w

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_json(cls, text: str) -> "WitnessCoefficients":
        return cls.from_dict(json.loads(text))


def _check_dim(d) -> int:
    if int(d) != d or d < 2:
        raise RangeError(f"dimension must be an integer >= 2, got {d}")
    return int(d)


def build_I_witness(d: int) -> WitnessCoefficients:
    """The ``I_{d+1}`` witness: M=d+1, K=d, N=3, weights only on the first outcome.

    With 1-based labels, the first-outcome weight is -1 when ``i + k <= M``,
    +1 when ``i + k == M + 1`` and 0 otherwise. Classical bound ``d - 1``,
    bound in any larger dimension ``d``.
    """
    d = _check_dim(d)
    M, K = d + 1, d
    c = np.zeros((M, K, 3))
    for i in range(1, M + 1):
        for k in range(1, K + 1):
            if i + k <= M:
                c[i - 1, k - 1, 0] = -1.0
            elif i + k == M + 1:
                c[i - 1, k - 1, 0] = 1.0
    return WitnessCoefficients(c, d, d - 1, d)


def _coeff_array(w) -> np.ndarray:
    return w.c if isinstance(w, WitnessCoefficients) else np.asarray(w, dtype=float)


def evaluate(w: WitnessCoefficients, p) -> float:
    c = _coeff_array(w)
    q = p.p if isinstance(p, CorrelationTensor) else np.asarray(p, dtype=float)
    if c.shape != q.shape:
        raise ValidationError(f"witness shape {c.shape} does not match tensor shape {q.shape}")
    return float(np.sum(c * q))


def shift_normalize(w: WitnessCoefficients, alpha) -> WitnessCoefficients:
    """Add the outcome-independent shift ``alpha[i, k]``; both bounds move by ``sum(alpha)``.

    The shifted witness certifies exactly the same tensors as the original.
    """
    a = np.asarray(alpha, dtype=float)
    if a.shape != w.shape[:2]:
        raise ValidationError(f"shift has shape {a.shape}, expected {w.shape[:2]}")
    total = float(a.sum())
    q = None if w.quantum_dim_bound is None else w.quantum_dim_bound + total
    return WitnessCoefficients(w.c + a[:, :, None], w.d, w.classical_bound + total, q)


def canonicalize(w: WitnessCoefficients) -> WitnessCoefficients:
    """Shift so that the last (no-click) outcome has zero weight."""
    if w.canonical:
        return w
    return shift_normalize(w, -w.c[:, :, -1])


def verdict(w: WitnessCoefficients, value: float, tol: float = VERDICT_TOL) -> Verdict:
    if w.quantum_dim_bound is not None and value > w.quantum_dim_bound + tol:
        return Verdict.DIMENSION
    if value > w.classical_bound + tol:
        return Verdict.CLASSICAL
    return Verdict.INCONCLUSIVE


def bound_sandwich(d: int):
    """``(d - 2 + sqrt(2), d)``: lower and upper bound on the qudit maximum of ``I_{d+1}``."""
    d = _check_dim(d)
    return d - 2 + math.sqrt(2.0), float(d)
