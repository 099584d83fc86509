"""Detection-efficiency thresholds for the ``I_{d+1}`` witnesses.

Under the loss model every canonically normalized witness value scales by
``eta``. Quantum-vs-classical discrimination at dimension ``d`` therefore
needs ``eta * I* > d - 1`` and certifying dimension above ``d`` needs
``eta * I* > d`` for a source of dimension ``d + 1``.

Optimized ``I*`` values are lower bounds on the true maximum, so ``eta_qc``
reported here errs high and ``eta_dim`` errs low. Each report carries the
analytic bounds alongside.
"""
import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import List, Optional

from .errors import OptimizationError, RangeError
from .optimizer import OptimizerConfig, multi_restart, resolve_workers, seesaw_general, seesaw_rank1
from .witness import bound_sandwich, build_I_witness

CSV_HEADER = ("d", "i_star", "eta_qc", "eta_qc_lower", "eta_qc_upper", "eta_dim", "eta_dim_lower")
INVARIANT_TOL = 1e-9


def _check(d, i_star):
    if int(d) != d or d < 2:
        raise RangeError(f"dimension must be an integer >= 2, got {d}")
    if not i_star > 0:
        raise RangeError(f"witness maximum must be positive, got {i_star}")


def eta_qc(d: int, i_star: float) -> float:
    _check(d, i_star)
    return (d - 1) / i_star


def eta_dim(d: int, i_star: float) -> float:
    _check(d, i_star)
    return i_star / d


def eta_qc_bounds(d: int):
    lo, hi = bound_sandwich(d)
    return (d - 1) / hi, (d - 1) / lo


def eta_dim_lower(d: int) -> float:
    bound_sandwich(d)
    return 1.0 - (2.0 - math.sqrt(2.0)) / d


@dataclass(frozen=True)
class ThresholdReport:
    d: int
    i_star: float
    eta_qc: float
    eta_qc_lower: float
    eta_qc_upper: float
    eta_dim: float
    eta_dim_lower: float

    def __post_init__(self):
        tol = INVARIANT_TOL
        if not (self.eta_qc_lower - tol <= self.eta_qc <= self.eta_qc_upper + tol):
            raise OptimizationError(
                f"d={self.d}: eta_qc={self.eta_qc} outside [{self.eta_qc_lower}, {self.eta_qc_upper}]")
        if not (self.eta_dim_lower - tol <= self.eta_dim <= 1.0 + tol):
            raise OptimizationError(
                f"d={self.d}: eta_dim={self.eta_dim} outside [{self.eta_dim_lower}, 1]")

    @classmethod
    def from_i_star(cls, d: int, i_star: float) -> "ThresholdReport":
        lo, hi = eta_qc_bounds(d)
        return cls(d, i_star, eta_qc(d, i_star), lo, hi, eta_dim(d, i_star), eta_dim_lower(d))

    def as_row(self):
        return [str(self.d)] + [f"{getattr(self, k):.9f}" for k in CSV_HEADER[1:]]

    def to_dict(self):
        return asdict(self)


def optimal_value(d: int, config: OptimizerConfig = OptimizerConfig(), algorithm: str = "rank1",
                  workers: Optional[int] = 1) -> float:
    inner = {"rank1": seesaw_rank1, "general": seesaw_general}[algorithm]
    return multi_restart(inner, build_I_witness(d), config, workers=workers).value


def _report(d, config, algorithm):
    try:
        return ThresholdReport.from_i_star(d, optimal_value(d, config, algorithm))
    except OptimizationError:
        raise
    except Exception as exc:
        raise OptimizationError(f"d={d}: {exc}") from exc


def threshold_sweep(d_min: int, d_max: int, config: OptimizerConfig = OptimizerConfig(),
                    algorithm: str = "rank1", workers: Optional[int] = 1) -> List[ThresholdReport]:
    """One :class:`ThresholdReport` per dimension in ``d_min..d_max``, ordered by ``d``."""
    if int(d_min) != d_min or int(d_max) != d_max or not 2 <= d_min <= d_max:
        raise RangeError(f"need integers 2 <= d_min <= d_max, got {d_min}, {d_max}")
    dims = list(range(d_min, d_max + 1))
    workers = min(resolve_workers(workers), len(dims))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_report, dims, [config] * len(dims), [algorithm] * len(dims)))
    return [_report(d, config, algorithm) for d in dims]


def to_csv(reports) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in reports:
        writer.writerow(r.as_row())
    return buf.getvalue()
