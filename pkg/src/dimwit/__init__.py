"""Device-independent dimension witnesses under detection loss."""
__version__ = "0.1.0"

from .classical import (DeterministicStrategy, MembershipResult, classical_max, conv_c_membership,
                        enumerate_strategies, strategy_count, strategy_to_correlations)
from .correlations import (ConvexCombination, CorrelationTensor, Povm, Scenario, apply_loss,
                           born_probabilities, lossy_mixture, mix_correlations, pure_state)
from .errors import (CapacityError, DimwitError, OptimizationError, PositivityError, RangeError,
                     UnsupportedWitnessError, ValidationError)
from .linalg import Spectrum, eigh, jacobi_eigh, matrix_power
from .optimizer import OptimizationResult, OptimizerConfig, multi_restart, seesaw_general, seesaw_rank1
from .robustness import ThresholdReport, eta_dim, eta_qc, threshold_sweep
from .witness import (Verdict, WitnessCoefficients, bound_sandwich, build_I_witness, canonicalize,
                      evaluate, shift_normalize, verdict)
